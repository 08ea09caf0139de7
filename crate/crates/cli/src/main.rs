use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dummett::crosscheck::{self, Config, Depth, Mode};
use dummett::families::Family;
use dummett::{
    check_proof, metrics, parse, Calculus, Decision, Formula, Goal, KripkeChain, Outcome, Proof, ProofTree,
    SearchOptions, Sign, SignedFormula,
};
use serde_json::json;

const BUDGET_VAR: &str = "DUMMETT_STEP_BUDGET";

/// Exit status for malformed input of any kind.
const INPUT_ERROR: u8 = 2;
/// Exit status for internal faults such as an exhausted step budget.
const INTERNAL_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "dummett", version, about = "Decide propositional Gödel-Dummett logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove or refute a formula. Exit 0 if proved, 1 if refuted.
    Prove {
        formula: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Validate a proof, or a counter-model against a goal.
    Check {
        #[arg(long, conflicts_with = "model")]
        proof: Option<PathBuf>,
        #[arg(long, requires = "goal")]
        model: Option<PathBuf>,
        /// The goal the artifact must prove or refute.
        #[arg(long)]
        goal: Option<String>,
    },
    /// Compare both calculi with the brute-force oracle.
    Crosscheck {
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 8)]
        max_connectives: usize,
        #[arg(long, default_value_t = 1000, conflicts_with = "exhaustive")]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Every formula within the bounds instead of a sample.
        #[arg(long)]
        exhaustive: bool,
        /// Also use `true` and `false` as leaves (exhaustive mode).
        #[arg(long)]
        constants: bool,
        /// Skip building and replaying proofs.
        #[arg(long)]
        verdicts_only: bool,
    },
    /// Print random formulas, one per line.
    Gen {
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 8)]
        max_connectives: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a formula family at sizes 1..=n and tabulate the results.
    Bench {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = CalculusChoice::Both)]
        calculus: CalculusChoice,
        #[arg(long)]
        optimized: bool,
        #[arg(long)]
        sixopt: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = CalculusArg::D3)]
    calculus: CalculusArg,
    /// Extended inconsistency checks and the refined multi-premise rule (d1).
    #[arg(long)]
    optimized: bool,
    /// Promote implications with implication-free antecedents (d3).
    #[arg(long)]
    sixopt: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CalculusArg {
    D1,
    D3,
}

impl From<CalculusArg> for Calculus {
    fn from(c: CalculusArg) -> Calculus {
        match c {
            CalculusArg::D1 => Calculus::D1,
            CalculusArg::D3 => Calculus::D3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CalculusChoice {
    D1,
    D3,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

/// An input problem, reported with exit status 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn parse_formula(text: &str) -> Result<Formula> {
    parse(text).map_err(|e| input_error(format!("cannot parse {text:?}: {e}")))
}

fn step_budget() -> Result<Option<usize>> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| input_error(format!("{BUDGET_VAR} must be a number, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn options(calculus: Calculus, optimized: bool, sixopt: bool) -> Result<SearchOptions> {
    if optimized && calculus != Calculus::D1 {
        return Err(input_error("--optimized applies to d1 only"));
    }
    if sixopt && calculus != Calculus::D3 {
        return Err(input_error("--sixopt applies to d3 only"));
    }
    Ok(SearchOptions { optimized, sixopt, step_budget: step_budget()? })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(INPUT_ERROR)
            } else {
                ExitCode::from(INTERNAL_ERROR)
            }
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Prove { formula, search, format } => prove(&formula, &search, format),
        Command::Check { proof, model, goal } => check(proof, model, goal),
        Command::Crosscheck { vars, max_connectives, samples, seed, exhaustive, constants, verdicts_only } => {
            if vars == 0 {
                return Err(input_error("--vars must be at least 1"));
            }
            let mode = if exhaustive { Mode::Exhaustive } else { Mode::Sampled { samples, seed } };
            let config = Config {
                constants,
                depth: if verdicts_only { Depth::Verdicts } else { Depth::Full },
                step_budget: step_budget()?,
                ..Config::new(vars, max_connectives, mode)
            };
            let start = Instant::now();
            match crosscheck::run(&config) {
                Ok(s) => {
                    println!(
                        "{} formulas, {} valid, 0 disagreements ({:.2}s)",
                        s.formulas,
                        s.valid,
                        start.elapsed().as_secs_f64()
                    );
                    Ok(0)
                }
                Err(d) => {
                    println!("disagreement: {d}");
                    Ok(1)
                }
            }
        }
        Command::Gen { vars, max_connectives, count, seed } => {
            if vars == 0 {
                return Err(input_error("--vars must be at least 1"));
            }
            let config = Config::new(vars, max_connectives, Mode::Sampled { samples: count, seed });
            for f in config.formulas() {
                println!("{}", f.render());
            }
            Ok(0)
        }
        Command::Bench { family, size, calculus, optimized, sixopt, seed, format } => {
            bench(family, size, calculus, optimized, sixopt, seed, format)
        }
    }
}

fn prove(text: &str, search: &SearchArgs, format: Format) -> Result<u8> {
    let goal = parse_formula(text)?;
    let calculus = Calculus::from(search.calculus);
    let opts = options(calculus, search.optimized, search.sixopt)?;
    let Decision { outcome, stats } = dummett::decide(&goal, calculus, &opts)?;
    let code = if outcome.is_proved() { 0 } else { 1 };
    match (format, &outcome) {
        (Format::Json, Outcome::Proved(p)) => println!("{}", p.to_json()),
        (Format::Json, Outcome::Refuted(m)) => println!("{}", m.chain.to_json()),
        (Format::Text, Outcome::Proved(p)) => {
            let m = metrics(&p.tree);
            println!("proved by {calculus}: depth {}, {} nodes, {} rule applications", m.depth, m.node_count, stats.expansions);
            print!("{}", render_tree(&p.tree));
        }
        (Format::Text, Outcome::Refuted(m)) => {
            println!("refuted by {calculus}: counter-model with {} worlds", m.chain.len());
            print!("{}", render_chain(&m.chain));
        }
    }
    Ok(code)
}

fn render_node(node: &dummett::Node) -> String {
    let items: Vec<String> = node.iter().map(|sf| sf.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn render_tree(tree: &ProofTree) -> String {
    fn go(t: &ProofTree, depth: usize, out: &mut String) {
        let rule = t.rule.map_or("leaf", |r| r.token());
        let _ = writeln!(out, "{:indent$}{rule}  {}", "", render_node(&t.node), indent = 2 * depth);
        for c in &t.children {
            go(c, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(tree, 0, &mut out);
    out
}

fn render_chain(chain: &KripkeChain) -> String {
    let mut out = String::new();
    for (i, w) in chain.worlds().iter().enumerate() {
        let vars: Vec<&str> = w.iter().map(String::as_str).collect();
        let _ = writeln!(out, "  world {i}: {{{}}}", vars.join(", "));
    }
    out
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(|e| input_error(format!("{e:#}")))
}

fn check(proof: Option<PathBuf>, model: Option<PathBuf>, goal: Option<String>) -> Result<u8> {
    let goal = goal.as_deref().map(parse_formula).transpose()?;
    if let Some(path) = proof {
        let proof = Proof::from_json(&read(&path)?).map_err(|e| input_error(format!("invalid proof: {e}")))?;
        if let Some(g) = &goal {
            if proof.goal() != Some(g) {
                println!("proof does not prove {}", g.render());
                return Ok(1);
            }
        }
        return Ok(match check_proof(&proof) {
            Ok(()) => {
                let g = proof.goal().map_or_else(|| "its root".to_string(), |g| g.render());
                println!("valid {} proof of {g}", proof.calculus);
                0
            }
            Err(defect) => {
                println!("invalid proof: {defect}");
                1
            }
        });
    }
    let Some(path) = model else { bail!(input_error("one of --proof or --model is required")) };
    let goal = goal.expect("clap enforces --goal with --model");
    let chain = KripkeChain::from_json(&read(&path)?).map_err(|e| input_error(format!("invalid model: {e}")))?;
    if chain.realizes(0, &SignedFormula::of(Sign::F, goal.clone())) {
        println!("model refutes {}", goal.render());
        Ok(0)
    } else {
        println!("model does not refute {}", goal.render());
        Ok(1)
    }
}

fn bench(
    family: Family,
    size: usize,
    choice: CalculusChoice,
    optimized: bool,
    sixopt: bool,
    seed: u64,
    format: Format,
) -> Result<u8> {
    if size == 0 {
        return Err(input_error("--size must be at least 1"));
    }
    let calculi: Vec<Calculus> = match choice {
        CalculusChoice::D1 => vec![Calculus::D1],
        CalculusChoice::D3 => vec![Calculus::D3],
        CalculusChoice::Both => vec![Calculus::D1, Calculus::D3],
    };
    let budget = step_budget()?;
    if format == Format::Text {
        println!(
            "{:<11} {:>4} {:>5} {:>8} {:>7} {:>10} {:>11} {:>9} {:>10}",
            "family", "n", "calc", "verdict", "depth", "tree-depth", "expansions", "sat/br", "ms"
        );
    }
    for n in 1..=size {
        let f = family.member(n, seed);
        let goal = Goal::new(f.clone());
        for &calculus in &calculi {
            let opts = SearchOptions {
                optimized: optimized && calculus == Calculus::D1,
                sixopt: sixopt && calculus == Calculus::D3,
                step_budget: budget,
            };
            let start = Instant::now();
            let result = goal.decide(calculus, &opts).and_then(|d| Ok((d, goal.explore(calculus, &opts)?)));
            let elapsed = start.elapsed().as_secs_f64() * 1000.0;
            let (d, full) = match result {
                Ok(r) => r,
                Err(e) => {
                    match format {
                        Format::Text => println!("{:<11} {n:>4} {:>5} {e}", family.token(), calculus.token()),
                        Format::Json => println!(
                            "{}",
                            json!({"family": family.token(), "n": n, "calculus": calculus.token(), "error": e.to_string()})
                        ),
                    }
                    continue;
                }
            };
            let (verdict, payload) = match &d.outcome {
                Outcome::Proved(p) => ("proved", json!({"metrics": metrics(&p.tree)})),
                Outcome::Refuted(m) => ("refuted", json!({"model_worlds": m.chain.len()})),
            };
            match format {
                Format::Text => println!(
                    "{:<11} {n:>4} {:>5} {verdict:>8} {:>7} {:>10} {:>11} {:>9} {elapsed:>10.3}",
                    family.token(),
                    calculus.token(),
                    d.stats.max_depth,
                    full.max_depth,
                    d.stats.expansions,
                    d.stats.max_branch_sat_steps
                ),
                Format::Json => {
                    let mut report = json!({
                        "family": family.token(),
                        "n": n,
                        "formula": f.render(),
                        "verdict": verdict,
                        "calculus": calculus.token(),
                        "depth": d.stats.max_depth,
                        "tree_depth": full.max_depth,
                        "expansions": d.stats.expansions,
                        "max_branch_sat_steps": d.stats.max_branch_sat_steps,
                        "elapsed_ms": elapsed,
                        "flags": {"optimized": opts.optimized, "sixopt": opts.sixopt},
                    });
                    report.as_object_mut().unwrap().extend(payload.as_object().unwrap().clone());
                    println!("{report}");
                }
            }
        }
    }
    Ok(0)
}
