//! Differential testing of both calculi against the brute-force oracle.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{enumerate_formulas, random_formula, var_name, Formula};
use crate::goal::Goal;
use crate::proof::{check_proof, Defect, Outcome, SearchOptions, Verdict};
use crate::semantics::{oracle_valid, Calculus, KripkeChain};
use crate::{refutes, BudgetExceeded};

/// Both flag settings of `calculus`.
pub fn flag_settings(calculus: Calculus, step_budget: Option<usize>) -> [SearchOptions; 2] {
    let opts = |flag| match calculus {
        Calculus::D1 => SearchOptions { optimized: flag, sixopt: false, step_budget },
        Calculus::D3 => SearchOptions { optimized: false, sixopt: flag, step_budget },
    };
    [opts(false), opts(true)]
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

/// `Verdicts` compares verdicts and model sizes only. `Full` also builds
/// every proof and replays it, and evaluates every counter-model.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Depth {
    Verdicts,
    Full,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub vars: usize,
    pub max_connectives: usize,
    pub mode: Mode,
    pub depth: Depth,
    /// Adds `true` and `false` to the leaves of an exhaustive run.
    pub constants: bool,
    pub step_budget: Option<usize>,
}

impl Config {
    pub fn new(vars: usize, max_connectives: usize, mode: Mode) -> Config {
        Config { vars, max_connectives, mode, depth: Depth::Full, constants: false, step_budget: None }
    }

    /// The formulas the run visits, in order.
    pub fn formulas(&self) -> Box<dyn Iterator<Item = Formula>> {
        assert!(self.vars >= 1, "need at least one variable");
        match self.mode {
            Mode::Exhaustive => {
                let mut leaves: Vec<Formula> = (0..self.vars).map(|i| Formula::var(var_name(i))).collect();
                if self.constants {
                    leaves.extend([Formula::Top, Formula::Bot]);
                }
                Box::new(enumerate_formulas(&leaves, self.max_connectives))
            }
            Mode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (vars, m) = (self.vars, self.max_connectives);
                Box::new((0..samples).map(move |_| random_formula(vars, m, rng.next_u64())))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Verdict { calculus: Calculus, options: SearchOptions, proved: bool, oracle_valid: bool },
    Budget { calculus: Calculus, options: SearchOptions, budget: usize },
    Proof { calculus: Calculus, options: SearchOptions, defect: Defect },
    Model { calculus: Calculus, options: SearchOptions, model: KripkeChain },
    ModelSize { calculus: Calculus, options: SearchOptions, worlds: usize, vars: usize },
}

impl Problem {
    /// Whether `other` is the same kind of failure, ignoring its details.
    fn same_kind(&self, other: &Problem) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

fn describe(calculus: Calculus, options: &SearchOptions) -> String {
    let mut s = calculus.token().to_string();
    if options.optimized {
        s.push_str(" --optimized");
    }
    if options.sixopt {
        s.push_str(" --sixopt");
    }
    s
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Verdict { calculus, options, proved, oracle_valid } => write!(
                f,
                "{} says {}, oracle says {}",
                describe(*calculus, options),
                if *proved { "proved" } else { "refuted" },
                if *oracle_valid { "valid" } else { "invalid" }
            ),
            Problem::Budget { calculus, options, budget } => {
                write!(f, "{} exceeded its depth budget of {budget}", describe(*calculus, options))
            }
            Problem::Proof { calculus, options, defect } => {
                write!(f, "{} emitted a defective proof: {defect}", describe(*calculus, options))
            }
            Problem::Model { calculus, options, .. } => {
                write!(f, "{} emitted a model that does not refute the goal", describe(*calculus, options))
            }
            Problem::ModelSize { calculus, options, worlds, vars } => write!(
                f,
                "{} emitted a model with {worlds} worlds for {vars} variables",
                describe(*calculus, options)
            ),
        }
    }
}

/// Runs every check on one formula and returns whether it is valid.
pub fn check_formula(f: &Formula, depth: Depth, step_budget: Option<usize>) -> Result<bool, Problem> {
    let valid = oracle_valid(f).is_valid();
    let vars = f.vars().len();
    let goal = Goal::new(f.clone());
    for calculus in [Calculus::D1, Calculus::D3] {
        for options in flag_settings(calculus, step_budget) {
            let budget = |e: BudgetExceeded| Problem::Budget { calculus, options, budget: e.budget };
            let model = match depth {
                Depth::Verdicts => match goal.verdict(calculus, &options).map_err(budget)?.0 {
                    Verdict::Proved => None,
                    Verdict::Refuted(chain) => Some(chain),
                },
                Depth::Full => match goal.decide(calculus, &options).map_err(budget)?.outcome {
                    Outcome::Proved(proof) => {
                        check_proof(&proof).map_err(|defect| Problem::Proof { calculus, options, defect })?;
                        None
                    }
                    Outcome::Refuted(cm) => {
                        if !refutes(&cm.chain, f, calculus) {
                            return Err(Problem::Model { calculus, options, model: cm.chain });
                        }
                        Some(cm.chain)
                    }
                },
            };
            if model.is_none() != valid {
                return Err(Problem::Verdict { calculus, options, proved: model.is_none(), oracle_valid: valid });
            }
            if let Some(chain) = model {
                if calculus == Calculus::D1 && chain.len() > vars + 1 {
                    return Err(Problem::ModelSize { calculus, options, worlds: chain.len(), vars });
                }
            }
        }
    }
    Ok(valid)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub formulas: u64,
    pub valid: u64,
}

#[derive(Clone, Debug)]
pub struct Disagreement {
    /// Position of the failing formula in the run.
    pub index: u64,
    pub formula: Formula,
    /// A smallest-found formula failing the same way.
    pub witness: Formula,
    pub problem: Problem,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "formula #{} {}: {}; minimized witness: {}",
            self.index,
            self.formula.render(),
            self.problem,
            self.witness.render()
        )
    }
}

/// Checks every formula of `config`, stopping at the first failure.
pub fn run(config: &Config) -> Result<Summary, Box<Disagreement>> {
    let mut summary = Summary::default();
    for (index, formula) in config.formulas().enumerate() {
        match check_formula(&formula, config.depth, config.step_budget) {
            Ok(valid) => {
                summary.formulas += 1;
                summary.valid += valid as u64;
            }
            Err(problem) => {
                let witness = minimize(&formula, |g| {
                    check_formula(g, config.depth, config.step_budget).is_err_and(|p| p.same_kind(&problem))
                });
                return Err(Box::new(Disagreement { index: index as u64, formula, witness, problem }));
            }
        }
    }
    Ok(summary)
}

/// Greedily shrinks `f` while `fails` holds, by replacing subformulas with
/// their children or with constants.
pub fn minimize(f: &Formula, mut fails: impl FnMut(&Formula) -> bool) -> Formula {
    let mut current = f.clone();
    'outer: loop {
        for candidate in shrinks(&current) {
            if fails(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        return current;
    }
}

/// One-step shrinks of `f`, each strictly smaller.
fn shrinks(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    if let Some((l, r)) = f.children() {
        out.push(l.clone());
        out.push(r.clone());
        out.extend([Formula::Top, Formula::Bot]);
        let rebuild = |l: Formula, r: Formula| match f {
            Formula::And(..) => Formula::and(l, r),
            Formula::Or(..) => Formula::or(l, r),
            _ => Formula::imp(l, r),
        };
        for s in shrinks(l) {
            out.push(rebuild(s, r.clone()));
        }
        for s in shrinks(r) {
            out.push(rebuild(l.clone(), s));
        }
    } else if matches!(f, Formula::Var(_)) {
        out.extend([Formula::Top, Formula::Bot]);
    }
    out
}
