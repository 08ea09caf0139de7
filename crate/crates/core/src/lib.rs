//! Decision procedures for propositional Gödel–Dummett logic (LC).
//!
//! Two terminating tableau calculi are provided. [`decide_d1`] works with
//! seven signs and yields deductions of quadratic depth; [`decide_d3`] works
//! with `T`, `F` and a private `Tbar` marker and yields deductions of linear
//! depth. Both return either a closed proof table, which [`check_proof`]
//! replays independently, or a finite linear Kripke model refuting the goal.
//! [`oracle_valid`] decides validity by brute force and serves as ground
//! truth for testing.
//!
//! ```
//! use dummett::{decide_d3, parse, Outcome, SearchOptions};
//!
//! let lc = parse("(p -> q) | (q -> p)").unwrap();
//! let decision = decide_d3(&lc, &SearchOptions::default()).unwrap();
//! assert!(decision.outcome.is_proved());
//! ```

use std::collections::BTreeSet;

use thiserror::Error;

pub mod corpus;
pub mod crosscheck;
mod d1;
mod d3;
mod engine;
pub mod families;
pub mod formula;
mod goal;
pub mod proof;
pub mod rules;
pub mod semantics;
#[doc(hidden)]
pub mod testing;

pub use d1::{decide_d1, decide_d1_observed, expand_d1, inconsistent_d1, measure_d1, select_rule_d1, verdict_d1,
    TerminationMeasure};
pub use d3::{decide_d3, decide_d3_observed, expand_d3, inconsistent_d3, sat, sat_counted, select_rule_d3, verdict_d3};
pub use goal::Goal;
pub use formula::{parse, Formula, FormulaStats, ParseError};
pub use proof::{
    check_proof, metrics, CounterModel, Decision, Defect, DefectKind, Outcome, Proof, ProofMetrics, ProofTree,
    SchemaError, SearchOptions, SearchStats, Verdict,
};
pub use rules::{Rule, RuleError, RuleInstance};
pub use semantics::{oracle_valid, Calculus, KripkeChain, OracleVerdict, Sign, SignedFormula};

/// A duplication-free set of signed formulas.
pub type Node = BTreeSet<SignedFormula>;

/// The search went deeper than its budget allows. Termination is guaranteed
/// by the calculi, so this signals an implementation fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("internal invariant violated: search exceeded its depth budget of {budget}")]
pub struct BudgetExceeded {
    pub budget: usize,
}

/// Receives every rule application of an instrumented search.
pub trait SearchObserver {
    fn expanded(&mut self, premise: &Node, instance: &RuleInstance, conclusions: &[Node]);
}

impl<F: FnMut(&Node, &RuleInstance, &[Node])> SearchObserver for F {
    fn expanded(&mut self, premise: &Node, instance: &RuleInstance, conclusions: &[Node]) {
        self(premise, instance, conclusions)
    }
}

/// Runs the decision procedure of `calculus` on `goal`.
pub fn decide(goal: &Formula, calculus: Calculus, options: &SearchOptions) -> Result<Decision, BudgetExceeded> {
    match calculus {
        Calculus::D1 => decide_d1(goal, options),
        Calculus::D3 => decide_d3(goal, options),
    }
}

/// As [`decide`], without keeping the proof.
pub fn verdict(goal: &Formula, calculus: Calculus, options: &SearchOptions) -> Result<(Verdict, SearchStats), BudgetExceeded> {
    match calculus {
        Calculus::D1 => verdict_d1(goal, options),
        Calculus::D3 => verdict_d3(goal, options),
    }
}

/// Statistics of the complete deduction of `goal`, every branch expanded.
pub fn explore(goal: &Formula, calculus: Calculus, options: &SearchOptions) -> Result<SearchStats, BudgetExceeded> {
    Goal::new(goal.clone()).explore(calculus, options)
}

/// Whether `model` refutes `goal` at its root, read through the root sign
/// of `calculus` (`Fl` for D1, `F` for D3).
pub fn refutes(model: &KripkeChain, goal: &Formula, calculus: Calculus) -> bool {
    let sign = match calculus {
        Calculus::D1 => Sign::Fl,
        Calculus::D3 => Sign::F,
    };
    model.realizes(0, &SignedFormula::of(sign, goal.clone()))
}
