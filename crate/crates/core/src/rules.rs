//! Rule identifiers and rule instances for both calculi.

use std::fmt;

use thiserror::Error;

use crate::semantics::{Calculus, SignedFormula};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rule {
    /// `T(A & B)`, in both calculi.
    TAnd,
    /// `T(A | B)`, in both calculi.
    TOr,
    FlAnd,
    FlOr,
    /// Three-way split of `T(A -> B)` in D1.
    TImp,
    FlImp,
    FDecide,
    ThatDecide,
    /// The multi-premise rule of D1.
    FnTtil,
    /// Its refinement, used only by the optimized mode.
    FnTtilOpt,
    FAnd,
    FOr,
    /// `T(A -> B)` in D3: `T B | F A, Tbar(A -> B)`.
    TImp1,
    /// Fires a marked implication once its antecedent is satisfied.
    Tbar,
    /// The multi-premise rule of D3.
    FImp,
    /// Marks a `T(A -> B)` with implication-free antecedent directly.
    TImpBar,
}

impl Rule {
    pub const ALL: [Rule; 16] = [
        Rule::TAnd,
        Rule::TOr,
        Rule::FlAnd,
        Rule::FlOr,
        Rule::TImp,
        Rule::FlImp,
        Rule::FDecide,
        Rule::ThatDecide,
        Rule::FnTtil,
        Rule::FnTtilOpt,
        Rule::FAnd,
        Rule::FOr,
        Rule::TImp1,
        Rule::Tbar,
        Rule::FImp,
        Rule::TImpBar,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Rule::TAnd => "T&",
            Rule::TOr => "T|",
            Rule::FlAnd => "Fl&",
            Rule::FlOr => "Fl|",
            Rule::TImp => "T->",
            Rule::FlImp => "Fl->",
            Rule::FDecide => "F-decide",
            Rule::ThatDecide => "That-decide",
            Rule::FnTtil => "FnTtil",
            Rule::FnTtilOpt => "FnTtil-opt",
            Rule::FAnd => "F&",
            Rule::FOr => "F|",
            Rule::TImp1 => "T->1",
            Rule::Tbar => "Tbar",
            Rule::FImp => "F->",
            Rule::TImpBar => "T->bar",
        }
    }

    pub fn from_token(token: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.token() == token)
    }

    pub fn belongs_to(self, calculus: Calculus) -> bool {
        match self {
            Rule::TAnd | Rule::TOr => true,
            Rule::FlAnd
            | Rule::FlOr
            | Rule::TImp
            | Rule::FlImp
            | Rule::FDecide
            | Rule::ThatDecide
            | Rule::FnTtil
            | Rule::FnTtilOpt => calculus == Calculus::D1,
            Rule::FAnd | Rule::FOr | Rule::TImp1 | Rule::Tbar | Rule::FImp | Rule::TImpBar => {
                calculus == Calculus::D3
            }
        }
    }

    /// The multi-premise rules move to a later world; every other rule is
    /// invertible and stays at the current one.
    pub fn advances_world(self) -> bool {
        matches!(self, Rule::FnTtil | Rule::FnTtilOpt | Rule::FImp)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A rule together with the formulas it acts on. For the multi-premise rules
/// the order of `principal` fixes the order of the conclusions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleInstance {
    pub rule: Rule,
    pub principal: Vec<SignedFormula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule {0} is not part of calculus {1}")]
    WrongCalculus(Rule, Calculus),
    #[error("rule {0} needs the {1} flag")]
    FlagRequired(Rule, &'static str),
    #[error("rule {0} is replaced by {1} under the {2} flag")]
    Superseded(Rule, Rule, &'static str),
    #[error("principal formula {0} is not in the node")]
    NotInNode(SignedFormula),
    #[error("rule {rule} does not apply to {principal}")]
    Shape { rule: Rule, principal: String },
    #[error("rule {rule} expects {expected} principal formulas, got {found}")]
    Arity { rule: Rule, expected: String, found: usize },
    #[error("the principal of {rule} must list {what}")]
    Principal { rule: Rule, what: &'static str },
    #[error("gate of Tbar is closed: the node does not satisfy {0}")]
    GateClosed(String),
    #[error("sign {0} does not belong to calculus {1}")]
    ForeignSign(SignedFormula, Calculus),
}
