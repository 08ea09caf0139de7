//! Signs and signed formulas shared by both calculi.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;

/// The tableau calculus a sign, node or proof belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calculus {
    /// Seven signs, present/next-world reading.
    D1,
    /// `T` and `F` plus the deduction-private `Tbar` marker.
    D3,
}

impl Calculus {
    pub fn token(self) -> &'static str {
        match self {
            Calculus::D1 => "d1",
            Calculus::D3 => "d3",
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// The declaration order is the sign rank used for canonical node ordering.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    /// Forced at the current world.
    T,
    /// Not forced at the current world.
    F,
    /// Not forced here, forced at every later world.
    Fl,
    /// Not forced at some later world.
    Fn,
    /// Forced at every later world.
    Tn,
    /// A forced implication whose antecedent is not forced now.
    That,
    /// A forced implication whose antecedent fails at some later world.
    Ttil,
    /// A forced implication already handled on the branch (D3 only).
    Tbar,
}

impl Sign {
    pub const ALL: [Sign; 8] = [
        Sign::T,
        Sign::F,
        Sign::Fl,
        Sign::Fn,
        Sign::Tn,
        Sign::That,
        Sign::Ttil,
        Sign::Tbar,
    ];

    /// ASCII token used in JSON and text output.
    pub fn token(self) -> &'static str {
        match self {
            Sign::T => "T",
            Sign::F => "F",
            Sign::Fl => "Fl",
            Sign::Fn => "Fn",
            Sign::Tn => "Tn",
            Sign::That => "That",
            Sign::Ttil => "Ttil",
            Sign::Tbar => "Tbar",
        }
    }

    pub fn from_token(token: &str) -> Option<Sign> {
        Sign::ALL.into_iter().find(|s| s.token() == token)
    }

    /// `That`, `Ttil` and `Tbar` only ever tag implications.
    pub fn implication_only(self) -> bool {
        matches!(self, Sign::That | Sign::Ttil | Sign::Tbar)
    }

    pub fn belongs_to(self, calculus: Calculus) -> bool {
        match calculus {
            Calculus::D1 => self != Sign::Tbar,
            Calculus::D3 => matches!(self, Sign::T | Sign::F | Sign::Tbar),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("sign {sign} may only tag an implication, got {formula}")]
pub struct SignError {
    pub sign: Sign,
    pub formula: Formula,
}

/// A formula together with its sign.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedFormula {
    sign: Sign,
    formula: Formula,
}

impl SignedFormula {
    pub fn new(sign: Sign, formula: Formula) -> Result<Self, SignError> {
        if sign.implication_only() && !formula.is_implication() {
            return Err(SignError { sign, formula });
        }
        Ok(SignedFormula { sign, formula })
    }

    /// For signs that accept any formula; panics on `That`, `Ttil`, `Tbar`
    /// applied to a non-implication.
    pub fn of(sign: Sign, formula: Formula) -> Self {
        SignedFormula::new(sign, formula).expect("sign/formula shape")
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

impl fmt::Display for SignedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.formula.is_atomic() {
            write!(f, "{} {}", self.sign, self.formula)
        } else {
            write!(f, "{}({})", self.sign, self.formula)
        }
    }
}
