//! Propositional formulas over variables, `true`, `false`, `&`, `|` and `->`.
//!
//! Negation is not part of the language: `~A` is read as `A -> false` by the
//! parser, and the printer writes any implication into `false` back as `~A`.

mod generate;
mod parser;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use generate::{enumerate_formulas, random_formula, var_name};
pub use parser::{parse, ParseError};

/// A propositional formula. Children are reference counted, so cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Var(Arc<str>),
    Top,
    Bot,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
}

/// Counts used by the depth and model-size bounds.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct FormulaStats {
    /// Number of distinct propositional variables.
    pub var_count: usize,
    pub connective_count: usize,
    /// Total number of nodes in the syntax tree.
    pub size: usize,
}

impl Formula {
    pub fn var(name: impl Into<Arc<str>>) -> Self {
        Formula::Var(name.into())
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Arc::new(left), Arc::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or(Arc::new(left), Arc::new(right))
    }

    pub fn imp(left: Formula, right: Formula) -> Self {
        Formula::Imp(Arc::new(left), Arc::new(right))
    }

    /// `~A`, i.e. `A -> false`.
    pub fn negation(inner: Formula) -> Self {
        Formula::imp(inner, Formula::Bot)
    }

    /// Variables, `true` and `false`.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Var(_) | Formula::Top | Formula::Bot)
    }

    pub fn is_implication(&self) -> bool {
        matches!(self, Formula::Imp(..))
    }

    /// The two immediate subformulas of a compound formula.
    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.size() + b.size(),
            None => 1,
        }
    }

    pub fn connective_count(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.connective_count() + b.connective_count(),
            None => 0,
        }
    }

    pub fn contains_implication(&self) -> bool {
        match self {
            Formula::Imp(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_implication() || b.contains_implication()
            }
            _ => false,
        }
    }

    /// Names of the variables occurring in the formula.
    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Var(name) => {
                out.insert(name.clone());
            }
            Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Every subtree of the formula, the formula itself included.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            if let Some((a, b)) = self.children() {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    pub fn stats(&self) -> FormulaStats {
        FormulaStats {
            var_count: self.vars().len(),
            connective_count: self.connective_count(),
            size: self.size(),
        }
    }

    /// ASCII concrete syntax with the fewest parentheses the parser needs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    /// Appends [`Formula::render`] to `out`.
    pub fn render_into(&self, out: &mut String) {
        write_formula(out, self, 0, &ASCII).expect("writing to a String");
    }

    /// Same layout as [`Formula::render`] with `⊤ ⊥ ∧ ∨ → ¬`.
    pub fn render_unicode(&self) -> String {
        let mut out = String::new();
        write_formula(&mut out, self, 0, &UNICODE).expect("writing to a String");
        out
    }
}

// Binding strength, loosest first.
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;

struct Symbols {
    top: &'static str,
    bot: &'static str,
    and: &'static str,
    or: &'static str,
    imp: &'static str,
    not: &'static str,
}

const ASCII: Symbols = Symbols {
    top: "true",
    bot: "false",
    and: " & ",
    or: " | ",
    imp: " -> ",
    not: "~",
};

const UNICODE: Symbols = Symbols {
    top: "⊤",
    bot: "⊥",
    and: " ∧ ",
    or: " ∨ ",
    imp: " → ",
    not: "¬",
};

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, b) if **b == Formula::Bot => PREC_NOT,
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => u8::MAX,
    }
}

fn write_formula<W: fmt::Write>(out: &mut W, f: &Formula, min_prec: u8, sym: &Symbols) -> fmt::Result {
    let prec = precedence(f);
    if prec < min_prec {
        out.write_char('(')?;
    }
    // `&`, `|` and `->` all associate to the right, so only a left operand
    // of the same kind needs parentheses.
    match f {
        Formula::Var(name) => out.write_str(name)?,
        Formula::Top => out.write_str(sym.top)?,
        Formula::Bot => out.write_str(sym.bot)?,
        Formula::Imp(a, b) if **b == Formula::Bot => {
            out.write_str(sym.not)?;
            write_formula(out, a, PREC_NOT, sym)?;
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            let op = match f {
                Formula::And(..) => sym.and,
                Formula::Or(..) => sym.or,
                _ => sym.imp,
            };
            write_formula(out, a, prec + 1, sym)?;
            out.write_str(op)?;
            write_formula(out, b, prec, sym)?;
        }
    }
    if prec < min_prec {
        out.write_char(')')?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, &ASCII)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
