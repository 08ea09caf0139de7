//! The two-sign calculus with the `Tbar` marker, and its decision procedure.
//!
//! Search starts from `{F A}`. A `T(A -> B)` is split once into `T B` and
//! `F A, Tbar(A -> B)`; the marked implication fires later, when the node
//! syntactically satisfies `A`.

use std::cell::Cell;

use crate::engine::{Id, Inst, Lit, Rules, Set, Shape, Table};
use crate::formula::Formula;
use crate::proof::{Decision, SearchOptions, SearchStats, Verdict};
use crate::rules::{Rule, RuleError, RuleInstance};
use crate::semantics::{Calculus, Sign};
use crate::{BudgetExceeded, Goal, Node, SearchObserver};

pub(crate) struct D3<'t> {
    table: &'t Table,
    sixopt: bool,
}

/// `S ⊨ A` evaluated on one node, memoized for that node only.
struct Sat<'a> {
    table: &'a Table,
    set: &'a Set,
    memo: Vec<u8>,
    steps: Cell<u64>,
}

impl<'a> Sat<'a> {
    fn new(table: &'a Table, set: &'a Set) -> Self {
        Sat { table, set, memo: vec![0; table.len()], steps: Cell::new(0) }
    }

    fn holds(&mut self, id: Id) -> bool {
        self.steps.set(self.steps.get() + 1);
        match self.memo[id as usize] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        let value = self.set.contains(Sign::T, id)
            || self.set.contains(Sign::Tbar, id)
            || match self.table.shape(id) {
                Shape::Top => true,
                Shape::Bot | Shape::Var => false,
                Shape::And(a, b) => self.holds(a) && self.holds(b),
                Shape::Or(a, b) => self.holds(a) || self.holds(b),
                Shape::Imp(a, b) => !self.set.contains(Sign::F, id) && (!self.holds(a) || self.holds(b)),
            };
        self.memo[id as usize] = if value { 2 } else { 1 };
        value
    }
}

impl<'t> D3<'t> {
    pub(crate) fn new(table: &'t Table, sixopt: bool) -> Self {
        D3 { table, sixopt }
    }

    fn imp(&self, id: Id) -> (Id, Id) {
        match self.table.shape(id) {
            Shape::Imp(a, b) => (a, b),
            other => unreachable!("implication expected, found {other:?}"),
        }
    }

    pub(crate) fn validate(&self, set: &Set, inst: &Inst) -> Result<(), RuleError> {
        let rule = inst.rule;
        if !rule.belongs_to(Calculus::D3) {
            return Err(RuleError::WrongCalculus(rule, Calculus::D3));
        }
        if rule == Rule::TImpBar && !self.sixopt {
            return Err(RuleError::FlagRequired(rule, "sixopt"));
        }
        for &l in &inst.principal {
            if !set.contains(l.sign, l.id) {
                return Err(RuleError::NotInNode(self.table.signed(l)));
            }
        }
        if rule == Rule::FImp {
            let wanted: Vec<Lit> = set
                .iter()
                .copied()
                .filter(|l| l.sign == Sign::F && matches!(self.table.shape(l.id), Shape::Imp(..)))
                .collect();
            let mut given = inst.principal.clone();
            given.sort_unstable();
            given.dedup();
            if inst.principal.is_empty() || given.len() != inst.principal.len() || given != wanted {
                return Err(RuleError::Principal { rule, what: "every F implication of the node" });
            }
            return Ok(());
        }
        let [l] = inst.principal[..] else {
            return Err(RuleError::Arity { rule, expected: "1".into(), found: inst.principal.len() });
        };
        let shape = self.table.shape(l.id);
        let fits = match rule {
            Rule::TAnd => l.sign == Sign::T && matches!(shape, Shape::And(..)),
            Rule::TOr => l.sign == Sign::T && matches!(shape, Shape::Or(..)),
            Rule::FAnd => l.sign == Sign::F && matches!(shape, Shape::And(..)),
            Rule::FOr => l.sign == Sign::F && matches!(shape, Shape::Or(..)),
            Rule::TImp1 => l.sign == Sign::T && matches!(shape, Shape::Imp(..)),
            Rule::TImpBar => {
                l.sign == Sign::T
                    && matches!(shape, Shape::Imp(a, _) if !self.table.contains_implication(a))
            }
            Rule::Tbar => l.sign == Sign::Tbar,
            _ => false,
        };
        if !fits {
            return Err(RuleError::Shape { rule, principal: self.table.signed(l).to_string() });
        }
        if rule == Rule::Tbar {
            let (a, _) = self.imp(l.id);
            if !Sat::new(self.table, set).holds(a) {
                return Err(RuleError::GateClosed(self.table.formula(a).to_string()));
            }
        }
        Ok(())
    }
}

impl Rules for D3<'_> {
    const CALCULUS: Calculus = Calculus::D3;

    fn table(&self) -> &Table {
        self.table
    }

    fn inconsistent(&self, set: &Set) -> bool {
        set.iter().any(|&Lit { sign, id }| match sign {
            Sign::T => self.table.shape(id) == Shape::Bot || set.contains(Sign::F, id),
            Sign::F => {
                let shape = self.table.shape(id);
                shape == Shape::Top || (matches!(shape, Shape::Var) && crate::testing::d3_fault())
            }
            _ => false,
        })
    }

    fn select(&self, set: &Set) -> (Option<Inst>, u64) {
        let first = |pick: &dyn Fn(Lit, Shape) -> Option<Rule>| {
            set.iter()
                .find_map(|&l| pick(l, self.table.shape(l.id)).map(|rule| Inst::new(rule, vec![l])))
        };
        let alpha = first(&|l, shape| match (l.sign, shape) {
            (Sign::T, Shape::And(..)) => Some(Rule::TAnd),
            (Sign::F, Shape::Or(..)) => Some(Rule::FOr),
            _ => None,
        });
        if alpha.is_some() {
            return (alpha, 0);
        }
        if self.sixopt {
            let promote = first(&|l, shape| match (l.sign, shape) {
                (Sign::T, Shape::Imp(a, _)) if !self.table.contains_implication(a) => Some(Rule::TImpBar),
                _ => None,
            });
            if promote.is_some() {
                return (promote, 0);
            }
        }
        let beta = first(&|l, shape| match (l.sign, shape) {
            (Sign::T, Shape::Or(..)) => Some(Rule::TOr),
            (Sign::T, Shape::Imp(..)) => Some(Rule::TImp1),
            _ => None,
        });
        if beta.is_some() {
            return (beta, 0);
        }
        let f_and = first(&|l, shape| match (l.sign, shape) {
            (Sign::F, Shape::And(..)) => Some(Rule::FAnd),
            _ => None,
        });
        if f_and.is_some() {
            return (f_and, 0);
        }
        let mut sat = Sat::new(self.table, set);
        let fired = set.iter().copied().find(|l| l.sign == Sign::Tbar && sat.holds(self.imp(l.id).0));
        let cost = sat.steps.get();
        if let Some(l) = fired {
            return (Some(Inst::new(Rule::Tbar, vec![l])), cost);
        }
        let principal: Vec<Lit> = set
            .iter()
            .copied()
            .filter(|l| l.sign == Sign::F && matches!(self.table.shape(l.id), Shape::Imp(..)))
            .collect();
        if principal.is_empty() {
            return (None, cost);
        }
        (Some(Inst::new(Rule::FImp, principal)), cost)
    }

    fn expand(&self, set: &Set, inst: &Inst) -> Vec<Set> {
        let h = inst.principal[0];
        let s = |added: &[Lit]| set.replace(&[h], added);
        let lit = Lit::new;
        let parts = || match self.table.shape(h.id) {
            Shape::And(a, b) | Shape::Or(a, b) | Shape::Imp(a, b) => (a, b),
            other => unreachable!("compound formula expected, found {other:?}"),
        };
        match inst.rule {
            Rule::TAnd => {
                let (a, b) = parts();
                vec![s(&[lit(Sign::T, a), lit(Sign::T, b)])]
            }
            Rule::FOr => {
                let (a, b) = parts();
                vec![s(&[lit(Sign::F, a), lit(Sign::F, b)])]
            }
            Rule::TImpBar => vec![s(&[lit(Sign::Tbar, h.id)])],
            Rule::TOr => {
                let (a, b) = parts();
                vec![s(&[lit(Sign::T, a)]), s(&[lit(Sign::T, b)])]
            }
            Rule::TImp1 => {
                let (a, b) = parts();
                vec![s(&[lit(Sign::T, b)]), s(&[lit(Sign::F, a), lit(Sign::Tbar, h.id)])]
            }
            Rule::FAnd => {
                let (a, b) = parts();
                vec![
                    s(&[lit(Sign::F, a), lit(Sign::F, b)]),
                    s(&[lit(Sign::F, a), lit(Sign::T, b)]),
                    s(&[lit(Sign::T, a), lit(Sign::F, b)]),
                ]
            }
            Rule::Tbar => {
                let (_, b) = parts();
                vec![s(&[lit(Sign::T, b)])]
            }
            Rule::FImp => {
                let base: Vec<Lit> = set
                    .iter()
                    .copied()
                    .filter(|l| matches!(l.sign, Sign::T | Sign::Tbar) && !inst.principal.contains(l))
                    .collect();
                inst.principal
                    .iter()
                    .map(|&p| {
                        let (a, b) = self.imp(p.id);
                        let mut lits = base.clone();
                        lits.extend(inst.principal.iter().copied().filter(|&o| o != p));
                        lits.push(lit(Sign::T, a));
                        lits.push(lit(Sign::F, b));
                        Set::from_unsorted(lits)
                    })
                    .collect()
            }
            other => unreachable!("{other} is not a D3 rule"),
        }
    }
}

fn table_for(node: &Node, extra: &[Formula]) -> Table {
    Table::new(node.iter().map(|sf| sf.formula()).chain(extra))
}

fn check_signs(node: &Node) -> Result<(), RuleError> {
    match node.iter().find(|sf| !sf.sign().belongs_to(Calculus::D3)) {
        Some(sf) => Err(RuleError::ForeignSign(sf.clone(), Calculus::D3)),
        None => Ok(()),
    }
}

/// `node ⊨ f`.
pub fn sat(node: &Node, f: &Formula) -> bool {
    sat_counted(node, f).0
}

/// `node ⊨ f` together with the number of recursion steps it took.
pub fn sat_counted(node: &Node, f: &Formula) -> (bool, u64) {
    let table = table_for(node, std::slice::from_ref(f));
    let set = table.set(node);
    let mut s = Sat::new(&table, &set);
    let value = s.holds(table.id(f).expect("interned"));
    (value, s.steps.get())
}

pub fn inconsistent_d3(node: &Node) -> bool {
    let table = table_for(node, &[]);
    let d3 = D3::new(&table, false);
    let set = d3.table.set(node);
    d3.inconsistent(&set)
}

pub fn select_rule_d3(node: &Node, sixopt: bool) -> Option<RuleInstance> {
    let table = table_for(node, &[]);
    let d3 = D3::new(&table, sixopt);
    let set = d3.table.set(node);
    d3.select(&set).0.map(|inst| inst.public(d3.table))
}

pub fn expand_d3(node: &Node, inst: &RuleInstance, sixopt: bool) -> Result<Vec<Node>, RuleError> {
    check_signs(node)?;
    let extra: Vec<Formula> = inst.principal.iter().map(|sf| sf.formula().clone()).collect();
    let table = table_for(node, &extra);
    let d3 = D3::new(&table, sixopt);
    let set = d3.table.set(node);
    let raw = Inst::new(
        inst.rule,
        inst.principal.iter().map(|sf| d3.table.lit(sf).expect("interned")).collect(),
    );
    d3.validate(&set, &raw)?;
    Ok(d3.expand(&set, &raw).iter().map(|c| d3.table.node(c)).collect())
}

/// Decides `goal`, returning a closed proof or a counter-model.
pub fn decide_d3(goal: &Formula, options: &SearchOptions) -> Result<Decision, BudgetExceeded> {
    Goal::new(goal.clone()).decide(Calculus::D3, options)
}

/// As [`decide_d3`], reporting every rule application to `observer`.
pub fn decide_d3_observed(
    goal: &Formula,
    options: &SearchOptions,
    observer: &mut dyn SearchObserver,
) -> Result<Decision, BudgetExceeded> {
    Goal::new(goal.clone()).decide_observed(Calculus::D3, options, observer)
}

/// Decides `goal` without keeping the proof; refutations still carry
/// their counter-model.
pub fn verdict_d3(goal: &Formula, options: &SearchOptions) -> Result<(Verdict, SearchStats), BudgetExceeded> {
    Goal::new(goal.clone()).verdict(Calculus::D3, options)
}
