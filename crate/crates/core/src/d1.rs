//! The seven-sign calculus and its deterministic decision procedure.
//!
//! Search starts from `{Fl A}`. Invertible rules are applied first (single
//! conclusion before branching ones); the multi-premise rule comes last and
//! is the only place where the search moves to a later world.

use std::collections::BTreeSet;

use crate::engine::{Id, Inst, Lit, Rules, Set, Shape, Table};
use crate::formula::Formula;
use crate::proof::{Decision, SearchOptions, SearchStats, Verdict};
use crate::rules::{Rule, RuleError, RuleInstance};
use crate::semantics::{Calculus, Sign, SignedFormula};
use crate::{BudgetExceeded, Goal, Node, SearchObserver};

pub(crate) struct D1<'t> {
    table: &'t Table,
    optimized: bool,
}

impl<'t> D1<'t> {
    pub(crate) fn new(table: &'t Table, optimized: bool) -> Self {
        D1 { table, optimized }
    }

    fn imp(&self, id: Id) -> (Id, Id) {
        match self.table.shape(id) {
            Shape::Imp(a, b) => (a, b),
            other => unreachable!("implication expected, found {other:?}"),
        }
    }

    fn expand_fn_ttil(&self, set: &Set, principal: &[Lit], opt: bool) -> Vec<Set> {
        let imps: Vec<(Id, Id, Id)> = principal
            .iter()
            .filter(|l| l.sign == Sign::Ttil)
            .map(|l| {
                let (a, b) = self.imp(l.id);
                (l.id, a, b)
            })
            .collect();
        let fns: Vec<Id> = principal.iter().filter(|l| l.sign == Sign::Fn).map(|l| l.id).collect();

        let mut base = Vec::new();
        for l in set.iter() {
            if principal.contains(l) {
                continue;
            }
            if matches!(l.sign, Sign::T | Sign::Fl | Sign::Tn) {
                base.push(Lit::new(Sign::T, l.id));
            }
        }

        let mut out = Vec::with_capacity(principal.len());
        for (j, &(_, a, b)) in imps.iter().enumerate() {
            let mut lits = base.clone();
            for (i, &(id, _, _)) in imps.iter().enumerate() {
                if i < j && opt {
                    lits.push(Lit::new(Sign::Ttil, id));
                } else if i != j {
                    lits.push(Lit::new(Sign::That, id));
                }
            }
            lits.push(Lit::new(Sign::Fl, a));
            lits.push(Lit::new(Sign::Tn, b));
            lits.extend(fns.iter().map(|&c| Lit::new(Sign::F, c)));
            out.push(Set::from_unsorted(lits));
        }
        for (j, &c) in fns.iter().enumerate() {
            let mut lits = base.clone();
            let kept = if opt { Sign::Ttil } else { Sign::That };
            lits.extend(imps.iter().map(|&(id, _, _)| Lit::new(kept, id)));
            for (i, &other) in fns.iter().enumerate() {
                if i < j && opt {
                    lits.push(Lit::new(Sign::Fn, other));
                } else if i != j {
                    lits.push(Lit::new(Sign::F, other));
                }
            }
            lits.push(Lit::new(Sign::Fl, c));
            out.push(Set::from_unsorted(lits));
        }
        out
    }

    /// Checks that `inst` is a legal application to `set`.
    pub(crate) fn validate(&self, set: &Set, inst: &Inst) -> Result<(), RuleError> {
        let rule = inst.rule;
        if !rule.belongs_to(Calculus::D1) {
            return Err(RuleError::WrongCalculus(rule, Calculus::D1));
        }
        if rule == Rule::FnTtilOpt && !self.optimized {
            return Err(RuleError::FlagRequired(rule, "optimized"));
        }
        if rule == Rule::FnTtil && self.optimized {
            return Err(RuleError::Superseded(rule, Rule::FnTtilOpt, "optimized"));
        }
        for &l in &inst.principal {
            if !set.contains(l.sign, l.id) {
                return Err(RuleError::NotInNode(self.table.signed(l)));
            }
        }
        if matches!(rule, Rule::FnTtil | Rule::FnTtilOpt) {
            let ttil: Vec<Lit> = set.iter().copied().filter(|l| l.sign == Sign::Ttil).collect();
            let fns: Vec<Lit> = set.iter().copied().filter(|l| l.sign == Sign::Fn).collect();
            let (left, right) = inst.principal.split_at(ttil.len().min(inst.principal.len()));
            let same = |given: &[Lit], wanted: &[Lit]| {
                let given_set: BTreeSet<Lit> = given.iter().copied().collect();
                given.len() == wanted.len() && given_set.len() == given.len() && wanted.iter().all(|l| given_set.contains(l))
            };
            if inst.principal.is_empty() || !same(left, &ttil) || !same(right, &fns) {
                return Err(RuleError::Principal {
                    rule,
                    what: "every Ttil formula of the node, then every Fn formula",
                });
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
            Rule::TImp => l.sign == Sign::T && matches!(shape, Shape::Imp(..)),
            Rule::FlAnd => l.sign == Sign::Fl && matches!(shape, Shape::And(..)),
            Rule::FlOr => l.sign == Sign::Fl && matches!(shape, Shape::Or(..)),
            Rule::FlImp => l.sign == Sign::Fl && matches!(shape, Shape::Imp(..)),
            Rule::FDecide => l.sign == Sign::F,
            Rule::ThatDecide => l.sign == Sign::That,
            _ => false,
        };
        if !fits {
            return Err(RuleError::Shape { rule, principal: self.table.signed(l).to_string() });
        }
        Ok(())
    }
}

impl Rules for D1<'_> {
    const CALCULUS: Calculus = Calculus::D1;

    fn table(&self) -> &Table {
        self.table
    }

    fn inconsistent(&self, set: &Set) -> bool {
        let opt = self.optimized;
        let has_fn = opt && set.iter().any(|l| l.sign == Sign::Fn);
        for &Lit { sign, id } in set.iter() {
            let shape = self.table.shape(id);
            let hit = match sign {
                Sign::T => {
                    shape == Shape::Bot
                        || set.contains(Sign::F, id)
                        || set.contains(Sign::Fl, id)
                        || (opt && set.contains(Sign::Fn, id))
                }
                Sign::F => {
                    shape == Shape::Top
                        || (opt && (set.contains(Sign::That, id) || set.contains(Sign::Ttil, id)))
                }
                Sign::Fl => shape == Shape::Top || (opt && shape == Shape::Bot && has_fn),
                Sign::Tn => opt && (set.contains(Sign::Fn, id) || (shape == Shape::Bot && has_fn)),
                Sign::Ttil if opt => {
                    let (a, _) = self.imp(id);
                    set.contains(Sign::T, a) || set.contains(Sign::Tn, a) || set.contains(Sign::Fl, a)
                }
                Sign::That if opt => {
                    let (a, _) = self.imp(id);
                    set.contains(Sign::T, a)
                }
                _ => false,
            };
            if hit {
                return true;
            }
        }
        false
    }

    fn select(&self, set: &Set) -> (Option<Inst>, u64) {
        let alpha = set.iter().find_map(|&l| {
            let rule = match (l.sign, self.table.shape(l.id)) {
                (Sign::T, Shape::And(..)) => Rule::TAnd,
                (Sign::Fl, Shape::Imp(..)) => Rule::FlImp,
                _ => return None,
            };
            Some(Inst::new(rule, vec![l]))
        });
        if alpha.is_some() {
            return (alpha, 0);
        }
        let beta = set.iter().find_map(|&l| {
            let rule = match (l.sign, self.table.shape(l.id)) {
                (Sign::Fl, Shape::And(..)) => Rule::FlAnd,
                (Sign::T, Shape::Or(..)) => Rule::TOr,
                (Sign::Fl, Shape::Or(..)) => Rule::FlOr,
                (Sign::T, Shape::Imp(..)) => Rule::TImp,
                (Sign::F, _) => Rule::FDecide,
                (Sign::That, _) => Rule::ThatDecide,
                _ => return None,
            };
            Some(Inst::new(rule, vec![l]))
        });
        if beta.is_some() {
            return (beta, 0);
        }
        let mut principal: Vec<Lit> = set.iter().copied().filter(|l| l.sign == Sign::Ttil).collect();
        principal.extend(set.iter().copied().filter(|l| l.sign == Sign::Fn));
        if principal.is_empty() {
            return (None, 0);
        }
        let rule = if self.optimized { Rule::FnTtilOpt } else { Rule::FnTtil };
        (Some(Inst::new(rule, principal)), 0)
    }

    fn expand(&self, set: &Set, inst: &Inst) -> Vec<Set> {
        let h = inst.principal[0];
        let s = |added: &[Lit]| set.replace(&[h], added);
        let lit = Lit::new;
        match inst.rule {
            Rule::FnTtil => self.expand_fn_ttil(set, &inst.principal, false),
            Rule::FnTtilOpt => self.expand_fn_ttil(set, &inst.principal, true),
            rule => {
                let (a, b) = match self.table.shape(h.id) {
                    Shape::And(a, b) | Shape::Or(a, b) | Shape::Imp(a, b) => (a, b),
                    _ => (h.id, h.id),
                };
                match rule {
                    Rule::TAnd => vec![s(&[lit(Sign::T, a), lit(Sign::T, b)])],
                    Rule::FlImp => vec![s(&[lit(Sign::T, a), lit(Sign::Fl, b)])],
                    Rule::FlAnd => vec![
                        s(&[lit(Sign::Fl, a), lit(Sign::Tn, b)]),
                        s(&[lit(Sign::T, a), lit(Sign::Fl, b)]),
                    ],
                    Rule::TOr => vec![s(&[lit(Sign::T, a)]), s(&[lit(Sign::T, b)])],
                    Rule::FlOr => vec![
                        s(&[lit(Sign::F, a), lit(Sign::Fl, b)]),
                        s(&[lit(Sign::F, b), lit(Sign::Fl, a)]),
                    ],
                    Rule::TImp => vec![
                        s(&[lit(Sign::T, b)]),
                        s(&[lit(Sign::Fl, a), lit(Sign::Tn, b)]),
                        s(&[lit(Sign::Ttil, h.id)]),
                    ],
                    Rule::FDecide => vec![s(&[lit(Sign::Fl, h.id)]), s(&[lit(Sign::Fn, h.id)])],
                    Rule::ThatDecide => vec![
                        s(&[lit(Sign::Fl, a), lit(Sign::Tn, b)]),
                        s(&[lit(Sign::Ttil, h.id)]),
                    ],
                    other => unreachable!("{other} is not a D1 rule"),
                }
            }
        }
    }
}

fn table_for(node: &Node, extra: &[SignedFormula]) -> Table {
    Table::new(node.iter().chain(extra).map(|sf| sf.formula()))
}

fn check_signs(node: &Node) -> Result<(), RuleError> {
    match node.iter().find(|sf| !sf.sign().belongs_to(Calculus::D1)) {
        Some(sf) => Err(RuleError::ForeignSign(sf.clone(), Calculus::D1)),
        None => Ok(()),
    }
}

/// Whether `node` is inconsistent; `optimized` adds the extended conditions.
pub fn inconsistent_d1(node: &Node, optimized: bool) -> bool {
    let table = table_for(node, &[]);
    let d1 = D1::new(&table, optimized);
    let set = d1.table.set(node);
    d1.inconsistent(&set)
}

/// The rule the decision procedure applies to `node`, if any.
pub fn select_rule_d1(node: &Node, optimized: bool) -> Option<RuleInstance> {
    let table = table_for(node, &[]);
    let d1 = D1::new(&table, optimized);
    let set = d1.table.set(node);
    d1.select(&set).0.map(|inst| inst.public(d1.table))
}

/// The conclusions of applying `inst` to `node`.
pub fn expand_d1(node: &Node, inst: &RuleInstance, optimized: bool) -> Result<Vec<Node>, RuleError> {
    check_signs(node)?;
    let table = table_for(node, &inst.principal);
    let d1 = D1::new(&table, optimized);
    let set = d1.table.set(node);
    let raw = Inst::new(
        inst.rule,
        inst.principal.iter().map(|sf| d1.table.lit(sf).expect("interned")).collect(),
    );
    d1.validate(&set, &raw)?;
    Ok(d1.expand(&set, &raw).iter().map(|c| d1.table.node(c)).collect())
}

/// Decides `goal`, returning a closed proof or a counter-model.
pub fn decide_d1(goal: &Formula, options: &SearchOptions) -> Result<Decision, BudgetExceeded> {
    Goal::new(goal.clone()).decide(Calculus::D1, options)
}

/// As [`decide_d1`], reporting every rule application to `observer`.
pub fn decide_d1_observed(
    goal: &Formula,
    options: &SearchOptions,
    observer: &mut dyn SearchObserver,
) -> Result<Decision, BudgetExceeded> {
    Goal::new(goal.clone()).decide_observed(Calculus::D1, options, observer)
}

/// Decides `goal` without keeping the proof; refutations still carry
/// their counter-model.
pub fn verdict_d1(goal: &Formula, options: &SearchOptions) -> Result<(Verdict, SearchStats), BudgetExceeded> {
    Goal::new(goal.clone()).verdict(Calculus::D1, options)
}

/// The well-founded order that decreases along every edge of a search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TerminationMeasure {
    /// Atomic formulas (variables and constants) signed `T`.
    pub t_atoms: BTreeSet<Formula>,
    /// Connectives summed over every formula of the node.
    pub connectives: usize,
    /// Formulas that some invertible rule can still re-sign without
    /// decomposing: `F` formulas, `That` formulas and `T` implications.
    pub pending: usize,
}

impl TerminationMeasure {
    /// `self ≺ other`: more `T` atoms, or the same atoms and fewer
    /// connectives, or the same atoms and connectives and fewer pending
    /// re-signings.
    pub fn precedes(&self, other: &TerminationMeasure) -> bool {
        if self.t_atoms != other.t_atoms {
            return self.t_atoms.is_superset(&other.t_atoms);
        }
        (self.connectives, self.pending) < (other.connectives, other.pending)
    }
}

pub fn measure_d1(node: &Node) -> TerminationMeasure {
    let mut m = TerminationMeasure { t_atoms: BTreeSet::new(), connectives: 0, pending: 0 };
    for sf in node {
        let f = sf.formula();
        m.connectives += f.connective_count();
        match sf.sign() {
            Sign::T if f.is_atomic() => {
                m.t_atoms.insert(f.clone());
            }
            Sign::T if f.is_implication() => m.pending += 1,
            Sign::F | Sign::That => m.pending += 1,
            _ => {}
        }
    }
    m
}
