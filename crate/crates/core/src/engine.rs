//! Compact representation shared by both calculi.
//!
//! Every formula that can occur in a deduction is a subformula of the input,
//! so a search interns those once in a [`Table`] and works on `(sign, id)`
//! pairs. Ids follow the canonical order (size, then rendered text), which
//! makes the derived order on [`Lit`] the canonical node order: sign rank,
//! then formula size, then text.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::formula::Formula;
use crate::proof::{CounterModel, Outcome, Proof, ProofTree, SearchOptions, SearchStats, Verdict};
use crate::rules::{Rule, RuleInstance};
use crate::semantics::{Calculus, KripkeChain, Sign, SignedFormula};
use crate::{BudgetExceeded, Node};

pub(crate) type Id = u32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Shape {
    Var,
    Top,
    Bot,
    And(Id, Id),
    Or(Id, Id),
    Imp(Id, Id),
}

pub(crate) struct Table {
    /// Built on first use; the search itself only needs `shapes`.
    formulas: Vec<OnceLock<Formula>>,
    names: Vec<Option<Arc<str>>>,
    roots: Vec<Id>,
    shapes: Vec<Shape>,
    has_imp: Vec<bool>,
    /// Keys use discovery numbers; `renumber` maps them to canonical ids.
    index: FxHashMap<Key, Id>,
    renumber: Vec<Id>,
}

/// Hash-consing key: one level of structure over already interned children.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Var(Arc<str>),
    Top,
    Bot,
    And(Id, Id),
    Or(Id, Id),
    Imp(Id, Id),
}

impl Table {
    /// Interns every subformula of the given formulas.
    pub(crate) fn new<'a>(roots: impl IntoIterator<Item = &'a Formula>) -> Table {
        let mut index: FxHashMap<Key, Id> = FxHashMap::default();
        let mut found: Vec<(Key, &'a Formula)> = Vec::new();
        fn visit<'a>(f: &'a Formula, index: &mut FxHashMap<Key, Id>, found: &mut Vec<(Key, &'a Formula)>) -> Id {
            let key = match f {
                Formula::Var(name) => Key::Var(name.clone()),
                Formula::Top => Key::Top,
                Formula::Bot => Key::Bot,
                Formula::And(a, b) => Key::And(visit(a, index, found), visit(b, index, found)),
                Formula::Or(a, b) => Key::Or(visit(a, index, found), visit(b, index, found)),
                Formula::Imp(a, b) => Key::Imp(visit(a, index, found), visit(b, index, found)),
            };
            *index.entry(key.clone()).or_insert_with(|| {
                found.push((key, f));
                (found.len() - 1) as Id
            })
        }
        let roots: Vec<Id> = roots.into_iter().map(|root| visit(root, &mut index, &mut found)).collect();

        // Canonical order: size, then rendered text.
        let mut text = String::new();
        let mut spans = Vec::with_capacity(found.len());
        for (_, f) in &found {
            let from = text.len();
            f.render_into(&mut text);
            spans.push((f.size(), from, text.len()));
        }
        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_unstable_by(|&x, &y| {
            let (sx, ax, bx) = spans[x];
            let (sy, ay, by) = spans[y];
            (sx, &text[ax..bx]).cmp(&(sy, &text[ay..by]))
        });
        let mut renumber = vec![0 as Id; found.len()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new as Id;
        }

        let mut table = Table {
            formulas: Vec::with_capacity(found.len()),
            names: Vec::with_capacity(found.len()),
            roots: Vec::new(),
            shapes: Vec::with_capacity(found.len()),
            has_imp: Vec::with_capacity(found.len()),
            index,
            renumber,
        };
        for &old in &order {
            let (key, _) = &found[old];
            let r = |id: &Id| table.renumber[*id as usize];
            let shape = match key {
                Key::Var(_) => Shape::Var,
                Key::Top => Shape::Top,
                Key::Bot => Shape::Bot,
                Key::And(a, b) => Shape::And(r(a), r(b)),
                Key::Or(a, b) => Shape::Or(r(a), r(b)),
                Key::Imp(a, b) => Shape::Imp(r(a), r(b)),
            };
            let has_imp = match shape {
                Shape::Imp(..) => true,
                Shape::And(a, b) | Shape::Or(a, b) => table.has_imp[a as usize] || table.has_imp[b as usize],
                _ => false,
            };
            table.formulas.push(OnceLock::new());
            table.names.push(match key {
                Key::Var(name) => Some(name.clone()),
                _ => None,
            });
            table.shapes.push(shape);
            table.has_imp.push(has_imp);
        }
        table.roots = roots.iter().map(|&old| table.renumber[old as usize]).collect();
        table
    }

    /// The id of the `i`-th formula passed to [`Table::new`].
    pub(crate) fn root(&self, i: usize) -> Id {
        self.roots[i]
    }

    pub(crate) fn id(&self, f: &Formula) -> Option<Id> {
        self.discovery_id(f).map(|old| self.renumber[old as usize])
    }

    fn discovery_id(&self, f: &Formula) -> Option<Id> {
        let key = match f {
            Formula::Var(name) => Key::Var(name.clone()),
            Formula::Top => Key::Top,
            Formula::Bot => Key::Bot,
            Formula::And(a, b) => Key::And(self.discovery_id(a)?, self.discovery_id(b)?),
            Formula::Or(a, b) => Key::Or(self.discovery_id(a)?, self.discovery_id(b)?),
            Formula::Imp(a, b) => Key::Imp(self.discovery_id(a)?, self.discovery_id(b)?),
        };
        self.index.get(&key).copied()
    }

    pub(crate) fn var_name(&self, id: Id) -> Option<&str> {
        self.names[id as usize].as_deref()
    }

    pub(crate) fn shape(&self, id: Id) -> Shape {
        self.shapes[id as usize]
    }

    pub(crate) fn formula(&self, id: Id) -> &Formula {
        self.formulas[id as usize].get_or_init(|| {
            let sub = |c: Id| Arc::new(self.formula(c).clone());
            match self.shape(id) {
                Shape::Var => Formula::Var(self.names[id as usize].clone().expect("variable name")),
                Shape::Top => Formula::Top,
                Shape::Bot => Formula::Bot,
                Shape::And(a, b) => Formula::And(sub(a), sub(b)),
                Shape::Or(a, b) => Formula::Or(sub(a), sub(b)),
                Shape::Imp(a, b) => Formula::Imp(sub(a), sub(b)),
            }
        })
    }

    pub(crate) fn contains_implication(&self, id: Id) -> bool {
        self.has_imp[id as usize]
    }

    pub(crate) fn len(&self) -> usize {
        self.formulas.len()
    }

    pub(crate) fn signed(&self, lit: Lit) -> SignedFormula {
        SignedFormula::of(lit.sign, self.formula(lit.id).clone())
    }

    pub(crate) fn lit(&self, sf: &SignedFormula) -> Option<Lit> {
        self.id(sf.formula()).map(|id| Lit::new(sf.sign(), id))
    }

    pub(crate) fn node(&self, set: &Set) -> Node {
        set.iter().map(|&l| self.signed(l)).collect()
    }

    /// Interns a public node; every formula of `node` is in the table.
    pub(crate) fn set(&self, node: &Node) -> Set {
        Set::from_unsorted(node.iter().map(|sf| self.lit(sf).expect("interned formula")))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) struct Lit {
    pub(crate) sign: Sign,
    pub(crate) id: Id,
}

impl Lit {
    pub(crate) fn new(sign: Sign, id: Id) -> Lit {
        Lit { sign, id }
    }
}

/// A duplication-free node, kept sorted in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub(crate) struct Set(SmallVec<[Lit; 12]>);

impl Set {
    pub(crate) fn from_unsorted(lits: impl IntoIterator<Item = Lit>) -> Set {
        let mut lits: SmallVec<[Lit; 12]> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Set(lits)
    }

    pub(crate) fn contains(&self, sign: Sign, id: Id) -> bool {
        self.0.binary_search(&Lit::new(sign, id)).is_ok()
    }

    pub(crate) fn iter(&self) -> std::slice::Iter<'_, Lit> {
        self.0.iter()
    }

    /// A copy without `removed`, plus `added`.
    pub(crate) fn replace(&self, removed: &[Lit], added: &[Lit]) -> Set {
        let mut lits: SmallVec<[Lit; 12]> = SmallVec::with_capacity(self.0.len() + added.len());
        lits.extend(self.0.iter().copied().filter(|l| !removed.contains(l)));
        for &l in added {
            if let Err(at) = lits.binary_search(&l) {
                lits.insert(at, l);
            }
        }
        Set(lits)
    }
}

/// A rule application on the compact representation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Inst {
    pub(crate) rule: Rule,
    pub(crate) principal: Vec<Lit>,
}

impl Inst {
    pub(crate) fn new(rule: Rule, principal: Vec<Lit>) -> Inst {
        Inst { rule, principal }
    }

    pub(crate) fn public(&self, table: &Table) -> RuleInstance {
        RuleInstance {
            rule: self.rule,
            principal: self.principal.iter().map(|&l| table.signed(l)).collect(),
        }
    }
}

/// What a calculus supplies to the shared search procedure.
pub(crate) trait Rules {
    const CALCULUS: Calculus;

    fn table(&self) -> &Table;
    fn inconsistent(&self, set: &Set) -> bool;
    /// The rule the strategy applies next and the number of `⊨` recursion
    /// steps spent choosing it.
    fn select(&self, set: &Set) -> (Option<Inst>, u64);
    fn expand(&self, set: &Set, inst: &Inst) -> Vec<Set>;
}

pub(crate) enum Tree {
    Leaf(Set),
    Step { set: Set, inst: Inst, children: Vec<Tree> },
}

enum Search {
    Closed(Tree),
    /// Worlds of a counter-model, deepest first.
    Open(Vec<Set>),
}

pub(crate) type RawObserver<'o> = &'o mut dyn FnMut(&Table, &Set, &Inst, &[Set]);

pub(crate) struct Searcher<'c, 'o, C: Rules> {
    calculus: &'c C,
    budget: usize,
    stats: SearchStats,
    observer: Option<RawObserver<'o>>,
    keep_tree: bool,
    /// Keep expanding the siblings of an open branch.
    complete: bool,
}

impl<'c, 'o, C: Rules> Searcher<'c, 'o, C> {
    pub(crate) fn new(calculus: &'c C, budget: usize, observer: Option<RawObserver<'o>>) -> Self {
        Searcher { calculus, budget, stats: SearchStats::default(), observer, keep_tree: true, complete: false }
    }

    fn run(&mut self, set: Set, depth: usize, sat_steps: u64) -> Result<Search, BudgetExceeded> {
        if depth > self.budget {
            return Err(BudgetExceeded { budget: self.budget });
        }
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.calculus.inconsistent(&set) {
            self.stats.max_branch_sat_steps = self.stats.max_branch_sat_steps.max(sat_steps);
            return Ok(Search::Closed(self.leaf(set)));
        }
        let (inst, cost) = self.calculus.select(&set);
        let sat_steps = sat_steps + cost;
        self.stats.max_branch_sat_steps = self.stats.max_branch_sat_steps.max(sat_steps);
        let Some(inst) = inst else {
            return Ok(Search::Open(vec![set]));
        };
        let conclusions = self.calculus.expand(&set, &inst);
        self.stats.expansions += 1;
        if inst.rule.advances_world() {
            self.stats.world_steps += 1;
        }
        if let Some(obs) = self.observer.as_mut() {
            obs(self.calculus.table(), &set, &inst, &conclusions);
        }
        let mut children = Vec::with_capacity(conclusions.len());
        let mut open = None;
        for child in conclusions {
            match self.run(child, depth + 1, sat_steps)? {
                Search::Closed(tree) => children.push(tree),
                Search::Open(worlds) => {
                    open.get_or_insert(worlds);
                    if !self.complete {
                        break;
                    }
                }
            }
        }
        if let Some(mut worlds) = open {
            if inst.rule.advances_world() {
                worlds.push(set);
            }
            return Ok(Search::Open(worlds));
        }
        if !self.keep_tree {
            return Ok(Search::Closed(self.leaf(set)));
        }
        Ok(Search::Closed(Tree::Step { set, inst, children }))
    }

    fn leaf(&self, set: Set) -> Tree {
        Tree::Leaf(if self.keep_tree { set } else { Set::default() })
    }

    /// Expands every branch of the deduction, open or not, and reports the
    /// statistics of the whole tree.
    pub(crate) fn explore(mut self, root: Set) -> Result<SearchStats, BudgetExceeded> {
        self.keep_tree = false;
        self.complete = true;
        self.run(root, 1, 0)?;
        Ok(self.stats)
    }

    /// Like [`Searcher::decide`] without building the proof.
    pub(crate) fn verdict(mut self, root: Set) -> Result<(Verdict, SearchStats), BudgetExceeded> {
        self.keep_tree = false;
        let verdict = match self.run(root, 1, 0)? {
            Search::Closed(_) => Verdict::Proved,
            Search::Open(mut worlds) => {
                worlds.reverse();
                Verdict::Refuted(counter_model(self.calculus.table(), &worlds).chain)
            }
        };
        Ok((verdict, self.stats))
    }

    /// Runs the strategy from `root` and converts the result.
    pub(crate) fn decide(mut self, root: Set, options: &SearchOptions) -> Result<(Outcome, SearchStats), BudgetExceeded> {
        let table = self.calculus.table();
        let outcome = match self.run(root, 1, 0)? {
            Search::Closed(tree) => Outcome::Proved(Proof {
                calculus: C::CALCULUS,
                optimized: options.optimized && C::CALCULUS == Calculus::D1,
                sixopt: options.sixopt && C::CALCULUS == Calculus::D3,
                tree: public_tree(table, &tree),
            }),
            Search::Open(mut worlds) => {
                worlds.reverse();
                Outcome::Refuted(counter_model(table, &worlds))
            }
        };
        Ok((outcome, self.stats))
    }
}

fn public_tree(table: &Table, tree: &Tree) -> ProofTree {
    match tree {
        Tree::Leaf(set) => ProofTree::leaf(table.node(set)),
        Tree::Step { set, inst, children } => ProofTree {
            node: table.node(set),
            rule: Some(inst.rule),
            principal: inst.principal.iter().map(|&l| table.signed(l)).collect(),
            children: children.iter().map(|c| public_tree(table, c)).collect(),
        },
    }
}

/// One world per snapshot; a world forces the variables signed `T` in it.
/// Runs of adjacent worlds with equal valuations are merged into their first
/// world, which changes no forcing relation.
fn counter_model(table: &Table, worlds: &[Set]) -> CounterModel {
    let mut valuations: Vec<BTreeSet<String>> = Vec::new();
    let mut kept = Vec::new();
    for set in worlds {
        let valuation: BTreeSet<String> = set
            .iter()
            .filter(|l| l.sign == Sign::T)
            .filter_map(|l| table.var_name(l.id).map(str::to_string))
            .collect();
        if valuations.last() != Some(&valuation) {
            valuations.push(valuation);
            kept.push(set);
        }
    }
    CounterModel {
        chain: KripkeChain::new(valuations).expect("snapshots keep their T atoms"),
        worlds: kept.into_iter().map(|s| table.node(s)).collect(),
    }
}

/// Default depth budget: ten times the squared size of the goal.
pub(crate) fn default_budget(goal: &Formula) -> usize {
    let size = goal.size();
    10 * size * size
}
