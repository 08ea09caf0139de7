use crate::d1::D1;
use crate::d3::D3;
use crate::engine::{default_budget, Inst, Lit, RawObserver, Rules, Searcher, Set, Table};
use crate::formula::Formula;
use crate::proof::{Decision, SearchOptions, SearchStats, Verdict};
use crate::semantics::{Calculus, Sign};
use crate::{BudgetExceeded, Node, SearchObserver};

/// A formula prepared for proof search. Interning its subformulas is a
/// noticeable part of deciding a small formula, so a `Goal` can be reused
/// across calculi and flag settings.
pub struct Goal {
    formula: Formula,
    table: Table,
}

impl Goal {
    pub fn new(formula: Formula) -> Goal {
        let table = Table::new([&formula]);
        Goal { formula, table }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    fn root(&self, sign: Sign) -> Set {
        Set::from_unsorted([Lit::new(sign, self.table.root(0))])
    }

    fn budget(&self, options: &SearchOptions) -> usize {
        options.step_budget.unwrap_or_else(|| default_budget(&self.formula))
    }

    pub fn decide(&self, calculus: Calculus, options: &SearchOptions) -> Result<Decision, BudgetExceeded> {
        self.run(calculus, options, None)
    }

    pub fn decide_observed(
        &self,
        calculus: Calculus,
        options: &SearchOptions,
        observer: &mut dyn SearchObserver,
    ) -> Result<Decision, BudgetExceeded> {
        let mut raw = |t: &Table, s: &Set, i: &Inst, cs: &[Set]| {
            let conclusions: Vec<Node> = cs.iter().map(|c| t.node(c)).collect();
            observer.expanded(&t.node(s), &i.public(t), &conclusions);
        };
        self.run(calculus, options, Some(&mut raw))
    }

    fn run(&self, calculus: Calculus, options: &SearchOptions, observer: Option<RawObserver<'_>>) -> Result<Decision, BudgetExceeded> {
        fn go<R: Rules>(rules: &R, root: Set, budget: usize, options: &SearchOptions, observer: Option<RawObserver<'_>>) -> Result<Decision, BudgetExceeded> {
            let (outcome, stats) = Searcher::new(rules, budget, observer).decide(root, options)?;
            Ok(Decision { outcome, stats })
        }
        let budget = self.budget(options);
        match calculus {
            Calculus::D1 => go(&D1::new(&self.table, options.optimized), self.root(Sign::Fl), budget, options, observer),
            Calculus::D3 => go(&D3::new(&self.table, options.sixopt), self.root(Sign::F), budget, options, observer),
        }
    }

    /// Decides without keeping the proof; refutations still carry their
    /// counter-model.
    pub fn verdict(&self, calculus: Calculus, options: &SearchOptions) -> Result<(Verdict, SearchStats), BudgetExceeded> {
        let budget = self.budget(options);
        match calculus {
            Calculus::D1 => Searcher::new(&D1::new(&self.table, options.optimized), budget, None).verdict(self.root(Sign::Fl)),
            Calculus::D3 => Searcher::new(&D3::new(&self.table, options.sixopt), budget, None).verdict(self.root(Sign::F)),
        }
    }

    /// Expands the whole deduction without stopping at the first open
    /// branch. Used to measure deduction depth on invalid goals.
    pub fn explore(&self, calculus: Calculus, options: &SearchOptions) -> Result<SearchStats, BudgetExceeded> {
        let budget = self.budget(options);
        match calculus {
            Calculus::D1 => Searcher::new(&D1::new(&self.table, options.optimized), budget, None).explore(self.root(Sign::Fl)),
            Calculus::D3 => Searcher::new(&D3::new(&self.table, options.sixopt), budget, None).explore(self.root(Sign::F)),
        }
    }
}
