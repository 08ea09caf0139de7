//! Brute-force validity check over all small chains.
//!
//! A formula with `n` variables that is refutable at all is refuted by a chain
//! of at most `n + 1` worlds, so checking every monotone chain up to that
//! length decides validity. The evaluator below works on bitmasks and shares
//! no code with the tableau calculi.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::formula::Formula;

use super::KripkeChain;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleVerdict {
    Valid,
    /// The first chain, in enumeration order, whose root does not force the formula.
    Counter(KripkeChain),
}

impl OracleVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, OracleVerdict::Valid)
    }
}

/// All monotone valuation sequences of exactly `worlds` worlds over `vars`
/// variables, as bitmasks, in lexicographic order. With `strict`, adjacent
/// worlds never repeat a valuation.
fn mask_chains(vars: usize, worlds: usize, strict: bool) -> Vec<Vec<u64>> {
    assert!(vars < 64);
    let top: u64 = (1u64 << vars) - 1;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(worlds);
    fn extend(current: &mut Vec<u64>, worlds: usize, top: u64, strict: bool, out: &mut Vec<Vec<u64>>) {
        if current.len() == worlds {
            out.push(current.clone());
            return;
        }
        let floor = current.last().copied();
        for mask in 0..=top {
            let ok = match floor {
                None => true,
                Some(f) => mask & f == f && !(strict && mask == f),
            };
            if ok {
                current.push(mask);
                extend(current, worlds, top, strict, out);
                current.pop();
            }
        }
    }
    extend(&mut current, worlds, top, strict, &mut out);
    out
}

type ChainCache = FxHashMap<(usize, usize), Rc<Vec<Vec<u64>>>>;

thread_local! {
    static STRICT_CHAINS: RefCell<ChainCache> = RefCell::default();
}

fn strict_chains(vars: usize, worlds: usize) -> Rc<Vec<Vec<u64>>> {
    STRICT_CHAINS.with(|cache| {
        Rc::clone(
            cache
                .borrow_mut()
                .entry((vars, worlds))
                .or_insert_with(|| Rc::new(mask_chains(vars, worlds, true))),
        )
    })
}

fn to_chain(vars: &[String], masks: &[u64]) -> KripkeChain {
    let worlds = masks
        .iter()
        .map(|&m| {
            vars.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect::<BTreeSet<String>>()
        })
        .collect();
    KripkeChain::new(worlds).expect("mask chains are monotone")
}

/// Every monotone chain over `vars` with 1 to `max_worlds` worlds, ordered by
/// world count and then by valuation bitmasks (bit i = i-th variable in
/// sorted order). Adjacent worlds may repeat a valuation.
pub fn enumerate_chains(
    vars: &BTreeSet<String>,
    max_worlds: usize,
) -> impl Iterator<Item = KripkeChain> {
    let vars: Vec<String> = vars.iter().cloned().collect();
    (1..=max_worlds).flat_map(move |k| {
        let vars = vars.clone();
        mask_chains(vars.len(), k, false).into_iter().map(move |m| to_chain(&vars, &m))
    })
}

// Compiled formula: post-order program over bitsets of worlds.
enum Op {
    Var(usize),
    Top,
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

fn compile(f: &Formula, vars: &[String], prog: &mut Vec<Op>) -> usize {
    let op = match f {
        Formula::Var(name) => Op::Var(vars.iter().position(|v| **v == **name).expect("known variable")),
        Formula::Top => Op::Top,
        Formula::Bot => Op::Bot,
        Formula::And(a, b) => Op::And(compile(a, vars, prog), compile(b, vars, prog)),
        Formula::Or(a, b) => Op::Or(compile(a, vars, prog), compile(b, vars, prog)),
        Formula::Imp(a, b) => Op::Imp(compile(a, vars, prog), compile(b, vars, prog)),
    };
    prog.push(op);
    prog.len() - 1
}

/// Bit `w` of the result is set iff world `w` forces the formula.
fn evaluate(prog: &[Op], masks: &[u64], scratch: &mut Vec<u64>) -> u64 {
    let worlds = masks.len();
    let all: u64 = if worlds == 64 { u64::MAX } else { (1u64 << worlds) - 1 };
    scratch.clear();
    for op in prog {
        let v = match *op {
            Op::Var(i) => masks
                .iter()
                .enumerate()
                .fold(0u64, |acc, (w, m)| acc | ((m >> i & 1) << w)),
            Op::Top => all,
            Op::Bot => 0,
            Op::And(a, b) => scratch[a] & scratch[b],
            Op::Or(a, b) => scratch[a] | scratch[b],
            Op::Imp(a, b) => {
                let failing = scratch[a] & !scratch[b] & all;
                if failing == 0 {
                    all
                } else {
                    // Only worlds strictly after the last local failure force it.
                    let last = 63 - failing.leading_zeros() as u64;
                    all & !((2u64 << last).wrapping_sub(1))
                }
            }
        };
        scratch.push(v);
    }
    *scratch.last().expect("non-empty program")
}

/// Decides validity by checking every chain with at most `n + 1` worlds,
/// `n` being the number of distinct variables of `f`. Chains repeating a
/// valuation are skipped: merging the repeats gives a shorter chain, checked
/// earlier, that forces the same formulas.
pub fn oracle_valid(f: &Formula) -> OracleVerdict {
    let vars: Vec<String> = f.vars().iter().map(|v| v.to_string()).collect();
    let mut prog = Vec::new();
    compile(f, &vars, &mut prog);
    let mut scratch = Vec::with_capacity(prog.len());
    for k in 1..=vars.len() + 1 {
        for masks in strict_chains(vars.len(), k).iter() {
            if evaluate(&prog, masks, &mut scratch) & 1 == 0 {
                return OracleVerdict::Counter(to_chain(&vars, masks));
            }
        }
    }
    OracleVerdict::Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, random_formula};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn names(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn chain_counts() {
        assert_eq!(enumerate_chains(&names(&[]), 2).count(), 2);
        assert_eq!(enumerate_chains(&names(&["p"]), 1).count(), 2);
        assert_eq!(enumerate_chains(&names(&["p"]), 2).count(), 5);
        // Each variable enters at one of k worlds or never: (k + 1)^v chains of k worlds.
        assert_eq!(enumerate_chains(&names(&["p", "q", "r"]), 3).count(), 8 + 27 + 64);
        let all: BTreeSet<_> = enumerate_chains(&names(&["p", "q"]), 3)
            .map(|c| serde_json::to_string(&c).unwrap())
            .collect();
        assert_eq!(all.len(), 4 + 9 + 16);
    }

    #[test]
    fn enumeration_order_is_by_length_then_masks() {
        let chains: Vec<_> = enumerate_chains(&names(&["p"]), 2).collect();
        let shapes: Vec<Vec<usize>> = chains.iter().map(|c| c.worlds().iter().map(|w| w.len()).collect()).collect();
        assert_eq!(shapes, vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn oracle_examples() {
        assert!(oracle_valid(&parse("(p -> q) | (q -> p)").unwrap()).is_valid());
        assert!(oracle_valid(&parse("true").unwrap()).is_valid());
        match oracle_valid(&parse("p | ~p").unwrap()) {
            OracleVerdict::Counter(c) => {
                assert_eq!(c.len(), 2);
                assert!(c.valuation(0).is_empty());
                assert_eq!(c.valuation(1), &names(&["p"]));
            }
            OracleVerdict::Valid => panic!("excluded middle is not valid"),
        }
        assert!(!oracle_valid(&parse("((p -> q) -> p) -> p").unwrap()).is_valid());
        assert!(!oracle_valid(&parse("false").unwrap()).is_valid());
    }

    #[test]
    fn skipping_repeated_valuations_keeps_the_first_counter_model() {
        for seed in 0..300 {
            let f = random_formula(3, 8, seed);
            let vars: BTreeSet<String> = f.vars().iter().map(|v| v.to_string()).collect();
            let reference = enumerate_chains(&vars, vars.len() + 1)
                .find(|c| !c.forces(0, &f))
                .map_or(OracleVerdict::Valid, OracleVerdict::Counter);
            assert_eq!(oracle_valid(&f), reference, "{f}");
        }
    }

    #[test]
    fn bitmask_evaluator_agrees_with_forcing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..300 {
            let f = random_formula(3, 8, seed);
            let vars: Vec<String> = f.vars().iter().map(|v| v.to_string()).collect();
            let mut prog = Vec::new();
            compile(&f, &vars, &mut prog);
            let k = rng.gen_range(1..=5);
            let all = mask_chains(vars.len(), k, false);
            let masks = &all[rng.gen_range(0..all.len())];
            let chain = to_chain(&vars, masks);
            let bits = evaluate(&prog, masks, &mut Vec::new());
            for (w, truth) in chain.truth_profile(&f).into_iter().enumerate() {
                assert_eq!(bits >> w & 1 == 1, truth, "{f} at world {w}");
            }
        }
    }

    #[test]
    fn counter_chains_refute() {
        for seed in 0..300 {
            let f = random_formula(3, 8, seed);
            if let OracleVerdict::Counter(c) = oracle_valid(&f) {
                assert!(!c.forces(0, &f));
                assert!(c.len() <= f.vars().len() + 1);
            }
        }
    }
}
