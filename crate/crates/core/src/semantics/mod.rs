//! Linearly ordered Kripke models, forcing and realizability.

mod oracle;
mod sign;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;

pub use oracle::{enumerate_chains, oracle_valid, OracleVerdict};
pub use sign::{Calculus, Sign, SignError, SignedFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a Kripke chain needs at least one world")]
    Empty,
    #[error("valuation of world {world} drops variables forced at world {}", world - 1)]
    NotMonotone { world: usize },
}

/// A finite linearly ordered Kripke model. World 0 is the root; every world
/// sees itself and all worlds with a larger index.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "ChainRepr", into = "ChainRepr")]
pub struct KripkeChain {
    worlds: Vec<BTreeSet<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainRepr {
    worlds: Vec<WorldRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldRepr {
    vars: Vec<String>,
}

impl TryFrom<ChainRepr> for KripkeChain {
    type Error = ModelError;

    fn try_from(repr: ChainRepr) -> Result<Self, Self::Error> {
        KripkeChain::new(repr.worlds.into_iter().map(|w| w.vars.into_iter().collect()).collect())
    }
}

impl From<KripkeChain> for ChainRepr {
    fn from(chain: KripkeChain) -> Self {
        ChainRepr {
            worlds: chain
                .worlds
                .into_iter()
                .map(|vars| WorldRepr { vars: vars.into_iter().collect() })
                .collect(),
        }
    }
}

impl KripkeChain {
    /// Checks that the chain is non-empty and that forced atoms persist.
    pub fn new(worlds: Vec<BTreeSet<String>>) -> Result<Self, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::Empty);
        }
        for (i, pair) in worlds.windows(2).enumerate() {
            if !pair[0].is_subset(&pair[1]) {
                return Err(ModelError::NotMonotone { world: i + 1 });
            }
        }
        Ok(KripkeChain { worlds })
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn valuation(&self, world: usize) -> &BTreeSet<String> {
        &self.worlds[world]
    }

    pub fn worlds(&self) -> &[BTreeSet<String>] {
        &self.worlds
    }

    /// Truth of `f` at every world, root first.
    pub fn truth_profile(&self, f: &Formula) -> Vec<bool> {
        let n = self.worlds.len();
        match f {
            Formula::Var(name) => self.worlds.iter().map(|w| w.contains(&**name)).collect(),
            Formula::Top => vec![true; n],
            Formula::Bot => vec![false; n],
            Formula::And(a, b) => zip_with(self.truth_profile(a), self.truth_profile(b), |x, y| x && y),
            Formula::Or(a, b) => zip_with(self.truth_profile(a), self.truth_profile(b), |x, y| x || y),
            Formula::Imp(a, b) => {
                let local = zip_with(self.truth_profile(a), self.truth_profile(b), |x, y| !x || y);
                // A world forces A -> B iff every world from it onwards does locally.
                let mut out = vec![false; n];
                let mut suffix = true;
                for i in (0..n).rev() {
                    suffix &= local[i];
                    out[i] = suffix;
                }
                out
            }
        }
    }

    /// Forcing of `f` at `world`.
    pub fn forces(&self, world: usize, f: &Formula) -> bool {
        assert!(world < self.len(), "world {world} out of range");
        self.truth_profile(f)[world]
    }

    /// Realizability of a signed formula at `world`. `Tbar` is read as `T`.
    pub fn realizes(&self, world: usize, sf: &SignedFormula) -> bool {
        assert!(world < self.len(), "world {world} out of range");
        let profile = self.truth_profile(sf.formula());
        let later = &profile[world + 1..];
        let antecedent = || match sf.formula() {
            Formula::Imp(a, _) => self.truth_profile(a),
            _ => unreachable!("implication-only sign on {}", sf.formula()),
        };
        match sf.sign() {
            Sign::T | Sign::Tbar => profile[world],
            Sign::F => !profile[world],
            Sign::Fn => later.iter().any(|&x| !x),
            Sign::Tn => later.iter().all(|&x| x),
            Sign::Fl => !profile[world] && later.iter().all(|&x| x),
            Sign::Ttil => profile[world] && antecedent()[world + 1..].iter().any(|&x| !x),
            Sign::That => profile[world] && !antecedent()[world],
        }
    }

    /// Realizability of every member of a node.
    pub fn realizes_all<'a>(
        &self,
        world: usize,
        node: impl IntoIterator<Item = &'a SignedFormula>,
    ) -> bool {
        node.into_iter().all(|sf| self.realizes(world, sf))
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}
