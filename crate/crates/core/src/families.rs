//! Parametrised formula families for depth benchmarks.

use std::fmt;
use std::str::FromStr;

use crate::formula::{random_formula, Formula};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    NestedImp,
    ChainDisj,
    Random,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::NestedImp, Family::ChainDisj, Family::Random];

    pub fn token(self) -> &'static str {
        match self {
            Family::NestedImp => "nested-imp",
            Family::ChainDisj => "chain-disj",
            Family::Random => "random",
        }
    }

    /// The member of size `n`, for `n >= 1`. `seed` only matters for `Random`.
    pub fn member(self, n: usize, seed: u64) -> Formula {
        match self {
            Family::NestedImp => nested_imp(n),
            Family::ChainDisj => chain_disj(n),
            Family::Random => random_formula(3, n, seed ^ n as u64),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.token() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

fn p(i: usize) -> Formula {
    Formula::var(format!("p{i}"))
}

/// `((p1 -> p2) -> p3) -> ... -> p(n+1)`, with `n` implications.
pub fn nested_imp(n: usize) -> Formula {
    assert!(n >= 1);
    (2..=n + 1).fold(p(1), |acc, i| Formula::imp(acc, p(i)))
}

/// The disjunction of `pi -> pj` over all distinct `i, j` in `1..=n+1`.
pub fn chain_disj(n: usize) -> Formula {
    assert!(n >= 1);
    let mut disjuncts = Vec::new();
    for i in 1..=n + 1 {
        for j in 1..=n + 1 {
            if i != j {
                disjuncts.push(Formula::imp(p(i), p(j)));
            }
        }
    }
    let last = disjuncts.pop().expect("n >= 1");
    disjuncts.into_iter().rev().fold(last, |acc, d| Formula::or(d, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::oracle_valid;

    #[test]
    fn base_cases() {
        assert_eq!(nested_imp(1), parse("p1 -> p2").unwrap());
        assert_eq!(nested_imp(2), parse("(p1 -> p2) -> p3").unwrap());
        assert_eq!(chain_disj(1), parse("(p1 -> p2) | (p2 -> p1)").unwrap());
    }

    #[test]
    fn chain_disj_is_valid() {
        for n in 1..=3 {
            assert!(oracle_valid(&chain_disj(n)).is_valid(), "n = {n}");
        }
    }

    #[test]
    fn tokens_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.token().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }
}
