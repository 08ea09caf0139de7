//! Formula generators for fuzzing and exhaustive cross-checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Formula;

const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

/// Name of the `index`-th variable of a pool: `p`, `q`, `r`, `s`, `t`, `u`,
/// then `p6`, `p7`, ...
pub fn var_name(index: usize) -> String {
    NAMES
        .get(index)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("p{index}"))
}

/// A pseudo-random formula over the first `var_pool` variables with at most
/// `max_connectives` connectives. The result depends only on the arguments.
pub fn random_formula(var_pool: usize, max_connectives: usize, seed: u64) -> Formula {
    assert!(var_pool >= 1, "variable pool must be non-empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let connectives = rng.gen_range(0..=max_connectives);
    grow(&mut rng, var_pool, connectives)
}

fn grow(rng: &mut ChaCha8Rng, var_pool: usize, connectives: usize) -> Formula {
    if connectives == 0 {
        return match rng.gen_range(0..16) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::var(var_name(rng.gen_range(0..var_pool))),
        };
    }
    let left_size = rng.gen_range(0..connectives);
    let kind = rng.gen_range(0..3);
    let left = grow(rng, var_pool, left_size);
    let right = grow(rng, var_pool, connectives - 1 - left_size);
    match kind {
        0 => Formula::and(left, right),
        1 => Formula::or(left, right),
        _ => Formula::imp(left, right),
    }
}

/// Every formula built from `leaves` with at most `max_connectives`
/// connectives, ordered by connective count. All but the largest layer are
/// kept in memory; the largest is produced lazily.
pub fn enumerate_formulas(
    leaves: &[Formula],
    max_connectives: usize,
) -> impl Iterator<Item = Formula> {
    let mut layers: Vec<Vec<Arc<Formula>>> = vec![leaves.iter().cloned().map(Arc::new).collect()];
    for k in 1..max_connectives {
        let layer: Vec<Arc<Formula>> = layer_iter(&layers, k).map(Arc::new).collect();
        layers.push(layer);
    }
    let layers = Arc::new(layers);
    (0..=max_connectives).flat_map(move |k| -> Box<dyn Iterator<Item = Formula>> {
        if k == 0 {
            Box::new(layers[0].iter().map(|f| (**f).clone()).collect::<Vec<_>>().into_iter())
        } else {
            let layers = Arc::clone(&layers);
            Box::new(owned_layer_iter(layers, k))
        }
    })
}

type Make = fn(Arc<Formula>, Arc<Formula>) -> Formula;
const MAKERS: [Make; 3] = [Formula::And, Formula::Or, Formula::Imp];

fn layer_iter(layers: &[Vec<Arc<Formula>>], k: usize) -> impl Iterator<Item = Formula> + '_ {
    (0..k).flat_map(move |left| {
        let right = k - 1 - left;
        MAKERS.iter().flat_map(move |make| {
            layers[left].iter().flat_map(move |a| {
                layers[right].iter().map(move |b| make(a.clone(), b.clone()))
            })
        })
    })
}

fn owned_layer_iter(layers: Arc<Vec<Vec<Arc<Formula>>>>, k: usize) -> impl Iterator<Item = Formula> {
    (0..k).flat_map(move |left| {
        let right = k - 1 - left;
        let layers = Arc::clone(&layers);
        MAKERS.iter().flat_map(move |make| {
            let layers = Arc::clone(&layers);
            (0..layers[left].len()).flat_map(move |i| {
                let layers = Arc::clone(&layers);
                let a = layers[left][i].clone();
                (0..layers[right].len()).map(move |j| make(a.clone(), layers[right][j].clone()))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_connectives_gives_a_leaf() {
        for seed in 0..50 {
            assert!(random_formula(1, 0, seed).is_atomic());
        }
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_formula(2, 5, 7), random_formula(2, 5, 7));
    }

    #[test]
    fn respects_bounds() {
        for seed in 0..500 {
            let f = random_formula(3, 6, seed);
            assert!(f.connective_count() <= 6);
            assert!(f.vars().iter().all(|v| ["p", "q", "r"].contains(&&**v)));
        }
    }

    #[test]
    fn every_connective_kind_occurs() {
        let (mut and, mut or, mut imp, mut top, mut bot) = (0, 0, 0, 0, 0);
        for seed in 0..10_000 {
            for sub in random_formula(3, 6, seed).subformulas() {
                match sub {
                    Formula::And(..) => and += 1,
                    Formula::Or(..) => or += 1,
                    Formula::Imp(..) => imp += 1,
                    Formula::Top => top += 1,
                    Formula::Bot => bot += 1,
                    Formula::Var(_) => {}
                }
            }
        }
        assert!(and > 0 && or > 0 && imp > 0 && top > 0 && bot > 0);
    }

    #[test]
    fn enumeration_counts() {
        let leaves = [Formula::var("p"), Formula::var("q")];
        // Catalan(k) * 3^k * 2^(k+1) formulas with exactly k connectives.
        let counts: Vec<usize> = (0..=3)
            .map(|k| enumerate_formulas(&leaves, 3).filter(|f| f.connective_count() == k).count())
            .collect();
        assert_eq!(counts, vec![2, 12, 144, 2160]);
        let all: std::collections::BTreeSet<_> = enumerate_formulas(&leaves, 3).collect();
        assert_eq!(all.len(), 2 + 12 + 144 + 2160);
    }

    #[test]
    fn variable_names() {
        assert_eq!(var_name(0), "p");
        assert_eq!(var_name(5), "u");
        assert_eq!(var_name(6), "p6");
    }
}
