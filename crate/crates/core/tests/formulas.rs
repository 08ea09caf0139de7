use dummett::formula::{enumerate_formulas, random_formula};
use dummett::{parse, Formula};
use proptest::prelude::*;

fn formula() -> impl Strategy<Value = Formula> {
    (1usize..=4, 0usize..=12, any::<u64>()).prop_map(|(v, m, s)| random_formula(v, m, s))
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(f in formula()) {
        prop_assert_eq!(parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn subformulas_are_bounded_by_size(f in formula()) {
        let subs = f.subformulas();
        prop_assert!(subs.len() <= f.size());
        prop_assert!(subs.contains(&f));
    }

    #[test]
    fn random_formula_is_pure(v in 1usize..=4, m in 0usize..=12, s in any::<u64>()) {
        prop_assert_eq!(random_formula(v, m, s), random_formula(v, m, s));
    }

    #[test]
    fn random_formula_respects_bounds(v in 1usize..=4, m in 0usize..=12, s in any::<u64>()) {
        let f = random_formula(v, m, s);
        prop_assert!(f.connective_count() <= m);
        prop_assert!(f.vars().len() <= v);
    }
}

#[test]
fn enumeration_counts() {
    // One leaf: Catalan(k) * 3^k formulas with k connectives.
    let p = [Formula::var("p")];
    assert_eq!(enumerate_formulas(&p, 0).count(), 1);
    assert_eq!(enumerate_formulas(&p, 1).count(), 1 + 3);
    assert_eq!(enumerate_formulas(&p, 2).count(), 1 + 3 + 2 * 9);
    let pq = [Formula::var("p"), Formula::var("q")];
    assert_eq!(enumerate_formulas(&pq, 1).count(), 2 + 3 * 4);
}

#[test]
fn enumeration_has_no_duplicates() {
    let leaves = [Formula::var("p"), Formula::Bot];
    let all: Vec<Formula> = enumerate_formulas(&leaves, 3).collect();
    let unique: std::collections::BTreeSet<&Formula> = all.iter().collect();
    assert_eq!(unique.len(), all.len());
}
