use ends_core::linalg::{extract_finite_rank, trace_on_subspace};
use ends_core::sample::{random_element, random_finite_rank};
use ends_core::suite::trace_symmetry;
use ends_core::{AlgebraSpec, Element, FieldSpec, FiniteRankOperator, Monomial, OperatorExpr, TruncatedSubspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebras(field: FieldSpec) -> Vec<AlgebraSpec> {
    vec![
        AlgebraSpec::polynomial(1, field).unwrap(),
        AlgebraSpec::laurent(1, field).unwrap(),
        AlgebraSpec::laurent(2, field).unwrap(),
        AlgebraSpec::direct_sum(2, field).unwrap(),
        AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], field).unwrap(),
    ]
}

#[test]
fn trace_symmetry_over_rationals_and_f7() {
    for field in [FieldSpec::Rationals, FieldSpec::prime(7).unwrap()] {
        for (i, a) in algebras(field).iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let out = trace_symmetry(a, &mut rng, 200).unwrap();
            assert!(out.passed(), "{out:?}");
        }
    }
}

fn kx_vectors(n: u64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, n as usize + 1), 0..6)
}

fn to_elements(a: &AlgebraSpec, rows: &[Vec<i64>]) -> Vec<Element> {
    rows.iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (Monomial::Lattice(vec![i as i64]), a.field().from_i64(c)))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn echelon_is_idempotent(rows in kx_vectors(6)) {
        let a = AlgebraSpec::polynomial(1, FieldSpec::Rationals).unwrap();
        let v = TruncatedSubspace::span(&to_elements(&a, &rows), 6).unwrap();
        prop_assert!(v.is_reduced());
        let basis: Vec<Element> = v.basis().cloned().collect();
        prop_assert_eq!(TruncatedSubspace::span(&basis, 6).unwrap(), v.clone());
        for e in to_elements(&a, &rows) {
            prop_assert!(v.contains(&e));
        }
    }

    #[test]
    fn modular_law(n in 0u64..=8, u in kx_vectors(8), w in kx_vectors(8), p in prop_oneof![Just(0u64), Just(3), Just(7)]) {
        let field = if p == 0 { FieldSpec::Rationals } else { FieldSpec::prime(p).unwrap() };
        let a = AlgebraSpec::polynomial(1, field).unwrap();
        let cut = |rows: &[Vec<i64>]| -> Vec<Vec<i64>> { rows.iter().map(|r| r[..=n as usize].to_vec()).collect() };
        let u = TruncatedSubspace::span(&to_elements(&a, &cut(&u)), n).unwrap();
        let w = TruncatedSubspace::span(&to_elements(&a, &cut(&w)), n).unwrap();
        let sum = u.sum(&w).unwrap();
        let int = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + int.dim(), u.dim() + w.dim());
        prop_assert_eq!(u.quotient_dim(&w).unwrap(), sum.dim() - w.dim());
        for row in int.basis() {
            prop_assert!(u.contains(row) && w.contains(row));
        }
    }

    #[test]
    fn trace_is_linear_and_range_consistent(seed in any::<u64>()) {
        let a = AlgebraSpec::laurent(2, FieldSpec::Rationals).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t1 = random_finite_rank(&a, &mut rng, 3, 5);
        let t2 = random_finite_rank(&a, &mut rng, 3, 5);
        let c = random_element(&a, &mut rng, 0, 1).iter().next().unwrap().1.clone();
        let combo = t1.scaled(&c).add(&t2);
        prop_assert_eq!(combo.trace(), &(&c * &t1.trace()) + &t2.trace());
        prop_assert_eq!(t1.trace_via_range(&a).unwrap(), t1.trace());
        // Adding explicit zero columns does not change the trace.
        let padded = FiniteRankOperator::from_columns(
            a.field(),
            t1.columns().map(|(m, e)| (m.clone(), e.clone())).chain(a.enumerate_basis(2).into_iter().map(|m| (m, Element::zero()))),
        );
        prop_assert_eq!(padded.trace(), t1.trace());
        prop_assert!(t1.rank() <= t1.support().count());
    }

    #[test]
    fn trace_on_enlarged_invariant_subspace(seed in any::<u64>()) {
        // The trace is independent of the invariant subspace chosen to contain the range.
        let a = AlgebraSpec::polynomial(1, FieldSpec::Rationals).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_finite_rank(&a, &mut rng, 3, 4);
        let big = TruncatedSubspace::from_monomials(a.field(), 3, a.enumerate_basis(3));
        prop_assert_eq!(trace_on_subspace(&a, &OperatorExpr::Explicit(t.clone()), &big).unwrap(), t.trace());
    }

    #[test]
    fn extraction_recovers_explicit_operators(seed in any::<u64>()) {
        let a = AlgebraSpec::direct_sum(2, FieldSpec::Rationals).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_finite_rank(&a, &mut rng, 3, 4);
        let (found, window) = extract_finite_rank(&a, &OperatorExpr::Explicit(t.clone()), 5, 40).unwrap();
        prop_assert_eq!(found, t);
        prop_assert!(window.n_stop <= 3 + 5);
    }
}
