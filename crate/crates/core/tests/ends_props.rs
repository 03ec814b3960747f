use ends_core::ends::{
    defect, defect_sequence, is_sparse, sparse_consistency, verify_decomposition, Verdict,
};
use ends_core::growth::{end_upper_bound, growth_function};
use ends_core::sample::random_pattern;
use ends_core::{AlgebraSpec, Element, EndsError, FieldSpec, PatternSubspace, Predicate, TruncatedSubspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rationals;

fn families() -> Vec<AlgebraSpec> {
    vec![
        AlgebraSpec::polynomial(1, Q).unwrap(),
        AlgebraSpec::polynomial(2, Q).unwrap(),
        AlgebraSpec::laurent(1, Q).unwrap(),
        AlgebraSpec::laurent(2, Q).unwrap(),
        AlgebraSpec::direct_sum(3, Q).unwrap(),
        AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], Q).unwrap(),
    ]
}

#[test]
fn growth_is_submultiplicative_in_one_step() {
    for a in families() {
        let p = growth_function(&a, 30);
        for n in 1..30u64 {
            assert!(p.f_at(n + 1).unwrap() <= p.f_at(n).unwrap() * p.f_at(1).unwrap());
        }
        assert!(p.f.windows(2).all(|w| w[0] <= w[1]));
        // Bounded gaps and a linear constant come together.
        let bounded = p.gaps.iter().max() <= p.gaps[..p.gaps.len() / 2].iter().max();
        assert_eq!(bounded, p.linear_constant.is_some());
        if let Some(c) = p.linear_constant {
            assert!(p.f.iter().enumerate().all(|(i, &f)| f <= c * (i as u64 + 1)));
        }
    }
}

fn component_split(a: &AlgebraSpec, k: usize) -> Vec<PatternSubspace> {
    (1..=k).map(|i| PatternSubspace::parse(a, &format!("comp({i})")).unwrap()).collect()
}

#[test]
fn certified_end_counts_respect_the_growth_bound() {
    let laurent = AlgebraSpec::laurent(1, Q).unwrap();
    let split = vec![
        PatternSubspace::parse(&laurent, "exp(0) >= 0").unwrap(),
        PatternSubspace::parse(&laurent, "exp(0) < 0").unwrap(),
    ];
    let mut cases = vec![(laurent, split)];
    for k in [2, 3, 5] {
        let s = AlgebraSpec::direct_sum(k, Q).unwrap();
        let parts = component_split(&s, k);
        cases.push((s, parts));
    }
    for (a, parts) in cases {
        let cert = verify_decomposition(&a, &parts, 30, 5).unwrap();
        let c = end_upper_bound(&growth_function(&a, 30)).unwrap();
        assert!(cert.k as u64 <= c);
    }
}

#[test]
fn direct_sum_additivity() {
    // One end per polynomial component; splitting each component further fails.
    for k in 1..=4 {
        let s = AlgebraSpec::direct_sum(k, Q).unwrap();
        assert_eq!(verify_decomposition(&s, &component_split(&s, k), 30, 5).unwrap().k, k);
    }
    let s = AlgebraSpec::direct_sum(2, Q).unwrap();
    let finer = ["comp(1) and deg % 2 == 0", "comp(1) and deg % 2 == 1", "comp(2)"]
        .map(|p| PatternSubspace::parse(&s, p).unwrap());
    assert!(verify_decomposition(&s, &finer, 30, 5).is_err());
}

#[test]
fn certified_patterns_of_kx_are_cofinite() {
    let a = AlgebraSpec::polynomial(1, Q).unwrap();
    let x = a.parse_element("x").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 30;
    for _ in 0..200 {
        let v = random_pattern(&a, &mut rng);
        let c = defect(&a, &v, &x, n, 5).unwrap();
        let dims = v.dimensions(&a, n);
        let infinite = dims[(n - 5) as usize..].windows(2).all(|d| d[0] < d[1]);
        if c.verdict == Verdict::Certified && infinite {
            let co: Vec<u64> = (n - 5..=n).map(|k| (k + 1) - dims[k as usize]).collect();
            assert!(co.windows(2).all(|w| w[0] == w[1]), "{}: {co:?}", v.render(&a));
        }
    }
}

#[test]
fn sparse_consistency_on_random_patterns() {
    for (i, a) in families().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(50 + i as u64);
        for _ in 0..25 {
            let v = random_pattern(a, &mut rng);
            let r = sparse_consistency(a, &v, 16, 4).unwrap();
            assert!(r.consistent, "{}: {r:?}", v.render(a));
        }
    }
}

#[test]
fn sparse_degrees_of_finite_patterns() {
    let a = AlgebraSpec::polynomial(1, Q).unwrap();
    let v = PatternSubspace::new(&a, Predicate::DegreeAtMost(3)).unwrap();
    assert_eq!(is_sparse(&a, &v, 10).degrees, (3..10).collect::<Vec<u64>>());
}

#[test]
fn overlapping_parts_are_rejected() {
    let a = AlgebraSpec::laurent(1, Q).unwrap();
    let parts = ["exp(0) >= 0", "exp(0) <= 0"].map(|p| PatternSubspace::parse(&a, p).unwrap());
    assert!(matches!(verify_decomposition(&a, &parts, 10, 3), Err(EndsError::PartitionFailure { .. })));
    let parts = ["exp(0) > 0", "exp(0) < 0"].map(|p| PatternSubspace::parse(&a, p).unwrap());
    assert!(matches!(
        verify_decomposition(&a, &parts, 10, 3),
        Err(EndsError::PartitionFailure { claimed_by, .. }) if claimed_by.is_empty()
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn incremental_defect_matches_direct_quotient(seed in any::<u64>(), family in 0usize..6) {
        let a = &families()[family];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_pattern(a, &mut rng);
        let g = Element::monomial(a.generators()[0].clone(), Q.one());
        let d = g.max_degree().unwrap();
        let seq = defect_sequence(a, &v, &g, 5).unwrap();
        for n in 0..=5u64 {
            let prods: Vec<Element> = v.truncate(a, n).basis().map(|b| a.multiply(b, &g).unwrap()).collect();
            let img = TruncatedSubspace::span(&prods, n + d).unwrap();
            prop_assert_eq!(seq[n as usize], img.quotient_dim(&v.truncate(a, n + d)).unwrap() as u64);
        }
    }

    #[test]
    fn complement_pair_always_partitions(seed in any::<u64>(), family in 0usize..6) {
        let a = &families()[family];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_pattern(a, &mut rng);
        let r = verify_decomposition(a, &[v.clone(), v.complement()], 12, 3);
        prop_assert!(!matches!(r, Err(EndsError::PartitionFailure { .. })), "complement overlaps");
    }
}
