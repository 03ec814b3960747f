use ends_core::sample::random_monomial;
use ends_core::{AlgebraSpec, Element, FieldSpec, Monomial};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rationals;

fn families(field: FieldSpec) -> Vec<AlgebraSpec> {
    vec![
        AlgebraSpec::polynomial(1, field).unwrap(),
        AlgebraSpec::polynomial(2, field).unwrap(),
        AlgebraSpec::laurent(1, field).unwrap(),
        AlgebraSpec::laurent(2, field).unwrap(),
        AlgebraSpec::direct_sum(3, field).unwrap(),
        AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], field).unwrap(),
        AlgebraSpec::monomial_quotient(&["x", "y"], &[], &[&["y", "x", "y"]], field).unwrap(),
    ]
}

fn mono(a: &AlgebraSpec, m: &Monomial) -> Element {
    Element::monomial(m.clone(), a.field().one())
}

#[test]
fn associativity_on_random_monomials() {
    for (i, a) in families(Q).iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..1000 {
            let [x, y, z] = [0; 3].map(|_| random_monomial(a, &mut rng, 4));
            let left = a.multiply(&a.multiply(&mono(a, &x), &mono(a, &y)).unwrap(), &mono(a, &z)).unwrap();
            let right = a.multiply(&mono(a, &x), &a.multiply(&mono(a, &y), &mono(a, &z)).unwrap()).unwrap();
            assert_eq!(left, right, "{a:?}: {x:?} {y:?} {z:?}");
        }
    }
}

#[test]
fn unit_law_up_to_degree_ten() {
    for a in families(Q) {
        let one = a.one();
        for m in a.enumerate_basis(10) {
            let e = mono(&a, &m);
            assert_eq!(a.multiply(&one, &e).unwrap(), e);
            assert_eq!(a.multiply(&e, &one).unwrap(), e);
        }
    }
}

#[test]
fn filtration_is_respected() {
    for a in families(Q) {
        let s1 = a.enumerate_basis(1);
        for n in 0..6 {
            for m in a.enumerate_basis(n) {
                for g in &s1 {
                    if let Some((_, p)) = a.multiply_basis(&m, g).unwrap() {
                        assert!(p.degree() <= n + 1);
                        assert!(p.degree() <= m.degree() + g.degree());
                    }
                }
            }
        }
    }
}

#[test]
fn enumeration_extends_by_degree_blocks() {
    for a in families(Q) {
        for n in 0..8 {
            let small = a.enumerate_basis(n);
            let big = a.enumerate_basis(n + 1);
            assert_eq!(&big[..small.len()], &small[..]);
            assert!(big[small.len()..].iter().all(|m| m.degree() == n + 1));
            assert!(big.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

fn laurent_element(rank: usize) -> impl Strategy<Value = Vec<(Vec<i64>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, rank), -9i64..=9, 1i64..=6), 1..5)
}

fn build(a: &AlgebraSpec, terms: &[(Vec<i64>, i64, i64)]) -> Element {
    let mut e = Element::zero();
    for (v, num, den) in terms {
        let q = num_rational::BigRational::new((*num).into(), (*den).into());
        e.add_term(Monomial::Lattice(v.clone()), a.field().from_rational(&q).unwrap());
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_mod_p_is_a_homomorphism(x in laurent_element(2), y in laurent_element(2)) {
        let q = AlgebraSpec::laurent(2, Q).unwrap();
        let f7 = AlgebraSpec::laurent(2, FieldSpec::prime(7).unwrap()).unwrap();
        let (a, b) = (build(&q, &x), build(&q, &y));
        let prod = q.multiply(&a, &b).unwrap().reduce_mod(7).unwrap();
        let prod7 = f7.multiply(&a.reduce_mod(7).unwrap(), &b.reduce_mod(7).unwrap()).unwrap();
        prop_assert_eq!(prod, prod7);
    }

    #[test]
    fn parse_format_round_trip(x in laurent_element(2)) {
        let q = AlgebraSpec::laurent(2, Q).unwrap();
        let e = build(&q, &x);
        prop_assert_eq!(q.parse_element(&q.format_element(&e)).unwrap(), e);
    }

    #[test]
    fn words_multiply_by_concatenation(u in prop::collection::vec(0u16..2, 0..5), v in prop::collection::vec(0u16..2, 0..5)) {
        let a = AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], Q).unwrap();
        let ys = u.iter().chain(&v).filter(|&&g| g == 1).count();
        prop_assume!(u.iter().filter(|&&g| g == 1).count() <= 1 && v.iter().filter(|&&g| g == 1).count() <= 1);
        let p = a.multiply_basis(&Monomial::Word(u.clone()), &Monomial::Word(v.clone())).unwrap();
        if ys <= 1 {
            let w: Vec<u16> = u.iter().chain(&v).copied().collect();
            prop_assert_eq!(p, Some((Q.one(), Monomial::Word(w))));
        } else {
            prop_assert_eq!(p, None);
        }
    }
}
