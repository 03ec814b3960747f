//! Random elements, operators and patterns drawn from a caller-supplied RNG.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::algebra::{AlgebraSpec, Element, Family, Monomial};
use crate::linalg::{FiniteRankOperator, OperatorExpr};
use crate::pattern::{Cmp, PatternSubspace, Predicate};
use crate::scalar::Scalar;

fn random_scalar<R: Rng>(alg: &AlgebraSpec, rng: &mut R) -> Scalar {
    let field = alg.field();
    loop {
        let num = rng.random_range(-4i64..=4);
        if num == 0 {
            continue;
        }
        let den = rng.random_range(1i64..=3);
        let q = num_rational::BigRational::new(num.into(), den.into());
        match field.from_rational(&q) {
            Ok(c) if !c.is_zero() => return c,
            _ => continue,
        }
    }
}

/// A nonzero element with up to `max_terms` terms of degree `<= max_degree`.
pub fn random_element<R: Rng>(alg: &AlgebraSpec, rng: &mut R, max_degree: u64, max_terms: usize) -> Element {
    let basis = alg.enumerate_basis(max_degree);
    loop {
        let terms = rng.random_range(1..=max_terms.max(1));
        let mut e = Element::zero();
        for _ in 0..terms {
            let m = basis.choose(rng).expect("nonempty basis").clone();
            e.add_term(m, random_scalar(alg, rng));
        }
        if !e.is_zero() {
            return e;
        }
    }
}

pub fn random_monomial<R: Rng>(alg: &AlgebraSpec, rng: &mut R, max_degree: u64) -> Monomial {
    alg.enumerate_basis(max_degree).choose(rng).expect("nonempty basis").clone()
}

pub fn random_finite_rank<R: Rng>(
    alg: &AlgebraSpec,
    rng: &mut R,
    max_degree: u64,
    max_columns: usize,
) -> FiniteRankOperator {
    let cols = rng.random_range(1..=max_columns.max(1));
    let columns: Vec<(Monomial, Element)> = (0..cols)
        .map(|_| (random_monomial(alg, rng, max_degree), random_element(alg, rng, max_degree, 3)))
        .collect();
    FiniteRankOperator::from_columns(alg.field(), columns)
}

/// A pattern drawn from shapes that make sense for the family.
pub fn random_pattern<R: Rng>(alg: &AlgebraSpec, rng: &mut R) -> PatternSubspace {
    let mut shapes = vec![
        Predicate::DegreeAtLeast(rng.random_range(0..4)),
        Predicate::DegreeMod { modulus: 2, residue: rng.random_range(0..2) },
        Predicate::explicit((0..rng.random_range(1..4)).map(|_| random_monomial(alg, rng, 3))),
    ];
    match alg.family() {
        Family::Laurent { rank } => {
            let coord = rng.random_range(0..*rank);
            let cmp = *[Cmp::Ge, Cmp::Lt, Cmp::Le].choose(rng).expect("nonempty");
            shapes.push(Predicate::Exponent { coord, cmp, bound: rng.random_range(-2..=2) });
        }
        Family::DirectSumPolynomial { components } => {
            shapes.push(Predicate::Component(rng.random_range(0..*components as u32)));
        }
        Family::MonomialQuotient { generators, .. } => {
            let g = rng.random_range(0..generators.len() as u16);
            shapes.push(Predicate::WordPrefix(vec![g]));
            shapes.push(Predicate::ContainsGenerator(g));
        }
        Family::Polynomial { .. } => {}
    }
    let first = shapes.choose(rng).expect("nonempty").clone();
    let pred = match rng.random_range(0..4) {
        0 => first.not(),
        1 => first.or(shapes.choose(rng).expect("nonempty").clone()),
        2 => first.and(shapes.choose(rng).expect("nonempty").clone()),
        _ => first,
    };
    PatternSubspace::new(alg, pred).expect("shapes are valid for the family")
}

/// An operator tree of the given depth; leaves are column-finite primitives.
pub fn random_operator<R: Rng>(alg: &AlgebraSpec, rng: &mut R, depth: u32) -> OperatorExpr {
    let univariate = *alg.family() == Family::Polynomial { vars: 1 };
    let choice = if depth == 0 { rng.random_range(0..6) } else { rng.random_range(0..9) };
    match choice {
        0 => OperatorExpr::RightMult(random_element(alg, rng, 2, 3)),
        1 => OperatorExpr::LeftMult(random_element(alg, rng, 2, 3)),
        2 => OperatorExpr::Sign(random_pattern(alg, rng)),
        3 => OperatorExpr::Projection(random_pattern(alg, rng)),
        4 => OperatorExpr::Explicit(random_finite_rank(alg, rng, 3, 4)),
        5 if univariate => OperatorExpr::PolyQuotient(random_element(alg, rng, 2, 3)),
        5 => OperatorExpr::Identity,
        6 => OperatorExpr::Sum(vec![random_operator(alg, rng, depth - 1), random_operator(alg, rng, depth - 1)]),
        7 => OperatorExpr::Scaled(random_scalar(alg, rng), Box::new(random_operator(alg, rng, depth - 1))),
        _ => OperatorExpr::compose(random_operator(alg, rng, depth - 1), random_operator(alg, rng, depth - 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;
    use rand::SeedableRng;

    #[test]
    fn samples_are_valid_and_seeded() {
        let a = AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], FieldSpec::prime(7).unwrap()).unwrap();
        let mut r1 = rand::rngs::StdRng::seed_from_u64(9);
        let mut r2 = rand::rngs::StdRng::seed_from_u64(9);
        for _ in 0..20 {
            let e = random_element(&a, &mut r1, 3, 4);
            assert!(e.support().all(|m| a.validate_monomial(m).is_ok()));
            assert_eq!(e, random_element(&a, &mut r2, 3, 4));
            random_pattern(&a, &mut r1);
            random_pattern(&a, &mut r2);
        }
    }
}
