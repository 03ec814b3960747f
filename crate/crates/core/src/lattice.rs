//! Diagnostics for group algebras of `ℤⁿ`: lexicographic leading terms,
//! hypercube counts, densities of pattern subspaces and intersections.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Family, Monomial};
use crate::error::LatticeError;
use crate::pattern::PatternSubspace;

fn lattice_rank(alg: &AlgebraSpec) -> Result<usize, LatticeError> {
    match alg.family() {
        Family::Laurent { rank } => Ok(*rank),
        _ => Err(LatticeError::NotLaurent),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeStats {
    pub support: Vec<Vec<i64>>,
    /// Largest coordinate over the support.
    pub s: i64,
    /// Smallest coordinate over the support.
    pub i: i64,
    /// Lexicographically greatest support point.
    pub leading: Vec<i64>,
}

fn points(p: &Element) -> Vec<Vec<i64>> {
    p.support()
        .filter_map(|m| match m {
            Monomial::Lattice(v) => Some(v.clone()),
            _ => None,
        })
        .collect()
}

pub fn stats(alg: &AlgebraSpec, p: &Element) -> Result<LatticeStats, LatticeError> {
    lattice_rank(alg)?;
    let mut support = points(p);
    if support.is_empty() {
        return Err(LatticeError::ZeroElement);
    }
    support.sort();
    let coords = support.iter().flatten();
    let s = coords.clone().copied().max().unwrap_or(0);
    let i = coords.copied().min().unwrap_or(0);
    let leading = support.last().cloned().expect("nonempty support");
    Ok(LatticeStats { support, s, i, leading })
}

/// `A_{m,t} = {v ∈ ℤⁿ : m <= v_j <= t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hypercube {
    pub n: usize,
    pub m: i64,
    pub t: i64,
}

impl Hypercube {
    pub fn new(n: usize, m: i64, t: i64) -> Result<Self, LatticeError> {
        if m > t {
            return Err(LatticeError::EmptyCube { m, t });
        }
        Ok(Hypercube { n, m, t })
    }

    pub fn size(&self) -> BigInt {
        BigInt::from(self.t - self.m + 1).pow(self.n as u32)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let side = (self.t - self.m + 1) as u64;
        let total = side.pow(self.n as u32);
        (0..total).map(move |mut k| {
            let mut v = vec![0; self.n];
            for c in v.iter_mut().rev() {
                *c = self.m + (k % side) as i64;
                k /= side;
            }
            v
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Density {
    pub m: i64,
    pub t: i64,
    /// `dim(V ∩ span A_{m,t})`
    #[serde(serialize_with = "ser_display")]
    pub numerator: BigInt,
    /// `|A_{m,t}|`
    #[serde(serialize_with = "ser_display")]
    pub denominator: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub value: BigRational,
    pub decimal: String,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl Density {
    pub fn as_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// Pattern subspaces are monomial-spanned, so the numerator is a point count.
pub fn density(alg: &AlgebraSpec, v: &PatternSubspace, m: i64, t: i64) -> Result<Density, LatticeError> {
    let cube = Hypercube::new(lattice_rank(alg)?, m, t)?;
    let count = cube.points().filter(|p| v.contains(&Monomial::Lattice(p.clone()))).count();
    let numerator = BigInt::from(count);
    let denominator = cube.size();
    let value = BigRational::new(numerator.clone(), denominator.clone());
    let decimal = format!("{:.6}", value.to_f64().unwrap_or(f64::NAN));
    Ok(Density { m, t, numerator, denominator, value, decimal })
}

/// Densities on the symmetric cubes `A_{-t,t}`, `t = 1..=t_max`.
pub fn density_series(alg: &AlgebraSpec, v: &PatternSubspace, t_max: i64) -> Result<Vec<Density>, LatticeError> {
    (1..=t_max).map(|t| density(alg, v, -t, t)).collect()
}

/// Columns `t,numerator,denominator,density`.
pub fn density_csv(series: &[Density]) -> String {
    let mut out = String::from("t,numerator,denominator,density\n");
    for d in series {
        let _ = writeln!(out, "{},{},{},{}", d.t, d.numerator, d.denominator, d.decimal);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Intersection {
    Found { n: u64, witness: Element, dim: usize },
    NotFound { n: u64 },
}

/// Looks for a nonzero element of `V1 ∩ V2 ∩ S_n`.
pub fn intersection_nontrivial(
    alg: &AlgebraSpec,
    v1: &PatternSubspace,
    v2: &PatternSubspace,
    n: u64,
) -> Result<Intersection, LatticeError> {
    lattice_rank(alg)?;
    let i = v1.truncate(alg, n).intersect(&v2.truncate(alg, n))?;
    let found = i.basis().next().cloned();
    Ok(match found {
        Some(witness) => Intersection::Found { n, witness, dim: i.dim() },
        None => Intersection::NotFound { n },
    })
}
