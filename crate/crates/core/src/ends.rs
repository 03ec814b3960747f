//! Almost-invariance certification and end-count certificates for
//! monomial-pattern subspaces.
//!
//! Every verdict is relative to a truncation degree `N` and a window `w`;
//! both are recorded in the certificates so a consumer can ask for more.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Monomial};
use crate::error::EndsError;
use crate::linalg::{EchelonBuilder, StabilizationWindow, TruncatedSubspace};
use crate::pattern::PatternSubspace;

pub const DEFAULT_N: u64 = 40;
pub const DEFAULT_WINDOW: u64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    NotStabilized,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostInvarianceCertificate {
    pub part: String,
    pub generator: String,
    /// `dim((V∩S_n)·g + V∩S_{n+d}) / (V∩S_{n+d})` for `n = 0..=N`, `d = deg g`.
    pub defects: Vec<u64>,
    /// The stabilized defect when certified.
    pub value: Option<u64>,
    pub window: StabilizationWindow,
    pub verdict: Verdict,
}

fn check_window(n: u64, window: u64) -> Result<(), EndsError> {
    if window == 0 || window > n {
        Err(EndsError::BadWindow { n, window })
    } else {
        Ok(())
    }
}

/// Defect sequence of `V` under right multiplication by `g`.
pub fn defect_sequence(alg: &AlgebraSpec, v: &PatternSubspace, g: &Element, n: u64) -> Result<Vec<u64>, EndsError> {
    let d = g.max_degree().unwrap_or(0);
    let mut b = EchelonBuilder::new();
    let mut v_dim = 0u64;
    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let lo = if k == 0 { 0 } else { k + d };
        for deg in lo..=k + d {
            for m in alg.degree_block(deg) {
                if v.contains(&m) {
                    b.insert(&Element::monomial(m, alg.field().one()));
                    v_dim += 1;
                }
            }
        }
        for m in alg.degree_block(k) {
            if v.contains(&m) {
                let prod = alg.multiply(&Element::monomial(m, alg.field().one()), g)?;
                b.insert(&prod);
            }
        }
        out.push(b.dim() as u64 - v_dim);
    }
    Ok(out)
}

/// Certified when the defect is constant over the last `w` degrees.
pub fn defect(
    alg: &AlgebraSpec,
    v: &PatternSubspace,
    g: &Element,
    n: u64,
    w: u64,
) -> Result<AlmostInvarianceCertificate, EndsError> {
    check_window(n, w)?;
    v.predicate().validate(alg)?;
    let defects = defect_sequence(alg, v, g, n)?;
    let tail = &defects[defects.len() - w as usize..];
    let stable = tail.windows(2).all(|p| p[0] == p[1]);
    Ok(AlmostInvarianceCertificate {
        part: v.render(alg),
        generator: alg.format_element(g),
        value: stable.then(|| tail[0]),
        window: StabilizationWindow {
            n_stop: n,
            window: w,
            exact_bound: v.predicate().stability_degree(alg, g),
        },
        verdict: if stable { Verdict::Certified } else { Verdict::NotStabilized },
        defects,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndCountCertificate {
    pub k: usize,
    pub parts: Vec<String>,
    pub n: u64,
    pub window: u64,
    /// Every generator checked against every part, in part-major order.
    pub certificates: Vec<(usize, AlmostInvarianceCertificate)>,
    /// `dim(V_i ∩ S_n)` for `n = N-w..=N`, strictly increasing.
    pub growth_evidence: Vec<Vec<u64>>,
    /// Monomials of `S_N` checked for the partition property.
    pub partition_checked: usize,
    pub verdict: Verdict,
}

/// Every monomial of `S_n` must satisfy exactly one part predicate.
pub fn check_partition(alg: &AlgebraSpec, parts: &[PatternSubspace], n: u64) -> Result<usize, EndsError> {
    let basis = alg.enumerate_basis(n);
    for m in &basis {
        let claimed_by: Vec<usize> =
            parts.iter().enumerate().filter(|(_, p)| p.contains(m)).map(|(i, _)| i).collect();
        if claimed_by.len() != 1 {
            return Err(EndsError::PartitionFailure { monomial: alg.format_monomial(m), claimed_by });
        }
    }
    Ok(basis.len())
}

pub fn verify_decomposition(
    alg: &AlgebraSpec,
    parts: &[PatternSubspace],
    n: u64,
    w: u64,
) -> Result<EndCountCertificate, EndsError> {
    if parts.is_empty() {
        return Err(EndsError::NoParts);
    }
    check_window(n, w)?;
    for p in parts {
        p.predicate().validate(alg)?;
    }
    let partition_checked = check_partition(alg, parts, n)?;

    let gens: Vec<Element> =
        alg.generators().into_iter().map(|m| Element::monomial(m, alg.field().one())).collect();
    let jobs: Vec<(usize, &Element)> = (0..parts.len()).flat_map(|i| gens.iter().map(move |g| (i, g))).collect();
    let certificates = jobs
        .par_iter()
        .map(|&(i, g)| defect(alg, &parts[i], g, n, w).map(|c| (i, c)))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((i, c)) = certificates.iter().find(|(_, c)| c.verdict != Verdict::Certified) {
        return Err(EndsError::CertificationFailure {
            part: *i,
            generator: c.generator.clone(),
            defects: c.defects.clone(),
        });
    }

    let mut growth_evidence = Vec::with_capacity(parts.len());
    for (i, p) in parts.iter().enumerate() {
        let dims = p.dimensions(alg, n)[(n - w) as usize..].to_vec();
        if !dims.windows(2).all(|d| d[0] < d[1]) {
            return Err(EndsError::FiniteDimensionalPart { part: i, dims });
        }
        growth_evidence.push(dims);
    }

    Ok(EndCountCertificate {
        k: parts.len(),
        parts: parts.iter().map(|p| p.render(alg)).collect(),
        n,
        window: w,
        certificates,
        growth_evidence,
        partition_checked,
        verdict: Verdict::Certified,
    })
}

/// Folds a decomposition result into a verdict: refutations of the
/// decomposition itself map to `Refuted`, unstable defects to `NotStabilized`.
pub fn verdict_of(result: &Result<EndCountCertificate, EndsError>) -> Verdict {
    match result {
        Ok(c) => c.verdict,
        Err(EndsError::CertificationFailure { .. }) => Verdict::NotStabilized,
        Err(_) => Verdict::Refuted,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseReport {
    pub n: u64,
    /// Degrees `m < N` with `dim(V∩S_m) = dim(V∩S_{m+1})`.
    pub degrees: Vec<u64>,
}

pub fn is_sparse(alg: &AlgebraSpec, v: &PatternSubspace, n: u64) -> SparseReport {
    let dims = v.dimensions(alg, n);
    let degrees = (0..n).filter(|&m| dims[m as usize] == dims[m as usize + 1]).collect();
    SparseReport { n, degrees }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseConsistency {
    pub sparse: SparseReport,
    pub certified: bool,
    /// Sparse degrees persist into the final window.
    pub sparse_in_tail: bool,
    pub finite_in_tail: bool,
    /// Certified and persistently sparse must mean finite dimensional.
    pub consistent: bool,
}

/// Checks the prediction that an almost invariant subspace which stays
/// sparse must be finite dimensional.
pub fn sparse_consistency(
    alg: &AlgebraSpec,
    v: &PatternSubspace,
    n: u64,
    w: u64,
) -> Result<SparseConsistency, EndsError> {
    check_window(n, w)?;
    let mut certified = true;
    for g in alg.generators() {
        let c = defect(alg, v, &Element::monomial(g, alg.field().one()), n, w)?;
        certified &= c.verdict == Verdict::Certified;
    }
    let sparse = is_sparse(alg, v, n);
    let sparse_in_tail = sparse.degrees.iter().any(|&m| m >= n - w);
    let dims = v.dimensions(alg, n);
    let finite_in_tail = dims[(n - w) as usize] == dims[n as usize];
    Ok(SparseConsistency {
        consistent: !(certified && sparse_in_tail) || finite_in_tail,
        sparse,
        certified,
        sparse_in_tail,
        finite_in_tail,
    })
}

/// Number of monomials of `S_n` in exactly one of the two patterns, for
/// each `n = 0..=N`.
pub fn symmetric_difference(alg: &AlgebraSpec, v: &PatternSubspace, v2: &PatternSubspace, n: u64) -> Vec<u64> {
    let mut acc = 0;
    (0..=n)
        .map(|d| {
            acc += alg.degree_block(d).iter().filter(|m| v.contains(m) != v2.contains(m)).count() as u64;
            acc
        })
        .collect()
}

/// Subspaces that can be cut down to `S_n`.
pub trait Truncatable {
    fn truncate(&self, alg: &AlgebraSpec, n: u64) -> TruncatedSubspace;
    fn as_pattern(&self) -> Option<&PatternSubspace> {
        None
    }
}

impl Truncatable for PatternSubspace {
    fn truncate(&self, alg: &AlgebraSpec, n: u64) -> TruncatedSubspace {
        PatternSubspace::truncate(self, alg, n)
    }

    fn as_pattern(&self) -> Option<&PatternSubspace> {
        Some(self)
    }
}

/// `element · A`, spanned by the products with basis monomials.
#[derive(Clone, Debug)]
pub struct RightIdealSpan {
    pub element: Element,
}

impl Truncatable for RightIdealSpan {
    fn truncate(&self, alg: &AlgebraSpec, n: u64) -> TruncatedSubspace {
        let d = self.element.max_degree().unwrap_or(0);
        let mut b = EchelonBuilder::new();
        for m in alg.enumerate_basis(n.saturating_sub(d)) {
            if let Ok(p) = alg.multiply(&self.element, &Element::monomial(m, alg.field().one())) {
                if p.max_degree().is_some_and(|e| e <= n) {
                    b.insert(&p);
                }
            }
        }
        b.finish(n)
    }
}

/// Smallest `l` with `S_n ⊆ (V∩S_{n+l}) ⊕ (W∩S_{n+l})` for all `n <= N`.
pub fn luj1_witness(
    alg: &AlgebraSpec,
    v: &dyn Truncatable,
    w: &dyn Truncatable,
    n: u64,
) -> Result<u64, EndsError> {
    let (Some(pv), Some(pw)) = (v.as_pattern(), w.as_pattern()) else {
        return Err(EndsError::NotAPartition("only pattern subspaces can be checked as a partition".into()));
    };
    check_partition(alg, &[pv.clone(), pw.clone()], n)
        .map_err(|e| EndsError::NotAPartition(e.to_string()))?;
    // The partition check bounds the search: l = n always suffices within S_2n.
    'l: for l in 0..=n {
        let sum = v.truncate(alg, n + l).sum(&w.truncate(alg, n + l))?;
        for k in 0..=n {
            for m in alg.enumerate_basis(k) {
                if !sum.restrict(k + l).contains(&Element::monomial(m, alg.field().one())) {
                    continue 'l;
                }
            }
        }
        return Ok(l);
    }
    Ok(n)
}

/// Monomials a part contains within `S_n`, for reports.
pub fn part_support(alg: &AlgebraSpec, v: &PatternSubspace, n: u64) -> Vec<Monomial> {
    alg.enumerate_basis(n).into_iter().filter(|m| v.contains(m)).collect()
}
