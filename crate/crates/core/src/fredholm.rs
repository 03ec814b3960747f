//! Sign operators, the coboundary `dx = [F, r_x]`, the cocycle `τ`, the
//! winding character `φ`, projection defects and polynomial parametrices.

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Family, Monomial};
use crate::ends::{symmetric_difference, verify_decomposition, EndCountCertificate};
use crate::error::FredholmError;
use crate::linalg::{
    extract_bounded, extract_finite_rank, trace_on_subspace, EchelonBuilder, FiniteRankOperator, OperatorExpr,
    StabilizationWindow, TruncatedSubspace,
};
use crate::pattern::PatternSubspace;
use crate::scalar::Scalar;

/// A certified two-part splitting `A = V ⊕ W` with `W` the complementary pattern.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub positive: PatternSubspace,
    pub negative: PatternSubspace,
    pub certificate: EndCountCertificate,
}

impl Decomposition {
    pub fn certify(alg: &AlgebraSpec, v: PatternSubspace, n: u64, w: u64) -> Result<Self, FredholmError> {
        let negative = v.complement();
        Self::from_parts(alg, v, negative, n, w)
    }

    pub fn from_parts(
        alg: &AlgebraSpec,
        positive: PatternSubspace,
        negative: PatternSubspace,
        n: u64,
        w: u64,
    ) -> Result<Self, FredholmError> {
        let certificate = verify_decomposition(alg, &[positive.clone(), negative.clone()], n, w)?;
        Ok(Decomposition { positive, negative, certificate })
    }

    /// `F`: `+1` on `V`, `-1` on `W`.
    pub fn sign(&self) -> OperatorExpr {
        OperatorExpr::Sign(self.positive.clone())
    }

    fn truncation(&self) -> (u64, u64) {
        (self.certificate.n, self.certificate.window)
    }
}

/// Extracts `[op(V), r_x]`, using the pattern's exact support bound when
/// one exists and the stabilization window otherwise.
fn extract_commutator(
    alg: &AlgebraSpec,
    v: &PatternSubspace,
    op: OperatorExpr,
    x: &Element,
    n: u64,
    w: u64,
) -> Result<(FiniteRankOperator, StabilizationWindow), FredholmError> {
    let expr = OperatorExpr::commutator(op, OperatorExpr::RightMult(x.clone()), alg.field());
    Ok(match v.predicate().stability_degree(alg, x) {
        Some(bound) => extract_bounded(alg, &expr, bound, w)?,
        None => extract_finite_rank(alg, &expr, w, n)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coboundary {
    pub operator: FiniteRankOperator,
    pub window: StabilizationWindow,
    pub trace: Scalar,
}

/// `dx = [F, r_x]`; its trace must vanish.
pub fn coboundary(alg: &AlgebraSpec, x: &Element, d: &Decomposition) -> Result<Coboundary, FredholmError> {
    let (n, w) = d.truncation();
    let (operator, window) = extract_commutator(alg, &d.positive, d.sign(), x, n, w)?;
    let trace = operator.trace();
    if !trace.is_zero() {
        return Err(FredholmError::InvariantViolation(format!("Tr(dx) = {trace}")));
    }
    Ok(Coboundary { operator, window, trace })
}

/// `τ(a, b) = Tr(r_a ∘ [F, r_b])`.
pub fn tau(alg: &AlgebraSpec, a: &Element, b: &Element, d: &Decomposition) -> Result<Scalar, FredholmError> {
    let db = coboundary(alg, b, d)?;
    Ok(db.operator.then(alg, &OperatorExpr::RightMult(a.clone()))?.trace())
}

/// `φ(a) = τ(a⁻¹, a)` for a unit `a` with supplied inverse.
pub fn phi(alg: &AlgebraSpec, a: &Element, a_inv: &Element, d: &Decomposition) -> Result<Scalar, FredholmError> {
    let one = alg.one();
    if alg.multiply(a, a_inv)? != one || alg.multiply(a_inv, a)? != one {
        return Err(FredholmError::NotAUnit);
    }
    tau(alg, a_inv, a, d)
}

/// Inverse of a scaled monomial when it is visibly a unit: any nonzero
/// scalar, or `c·x^v` in a Laurent algebra.
pub fn monomial_inverse(alg: &AlgebraSpec, a: &Element) -> Option<Element> {
    if a.len() != 1 {
        return None;
    }
    let (m, c) = a.iter().next()?;
    let c_inv = c.inv()?;
    match m {
        Monomial::Lattice(v) if matches!(alg.family(), Family::Laurent { .. }) => {
            Some(Element::monomial(Monomial::Lattice(v.iter().map(|e| -e).collect()), c_inv))
        }
        _ if Some(m) == alg.unit_monomial().as_ref() => Some(alg.one().scaled(&c_inv)),
        _ => None,
    }
}

/// `F² = 1` on every monomial of `S_n`.
pub fn sign_is_involution(alg: &AlgebraSpec, d: &Decomposition, n: u64) -> Result<bool, FredholmError> {
    let f = d.sign();
    let f2 = OperatorExpr::compose(f.clone(), f);
    for m in alg.enumerate_basis(n) {
        if f2.apply_monomial(alg, &m)? != Element::monomial(m, alg.field().one()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `[π_V, r_x]`, after checking `π_V² = π_V` on `S_n`.
pub fn projection_defect(
    alg: &AlgebraSpec,
    v: &PatternSubspace,
    x: &Element,
    n: u64,
    w: u64,
) -> Result<(FiniteRankOperator, StabilizationWindow), FredholmError> {
    let p = OperatorExpr::Projection(v.clone());
    let p2 = OperatorExpr::compose(p.clone(), p.clone());
    for m in alg.enumerate_basis(n) {
        if p2.apply_monomial(alg, &m)? != p.apply_monomial(alg, &m)? {
            return Err(FredholmError::InvariantViolation(format!(
                "projection not idempotent at {}",
                alg.format_monomial(&m)
            )));
        }
    }
    extract_commutator(alg, v, p, x, n, w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressionIndex {
    pub n: u64,
    pub kernel: u64,
    pub cokernel: u64,
    pub index: i64,
}

/// Index of `π_V r_x |_V` measured on `V ∩ S_n`; the cokernel is counted in
/// `S_{n - deg x}`, below the truncation edge.
pub fn compression_index(
    alg: &AlgebraSpec,
    v: &PatternSubspace,
    x: &Element,
    n: u64,
) -> Result<CompressionIndex, FredholmError> {
    let d = x.max_degree().unwrap_or(0);
    let dom = v.truncate(alg, n);
    let mut images = Vec::with_capacity(dom.dim());
    for row in dom.basis() {
        images.push(v.project(&alg.multiply(row, x)?));
    }
    let img = TruncatedSubspace::span(&images, n + d)?;
    let kernel = (dom.dim() - img.dim()) as u64;
    let m = n.saturating_sub(d);
    let cokernel = (v.truncate(alg, m).dim() - img.restrict(m).dim()) as u64;
    Ok(CompressionIndex { n, kernel, cokernel, index: kernel as i64 - cokernel as i64 })
}

/// Truncated evidence that an operator with possibly infinite column
/// support has finite rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualCertificate {
    /// Columns were evaluated on `S_columns_to`.
    pub columns_to: u64,
    pub support: usize,
    /// Rank of the operator restricted to `S_n`, `n = 0..=columns_to`.
    pub rank_by_degree: Vec<usize>,
    pub rank: usize,
    pub range: TruncatedSubspace,
    pub diagonal_trace: Scalar,
    /// Trace of the restriction to the range.
    pub range_trace: Scalar,
    pub window: StabilizationWindow,
    pub certified: bool,
}

pub fn residual_certificate(
    alg: &AlgebraSpec,
    expr: &OperatorExpr,
    n: u64,
    w: u64,
) -> Result<ResidualCertificate, FredholmError> {
    let mut b = EchelonBuilder::new();
    let mut support = 0;
    let mut diagonal = alg.field().zero();
    let mut rank_by_degree = Vec::with_capacity(n as usize + 1);
    let mut bound = 0;
    for deg in 0..=n {
        for m in alg.degree_block(deg) {
            let img = expr.apply_monomial(alg, &m)?;
            if img.is_zero() {
                continue;
            }
            support += 1;
            if let Some(c) = img.coefficient(&m) {
                diagonal = &diagonal + c;
            }
            bound = bound.max(img.max_degree().unwrap_or(0));
            b.insert(&img);
        }
        rank_by_degree.push(b.dim());
    }
    let range = b.finish(bound);
    let range_trace = trace_on_subspace(alg, expr, &range)?;
    let tail = &rank_by_degree[rank_by_degree.len().saturating_sub(w as usize)..];
    Ok(ResidualCertificate {
        columns_to: n,
        support,
        rank: range.dim(),
        certified: tail.windows(2).all(|p| p[0] == p[1]),
        rank_by_degree,
        range,
        diagonal_trace: diagonal,
        range_trace,
        window: StabilizationWindow { n_stop: n, window: w, exact_bound: None },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParametrixReport {
    pub p: String,
    pub degree: u64,
    /// `T ∘ l_p - 1`
    pub left_residual: ResidualCertificate,
    /// `l_p ∘ T - 1`
    pub right_residual: ResidualCertificate,
    pub kernel: u64,
    pub cokernel: u64,
    pub index: i64,
    /// `Tr(1 - T l_p) - Tr(1 - l_p T)`, an independent route to the index.
    pub trace_index: Scalar,
}

/// `T`: quotient of division by `p`; it vanishes on `span{1, …, x^{deg p - 1}}`.
pub fn parametrix_operator(p: &Element) -> OperatorExpr {
    OperatorExpr::PolyQuotient(p.clone())
}

pub fn parametrix(alg: &AlgebraSpec, p: &Element, n: u64, w: u64) -> Result<ParametrixReport, FredholmError> {
    if *alg.family() != (Family::Polynomial { vars: 1 }) {
        return Err(crate::error::AlgebraError::NotUnivariate.into());
    }
    let deg = p.max_degree().ok_or(FredholmError::ZeroPolynomial)?;
    let field = alg.field();
    let t = parametrix_operator(p);
    let lp = OperatorExpr::LeftMult(p.clone());
    let left = residual_certificate(
        alg,
        &OperatorExpr::difference(OperatorExpr::compose(t.clone(), lp.clone()), OperatorExpr::Identity, field),
        n,
        w,
    )?;
    let right = residual_certificate(
        alg,
        &OperatorExpr::difference(OperatorExpr::compose(lp, t), OperatorExpr::Identity, field),
        n,
        w,
    )?;

    let products: Vec<Element> = alg
        .enumerate_basis(n)
        .into_iter()
        .map(|m| alg.multiply(p, &Element::monomial(m, field.one())))
        .collect::<Result<_, _>>()?;
    let img = TruncatedSubspace::span(&products, n + deg)?;
    let kernel = (n + 1) - img.dim() as u64;
    let cokernel = (n + deg + 1) - img.restrict(n + deg).dim() as u64;
    let index = kernel as i64 - cokernel as i64;

    let trace_index = &right.range_trace - &left.range_trace;
    if trace_index != field.from_i64(index) {
        return Err(FredholmError::InvariantViolation(format!("trace index {trace_index} != {index}")));
    }
    Ok(ParametrixReport {
        p: alg.format_element(p),
        degree: deg,
        left_residual: left,
        right_residual: right,
        kernel,
        cokernel,
        index,
        trace_index,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceRow {
    pub a: String,
    pub b: String,
    pub tau: Scalar,
    pub tau_prime: Scalar,
    /// `Tr((r_{ab} - r_{ba}) ∘ (F - F'))`
    pub rhs: Scalar,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    /// Size of the pattern symmetric difference inside `S_n`, `n = 0..=N`.
    pub symmetric_difference: Vec<u64>,
    pub threshold: u64,
    pub sign_difference_support: usize,
    pub rows: Vec<InvarianceRow>,
    pub all_hold: bool,
}

/// `τ_D(a,b) - τ_D'(a,b) = Tr((r_{ab} - r_{ba}) ∘ (F - F'))` on each sample.
pub fn coboundary_invariance(
    alg: &AlgebraSpec,
    d: &Decomposition,
    d2: &Decomposition,
    samples: &[(Element, Element)],
) -> Result<InvarianceReport, FredholmError> {
    let (n, w) = d.truncation();
    let sym = symmetric_difference(alg, &d.positive, &d2.positive, n);
    let tail = &sym[sym.len().saturating_sub(w as usize)..];
    if !tail.windows(2).all(|p| p[0] == p[1]) {
        return Err(FredholmError::NotEquivalent(sym));
    }
    let threshold = *sym.last().unwrap_or(&0);
    let field = alg.field();
    let (g, _) = extract_finite_rank(alg, &OperatorExpr::difference(d.sign(), d2.sign(), field), w, n)?;

    let mut rows = Vec::with_capacity(samples.len());
    for (a, b) in samples {
        let t1 = tau(alg, a, b, d)?;
        let t2 = tau(alg, a, b, d2)?;
        let comm = OperatorExpr::difference(
            OperatorExpr::RightMult(alg.multiply(a, b)?),
            OperatorExpr::RightMult(alg.multiply(b, a)?),
            field,
        );
        let rhs = g.then(alg, &comm)?.trace();
        rows.push(InvarianceRow {
            a: alg.format_element(a),
            b: alg.format_element(b),
            holds: &t1 - &t2 == rhs,
            tau: t1,
            tau_prime: t2,
            rhs,
        });
    }
    Ok(InvarianceReport {
        all_hold: rows.iter().all(|r| r.holds),
        symmetric_difference: sym,
        threshold,
        sign_difference_support: g.support().count(),
        rows,
    })
}
