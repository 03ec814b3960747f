//! Exact sparse linear algebra over the monomial basis.
//!
//! Subspaces are kept in reduced row-echelon form where the pivot of each
//! row is its *largest* monomial in the global order. With that convention
//! `V ∩ S_n` is spanned by the rows whose pivot has degree `<= n`, which is
//! what the filtration-based computations rely on.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Monomial};
use crate::error::LinalgError;
use crate::pattern::PatternSubspace;
use crate::scalar::{FieldSpec, Scalar};

type SparseVec<K> = BTreeMap<K, Scalar>;

fn axpy<K: Ord + Clone>(dst: &mut SparseVec<K>, c: &Scalar, src: &SparseVec<K>) {
    for (k, v) in src {
        let add = c * v;
        match dst.get_mut(k) {
            Some(cur) => {
                let sum = &*cur + &add;
                if sum.is_zero() {
                    dst.remove(k);
                } else {
                    *cur = sum;
                }
            }
            None => {
                if !add.is_zero() {
                    dst.insert(k.clone(), add);
                }
            }
        }
    }
}

/// Incremental row echelon form keyed by pivot (largest entry of each row).
#[derive(Clone, Debug)]
pub(crate) struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    /// Reduces `v` against the current rows; returns the remainder.
    fn reduce_vec(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        // Top-down: each row only touches entries below its pivot.
        let mut bound: Option<K> = None;
        loop {
            let next = match &bound {
                None => v.iter().next_back(),
                Some(b) => v.range(..b.clone()).next_back(),
            };
            let Some((k, c)) = next else { return v };
            let (k, c) = (k.clone(), c.clone());
            if let Some(row) = self.rows.get(&k) {
                axpy(&mut v, &-&c, row);
            }
            bound = Some(k);
        }
    }

    /// Inserts `v`; returns `true` when it was independent of the current rows.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let r = self.reduce_vec(v);
        let Some((pivot, c)) = r.iter().next_back() else { return false };
        let pivot = pivot.clone();
        let inv = c.inv().expect("nonzero pivot");
        let row = r.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce_vec(v).is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Back-substitution into reduced form.
    pub fn reduce(&mut self) {
        let pivots: Vec<K> = self.rows.keys().cloned().collect();
        for p in pivots {
            let mut row = self.rows.remove(&p).expect("row present");
            let hits: Vec<(K, Scalar)> = row
                .range(..p.clone())
                .filter(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect();
            for (k, c) in hits {
                let other = &self.rows[&k];
                axpy(&mut row, &-&c, other);
            }
            self.rows.insert(p, row);
        }
    }

    pub fn into_rows(self) -> BTreeMap<K, SparseVec<K>> {
        self.rows
    }
}

/// Builder for subspaces of `S_N`, exposed for incremental dimension counts.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    inner: Echelon<Monomial>,
}

impl Default for EchelonBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl EchelonBuilder {
    pub fn new() -> Self {
        EchelonBuilder { inner: Echelon::new() }
    }

    pub fn from_subspace(v: &TruncatedSubspace) -> Self {
        let mut inner = Echelon::new();
        inner.rows = v.rows.iter().map(|(p, r)| (p.clone(), r.clone().into_terms())).collect();
        EchelonBuilder { inner }
    }

    pub fn insert(&mut self, v: &Element) -> bool {
        self.inner.insert(v.clone().into_terms())
    }

    pub fn contains(&self, v: &Element) -> bool {
        self.inner.contains(v.clone().into_terms())
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn finish(mut self, degree_bound: u64) -> TruncatedSubspace {
        self.inner.reduce();
        TruncatedSubspace {
            degree_bound,
            rows: self.inner.into_rows().into_iter().map(|(p, r)| (p, r.into_iter().collect())).collect(),
        }
    }
}

/// A subspace of `S_N` in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedSubspace {
    degree_bound: u64,
    #[serde(serialize_with = "serialize_rows")]
    rows: BTreeMap<Monomial, Element>,
}

fn serialize_rows<S: serde::Serializer>(rows: &BTreeMap<Monomial, Element>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rows.values())
}

fn serialize_columns<S: serde::Serializer>(cols: &BTreeMap<Monomial, Element>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(cols.iter())
}

impl TruncatedSubspace {
    pub fn zero(degree_bound: u64) -> Self {
        TruncatedSubspace { degree_bound, rows: BTreeMap::new() }
    }

    /// Span of distinct basis monomials (already reduced).
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(field: FieldSpec, degree_bound: u64, ms: I) -> Self {
        let rows = ms
            .into_iter()
            .map(|m| {
                let row = Element::monomial(m.clone(), field.one());
                (m, row)
            })
            .collect();
        TruncatedSubspace { degree_bound, rows }
    }

    /// Reduced echelon basis of `span(vectors)` inside `S_n`.
    pub fn span(vectors: &[Element], n: u64) -> Result<Self, LinalgError> {
        let mut b = EchelonBuilder::new();
        for v in vectors {
            if let Some(d) = v.max_degree() {
                if d > n {
                    return Err(LinalgError::DegreeExceeded { degree: d, bound: n });
                }
            }
            b.insert(v);
        }
        Ok(b.finish(n))
    }

    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Element> + '_ {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.rows.keys()
    }

    pub fn contains(&self, v: &Element) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the echelon basis, keyed by pivot.
    pub fn coordinates(&self, v: &Element) -> Option<BTreeMap<Monomial, Scalar>> {
        let mut rest = v.clone();
        let mut coords = BTreeMap::new();
        for (p, row) in &self.rows {
            if let Some(c) = v.coefficient(p) {
                rest.axpy(&-c, row);
                coords.insert(p.clone(), c.clone());
            }
        }
        rest.is_zero().then_some(coords)
    }

    /// Rows pivot-strictly-increasing, nonzero, normalized and reduced.
    pub fn is_reduced(&self) -> bool {
        self.rows.iter().all(|(p, row)| {
            row.leading().map(|(m, c)| m == p && c.is_one()).unwrap_or(false)
                && self.rows.keys().filter(|q| *q != p).all(|q| row.coefficient(q).is_none())
        })
    }

    /// `V ∩ S_n` for `n <= degree_bound`.
    pub fn restrict(&self, n: u64) -> TruncatedSubspace {
        TruncatedSubspace {
            degree_bound: n.min(self.degree_bound),
            rows: self.rows.iter().filter(|(p, _)| p.degree() <= n).map(|(p, r)| (p.clone(), r.clone())).collect(),
        }
    }

    fn check_bounds(&self, other: &Self) -> Result<(), LinalgError> {
        if self.degree_bound == other.degree_bound {
            Ok(())
        } else {
            Err(LinalgError::BoundMismatch { left: self.degree_bound, right: other.degree_bound })
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_bounds(other)?;
        let mut b = EchelonBuilder::from_subspace(self);
        for row in other.basis() {
            b.insert(row);
        }
        Ok(b.finish(self.degree_bound))
    }

    /// Zassenhaus: echelonize `[u | u]` and `[v | 0]`; rows with an empty
    /// left half span the intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_bounds(other)?;
        let mut ech: Echelon<(bool, Monomial)> = Echelon::new();
        for u in self.basis() {
            let v = u
                .iter()
                .flat_map(|(m, c)| [((true, m.clone()), c.clone()), ((false, m.clone()), c.clone())])
                .collect();
            ech.insert(v);
        }
        for w in other.basis() {
            ech.insert(w.iter().map(|(m, c)| ((true, m.clone()), c.clone())).collect());
        }
        let mut b = EchelonBuilder::new();
        for (pivot, row) in ech.into_rows() {
            if !pivot.0 {
                let e: Element = row.into_iter().map(|((_, m), c)| (m, c)).collect();
                b.insert(&e);
            }
        }
        Ok(b.finish(self.degree_bound))
    }

    /// `dim(U + V) - dim(V)` with `U = self`.
    pub fn quotient_dim(&self, v: &Self) -> Result<usize, LinalgError> {
        self.check_bounds(v)?;
        let mut b = EchelonBuilder::from_subspace(v);
        let added = self.basis().filter(|row| b.insert(row)).count();
        Ok(added)
    }
}

/// An endomorphism given by finitely many nonzero columns on the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteRankOperator {
    #[serde(skip)]
    field: FieldSpec,
    #[serde(serialize_with = "serialize_columns")]
    columns: BTreeMap<Monomial, Element>,
}

impl FiniteRankOperator {
    pub fn zero(field: FieldSpec) -> Self {
        FiniteRankOperator { field, columns: BTreeMap::new() }
    }

    pub fn from_columns<I: IntoIterator<Item = (Monomial, Element)>>(field: FieldSpec, cols: I) -> Self {
        FiniteRankOperator {
            field,
            columns: cols.into_iter().filter(|(_, e)| !e.is_zero()).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.columns.keys()
    }

    pub fn columns(&self) -> impl Iterator<Item = (&Monomial, &Element)> + '_ {
        self.columns.iter()
    }

    pub fn column(&self, m: &Monomial) -> Option<&Element> {
        self.columns.get(m)
    }

    pub fn apply(&self, v: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in v.iter() {
            if let Some(col) = self.columns.get(m) {
                out.axpy(c, col);
            }
        }
        out
    }

    /// Sum of the diagonal coefficients over the support.
    pub fn trace(&self) -> Scalar {
        self.columns
            .iter()
            .filter_map(|(m, img)| img.coefficient(m))
            .fold(self.field.zero(), |acc, c| &acc + c)
    }

    /// Span of the images.
    pub fn range(&self) -> TruncatedSubspace {
        let bound = self.columns.values().filter_map(Element::max_degree).max().unwrap_or(0);
        let imgs: Vec<Element> = self.columns.values().cloned().collect();
        TruncatedSubspace::span(&imgs, bound).expect("bound covers every image")
    }

    pub fn rank(&self) -> usize {
        self.range().dim()
    }

    /// Trace of the restriction to the range, computed independently of the
    /// diagonal sum.
    pub fn trace_via_range(&self, alg: &AlgebraSpec) -> Result<Scalar, LinalgError> {
        trace_on_subspace(alg, &OperatorExpr::Explicit(self.clone()), &self.range())
    }

    /// `expr ∘ self`; finite rank whenever `self` is.
    pub fn then(&self, alg: &AlgebraSpec, expr: &OperatorExpr) -> Result<FiniteRankOperator, LinalgError> {
        let mut cols = Vec::with_capacity(self.columns.len());
        for (m, img) in &self.columns {
            cols.push((m.clone(), expr.apply(alg, img)?));
        }
        Ok(FiniteRankOperator::from_columns(self.field, cols))
    }

    pub fn add(&self, other: &FiniteRankOperator) -> FiniteRankOperator {
        let mut cols = self.columns.clone();
        for (m, img) in &other.columns {
            let sum = match cols.get(m) {
                Some(cur) => cur + img,
                None => img.clone(),
            };
            cols.insert(m.clone(), sum);
        }
        FiniteRankOperator::from_columns(self.field, cols)
    }

    pub fn scaled(&self, c: &Scalar) -> FiniteRankOperator {
        FiniteRankOperator::from_columns(self.field, self.columns.iter().map(|(m, e)| (m.clone(), e.scaled(c))))
    }
}

/// Human-readable JSON form of an operator: support list plus columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorDump {
    pub support: Vec<String>,
    pub columns: BTreeMap<String, String>,
    pub rank: usize,
    pub trace: String,
}

/// Human-readable JSON form of a subspace: its echelon rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceDump {
    pub degree_bound: u64,
    pub dim: usize,
    pub rows: Vec<String>,
}

impl FiniteRankOperator {
    pub fn dump(&self, alg: &AlgebraSpec) -> OperatorDump {
        OperatorDump {
            support: self.columns.keys().map(|m| alg.format_monomial(m)).collect(),
            columns: self.columns.iter().map(|(m, e)| (alg.format_monomial(m), alg.format_element(e))).collect(),
            rank: self.rank(),
            trace: self.trace().to_string(),
        }
    }
}

impl TruncatedSubspace {
    pub fn dump(&self, alg: &AlgebraSpec) -> SubspaceDump {
        SubspaceDump {
            degree_bound: self.degree_bound,
            dim: self.dim(),
            rows: self.basis().map(|r| alg.format_element(r)).collect(),
        }
    }
}

/// Lazily evaluated operator on the monomial basis.
#[derive(Clone, Debug)]
pub enum OperatorExpr {
    Identity,
    /// `v ↦ v·x`
    RightMult(Element),
    /// `v ↦ x·v`
    LeftMult(Element),
    /// `+1` on the pattern, `-1` on its complement.
    Sign(PatternSubspace),
    /// Projection onto the pattern along its complement.
    Projection(PatternSubspace),
    Explicit(FiniteRankOperator),
    /// Quotient of division with remainder by a polynomial in `K[x]`.
    PolyQuotient(Element),
    Sum(Vec<OperatorExpr>),
    Scaled(Scalar, Box<OperatorExpr>),
    /// `outer ∘ inner`
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
}

impl OperatorExpr {
    pub fn compose(outer: OperatorExpr, inner: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn difference(a: OperatorExpr, b: OperatorExpr, field: FieldSpec) -> OperatorExpr {
        OperatorExpr::Sum(vec![a, OperatorExpr::Scaled(field.from_i64(-1), Box::new(b))])
    }

    /// `[a, b] = a∘b - b∘a`
    pub fn commutator(a: OperatorExpr, b: OperatorExpr, field: FieldSpec) -> OperatorExpr {
        Self::difference(Self::compose(a.clone(), b.clone()), Self::compose(b, a), field)
    }

    pub fn apply_monomial(&self, alg: &AlgebraSpec, m: &Monomial) -> Result<Element, LinalgError> {
        let one = || Element::monomial(m.clone(), alg.field().one());
        Ok(match self {
            OperatorExpr::Identity => one(),
            OperatorExpr::RightMult(x) => alg.multiply(&one(), x)?,
            OperatorExpr::LeftMult(x) => alg.multiply(x, &one())?,
            OperatorExpr::Sign(v) => {
                let c = if v.contains(m) { alg.field().one() } else { alg.field().from_i64(-1) };
                Element::monomial(m.clone(), c)
            }
            OperatorExpr::Projection(v) => {
                if v.contains(m) {
                    one()
                } else {
                    Element::zero()
                }
            }
            OperatorExpr::Explicit(t) => t.column(m).cloned().unwrap_or_default(),
            OperatorExpr::PolyQuotient(p) => alg.divide_univariate(&one(), p)?.0,
            OperatorExpr::Sum(parts) => {
                let mut acc = Element::zero();
                for p in parts {
                    acc = &acc + &p.apply_monomial(alg, m)?;
                }
                acc
            }
            OperatorExpr::Scaled(c, e) => e.apply_monomial(alg, m)?.scaled(c),
            OperatorExpr::Compose(outer, inner) => outer.apply(alg, &inner.apply_monomial(alg, m)?)?,
        })
    }

    pub fn apply(&self, alg: &AlgebraSpec, v: &Element) -> Result<Element, LinalgError> {
        let mut out = Element::zero();
        for (m, c) in v.iter() {
            out.axpy(c, &self.apply_monomial(alg, m)?);
        }
        Ok(out)
    }
}

/// Evidence that produced a finite-rank extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationWindow {
    /// Last degree that was evaluated.
    pub n_stop: u64,
    /// Consecutive degrees without new support required to stop.
    pub window: u64,
    /// Exact a-priori degree bound on the support, when one was available.
    pub exact_bound: Option<u64>,
}

/// Evaluates `expr` degree by degree and stops once `window` consecutive
/// degrees add no support. This is a heuristic completeness certificate:
/// it is exact only for operators whose support is degree-bounded.
pub fn extract_finite_rank(
    alg: &AlgebraSpec,
    expr: &OperatorExpr,
    window: u64,
    n_max: u64,
) -> Result<(FiniteRankOperator, StabilizationWindow), LinalgError> {
    let mut cols = BTreeMap::new();
    let mut quiet = 0;
    for d in 0..=n_max {
        let mut grew = false;
        for m in alg.degree_block(d) {
            let img = expr.apply_monomial(alg, &m)?;
            if !img.is_zero() {
                cols.insert(m, img);
                grew = true;
            }
        }
        quiet = if grew { 0 } else { quiet + 1 };
        if quiet >= window.max(1) {
            let op = FiniteRankOperator { field: alg.field(), columns: cols };
            return Ok((op, StabilizationWindow { n_stop: d, window, exact_bound: None }));
        }
    }
    Err(LinalgError::NotStabilized { n_max, support: cols.len() })
}

/// Evaluates `expr` on every monomial of degree `<= bound`, for operators
/// whose support is known to lie in `S_bound`.
pub fn extract_bounded(
    alg: &AlgebraSpec,
    expr: &OperatorExpr,
    bound: u64,
    window: u64,
) -> Result<(FiniteRankOperator, StabilizationWindow), LinalgError> {
    let mut cols = Vec::new();
    for m in alg.enumerate_basis(bound) {
        let img = expr.apply_monomial(alg, &m)?;
        cols.push((m, img));
    }
    Ok((
        FiniteRankOperator::from_columns(alg.field(), cols),
        StabilizationWindow { n_stop: bound, window, exact_bound: Some(bound) },
    ))
}

/// Trace of `expr` restricted to `u`, which must be invariant under `expr`.
pub fn trace_on_subspace(
    alg: &AlgebraSpec,
    expr: &OperatorExpr,
    u: &TruncatedSubspace,
) -> Result<Scalar, LinalgError> {
    let mut acc = alg.field().zero();
    for (p, row) in &u.rows {
        let img = expr.apply(alg, row)?;
        let coords = u.coordinates(&img).ok_or(LinalgError::NotInvariant)?;
        if let Some(c) = coords.get(p) {
            acc = &acc + c;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn kx() -> AlgebraSpec {
        AlgebraSpec::polynomial(1, Q).unwrap()
    }

    fn el(a: &AlgebraSpec, s: &str) -> Element {
        a.parse_element(s).unwrap()
    }

    #[test]
    fn span_examples() {
        let a = kx();
        let v = TruncatedSubspace::span(&[el(&a, "x + x^2"), el(&a, "x^2")], 3).unwrap();
        assert_eq!(v.dim(), 2);
        assert!(v.is_reduced());
        assert_eq!(v.basis().cloned().collect::<Vec<_>>(), vec![el(&a, "x"), el(&a, "x^2")]);
        assert_eq!(TruncatedSubspace::span(&[], 4).unwrap().dim(), 0);

        let l = AlgebraSpec::laurent(1, Q).unwrap();
        let ms: Vec<Element> = l.enumerate_basis(2).into_iter().map(|m| Element::monomial(m, Q.one())).collect();
        assert_eq!(TruncatedSubspace::span(&ms, 2).unwrap().dim(), 5);
    }

    #[test]
    fn span_rejects_high_degree() {
        let a = kx();
        assert_eq!(
            TruncatedSubspace::span(&[el(&a, "x^4")], 3),
            Err(LinalgError::DegreeExceeded { degree: 4, bound: 3 })
        );
    }

    #[test]
    fn lattice_operations() {
        let a = kx();
        let u = TruncatedSubspace::span(&[el(&a, "1"), el(&a, "x")], 2).unwrap();
        let v = TruncatedSubspace::span(&[el(&a, "x"), el(&a, "x^2")], 2).unwrap();
        assert_eq!(u.intersect(&v).unwrap().dim(), 1);
        assert_eq!(u.sum(&v).unwrap().dim(), 3);
        assert_eq!(u.quotient_dim(&v).unwrap(), 1);
        assert_eq!(v.quotient_dim(&v).unwrap(), 0);

        let l = AlgebraSpec::laurent(1, Q).unwrap();
        let u = TruncatedSubspace::span(&[el(&l, "x^-2"), el(&l, "x^-1")], 2).unwrap();
        let v = TruncatedSubspace::span(&[el(&l, "1"), el(&l, "x"), el(&l, "x^2")], 2).unwrap();
        assert_eq!(u.intersect(&v).unwrap().dim(), 0);
        assert_eq!(u.sum(&v).unwrap().dim(), 5);
    }

    #[test]
    fn intersection_of_non_monomial_spans() {
        let a = kx();
        let u = TruncatedSubspace::span(&[el(&a, "1 + x"), el(&a, "x^2")], 2).unwrap();
        let v = TruncatedSubspace::span(&[el(&a, "1 + x + x^2"), el(&a, "x")], 2).unwrap();
        let i = u.intersect(&v).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&el(&a, "1 + x + x^2")));
    }

    #[test]
    fn bound_mismatch() {
        let a = TruncatedSubspace::zero(2);
        let b = TruncatedSubspace::zero(3);
        assert!(matches!(a.sum(&b), Err(LinalgError::BoundMismatch { .. })));
    }

    #[test]
    fn trace_examples() {
        let a = kx();
        let t = FiniteRankOperator::from_columns(Q, [(Monomial::Lattice(vec![0]), el(&a, "2"))]);
        assert_eq!(t.trace(), Q.from_i64(2));
        let t = FiniteRankOperator::from_columns(
            Q,
            [(Monomial::Lattice(vec![1]), el(&a, "x^2")), (Monomial::Lattice(vec![2]), el(&a, "x"))],
        );
        assert_eq!(t.trace(), Q.zero());
        assert_eq!(t.trace_via_range(&a).unwrap(), Q.zero());
        assert_eq!(t.rank(), 2);
    }

    #[test]
    fn dumps_are_readable() {
        let a = kx();
        let t = FiniteRankOperator::from_columns(Q, [(Monomial::Lattice(vec![1]), el(&a, "x^2 - 1/2"))]);
        let d = t.dump(&a);
        assert_eq!(d.support, vec!["x"]);
        assert_eq!(d.columns["x"], a.format_element(&el(&a, "x^2 - 1/2")));
        let v = TruncatedSubspace::span(&[el(&a, "1 + x")], 2).unwrap().dump(&a);
        assert_eq!((v.dim, v.degree_bound), (1, 2));
    }

    #[test]
    fn trace_ignores_zero_columns() {
        let a = kx();
        let t = FiniteRankOperator::from_columns(
            Q,
            [(Monomial::Lattice(vec![3]), el(&a, "x^3 - 4*x")), (Monomial::Lattice(vec![5]), Element::zero())],
        );
        assert_eq!(t.support().count(), 1);
        assert_eq!(t.trace(), Q.one());
        assert_eq!(t.trace_via_range(&a).unwrap(), Q.one());
    }

    #[test]
    fn extraction_of_zero_operator() {
        let l = AlgebraSpec::laurent(1, Q).unwrap();
        let x = el(&l, "x");
        let e = OperatorExpr::difference(OperatorExpr::RightMult(x.clone()), OperatorExpr::RightMult(x), Q);
        let (t, w) = extract_finite_rank(&l, &e, 5, 40).unwrap();
        assert!(t.is_zero());
        assert_eq!(w.n_stop, 4);
    }

    #[test]
    fn extraction_of_sign_commutator() {
        let l = AlgebraSpec::laurent(1, Q).unwrap();
        let v = PatternSubspace::parse(&l, "exp(0) >= 0").unwrap();
        let e = OperatorExpr::commutator(OperatorExpr::Sign(v), OperatorExpr::RightMult(el(&l, "x")), Q);
        let (t, _) = extract_finite_rank(&l, &e, 5, 40).unwrap();
        assert_eq!(t.support().cloned().collect::<Vec<_>>(), vec![Monomial::Lattice(vec![-1])]);
        assert_eq!(t.column(&Monomial::Lattice(vec![-1])), Some(&el(&l, "2")));
        assert_eq!(t.trace(), Q.zero());
    }

    #[test]
    fn extraction_detects_infinite_support() {
        let z2 = AlgebraSpec::laurent(2, Q).unwrap();
        let v = PatternSubspace::parse(&z2, "exp(0) >= 0").unwrap();
        let e = OperatorExpr::commutator(OperatorExpr::Sign(v), OperatorExpr::RightMult(el(&z2, "x1^-1")), Q);
        assert!(matches!(extract_finite_rank(&z2, &e, 5, 25), Err(LinalgError::NotStabilized { n_max: 25, .. })));
    }
}
