//! Randomized checks of the operator identities, shared by the test suites
//! and the command-line `property-suite`.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element};
use crate::error::{FredholmError, LinalgError};
use crate::fredholm::{coboundary, coboundary_invariance, tau, Decomposition};
use crate::linalg::{trace_on_subspace, OperatorExpr};
use crate::sample::{random_element, random_finite_rank, random_operator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub field: String,
    pub trials: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
}

impl PropertyOutcome {
    fn new(name: &str, alg: &AlgebraSpec) -> Self {
        PropertyOutcome {
            name: name.to_string(),
            field: alg.field().to_string(),
            trials: 0,
            failures: 0,
            first_counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }
}

/// `Tr(A∘B) = Tr(B∘A)` for a random operator `A` and finite-rank `B`.
/// The left side is a diagonal sum; the right side is computed on the
/// range of `B`, which `B∘A` maps into itself.
pub fn trace_symmetry<R: Rng>(alg: &AlgebraSpec, rng: &mut R, trials: usize) -> Result<PropertyOutcome, LinalgError> {
    let mut out = PropertyOutcome::new("trace_symmetry", alg);
    for _ in 0..trials {
        let a = random_operator(alg, rng, 2);
        let b = random_finite_rank(alg, rng, 3, 4);
        let ab = b.then(alg, &a)?.trace();
        let ba_expr = OperatorExpr::compose(OperatorExpr::Explicit(b.clone()), a.clone());
        let ba = trace_on_subspace(alg, &ba_expr, &b.range())?;
        out.record(ab == ba, || format!("A = {a:?}, B = {b:?}: {ab} vs {ba}"));
    }
    Ok(out)
}

fn sample<R: Rng>(alg: &AlgebraSpec, rng: &mut R) -> Element {
    random_element(alg, rng, 3, 3)
}

/// `τ(a,b) = -τ(b,a)`.
pub fn antisymmetry<R: Rng>(
    alg: &AlgebraSpec,
    d: &Decomposition,
    rng: &mut R,
    trials: usize,
) -> Result<PropertyOutcome, FredholmError> {
    let mut out = PropertyOutcome::new("antisymmetry", alg);
    for _ in 0..trials {
        let (a, b) = (sample(alg, rng), sample(alg, rng));
        let lhs = tau(alg, &a, &b, d)?;
        let rhs = tau(alg, &b, &a, d)?;
        out.record(&lhs + &rhs == alg.field().zero(), || {
            format!("a = {}, b = {}", alg.format_element(&a), alg.format_element(&b))
        });
    }
    Ok(out)
}

/// `τ(ab,c) - τ(a,bc) + τ(ca,b) = 0`.
pub fn cocycle<R: Rng>(
    alg: &AlgebraSpec,
    d: &Decomposition,
    rng: &mut R,
    trials: usize,
) -> Result<PropertyOutcome, FredholmError> {
    let mut out = PropertyOutcome::new("cocycle", alg);
    for _ in 0..trials {
        let (a, b, c) = (sample(alg, rng), sample(alg, rng), sample(alg, rng));
        let ab = alg.multiply(&a, &b)?;
        let bc = alg.multiply(&b, &c)?;
        let ca = alg.multiply(&c, &a)?;
        let total = &(&tau(alg, &ab, &c, d)? - &tau(alg, &a, &bc, d)?) + &tau(alg, &ca, &b, d)?;
        out.record(total.is_zero(), || {
            format!(
                "a = {}, b = {}, c = {}: {total}",
                alg.format_element(&a),
                alg.format_element(&b),
                alg.format_element(&c)
            )
        });
    }
    Ok(out)
}

/// `Tr(da) = 0`.
pub fn integral_of_coboundary<R: Rng>(
    alg: &AlgebraSpec,
    d: &Decomposition,
    rng: &mut R,
    trials: usize,
) -> Result<PropertyOutcome, FredholmError> {
    let mut out = PropertyOutcome::new("integral_da", alg);
    for _ in 0..trials {
        let a = sample(alg, rng);
        match coboundary(alg, &a, d) {
            Ok(c) => out.record(c.trace.is_zero(), || alg.format_element(&a)),
            Err(FredholmError::InvariantViolation(msg)) => {
                out.record(false, || format!("{}: {msg}", alg.format_element(&a)))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `τ_D - τ_D' = Tr((r_{ab} - r_{ba})(F - F'))` on random pairs.
pub fn invariance<R: Rng>(
    alg: &AlgebraSpec,
    d: &Decomposition,
    d2: &Decomposition,
    rng: &mut R,
    trials: usize,
) -> Result<PropertyOutcome, FredholmError> {
    let samples: Vec<(Element, Element)> = (0..trials).map(|_| (sample(alg, rng), sample(alg, rng))).collect();
    let report = coboundary_invariance(alg, d, d2, &samples)?;
    let mut out = PropertyOutcome::new("coboundary_invariance", alg);
    for row in &report.rows {
        out.record(row.holds, || format!("a = {}, b = {}", row.a, row.b));
    }
    Ok(out)
}
