//! Exact computations on filtered algebras: growth, almost-invariant
//! decompositions, cyclic cocycles and Fredholm indices.

pub mod algebra;
pub mod ends;
pub mod error;
pub mod fredholm;
pub mod growth;
pub mod lattice;
pub mod linalg;
pub mod pattern;
pub mod sample;
pub mod scalar;
pub mod suite;
mod syntax;

pub use algebra::{AlgebraSpec, Element, Family, Monomial};
pub use ends::{AlmostInvarianceCertificate, EndCountCertificate, Verdict};
pub use error::{AlgebraError, EndsError, FredholmError, LatticeError, LinalgError};
pub use fredholm::Decomposition;
pub use growth::GrowthProfile;
pub use linalg::{FiniteRankOperator, OperatorExpr, StabilizationWindow, TruncatedSubspace};
pub use pattern::{PatternSubspace, Predicate};
pub use scalar::{FieldSpec, Scalar};
