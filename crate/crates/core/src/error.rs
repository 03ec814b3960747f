use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator of {value} vanishes modulo {p}")]
    DenominatorVanishes { value: String, p: u64 },
    #[error("scalars or monomials from different algebras")]
    FieldMismatch,
    #[error("malformed scalar `{0}`")]
    BadScalar(String),
    #[error("invalid algebra presentation: {0}")]
    InvalidFamily(String),
    #[error("monomial {monomial} is not valid here: {reason}")]
    InvalidMonomial { monomial: String, reason: String },
    #[error("parse error at offset {offset}: {message}")]
    Parse { message: String, offset: usize },
    #[error("operation needs the univariate polynomial algebra K[x]")]
    NotUnivariate,
}

impl AlgebraError {
    pub(crate) fn parse(message: impl Into<String>, offset: usize) -> Self {
        AlgebraError::Parse { message: message.into(), offset }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("vector of degree {degree} exceeds truncation bound {bound}")]
    DegreeExceeded { degree: u64, bound: u64 },
    #[error("degree bounds differ: {left} vs {right}")]
    BoundMismatch { left: u64, right: u64 },
    #[error("support still growing at degree {n_max} ({support} monomials so far)")]
    NotStabilized { n_max: u64, support: usize },
    #[error("subspace is not invariant under the operator")]
    NotInvariant,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndsError {
    #[error("monomial {monomial} is claimed by parts {claimed_by:?}")]
    PartitionFailure { monomial: String, claimed_by: Vec<usize> },
    #[error("part {part} is not certified almost invariant under {generator} (defects {defects:?})")]
    CertificationFailure { part: usize, generator: String, defects: Vec<u64> },
    #[error("part {part} shows no dimension growth over the window (dims {dims:?})")]
    FiniteDimensionalPart { part: usize, dims: Vec<u64> },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("a decomposition needs at least one part")]
    NoParts,
    #[error("window {window} must satisfy 1 <= window <= N = {n}")]
    BadWindow { n: u64, window: u64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FredholmError {
    #[error("decomposition has {0} parts, expected 2")]
    NotTwoParts(usize),
    #[error("decomposition rejected: {0}")]
    Decomposition(#[from] EndsError),
    #[error("a * a_inv is not the unit")]
    NotAUnit,
    #[error("the zero polynomial has no parametrix")]
    ZeroPolynomial,
    #[error("decompositions are not equivalent at truncation (symmetric differences {0:?})")]
    NotEquivalent(Vec<u64>),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the zero element has no support")]
    ZeroElement,
    #[error("lattice diagnostics need a Laurent algebra")]
    NotLaurent,
    #[error("hypercube needs m <= t (got m = {m}, t = {t})")]
    EmptyCube { m: i64, t: i64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
