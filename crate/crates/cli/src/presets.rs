//! Built-in configurations for the standard examples.

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Polynomial ring K[x]; the parity split is expected to fail.
    Kx,
    /// Laurent polynomials K[x, x^-1] split at exponent 0.
    Laurent1,
    /// Three polynomial components split by component.
    Sigma3,
    /// Words in x, y with at most one y, split by prefixes x^k y.
    Example4,
    /// K[Z^2] with half-plane, quadrant and cofinite patterns.
    Z2,
}

const KX: &str = r#"
[algebra]
family = "polynomial"
vars = 1
field = "Q"

[subspace.EVEN]
predicate = "deg % 2 == 0"

[subspace.ODD]
predicate = "deg % 2 == 1"

[subspace.TAIL]
predicate = "deg >= 5"

[params]
N = 40
w = 5
n_max = 30
seed = 1
samples = 100
parts = ["EVEN", "ODD"]
subspace = "TAIL"
p = "x^2 + 1"
"#;

const LAURENT1: &str = r#"
[algebra]
family = "laurent"
rank = 1
field = "Q"

[subspace.V]
predicate = "exp(0) >= 0"

[subspace.W]
predicate = "exp(0) < 0"

[subspace.V3]
predicate = "exp(0) >= 3"

[params]
N = 40
w = 5
n_max = 30
seed = 1
samples = 100
parts = ["V", "W"]
subspace = "V"
alt = "V3"
a = "x"
b = "x"
"#;

const SIGMA3: &str = r#"
[algebra]
family = "direct_sum"
components = 3
field = "Q"

[subspace.C1]
predicate = "comp(1)"

[subspace.C2]
predicate = "comp(2)"

[subspace.C3]
predicate = "comp(3)"

[params]
N = 40
w = 5
n_max = 30
seed = 1
parts = ["C1", "C2", "C3"]
subspace = "C1"
"#;

const EXAMPLE4: &str = r#"
[algebra]
family = "monomial_quotient"
generators = ["x", "y"]
caps = { y = 1 }
field = "Q"

[subspace.S1]
predicate = "prefix(x*y) or {x}"

[subspace.S2]
predicate = "prefix(x^2*y) or {x^2}"

[subspace.S3]
predicate = "prefix(x^3*y) or {x^3}"

[subspace.REST]
predicate = "not (prefix(x*y) or {x} or prefix(x^2*y) or {x^2} or prefix(x^3*y) or {x^3})"

[subspace.S1X5]
predicate = "prefix(x*y) or {x, x^5}"

[params]
N = 40
w = 5
n_max = 12
seed = 1
samples = 100
parts = ["S1", "S2", "S3", "REST"]
subspace = "S1"
alt = "S1X5"
a = "x"
b = "x*y + y"
"#;

const Z2: &str = r#"
[algebra]
family = "laurent"
rank = 2
field = "Q"

[subspace.HALF]
predicate = "exp(0) >= 0"

[subspace.HALF_C]
predicate = "exp(0) < 0"

[subspace.QUADRANT]
predicate = "exp(0) >= 0 and exp(1) >= 0"

[subspace.COFINITE]
predicate = "not {(0,0), (0,1), (0,2), (1,0), (1,1), (1,2), (2,0), (2,1), (2,2)}"

[params]
N = 20
w = 5
n_max = 20
seed = 1
parts = ["HALF", "HALF_C"]
subspace = "COFINITE"
t_max = 60
t_values = [5, 10, 20]
"#;

impl Preset {
    pub fn text(self) -> &'static str {
        match self {
            Preset::Kx => KX,
            Preset::Laurent1 => LAURENT1,
            Preset::Sigma3 => SIGMA3,
            Preset::Example4 => EXAMPLE4,
            Preset::Z2 => Z2,
        }
    }

    pub fn all() -> [Preset; 5] {
        [Preset::Kx, Preset::Laurent1, Preset::Sigma3, Preset::Example4, Preset::Z2]
    }
}
