//! TOML run configuration: algebra presentation, named subspaces,
//! parameters and output settings.

use std::collections::BTreeMap;
use std::fmt;

use ends_core::{AlgebraError, AlgebraSpec, Family, FieldSpec, PatternSubspace};
use serde::{Deserialize, Serialize};
use toml::Spanned;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(text: &str, offset: usize, message: impl Into<String>) -> ConfigError {
    let (line, column) = position(text, offset);
    ConfigError { line, column, message: message.into() }
}

/// Offset of `key = ...` inside `[section]`, for values without spans.
fn locate_key(text: &str, section: &str, key: &str) -> usize {
    let header = format!("[{section}]");
    let mut in_section = false;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            in_section = trimmed == header;
        } else if in_section {
            if let Some((k, _)) = trimmed.split_once('=') {
                if k.trim() == key {
                    return offset + line.find(trimmed).unwrap_or(0);
                }
            }
        }
        offset += line.len();
    }
    0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Subspace names forming a decomposition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<String>>,
    /// Subspace used by `defect`, `cocycle`, `winding` and `density`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace: Option<String>,
    /// Second, equivalent subspace for the invariance check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alt: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_inv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    /// Lower cube corner for `density`; `-t` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_values: Option<Vec<i64>>,
}

impl Params {
    pub fn n(&self) -> u64 {
        self.n.unwrap_or(ends_core::ends::DEFAULT_N)
    }

    pub fn w(&self) -> u64 {
        self.w.unwrap_or(ends_core::ends::DEFAULT_WINDOW)
    }

    pub fn n_max(&self) -> u64 {
        self.n_max.unwrap_or(30)
    }

    pub fn t_max(&self) -> i64 {
        self.t_max.unwrap_or(20)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(100)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    family: Spanned<String>,
    rank: Option<usize>,
    vars: Option<usize>,
    components: Option<usize>,
    generators: Option<Vec<String>>,
    caps: Option<Spanned<BTreeMap<String, u32>>>,
    forbidden: Option<Vec<Vec<String>>>,
    field: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubspace {
    predicate: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algebra: RawAlgebra,
    #[serde(default)]
    subspace: BTreeMap<String, RawSubspace>,
    #[serde(default)]
    params: Params,
    #[serde(default)]
    output: OutputSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub algebra: AlgebraSpec,
    pub subspaces: BTreeMap<String, PatternSubspace>,
    pub params: Params,
    pub output: OutputSpec,
}

pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    match s.trim() {
        "Q" | "QQ" | "rationals" => Ok(FieldSpec::Rationals),
        other => {
            let digits = other.strip_prefix('F').or_else(|| other.strip_prefix("GF")).unwrap_or(other);
            let p: u64 = digits.parse().map_err(|_| format!("unknown field `{other}` (use Q or F<p>)"))?;
            FieldSpec::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn algebra_from_raw(text: &str, raw: &RawAlgebra) -> Result<AlgebraSpec, ConfigError> {
    let field = match &raw.field {
        Some(f) => parse_field(f.get_ref()).map_err(|m| error_at(text, f.span().start, m))?,
        None => FieldSpec::Rationals,
    };
    let fam_at = raw.family.span().start;
    let need = |v: Option<usize>, key: &str| {
        v.ok_or_else(|| error_at(text, fam_at, format!("family `{}` needs `{key}`", raw.family.get_ref())))
    };
    let family = match raw.family.get_ref().as_str() {
        "polynomial" => Family::Polynomial { vars: raw.vars.unwrap_or(1) },
        "laurent" => Family::Laurent { rank: need(raw.rank, "rank")? },
        "direct_sum" => Family::DirectSumPolynomial { components: need(raw.components, "components")? },
        "monomial_quotient" => {
            let gens = raw
                .generators
                .clone()
                .ok_or_else(|| error_at(text, fam_at, "family `monomial_quotient` needs `generators`"))?;
            let index = |name: &str| gens.iter().position(|g| g == name).map(|i| i as u16);
            let mut caps = BTreeMap::new();
            if let Some(c) = &raw.caps {
                for (g, &cap) in c.get_ref() {
                    let i = index(g).ok_or_else(|| {
                        error_at(text, c.span().start, format!("cap on undeclared generator `{g}`"))
                    })?;
                    caps.insert(i, cap);
                }
            }
            let mut forbidden = Vec::new();
            for word in raw.forbidden.iter().flatten() {
                let w = word
                    .iter()
                    .map(|g| index(g))
                    .collect::<Option<Vec<u16>>>()
                    .ok_or_else(|| {
                        error_at(
                            text,
                            locate_key(text, "algebra", "forbidden"),
                            format!("forbidden word {word:?} uses an undeclared generator"),
                        )
                    })?;
                forbidden.push(w);
            }
            Family::MonomialQuotient { generators: gens, caps, forbidden }
        }
        other => return Err(error_at(text, fam_at, format!("unknown family `{other}`"))),
    };
    AlgebraSpec::new(family, field).map_err(|e| error_at(text, fam_at, e.to_string()))
}

/// Offset of a parse error inside a quoted TOML string value.
fn inner_offset(text: &str, span_start: usize, err: &AlgebraError) -> usize {
    match err {
        AlgebraError::Parse { offset, .. } => span_start + 1 + offset,
        _ => span_start,
    }
    .min(text.len())
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        error_at(text, offset, e.message().trim().to_string())
    })?;
    let algebra = algebra_from_raw(text, &raw.algebra)?;

    let mut subspaces = BTreeMap::new();
    for (name, sub) in &raw.subspace {
        let start = sub.predicate.span().start;
        let v = PatternSubspace::parse(&algebra, sub.predicate.get_ref())
            .map_err(|e| error_at(text, inner_offset(text, start, &e), format!("subspace `{name}`: {e}")))?;
        subspaces.insert(name.clone(), v);
    }

    let p = &raw.params;
    let unknown_name = |key: &str, name: &str| {
        error_at(text, locate_key(text, "params", key), format!("`{key}` names unknown subspace `{name}`"))
    };
    for name in p.parts.iter().flatten() {
        if !subspaces.contains_key(name) {
            return Err(unknown_name("parts", name));
        }
    }
    for (key, value) in [("subspace", &p.subspace), ("alt", &p.alt)] {
        if let Some(name) = value {
            if !subspaces.contains_key(name) {
                return Err(unknown_name(key, name));
            }
        }
    }
    for (key, value) in [("a", &p.a), ("a_inv", &p.a_inv), ("b", &p.b), ("p", &p.p)] {
        if let Some(src) = value {
            algebra.parse_element(src).map_err(|e| {
                let start = locate_key(text, "params", key);
                error_at(text, start, format!("`{key}`: {e}"))
            })?;
        }
    }
    if let (Some(n), Some(w)) = (p.n, p.w) {
        if w == 0 || w > n {
            return Err(error_at(text, locate_key(text, "params", "w"), format!("window {w} must be in 1..={n}")));
        }
    }
    Ok(RunConfig { algebra, subspaces, params: raw.params, output: raw.output })
}

#[derive(Serialize)]
struct RenderAlgebra {
    family: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vars: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    caps: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    forbidden: Option<Vec<Vec<String>>>,
    field: String,
}

#[derive(Serialize)]
struct RenderSubspace {
    predicate: String,
}

#[derive(Serialize)]
struct RenderConfig<'a> {
    algebra: RenderAlgebra,
    subspace: BTreeMap<&'a str, RenderSubspace>,
    params: &'a Params,
    output: &'a OutputSpec,
}

impl RunConfig {
    /// TOML text that parses back to an identical configuration.
    pub fn render(&self) -> String {
        let mut alg = RenderAlgebra {
            family: "polynomial",
            rank: None,
            vars: None,
            components: None,
            generators: None,
            caps: None,
            forbidden: None,
            field: self.algebra.field().to_string(),
        };
        match self.algebra.family() {
            Family::Polynomial { vars } => alg.vars = Some(*vars),
            Family::Laurent { rank } => {
                alg.family = "laurent";
                alg.rank = Some(*rank);
            }
            Family::DirectSumPolynomial { components } => {
                alg.family = "direct_sum";
                alg.components = Some(*components);
            }
            Family::MonomialQuotient { generators, caps, forbidden } => {
                let name = |i: &u16| generators[*i as usize].clone();
                alg.family = "monomial_quotient";
                alg.generators = Some(generators.clone());
                alg.caps = Some(caps.iter().map(|(g, c)| (name(g), *c)).collect());
                alg.forbidden = Some(forbidden.iter().map(|w| w.iter().map(name).collect()).collect());
            }
        }
        let subspace = self
            .subspaces
            .iter()
            .map(|(k, v)| (k.as_str(), RenderSubspace { predicate: v.render(&self.algebra) }))
            .collect();
        let cfg = RenderConfig { algebra: alg, subspace, params: &self.params, output: &self.output };
        toml::to_string(&cfg).expect("configuration serializes")
    }

    pub fn subspace(&self, name: &str) -> Option<&PatternSubspace> {
        self.subspaces.get(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_config() {
        let cfg = parse_config(
            "[algebra]\nfamily = \"laurent\"\nrank = 1\n\n[subspace.V]\npredicate = \"exp(0) >= 0\"\n",
        )
        .unwrap();
        assert_eq!(cfg.algebra, AlgebraSpec::laurent(1, FieldSpec::Rationals).unwrap());
        assert!(cfg.subspace("V").unwrap().contains(&ends_core::Monomial::Lattice(vec![0])));
    }

    #[test]
    fn capped_quotient_config() {
        let cfg = parse_config(
            "[algebra]\nfamily = \"monomial_quotient\"\ngenerators = [\"x\", \"y\"]\ncaps = { y = 1 }\n",
        )
        .unwrap();
        let expected = AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], FieldSpec::Rationals).unwrap();
        assert_eq!(cfg.algebra, expected);
    }

    #[test]
    fn diagnostics_are_anchored() {
        let text = "[algebra]\nfamily = \"laurent\"\nrank = 2\n\n[subspace.V]\npredicate = \"exp(3) >= 0\"\n";
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.line, 6);
        assert_eq!(err.column, 14);
        assert!(err.message.contains("subspace `V`"), "{err}");

        let err = parse_config("[algebra]\nfamily = \"tensor\"\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 10));
        assert!(err.message.contains("unknown family"));

        let err = parse_config(
            "[algebra]\nfamily = \"monomial_quotient\"\ngenerators = [\"x\"]\ncaps = { y = 1 }\n",
        )
        .unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("undeclared generator `y`"));

        let err = parse_config("[algebra]\nfamily = \"laurent\"\nrank = 1\nbogus = 3\n").unwrap_err();
        assert_eq!(err.line, 4);

        let err = parse_config("[algebra]\nfamily = \"laurent\"\nrank = 1\n[params]\nparts = [\"V\"]\n").unwrap_err();
        assert_eq!((err.line, err.column), (5, 1));
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("F7"), Ok(FieldSpec::prime(7).unwrap()));
        assert_eq!(parse_field("Q"), Ok(FieldSpec::Rationals));
        assert!(parse_field("F8").is_err());
    }
}
