//! Monomial-pattern subspaces: the span of exactly those basis monomials that
//! satisfy a predicate.
//!
//! Text syntax (whitespace-insensitive):
//!
//! ```text
//! expr  := term (("or" | "||") term)*
//! term  := unary (("and" | "&&") unary)*
//! unary := ("not" | "!") unary | atom
//! atom  := "(" expr ")" | "all" | "none"
//!        | "deg" CMP INT | "deg" "%" INT "==" INT
//!        | "exp" "(" INT ")" CMP SIGNED_INT          -- lattice families, 0-based coordinate
//!        | "comp" "(" INT ")"                        -- direct sums, 1-based component
//!        | "prefix" "(" MONOMIAL ")" | "contains" "(" GENERATOR ")"   -- word algebras
//!        | "{" MONOMIAL ("," MONOMIAL)* "}"
//! CMP   := ">=" | ">" | "<=" | "<" | "=="
//! ```

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Element, Family, Monomial};
use crate::error::AlgebraError;
use crate::linalg::TruncatedSubspace;
use crate::syntax::{Cursor, Tok};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Cmp {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Cmp {
    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Lt => lhs < rhs,
            Cmp::Eq => lhs == rhs,
        }
    }

    fn from_tok(t: &Tok) -> Option<Cmp> {
        Some(match t {
            Tok::Ge => Cmp::Ge,
            Tok::Gt => Cmp::Gt,
            Tok::Le => Cmp::Le,
            Tok::Lt => Cmp::Lt,
            Tok::EqEq => Cmp::Eq,
            _ => return None,
        })
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Eq => "==",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Predicate {
    All,
    Nothing,
    DegreeAtLeast(u64),
    DegreeAtMost(u64),
    DegreeMod { modulus: u64, residue: u64 },
    Exponent { coord: usize, cmp: Cmp, bound: i64 },
    /// 0-based component index (printed 1-based).
    Component(u32),
    WordPrefix(Vec<u16>),
    ContainsGenerator(u16),
    ExplicitSet(BTreeSet<Monomial>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Not(Box<Predicate>),
}

impl Predicate {
    pub fn and(self, other: Predicate) -> Predicate {
        Predicate::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Predicate) -> Predicate {
        Predicate::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Predicate {
        Predicate::Not(Box::new(self))
    }

    pub fn explicit<I: IntoIterator<Item = Monomial>>(ms: I) -> Predicate {
        Predicate::ExplicitSet(ms.into_iter().collect())
    }

    pub fn matches(&self, m: &Monomial) -> bool {
        match self {
            Predicate::All => true,
            Predicate::Nothing => false,
            Predicate::DegreeAtLeast(k) => m.degree() >= *k,
            Predicate::DegreeAtMost(k) => m.degree() <= *k,
            Predicate::DegreeMod { modulus, residue } => m.degree() % modulus == *residue,
            Predicate::Exponent { coord, cmp, bound } => match m {
                Monomial::Lattice(v) => v.get(*coord).is_some_and(|&e| cmp.holds(e, *bound)),
                _ => false,
            },
            Predicate::Component(c) => matches!(m, Monomial::Tagged { component, .. } if component == c),
            Predicate::WordPrefix(p) => matches!(m, Monomial::Word(w) if w.starts_with(p)),
            Predicate::ContainsGenerator(g) => matches!(m, Monomial::Word(w) if w.contains(g)),
            Predicate::ExplicitSet(s) => s.contains(m),
            Predicate::And(a, b) => a.matches(m) && b.matches(m),
            Predicate::Or(a, b) => a.matches(m) || b.matches(m),
            Predicate::Not(a) => !a.matches(m),
        }
    }

    pub fn validate(&self, alg: &AlgebraSpec) -> Result<(), AlgebraError> {
        let bad = |msg: String| Err(AlgebraError::InvalidFamily(msg));
        match self {
            Predicate::DegreeMod { modulus: 0, .. } => bad("degree modulus must be positive".into()),
            Predicate::DegreeMod { modulus, residue } if residue >= modulus => {
                bad(format!("residue {residue} out of range for modulus {modulus}"))
            }
            Predicate::Exponent { coord, .. } => match alg.rank() {
                Some(r) if *coord < r => Ok(()),
                Some(r) => bad(format!("exp({coord}) out of range for rank {r}")),
                None => bad("exp(..) needs a polynomial or Laurent algebra".into()),
            },
            Predicate::Component(c) => match alg.family() {
                Family::DirectSumPolynomial { components } if (*c as usize) < *components => Ok(()),
                Family::DirectSumPolynomial { components } => {
                    bad(format!("comp({}) out of range for {components} components", c + 1))
                }
                _ => bad("comp(..) needs a direct sum algebra".into()),
            },
            Predicate::WordPrefix(w) => {
                alg.validate_monomial(&Monomial::Word(w.clone()))?;
                Ok(())
            }
            Predicate::ContainsGenerator(g) => match alg.family() {
                Family::MonomialQuotient { generators, .. } if (*g as usize) < generators.len() => Ok(()),
                _ => bad("contains(..) needs a declared generator of a word algebra".into()),
            },
            Predicate::ExplicitSet(s) => s.iter().try_for_each(|m| alg.validate_monomial(m)),
            Predicate::And(a, b) | Predicate::Or(a, b) => {
                a.validate(alg)?;
                b.validate(alg)
            }
            Predicate::Not(a) => a.validate(alg),
            _ => Ok(()),
        }
    }

    /// A degree `D` such that for every monomial `m` of degree `> D` and every
    /// monomial `u` in the support of `multiplier`, `m` and `m*u` (when
    /// nonzero) have the same membership. `None` when no such bound exists
    /// for this predicate shape.
    pub fn stability_degree(&self, alg: &AlgebraSpec, multiplier: &Element) -> Option<u64> {
        let d = multiplier.max_degree().unwrap_or(0);
        let laurent = matches!(alg.family(), Family::Laurent { .. });
        match self {
            Predicate::All | Predicate::Nothing | Predicate::Component(_) => Some(0),
            Predicate::DegreeAtLeast(k) | Predicate::DegreeAtMost(k) => Some(k + d + 1),
            Predicate::DegreeMod { modulus, .. } => {
                let stable = multiplier.support().all(|u| {
                    if laurent {
                        u.degree() == 0
                    } else {
                        u.degree() % modulus == 0
                    }
                });
                stable.then_some(0)
            }
            Predicate::Exponent { coord, bound, .. } => {
                let moves = multiplier
                    .support()
                    .any(|u| matches!(u, Monomial::Lattice(v) if v.get(*coord).is_some_and(|&e| e != 0)));
                if !moves {
                    Some(0)
                } else if alg.rank() == Some(1) {
                    Some(bound.unsigned_abs() + d + 1)
                } else {
                    None
                }
            }
            Predicate::WordPrefix(w) => Some(w.len() as u64),
            Predicate::ContainsGenerator(g) => {
                let adds = multiplier.support().any(|u| matches!(u, Monomial::Word(w) if w.contains(g)));
                (!adds).then_some(0)
            }
            Predicate::ExplicitSet(s) => Some(s.iter().map(Monomial::degree).max().unwrap_or(0) + d + 1),
            Predicate::And(a, b) | Predicate::Or(a, b) => {
                Some(a.stability_degree(alg, multiplier)?.max(b.stability_degree(alg, multiplier)?))
            }
            Predicate::Not(a) => a.stability_degree(alg, multiplier),
        }
    }

    pub fn render(&self, alg: &AlgebraSpec) -> String {
        self.render_prec(alg, 0)
    }

    // precedence: 0 = or, 1 = and, 2 = unary
    fn render_prec(&self, alg: &AlgebraSpec, prec: u8) -> String {
        let wrap = |s: String, mine: u8| if mine < prec { format!("({s})") } else { s };
        match self {
            Predicate::All => "all".into(),
            Predicate::Nothing => "none".into(),
            Predicate::DegreeAtLeast(k) => format!("deg >= {k}"),
            Predicate::DegreeAtMost(k) => format!("deg <= {k}"),
            Predicate::DegreeMod { modulus, residue } => format!("deg % {modulus} == {residue}"),
            Predicate::Exponent { coord, cmp, bound } => format!("exp({coord}) {cmp} {bound}"),
            Predicate::Component(c) => format!("comp({})", c + 1),
            Predicate::WordPrefix(w) => format!("prefix({})", alg.format_monomial(&Monomial::Word(w.clone()))),
            Predicate::ContainsGenerator(g) => {
                format!("contains({})", alg.generator_names().get(*g as usize).cloned().unwrap_or_default())
            }
            Predicate::ExplicitSet(s) => {
                let items: Vec<String> = s.iter().map(|m| render_monomial(alg, m)).collect();
                format!("{{{}}}", items.join(", "))
            }
            Predicate::And(a, b) => {
                wrap(format!("{} and {}", a.render_prec(alg, 1), b.render_prec(alg, 2)), 1)
            }
            Predicate::Or(a, b) => wrap(format!("{} or {}", a.render_prec(alg, 0), b.render_prec(alg, 1)), 0),
            Predicate::Not(a) => format!("not {}", a.render_prec(alg, 2)),
        }
    }

    pub fn parse(alg: &AlgebraSpec, src: &str) -> Result<Predicate, AlgebraError> {
        let mut cur = Cursor::new(src)?;
        let p = parse_or(alg, &mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        p.validate(alg).map_err(|e| AlgebraError::parse(e.to_string(), 0))?;
        Ok(p)
    }
}

/// Lattice points of rank >= 2 are printed as tuples so explicit sets stay compact.
fn render_monomial(alg: &AlgebraSpec, m: &Monomial) -> String {
    match m {
        Monomial::Lattice(v) if v.len() >= 2 => {
            let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
            format!("({})", parts.join(","))
        }
        _ => alg.format_monomial(m),
    }
}

fn is_kw(cur: &Cursor, kw: &str) -> bool {
    matches!(cur.peek(), Some(Tok::Ident(s)) if s == kw)
}

fn parse_or(alg: &AlgebraSpec, cur: &mut Cursor) -> Result<Predicate, AlgebraError> {
    let mut lhs = parse_and(alg, cur)?;
    loop {
        if is_kw(cur, "or") || cur.peek() == Some(&Tok::OrOr) {
            cur.next();
            lhs = lhs.or(parse_and(alg, cur)?);
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_and(alg: &AlgebraSpec, cur: &mut Cursor) -> Result<Predicate, AlgebraError> {
    let mut lhs = parse_unary(alg, cur)?;
    loop {
        if is_kw(cur, "and") || cur.peek() == Some(&Tok::AndAnd) {
            cur.next();
            lhs = lhs.and(parse_unary(alg, cur)?);
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_unary(alg: &AlgebraSpec, cur: &mut Cursor) -> Result<Predicate, AlgebraError> {
    if is_kw(cur, "not") || cur.peek() == Some(&Tok::Bang) {
        cur.next();
        return Ok(parse_unary(alg, cur)?.not());
    }
    parse_atom(alg, cur)
}

fn unsigned(cur: &mut Cursor) -> Result<u64, AlgebraError> {
    match cur.next() {
        Some(Tok::Int(n)) => Ok(n),
        _ => Err(cur.error("expected nonnegative integer")),
    }
}

fn parse_atom(alg: &AlgebraSpec, cur: &mut Cursor) -> Result<Predicate, AlgebraError> {
    let start = cur.offset();
    let at = |e: AlgebraError| match e {
        AlgebraError::Parse { .. } => e,
        other => AlgebraError::parse(other.to_string(), start),
    };
    match cur.next() {
        Some(Tok::LParen) => {
            let p = parse_or(alg, cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(p)
        }
        Some(Tok::LBrace) => {
            let mut set = BTreeSet::new();
            if !cur.eat(&Tok::RBrace) {
                loop {
                    set.insert(alg.parse_monomial_at(cur)?);
                    if cur.eat(&Tok::RBrace) {
                        break;
                    }
                    cur.expect(&Tok::Comma, "`,` or `}`")?;
                }
            }
            Ok(Predicate::ExplicitSet(set))
        }
        Some(Tok::Ident(kw)) => match kw.as_str() {
            "all" => Ok(Predicate::All),
            "none" => Ok(Predicate::Nothing),
            "deg" => {
                if cur.eat(&Tok::Percent) {
                    let modulus = unsigned(cur)?;
                    cur.expect(&Tok::EqEq, "`==`")?;
                    let residue = unsigned(cur)?;
                    let p = Predicate::DegreeMod { modulus, residue };
                    p.validate(alg).map_err(at)?;
                    return Ok(p);
                }
                let cmp = cur.next().as_ref().and_then(Cmp::from_tok).ok_or_else(|| cur.error("expected comparison"))?;
                let k = unsigned(cur)?;
                Ok(match cmp {
                    Cmp::Ge => Predicate::DegreeAtLeast(k),
                    Cmp::Gt => Predicate::DegreeAtLeast(k + 1),
                    Cmp::Le => Predicate::DegreeAtMost(k),
                    Cmp::Lt if k == 0 => Predicate::Nothing,
                    Cmp::Lt => Predicate::DegreeAtMost(k - 1),
                    Cmp::Eq => Predicate::DegreeAtLeast(k).and(Predicate::DegreeAtMost(k)),
                })
            }
            "exp" => {
                cur.expect(&Tok::LParen, "`(`")?;
                let coord = unsigned(cur)? as usize;
                cur.expect(&Tok::RParen, "`)`")?;
                let cmp = cur.next().as_ref().and_then(Cmp::from_tok).ok_or_else(|| cur.error("expected comparison"))?;
                let bound = cur.signed_int()?;
                let p = Predicate::Exponent { coord, cmp, bound };
                p.validate(alg).map_err(at)?;
                Ok(p)
            }
            "comp" => {
                cur.expect(&Tok::LParen, "`(`")?;
                let c = unsigned(cur)?;
                cur.expect(&Tok::RParen, "`)`")?;
                if c == 0 {
                    return Err(AlgebraError::parse("components are numbered from 1", start));
                }
                let p = Predicate::Component((c - 1) as u32);
                p.validate(alg).map_err(at)?;
                Ok(p)
            }
            "prefix" => {
                cur.expect(&Tok::LParen, "`(`")?;
                let m = alg.parse_monomial_at(cur)?;
                cur.expect(&Tok::RParen, "`)`")?;
                match m {
                    Monomial::Word(w) => Ok(Predicate::WordPrefix(w)),
                    _ => Err(AlgebraError::parse("prefix(..) needs a word algebra", start)),
                }
            }
            "contains" => {
                cur.expect(&Tok::LParen, "`(`")?;
                let name = match cur.next() {
                    Some(Tok::Ident(n)) => n,
                    _ => return Err(cur.error("expected generator name")),
                };
                cur.expect(&Tok::RParen, "`)`")?;
                let idx = match alg.family() {
                    Family::MonomialQuotient { generators, .. } => generators.iter().position(|g| *g == name),
                    _ => None,
                }
                .ok_or_else(|| AlgebraError::parse(format!("unknown generator `{name}`"), start))?;
                Ok(Predicate::ContainsGenerator(idx as u16))
            }
            other => Err(AlgebraError::parse(format!("unknown predicate `{other}`"), start)),
        },
        _ => Err(AlgebraError::parse("expected a predicate", start)),
    }
}

/// A subspace spanned by the basis monomials that satisfy a predicate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PatternSubspace {
    predicate: Predicate,
}

impl PatternSubspace {
    pub fn new(alg: &AlgebraSpec, predicate: Predicate) -> Result<Self, AlgebraError> {
        predicate.validate(alg)?;
        Ok(PatternSubspace { predicate })
    }

    pub fn parse(alg: &AlgebraSpec, src: &str) -> Result<Self, AlgebraError> {
        Ok(PatternSubspace { predicate: Predicate::parse(alg, src)? })
    }

    pub fn whole() -> Self {
        PatternSubspace { predicate: Predicate::All }
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.predicate.matches(m)
    }

    pub fn complement(&self) -> Self {
        PatternSubspace { predicate: self.predicate.clone().not() }
    }

    /// Projection of an element onto this subspace along the complementary pattern.
    pub fn project(&self, e: &Element) -> Element {
        e.iter().filter(|(m, _)| self.contains(m)).map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    /// `V ∩ S_n` as an echelon subspace (monomial rows are already reduced).
    pub fn truncate(&self, alg: &AlgebraSpec, n: u64) -> TruncatedSubspace {
        TruncatedSubspace::from_monomials(
            alg.field(),
            n,
            alg.enumerate_basis(n).into_iter().filter(|m| self.contains(m)),
        )
    }

    /// `dim(V ∩ S_d)` for `d = 0..=n`.
    pub fn dimensions(&self, alg: &AlgebraSpec, n: u64) -> Vec<u64> {
        let mut dims = Vec::with_capacity(n as usize + 1);
        let mut acc = 0;
        for d in 0..=n {
            acc += alg.degree_block(d).iter().filter(|m| self.contains(m)).count() as u64;
            dims.push(acc);
        }
        dims
    }

    pub fn render(&self, alg: &AlgebraSpec) -> String {
        self.predicate.render(alg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn l1() -> AlgebraSpec {
        AlgebraSpec::laurent(1, FieldSpec::Rationals).unwrap()
    }

    #[test]
    fn parse_render_round_trip() {
        let a4 = AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], FieldSpec::Rationals).unwrap();
        for src in [
            "prefix(x*y) or {x}",
            "not (prefix(x*y) or {x} or prefix(x^2*y) or {x^2})",
            "contains(y) and deg >= 3",
            "deg % 2 == 1 or all",
        ] {
            let p = Predicate::parse(&a4, src).unwrap();
            assert_eq!(Predicate::parse(&a4, &p.render(&a4)).unwrap(), p, "{src}");
        }
        let z2 = AlgebraSpec::laurent(2, FieldSpec::Rationals).unwrap();
        let p = Predicate::parse(&z2, "not {(0,0), (1,-2)} and exp(1) < 4").unwrap();
        assert_eq!(Predicate::parse(&z2, &p.render(&z2)).unwrap(), p);
    }

    #[test]
    fn membership() {
        let a = l1();
        let v = PatternSubspace::parse(&a, "exp(0) >= 0").unwrap();
        assert!(v.contains(&Monomial::Lattice(vec![0])));
        assert!(!v.contains(&Monomial::Lattice(vec![-1])));
        assert!(v.complement().contains(&Monomial::Lattice(vec![-1])));
    }

    #[test]
    fn out_of_range_coordinate_is_diagnosed() {
        let z2 = AlgebraSpec::laurent(2, FieldSpec::Rationals).unwrap();
        let err = Predicate::parse(&z2, "exp(3) >= 0").unwrap_err();
        assert!(matches!(err, AlgebraError::Parse { offset: 0, .. }), "{err:?}");
        assert!(Predicate::parse(&z2, "exp(0) >= 0 and comp(1)").is_err());
        assert!(Predicate::parse(&z2, "exp(0) >=").is_err());
    }

    #[test]
    fn strict_degree_forms() {
        let kx = AlgebraSpec::polynomial(1, FieldSpec::Rationals).unwrap();
        assert_eq!(Predicate::parse(&kx, "deg < 0").unwrap(), Predicate::Nothing);
        assert_eq!(Predicate::parse(&kx, "deg > 4").unwrap(), Predicate::DegreeAtLeast(5));
    }

    #[test]
    fn dimensions_track_truncation() {
        let kx = AlgebraSpec::polynomial(1, FieldSpec::Rationals).unwrap();
        let even = PatternSubspace::parse(&kx, "deg % 2 == 0").unwrap();
        assert_eq!(even.dimensions(&kx, 5), vec![1, 1, 2, 2, 3, 3]);
        assert_eq!(even.truncate(&kx, 5).dim(), 3);
    }
}
