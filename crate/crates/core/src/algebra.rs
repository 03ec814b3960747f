//! Monomial bases, structure constants and element arithmetic for the
//! supported algebra families.
//!
//! Every family has a multiplicative basis: the product of two basis
//! monomials is either another basis monomial (coefficient 1) or zero.
//! The filtration degree of a monomial is its word length in the fixed
//! generating set, so `S_n` is the span of the monomials of degree `<= n`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::scalar::{FieldSpec, Scalar};
use crate::syntax::{Cursor, Tok};

/// A basis label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Monomial {
    /// A word in the generators, already in normal form.
    Word(Vec<u16>),
    /// An exponent vector (polynomial and Laurent families).
    Lattice(Vec<i64>),
    /// `e_component * x^exponent` in a direct sum of polynomial rings.
    Tagged { component: u32, exponent: u64 },
}

impl Monomial {
    pub fn degree(&self) -> u64 {
        match self {
            Monomial::Word(w) => w.len() as u64,
            Monomial::Lattice(v) => v.iter().map(|e| e.unsigned_abs()).sum(),
            Monomial::Tagged { exponent, .. } => *exponent,
        }
    }

    fn kind(&self) -> u8 {
        match self {
            Monomial::Word(_) => 0,
            Monomial::Lattice(_) => 1,
            Monomial::Tagged { .. } => 2,
        }
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Monomial::Word(a), Monomial::Word(b)) => a.cmp(b),
            (Monomial::Lattice(a), Monomial::Lattice(b)) => a.cmp(b),
            (
                Monomial::Tagged { component: c1, exponent: e1 },
                Monomial::Tagged { component: c2, exponent: e2 },
            ) => (c1, e1).cmp(&(c2, e2)),
            _ => self.kind().cmp(&other.kind()),
        }
    }
}

/// Global monomial order: degree first, then lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Commutative polynomials `K[x_1, ..., x_vars]`.
    Polynomial { vars: usize },
    /// The group algebra `K[Z^rank]`.
    Laurent { rank: usize },
    /// `K[x] (+) ... (+) K[x]` with `components` orthogonal summands.
    DirectSumPolynomial { components: usize },
    /// Free algebra on named generators modulo a monomial ideal given by
    /// per-generator occurrence caps and forbidden subwords.
    MonomialQuotient {
        generators: Vec<String>,
        caps: BTreeMap<u16, u32>,
        forbidden: Vec<Vec<u16>>,
    },
}

/// A concrete algebra: family plus ground field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    family: Family,
    field: FieldSpec,
}

impl AlgebraSpec {
    pub fn new(family: Family, field: FieldSpec) -> Result<Self, AlgebraError> {
        field.validate()?;
        let bad = |m: &str| Err(AlgebraError::InvalidFamily(m.to_string()));
        match &family {
            Family::Polynomial { vars: 0 } => return bad("polynomial ring needs at least one variable"),
            Family::Laurent { rank: 0 } => return bad("Laurent rank must be positive"),
            Family::DirectSumPolynomial { components: 0 } => return bad("direct sum needs a component"),
            Family::MonomialQuotient { generators, caps, forbidden } => {
                if generators.is_empty() {
                    return bad("monomial quotient needs generators");
                }
                for (i, g) in generators.iter().enumerate() {
                    let ok = g.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return bad(&format!("generator name `{g}` is not an identifier"));
                    }
                    if generators[..i].contains(g) {
                        return bad(&format!("duplicate generator `{g}`"));
                    }
                }
                if caps.keys().any(|&g| g as usize >= generators.len()) {
                    return bad("cap on undeclared generator");
                }
                for w in forbidden {
                    if w.is_empty() || w.iter().any(|&g| g as usize >= generators.len()) {
                        return bad("forbidden words must be nonempty words in the generators");
                    }
                }
            }
            _ => {}
        }
        Ok(AlgebraSpec { family, field })
    }

    pub fn polynomial(vars: usize, field: FieldSpec) -> Result<Self, AlgebraError> {
        Self::new(Family::Polynomial { vars }, field)
    }

    pub fn laurent(rank: usize, field: FieldSpec) -> Result<Self, AlgebraError> {
        Self::new(Family::Laurent { rank }, field)
    }

    pub fn direct_sum(components: usize, field: FieldSpec) -> Result<Self, AlgebraError> {
        Self::new(Family::DirectSumPolynomial { components }, field)
    }

    pub fn monomial_quotient(
        generators: &[&str],
        caps: &[(&str, u32)],
        forbidden: &[&[&str]],
        field: FieldSpec,
    ) -> Result<Self, AlgebraError> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let index = |g: &str| {
            names
                .iter()
                .position(|n| n == g)
                .map(|i| i as u16)
                .ok_or_else(|| AlgebraError::InvalidFamily(format!("undeclared generator `{g}`")))
        };
        let caps = caps
            .iter()
            .map(|(g, c)| Ok((index(g)?, *c)))
            .collect::<Result<BTreeMap<_, _>, AlgebraError>>()?;
        let forbidden = forbidden
            .iter()
            .map(|w| w.iter().map(|g| index(g)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(Family::MonomialQuotient { generators: names, caps, forbidden }, field)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_commutative(&self) -> bool {
        match &self.family {
            Family::MonomialQuotient { generators, .. } => generators.len() == 1,
            _ => true,
        }
    }

    /// Number of lattice coordinates for polynomial and Laurent families.
    pub fn rank(&self) -> Option<usize> {
        match self.family {
            Family::Polynomial { vars } => Some(vars),
            Family::Laurent { rank } => Some(rank),
            _ => None,
        }
    }

    pub fn unit_monomial(&self) -> Option<Monomial> {
        match &self.family {
            Family::Polynomial { vars } => Some(Monomial::Lattice(vec![0; *vars])),
            Family::Laurent { rank } => Some(Monomial::Lattice(vec![0; *rank])),
            Family::DirectSumPolynomial { .. } => None,
            Family::MonomialQuotient { .. } => Some(Monomial::Word(Vec::new())),
        }
    }

    /// The unit element; `e_1 + ... + e_n` for direct sums.
    pub fn one(&self) -> Element {
        match &self.family {
            Family::DirectSumPolynomial { components } => (0..*components as u32)
                .map(|c| (Monomial::Tagged { component: c, exponent: 0 }, self.field.one()))
                .collect(),
            _ => Element::monomial(self.unit_monomial().expect("unit monomial"), self.field.one()),
        }
    }

    /// The non-unit monomials of the degree-one generating set `S_1`.
    pub fn generators(&self) -> Vec<Monomial> {
        self.degree_block(1)
            .into_iter()
            .chain(match &self.family {
                Family::DirectSumPolynomial { .. } => self.degree_block(0),
                _ => Vec::new(),
            })
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn validate_monomial(&self, m: &Monomial) -> Result<(), AlgebraError> {
        let invalid = |reason: &str| {
            Err(AlgebraError::InvalidMonomial { monomial: format!("{m:?}"), reason: reason.to_string() })
        };
        match (&self.family, m) {
            (Family::Polynomial { vars }, Monomial::Lattice(v)) => {
                if v.len() != *vars {
                    invalid("wrong number of exponents")
                } else if v.iter().any(|&e| e < 0) {
                    invalid("negative exponent in a polynomial ring")
                } else {
                    Ok(())
                }
            }
            (Family::Laurent { rank }, Monomial::Lattice(v)) => {
                if v.len() == *rank {
                    Ok(())
                } else {
                    invalid("lattice point length differs from the rank")
                }
            }
            (Family::DirectSumPolynomial { components }, Monomial::Tagged { component, .. }) => {
                if (*component as usize) < *components {
                    Ok(())
                } else {
                    invalid("component index out of range")
                }
            }
            (Family::MonomialQuotient { generators, .. }, Monomial::Word(w)) => {
                if w.iter().any(|&g| g as usize >= generators.len()) {
                    invalid("unknown generator index")
                } else if !self.is_normal_word(w) {
                    invalid("word contains a forbidden pattern")
                } else {
                    Ok(())
                }
            }
            _ => Err(AlgebraError::FieldMismatch),
        }
    }

    fn is_normal_word(&self, w: &[u16]) -> bool {
        let Family::MonomialQuotient { caps, forbidden, .. } = &self.family else {
            return false;
        };
        for (&g, &cap) in caps {
            if w.iter().filter(|&&x| x == g).count() > cap as usize {
                return false;
            }
        }
        !forbidden.iter().any(|f| f.len() <= w.len() && w.windows(f.len()).any(|win| win == f.as_slice()))
    }

    /// Product of two basis monomials: `Some((1, m))` or `None` when it vanishes.
    pub fn multiply_basis(
        &self,
        a: &Monomial,
        b: &Monomial,
    ) -> Result<Option<(Scalar, Monomial)>, AlgebraError> {
        let product = match (&self.family, a, b) {
            (Family::Polynomial { .. } | Family::Laurent { .. }, Monomial::Lattice(x), Monomial::Lattice(y))
                if x.len() == y.len() =>
            {
                Some(Monomial::Lattice(x.iter().zip(y).map(|(p, q)| p + q).collect()))
            }
            (
                Family::DirectSumPolynomial { .. },
                Monomial::Tagged { component: c1, exponent: e1 },
                Monomial::Tagged { component: c2, exponent: e2 },
            ) => (c1 == c2).then(|| Monomial::Tagged { component: *c1, exponent: e1 + e2 }),
            (Family::MonomialQuotient { .. }, Monomial::Word(x), Monomial::Word(y)) => {
                let mut w = Vec::with_capacity(x.len() + y.len());
                w.extend_from_slice(x);
                w.extend_from_slice(y);
                self.is_normal_word(&w).then_some(Monomial::Word(w))
            }
            _ => return Err(AlgebraError::FieldMismatch),
        };
        Ok(product.map(|m| (self.field.one(), m)))
    }

    /// Bilinear extension of [`multiply_basis`](Self::multiply_basis).
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (ma, ca) in a.iter() {
            for (mb, cb) in b.iter() {
                if let Some((c, m)) = self.multiply_basis(ma, mb)? {
                    out.add_term(m, &(ca * cb) * &c);
                }
            }
        }
        Ok(out)
    }

    /// Basis monomials of degree exactly `d`, in the global order.
    pub fn degree_block(&self, d: u64) -> Vec<Monomial> {
        let mut block: Vec<Monomial> = match &self.family {
            Family::Polynomial { vars } => {
                let mut out = Vec::new();
                compositions(*vars, d as i64, false, &mut Vec::new(), &mut out);
                out.into_iter().map(Monomial::Lattice).collect()
            }
            Family::Laurent { rank } => {
                let mut out = Vec::new();
                compositions(*rank, d as i64, true, &mut Vec::new(), &mut out);
                out.into_iter().map(Monomial::Lattice).collect()
            }
            Family::DirectSumPolynomial { components } => (0..*components as u32)
                .map(|c| Monomial::Tagged { component: c, exponent: d })
                .collect(),
            Family::MonomialQuotient { generators, .. } => {
                let mut level: Vec<Vec<u16>> = vec![Vec::new()];
                for _ in 0..d {
                    let mut next = Vec::new();
                    for w in &level {
                        for g in 0..generators.len() as u16 {
                            let mut ext = w.clone();
                            ext.push(g);
                            if self.is_normal_word(&ext) {
                                next.push(ext);
                            }
                        }
                    }
                    level = next;
                }
                level.into_iter().map(Monomial::Word).collect()
            }
        };
        block.sort();
        block
    }

    /// All monomials of degree `<= n`, ordered by degree then lexicographically.
    pub fn enumerate_basis(&self, n: u64) -> Vec<Monomial> {
        match &self.family {
            // Reuse the previous level instead of regenerating every block.
            Family::MonomialQuotient { generators, .. } => {
                let mut out = vec![Monomial::Word(Vec::new())];
                let mut level: Vec<Vec<u16>> = vec![Vec::new()];
                for _ in 0..n {
                    let mut next = Vec::new();
                    for w in &level {
                        for g in 0..generators.len() as u16 {
                            let mut ext = w.clone();
                            ext.push(g);
                            if self.is_normal_word(&ext) {
                                next.push(ext);
                            }
                        }
                    }
                    out.extend(next.iter().cloned().map(Monomial::Word));
                    level = next;
                }
                out
            }
            _ => (0..=n).flat_map(|d| self.degree_block(d)).collect(),
        }
    }

    /// Names used when printing and parsing generators.
    pub fn generator_names(&self) -> Vec<String> {
        match &self.family {
            Family::Polynomial { vars: n } | Family::Laurent { rank: n } => {
                if *n == 1 {
                    vec!["x".to_string()]
                } else {
                    (1..=*n).map(|i| format!("x{i}")).collect()
                }
            }
            Family::DirectSumPolynomial { components } => {
                let mut v: Vec<String> = (1..=*components).map(|i| format!("e{i}")).collect();
                v.push("x".to_string());
                v
            }
            Family::MonomialQuotient { generators, .. } => generators.clone(),
        }
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let power = |name: &str, e: i64| if e == 1 { name.to_string() } else { format!("{name}^{e}") };
        match m {
            Monomial::Lattice(v) => {
                let names = self.generator_names();
                let parts: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| power(names.get(i).map_or("x", |s| s.as_str()), e))
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("*")
                }
            }
            Monomial::Tagged { component, exponent } => {
                let e = format!("e{}", component + 1);
                match exponent {
                    0 => e,
                    k => format!("{e}*{}", power("x", *k as i64)),
                }
            }
            Monomial::Word(w) => {
                if w.is_empty() {
                    return "1".into();
                }
                let names = self.generator_names();
                let mut parts = Vec::new();
                let mut i = 0;
                while i < w.len() {
                    let mut j = i;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    let name = names.get(w[i] as usize).map_or("?", |s| s.as_str());
                    parts.push(power(name, (j - i) as i64));
                    i = j;
                }
                parts.join("*")
            }
        }
    }

    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in e.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mag.is_one() {
                out.push_str(&mono);
            } else if mono == "1" && self.unit_monomial().as_ref() == Some(m) {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }

    /// Parses an element such as `x^2 - 3/2*x^-1 + 1`.
    pub fn parse_element(&self, src: &str) -> Result<Element, AlgebraError> {
        let mut cur = Cursor::new(src)?;
        let e = self.parse_element_at(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Parses a single basis monomial such as `x^2*y` or `(1,-2)`.
    pub fn parse_monomial(&self, src: &str) -> Result<Monomial, AlgebraError> {
        let mut cur = Cursor::new(src)?;
        let m = self.parse_monomial_at(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(m)
    }

    pub(crate) fn parse_monomial_at(&self, cur: &mut Cursor) -> Result<Monomial, AlgebraError> {
        let start = cur.offset();
        let e = self.parse_term(cur)?;
        match e.terms.len() {
            1 => {
                let (m, c) = e.iter().next().expect("one term");
                if c.is_one() {
                    return Ok(m.clone());
                }
                Err(AlgebraError::parse("expected a basis monomial without coefficient", start))
            }
            _ => Err(AlgebraError::parse("expected a single basis monomial", start)),
        }
    }

    pub(crate) fn parse_element_at(&self, cur: &mut Cursor) -> Result<Element, AlgebraError> {
        let mut total = Element::zero();
        let mut negate = cur.eat(&Tok::Minus);
        if !negate {
            cur.eat(&Tok::Plus);
        }
        loop {
            let term = self.parse_term(cur)?;
            total = if negate { &total - &term } else { &total + &term };
            if cur.eat(&Tok::Plus) {
                negate = false;
            } else if cur.eat(&Tok::Minus) {
                negate = true;
            } else {
                break;
            }
        }
        Ok(total)
    }

    fn parse_term(&self, cur: &mut Cursor) -> Result<Element, AlgebraError> {
        let mut coeff = self.field.one();
        let mut acc = self.one();
        loop {
            let offset = cur.offset();
            match cur.peek().cloned() {
                Some(Tok::Int(n)) => {
                    cur.next();
                    let mut text = n.to_string();
                    if cur.eat(&Tok::Slash) {
                        match cur.next() {
                            Some(Tok::Int(d)) => text = format!("{n}/{d}"),
                            _ => return Err(AlgebraError::parse("expected denominator", cur.offset())),
                        }
                    }
                    let c = self
                        .field
                        .parse_scalar(&text)
                        .map_err(|e| AlgebraError::parse(e.to_string(), offset))?;
                    coeff = &coeff * &c;
                }
                Some(Tok::LParen) => {
                    cur.next();
                    let mut v = vec![cur.signed_int()?];
                    while cur.eat(&Tok::Comma) {
                        v.push(cur.signed_int()?);
                    }
                    cur.expect(&Tok::RParen, "`)`")?;
                    let m = Monomial::Lattice(v);
                    self.validate_monomial(&m).map_err(|e| AlgebraError::parse(e.to_string(), offset))?;
                    acc = self.multiply(&acc, &Element::monomial(m, self.field.one()))?;
                }
                Some(Tok::Ident(name)) => {
                    cur.next();
                    let exp = if cur.eat(&Tok::Caret) { cur.signed_int()? } else { 1 };
                    let factor = self
                        .generator_power(&name, exp)
                        .map_err(|e| AlgebraError::parse(e.to_string(), offset))?;
                    acc = self.multiply(&acc, &factor)?;
                }
                _ => return Err(AlgebraError::parse("expected a term", offset)),
            }
            if !cur.eat(&Tok::Star) {
                break;
            }
        }
        Ok(acc.scaled(&coeff))
    }

    fn generator_power(&self, name: &str, exp: i64) -> Result<Element, AlgebraError> {
        let names = self.generator_names();
        let unknown = || AlgebraError::InvalidMonomial {
            monomial: name.to_string(),
            reason: "unknown generator".into(),
        };
        let one = self.field.one();
        match &self.family {
            Family::Polynomial { vars: n } | Family::Laurent { rank: n } => {
                let idx = if *n == 1 && name == "x" {
                    0
                } else {
                    names.iter().position(|s| s == name).ok_or_else(unknown)?
                };
                let mut v = vec![0; *n];
                v[idx] = exp;
                let m = Monomial::Lattice(v);
                self.validate_monomial(&m)?;
                Ok(Element::monomial(m, one))
            }
            Family::DirectSumPolynomial { components } => {
                if exp < 0 {
                    return Err(AlgebraError::InvalidMonomial {
                        monomial: format!("{name}^{exp}"),
                        reason: "negative exponent".into(),
                    });
                }
                if name == "x" {
                    Ok((0..*components as u32)
                        .map(|c| (Monomial::Tagged { component: c, exponent: exp as u64 }, one.clone()))
                        .collect())
                } else {
                    let idx = names[..*components].iter().position(|s| s == name).ok_or_else(unknown)?;
                    // e_i is idempotent
                    Ok(Element::monomial(Monomial::Tagged { component: idx as u32, exponent: 0 }, one))
                }
            }
            Family::MonomialQuotient { .. } => {
                let idx = names.iter().position(|s| s == name).ok_or_else(unknown)? as u16;
                if exp < 0 {
                    return Err(AlgebraError::InvalidMonomial {
                        monomial: format!("{name}^{exp}"),
                        reason: "negative exponent".into(),
                    });
                }
                let w = vec![idx; exp as usize];
                if !self.is_normal_word(&w) {
                    return Ok(Element::zero());
                }
                Ok(Element::monomial(Monomial::Word(w), one))
            }
        }
    }

    /// Division with remainder in `K[x]`: returns `(q, r)` with `f = q*p + r`, `deg r < deg p`.
    pub fn divide_univariate(&self, f: &Element, p: &Element) -> Result<(Element, Element), AlgebraError> {
        if self.family != (Family::Polynomial { vars: 1 }) {
            return Err(AlgebraError::NotUnivariate);
        }
        let (lead_m, lead_c) = p.leading().ok_or_else(|| AlgebraError::BadScalar("division by zero".into()))?;
        let dp = lead_m.degree();
        let lead_inv = lead_c.inv().expect("nonzero leading coefficient");
        let mut q = Element::zero();
        let mut r = f.clone();
        while let Some((m, c)) = r.leading() {
            let dr = m.degree();
            if dr < dp {
                break;
            }
            let shift = Monomial::Lattice(vec![(dr - dp) as i64]);
            let factor = c * &lead_inv;
            let step = self.multiply(&Element::monomial(shift.clone(), factor.clone()), p)?;
            q.add_term(shift, factor);
            r = &r - &step;
        }
        Ok((q, r))
    }
}

/// Vectors of length `len` with l1 norm `total`; nonnegative unless `signed`.
fn compositions(len: usize, total: i64, signed: bool, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if len == 1 {
        let mut push = |v: i64| {
            let mut p = prefix.clone();
            p.push(v);
            out.push(p);
        };
        if signed && total > 0 {
            push(-total);
        }
        push(total);
        return;
    }
    let lo = if signed { -total } else { 0 };
    for v in lo..=total {
        prefix.push(v);
        compositions(len - 1, total - v.abs(), signed, prefix, out);
        prefix.pop();
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Word(w) => write!(f, "w{w:?}"),
            Monomial::Lattice(v) => write!(f, "{v:?}"),
            Monomial::Tagged { component, exponent } => write!(f, "e{}x^{}", component + 1, exponent),
        }
    }
}

/// A finite linear combination of basis monomials with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &Element) {
        for (m, v) in other.iter() {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    /// The largest monomial in the global order and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn max_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn scaled(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    /// Reduction of every coefficient modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (m, c) in self.iter() {
            out.add_term(m.clone(), c.reduce_mod(p)?);
        }
        Ok(out)
    }
}

impl FromIterator<(Monomial, Scalar)> for Element {
    fn from_iter<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut e = Element::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

impl<'a> std::ops::Add for &'a Element {
    type Output = Element;
    fn add(self, rhs: &'a Element) -> Element {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &'a Element) -> Element {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&(m, c))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn xy() -> AlgebraSpec {
        AlgebraSpec::monomial_quotient(&["x", "y"], &[("y", 1)], &[], q()).unwrap()
    }

    #[test]
    fn laurent_exponents_add() {
        let a = AlgebraSpec::laurent(1, q()).unwrap();
        let p = a.multiply_basis(&Monomial::Lattice(vec![2]), &Monomial::Lattice(vec![-3])).unwrap();
        assert_eq!(p, Some((q().one(), Monomial::Lattice(vec![-1]))));
    }

    #[test]
    fn capped_word_product_vanishes() {
        let a = xy();
        let xy_word = Monomial::Word(vec![0, 1]);
        let y = Monomial::Word(vec![1]);
        assert_eq!(a.multiply_basis(&xy_word, &y).unwrap(), None);
    }

    #[test]
    fn direct_sum_components_are_orthogonal() {
        let a = AlgebraSpec::direct_sum(2, q()).unwrap();
        let l = Monomial::Tagged { component: 0, exponent: 2 };
        let r = Monomial::Tagged { component: 1, exponent: 1 };
        assert_eq!(a.multiply_basis(&l, &r).unwrap(), None);
    }

    #[test]
    fn mismatched_labels_error() {
        let a = AlgebraSpec::laurent(1, q()).unwrap();
        assert!(a.multiply_basis(&Monomial::Word(vec![]), &Monomial::Lattice(vec![1])).is_err());
    }

    #[test]
    fn element_products() {
        let kx = AlgebraSpec::polynomial(1, q()).unwrap();
        let a = kx.parse_element("1 + x").unwrap();
        let b = kx.parse_element("1 - x").unwrap();
        assert_eq!(kx.multiply(&a, &b).unwrap(), kx.parse_element("1 - x^2").unwrap());

        let l = AlgebraSpec::laurent(1, q()).unwrap();
        let s = l.parse_element("x + x^-1").unwrap();
        assert_eq!(l.multiply(&s, &s).unwrap(), l.parse_element("x^2 + 2 + x^-2").unwrap());

        let a4 = xy();
        let s = a4.parse_element("x + y").unwrap();
        assert_eq!(a4.multiply(&s, &s).unwrap(), a4.parse_element("x^2 + x*y + y*x").unwrap());
    }

    #[test]
    fn enumerations() {
        let kx = AlgebraSpec::polynomial(1, q()).unwrap();
        let b = kx.enumerate_basis(3);
        assert_eq!(b.len(), 4);
        assert_eq!(b, (0..=3).map(|k| Monomial::Lattice(vec![k])).collect::<Vec<_>>());

        let l = AlgebraSpec::laurent(1, q()).unwrap();
        let b = l.enumerate_basis(2);
        let mut as_set: Vec<i64> = b
            .iter()
            .map(|m| match m {
                Monomial::Lattice(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        as_set.sort();
        assert_eq!(as_set, vec![-2, -1, 0, 1, 2]);

        let a4 = xy();
        let words: Vec<String> = a4.enumerate_basis(2).iter().map(|m| a4.format_monomial(m)).collect();
        assert_eq!(words, vec!["1", "x", "y", "x^2", "x*y", "y*x"]);
    }

    #[test]
    fn formatting_round_trips() {
        let l2 = AlgebraSpec::laurent(2, q()).unwrap();
        let e = l2.parse_element("3*x1^-1*x2^2 - 1/2*(0,1) + 7").unwrap();
        assert_eq!(l2.parse_element(&l2.format_element(&e)).unwrap(), e);

        let s3 = AlgebraSpec::direct_sum(3, q()).unwrap();
        let e = s3.parse_element("e1*x^2 + 2*e3 - x").unwrap();
        assert_eq!(e.len(), 5);
        assert_eq!(s3.parse_element(&s3.format_element(&e)).unwrap(), e);
        assert_eq!(s3.parse_element("1").unwrap(), s3.one());
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let l2 = AlgebraSpec::laurent(2, q()).unwrap();
        match l2.parse_element("x1 + z") {
            Err(AlgebraError::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
        let kx = AlgebraSpec::polynomial(1, q()).unwrap();
        assert!(kx.parse_element("x^-1").is_err());
    }

    #[test]
    fn division_with_remainder() {
        let kx = AlgebraSpec::polynomial(1, q()).unwrap();
        let f = kx.parse_element("x^5 + 3*x + 1").unwrap();
        let p = kx.parse_element("x^2 + 1").unwrap();
        let (qt, r) = kx.divide_univariate(&f, &p).unwrap();
        assert!(r.max_degree().unwrap_or(0) < 2);
        assert_eq!(&kx.multiply(&qt, &p).unwrap() + &r, f);
    }

    #[test]
    fn generators_per_family() {
        let s3 = AlgebraSpec::direct_sum(3, q()).unwrap();
        assert_eq!(s3.generators().len(), 6);
        let l2 = AlgebraSpec::laurent(2, q()).unwrap();
        assert_eq!(l2.generators().len(), 4);
        assert_eq!(xy().generators(), vec![Monomial::Word(vec![0]), Monomial::Word(vec![1])]);
    }

    #[test]
    fn invalid_presentations() {
        assert!(AlgebraSpec::laurent(0, q()).is_err());
        assert!(AlgebraSpec::monomial_quotient(&["x", "x"], &[], &[], q()).is_err());
        assert!(AlgebraSpec::monomial_quotient(&["x"], &[("y", 1)], &[], q()).is_err());
        assert!(AlgebraSpec::polynomial(1, FieldSpec::PrimeField(8)).is_err());
    }
}
