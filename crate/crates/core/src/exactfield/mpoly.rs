use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::Rat;

/// The indeterminates known to the engine, in monomial-order significance
/// (`p` least significant, `alpha` most).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    P = 0,
    N = 1,
    A = 2,
    W = 3,
    X = 4,
    Alpha = 5,
}

pub const NVARS: usize = 6;

impl Var {
    pub const ALL: [Var; NVARS] = [Var::P, Var::N, Var::A, Var::W, Var::X, Var::Alpha];

    pub fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::N => "n",
            Var::A => "a",
            Var::W => "w",
            Var::X => "x",
            Var::Alpha => "alpha",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Some(match s {
            "p" => Var::P,
            "n" => Var::N,
            "a" => Var::A,
            "w" => Var::W,
            "x" => Var::X,
            "alpha" | "α" => Var::Alpha,
            _ => return None,
        })
    }

    fn idx(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over [`Var::ALL`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var, e: u16) -> Self {
        let mut m = [0; NVARS];
        m[v.idx()] = e;
        Monomial(m)
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.idx()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; NVARS]
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = [0u16; NVARS];
        for i in 0..NVARS {
            r[i] = self.0[i].checked_add(o.0[i]).expect("exponent overflow");
        }
        Monomial(r)
    }

    pub fn checked_div(&self, o: &Monomial) -> Option<Monomial> {
        let mut r = [0u16; NVARS];
        for i in 0..NVARS {
            r[i] = self.0[i].checked_sub(o.0[i])?;
        }
        Some(Monomial(r))
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut r = [0u16; NVARS];
        for i in 0..NVARS {
            r[i] = self.0[i].min(o.0[i]);
        }
        Monomial(r)
    }

    pub fn with_exp(&self, v: Var, e: u16) -> Monomial {
        let mut r = self.0;
        r[v.idx()] = e;
        Monomial(r)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic, `p < n < a < w < x < alpha`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                for i in (0..NVARS).rev() {
                    match self.0[i].cmp(&other.0[i]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse multivariate polynomial over the rationals. Terms are kept sorted
/// with the leading monomial first and never carry a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(Monomial, Rat)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly {
                terms: vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn var(v: Var) -> Self {
        MPoly {
            terms: vec![(Monomial::var(v, 1), Rat::one())],
        }
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<(Monomial, Rat)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Rat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Rat)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Rat {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.total_degree())
    }

    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.exp(v)).max()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| self.contains_var(v))
            .collect()
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        // Multiplying by a monomial preserves the order.
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(tm, k)| (tm.mul(m), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn merge(&self, other: &MPoly, negate: bool) -> MPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        MPoly { terms: out }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.recip().ok()?;
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.checked_div(dm)?, c * &inv));
            }
            return Some(MPoly { terms: out });
        }
        let (dm, dc) = &d.terms[0];
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            let qm = rm.checked_div(dm)?;
            let qc = rc / dc;
            rem = &rem - &d.mul_term(&qm, &qc);
            quot.push((qm, qc));
        }
        Some(MPoly { terms: quot })
    }

    /// Coefficients with respect to `v`, indexed by degree in `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let deg = match self.degree_in(v) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut buckets: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.with_exp(v, 0), c.clone()));
        }
        // Dropping a variable from every term of a bucket keeps relative order.
        buckets.into_iter().map(|terms| MPoly { terms }).collect()
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let e = Monomial::var(v, k as u16);
            for (m, r) in &c.terms {
                terms.push((m.mul(&e), r.clone()));
            }
        }
        MPoly::from_terms(terms)
    }

    /// Rational content: gcd of all coefficients (non-negative).
    pub fn rational_content(&self) -> Rat {
        self.terms.iter().fold(Rat::zero(), |g, (_, c)| g.gcd(c))
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.terms.first() {
            None => MPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip().expect("nonzero")),
        }
    }

    /// Substitutes exact values for the bound variables.
    pub fn eval(&self, bindings: &BTreeMap<Var, Rat>) -> MPoly {
        if bindings.is_empty() || !bindings.keys().any(|&v| self.contains_var(v)) {
            return self.clone();
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut m = *m;
            for (&v, val) in bindings {
                let e = m.exp(v);
                if e > 0 {
                    c = &c * &val.pow(e as u32);
                    m = m.with_exp(v, 0);
                }
            }
            terms.push((m, c));
        }
        MPoly::from_terms(terms)
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, v: Var, value: &MPoly) -> MPoly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(v) > 0)
            .map(|(m, c)| {
                let e = m.exp(v);
                (m.with_exp(v, e - 1), c * &Rat::from_int(e as i64))
            })
            .collect();
        MPoly::from_terms(terms)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        self.merge(rhs, false)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        self.merge(rhs, true)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        MPoly::from_terms(terms)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl From<Rat> for MPoly {
    fn from(c: Rat) -> Self {
        MPoly::constant(c)
    }
}

impl From<i64> for MPoly {
    fn from(c: i64) -> Self {
        MPoly::constant(Rat::from_int(c))
    }
}

impl From<Var> for MPoly {
    fn from(v: Var) -> Self {
        MPoly::var(v)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

/// Parses a variable name, failing with a parse error.
pub fn parse_var(s: &str) -> Result<Var> {
    Var::from_name(s.trim()).ok_or_else(|| Error::Parse(format!("unknown indeterminate `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> MPoly {
        MPoly::var(Var::P)
    }
    fn n() -> MPoly {
        MPoly::var(Var::N)
    }

    #[test]
    fn grlex_order() {
        // p < n, and degree dominates.
        assert!(Monomial::var(Var::P, 1) < Monomial::var(Var::N, 1));
        assert!(Monomial::var(Var::N, 1) < Monomial::var(Var::P, 2));
        assert!(Monomial::var(Var::X, 1) < Monomial::var(Var::Alpha, 1));
    }

    #[test]
    fn display_uses_explicit_monomials() {
        let f = &(&p().pow(2) * &n()) - &MPoly::from(3);
        assert_eq!(f.to_string(), "p^2*n - 3");
        let g = &n() - &p().scale(&Rat::from_int(2));
        assert_eq!(g.to_string(), "n - 2*p");
    }

    #[test]
    fn exact_division() {
        let a = &n() - &p().scale(&Rat::from_int(2));
        let b = &n() + &p().scale(&Rat::from_int(2));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!((&prod + &MPoly::one()).div_exact(&a), None);
    }

    #[test]
    fn coefficient_split_roundtrip() {
        let f = &(&p() * &n()).pow(2) + &(&n() + &MPoly::from(4));
        let c = f.coeffs_in(Var::N);
        assert_eq!(c.len(), 3);
        assert_eq!(MPoly::from_coeffs_in(Var::N, &c), f);
    }
}
