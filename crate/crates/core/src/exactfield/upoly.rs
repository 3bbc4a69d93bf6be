use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::mpoly::{MPoly, Var};
use super::RatFunc;

/// Dense univariate polynomial with [`RatFunc`] coefficients. The variable
/// is only a display label (`w` for eigenvalue polynomials, `alpha` for the
/// presented algebra, `t` for center decompositions).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<RatFunc>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        UPoly::from_coeffs(vec![RatFunc::zero(), RatFunc::one()])
    }

    /// `t + c`.
    pub fn shifted(c: RatFunc) -> Self {
        UPoly::from_coeffs(vec![c, RatFunc::one()])
    }

    pub fn monomial(k: usize, c: RatFunc) -> Self {
        let mut v = vec![RatFunc::zero(); k + 1];
        v[k] = c;
        UPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Reads a rational function polynomial in `v` (its denominator must be
    /// free of `v`) as a univariate polynomial.
    pub fn from_ratfunc(f: &RatFunc, v: Var) -> Result<Self> {
        if f.den().contains_var(v) {
            return Err(Error::NotPolynomial(v.name().into()));
        }
        let den = RatFunc::from_poly(f.den().clone());
        let coeffs = f
            .num()
            .coeffs_in(v)
            .into_iter()
            .map(|c| &RatFunc::from_poly(c) / &den)
            .collect();
        Ok(UPoly::from_coeffs(coeffs))
    }

    pub fn to_ratfunc(&self, v: Var) -> RatFunc {
        let x = RatFunc::var(v);
        self.eval(&x)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &RatFunc) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|k| k * c).collect())
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, at: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn map_coeffs<F>(&self, f: F) -> Result<UPoly>
    where
        F: Fn(&RatFunc) -> Result<RatFunc>,
    {
        Ok(UPoly::from_coeffs(
            self.coeffs.iter().map(f).collect::<Result<_>>()?,
        ))
    }

    /// Renders with the given variable name.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let coef = if c.is_polynomial() && c.num().len() == 1 {
                c.to_string()
            } else {
                format!("({c})")
            };
            parts.push(match (k, c.is_one()) {
                (0, _) => coef,
                (_, true) => mono,
                _ => format!("{coef}*{mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![RatFunc::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(self, rhs: UPoly) -> UPoly {
        &self + &rhs
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(self, rhs: UPoly) -> UPoly {
        &self - &rhs
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, rhs: UPoly) -> UPoly {
        &self * &rhs
    }
}

impl From<MPoly> for UPoly {
    fn from(p: MPoly) -> Self {
        UPoly::constant(RatFunc::from_poly(p))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({})", self.display_in("t"))
    }
}
