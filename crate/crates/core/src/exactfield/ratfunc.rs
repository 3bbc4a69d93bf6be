use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

use super::gcd::gcd;
use super::mpoly::{MPoly, Var};
use super::Rat;

/// An element of `Q(p, n, a, w, x, alpha)` in canonical form: numerator and
/// denominator coprime, denominator monic in the graded-lex order. Two
/// canonical values are equal as field elements iff they are structurally
/// equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        RatFunc::from_poly(MPoly::var(v))
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::from_rat(Rat::from_int(c))
    }

    pub fn from_rat(c: Rat) -> Self {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn from_poly(num: MPoly) -> Self {
        RatFunc {
            num,
            den: MPoly::one(),
        }
    }

    /// `num / den` brought to canonical form.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip().expect("nonzero denominator");
            return RatFunc {
                num: num.scale(&inv),
                den: MPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: MPoly, den: MPoly) -> Self {
        let lc = den.lc();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip().expect("nonzero");
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Rough size measure used for pivot selection and resource guards.
    pub fn term_count(&self) -> usize {
        self.num.len() + self.den.len()
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        // Powers of coprime polynomials stay coprime.
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Exact substitution of the bound indeterminates. Unbound ones remain.
    pub fn evaluate(&self, bindings: &BTreeMap<Var, Rat>) -> Result<RatFunc> {
        let den = self.den.eval(bindings);
        if den.is_zero() {
            return Err(Error::Pole);
        }
        RatFunc::new(self.num.eval(bindings), den)
    }

    /// Substitutes a rational function for one indeterminate.
    pub fn substitute(&self, v: Var, value: &RatFunc) -> Result<RatFunc> {
        let horner = |p: &MPoly| -> RatFunc {
            let coeffs = p.coeffs_in(v);
            let mut acc = RatFunc::zero();
            for c in coeffs.iter().rev() {
                acc = &(&acc * value) + &RatFunc::from_poly(c.clone());
            }
            acc
        };
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        horner(&self.num)
            .checked_div(&horner(&self.den))
            .map_err(|_| Error::Pole)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RatFunc::canonical(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RatFunc {
                num: &self.num + &(&rhs.num * &self.den),
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            return RatFunc {
                num: &(&self.num * &rhs.den) + &rhs.num,
                den: rhs.den.clone(),
            };
        }
        let g = gcd(&self.den, &rhs.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = &self.den * &d1;
        if g.is_one() {
            return RatFunc::normalize_lc(num, den);
        }
        // Only factors of g can be shared with the new numerator.
        let h = gcd(&num, &g);
        if h.is_one() {
            RatFunc::normalize_lc(num, den)
        } else {
            RatFunc::normalize_lc(
                num.div_exact(&h).expect("gcd divides"),
                den.div_exact(&h).expect("gcd divides"),
            )
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let cross = |a: &MPoly, d: &MPoly| -> (MPoly, MPoly) {
            if d.is_one() {
                return (a.clone(), d.clone());
            }
            let g = gcd(a, d);
            if g.is_one() {
                (a.clone(), d.clone())
            } else {
                (
                    a.div_exact(&g).expect("gcd divides"),
                    d.div_exact(&g).expect("gcd divides"),
                )
            }
        };
        let (a, d) = cross(&self.num, &rhs.den);
        let (c, b) = cross(&rhs.num, &self.den);
        RatFunc::normalize_lc(&a * &c, &b * &d)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                $tr::$m(&self, &rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

impl From<Rat> for RatFunc {
    fn from(c: Rat) -> Self {
        RatFunc::from_rat(c)
    }
}

impl From<Var> for RatFunc {
    fn from(v: Var) -> Self {
        RatFunc::var(v)
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MPoly| {
            if p.len() > 1 || p.terms()[0].1.is_negative() || !p.terms()[0].1.is_one() {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        let num = if self.num.len() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        write!(f, "{}/{}", num, wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_ratfunc(s)
    }
}
