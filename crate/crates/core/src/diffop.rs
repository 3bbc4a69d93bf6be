//! Right-acting differential operators `D = sum_i d^i F_i(x)` acting on
//! matrix polynomials by `P D = sum_i P^(i) F_i`, so that
//! `P (D E) = (P D) E`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactfield::{binomial, Bindings, RatFunc, UPoly};
use crate::matpoly::{ConstMat, MatPoly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    size: usize,
    coeffs: Vec<MatPoly>,
}

impl DiffOp {
    pub fn zero(size: usize) -> Self {
        DiffOp {
            size,
            coeffs: Vec::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::multiplication(MatPoly::identity(size))
    }

    /// The order-0 operator `P -> P F`.
    pub fn multiplication(f: MatPoly) -> Self {
        let size = f.size();
        Self::from_coeffs(size, vec![f])
    }

    pub fn scalar(size: usize, c: RatFunc) -> Self {
        Self::multiplication(MatPoly::constant(ConstMat::scalar(size, c)))
    }

    /// `d^i F`.
    pub fn monomial(i: usize, f: MatPoly) -> Self {
        let size = f.size();
        let mut coeffs = vec![MatPoly::zero(size); i];
        coeffs.push(f);
        Self::from_coeffs(size, coeffs)
    }

    pub fn from_coeffs(size: usize, mut coeffs: Vec<MatPoly>) -> Self {
        assert!(
            coeffs.iter().all(|c| c.size() == size),
            "coefficient size mismatch"
        );
        while coeffs.last().is_some_and(MatPoly::is_zero) {
            coeffs.pop();
        }
        DiffOp { size, coeffs }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[MatPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> MatPoly {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| MatPoly::zero(self.size))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&MatPoly> {
        self.coeffs.last()
    }

    /// Largest `x`-degree among the coefficients.
    pub fn max_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(MatPoly::degree).max()
    }

    pub fn scale(&self, c: &RatFunc) -> DiffOp {
        Self::from_coeffs(
            self.size,
            self.coeffs.iter().map(|f| f.scalar_mul(c)).collect(),
        )
    }

    pub fn apply(&self, p: &MatPoly) -> Result<MatPoly> {
        if p.size() != self.size {
            return Err(Error::SizeMismatch(p.size(), self.size));
        }
        let mut acc = MatPoly::zero(self.size);
        for (i, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let d = p.derivative(i);
            if d.is_zero() {
                break;
            }
            acc = &acc + &(&d * f);
        }
        Ok(acc)
    }

    /// The operator "apply `self`, then `other`".
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.size, other.size));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(DiffOp::zero(self.size));
        }
        let s = self.coeffs.len();
        let t = other.coeffs.len();
        let mut out = vec![MatPoly::zero(self.size); s + t - 1];
        for (i, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            // Derivatives of F_i up to the order of `other`.
            let mut derivs = Vec::with_capacity(t);
            let mut d = f.clone();
            for _ in 0..t {
                derivs.push(d.clone());
                d = d.derivative(1);
            }
            for (j, g) in other.coeffs.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                for k in 0..=j {
                    let fd = &derivs[j - k];
                    if fd.is_zero() {
                        continue;
                    }
                    let mut term = fd * g;
                    if term.is_zero() {
                        continue;
                    }
                    let c = binomial(j as u32, k as u32);
                    if !c.is_one() {
                        term = term.scalar_mul(&RatFunc::from_rat(c));
                    }
                    out[i + k] = &out[i + k] + &term;
                }
            }
        }
        Ok(Self::from_coeffs(self.size, out))
    }

    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        Ok(&self.compose(other)? - &other.compose(self)?)
    }

    pub fn pow(&self, e: u32) -> DiffOp {
        let mut acc = DiffOp::identity(self.size);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `sum_i d^i (-1)^i T F_i(-x) T`.
    pub fn tilde(&self) -> Result<DiffOp> {
        if self.size != 2 {
            return Err(Error::NotSizeTwo(self.size));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let g = f.reflect().conjugate_by_t()?;
                Ok(if i % 2 == 1 { -&g } else { g })
            })
            .collect::<Result<_>>()?;
        Ok(Self::from_coeffs(2, coeffs))
    }

    /// `Lambda_w(D) = sum_i [w]_i F_i^i`, with `F_i^i` the `x^i`
    /// coefficient of `F_i`, as a matrix of polynomials in `w`.
    pub fn eigenvalue_map(&self) -> EigenPoly {
        let mut acc = EigenPoly::zero(self.size);
        for (i, f) in self.coeffs.iter().enumerate() {
            let top = f.coeff(i);
            if top.is_zero() {
                continue;
            }
            let ff = falling_factorial_poly(i);
            acc = &acc + &EigenPoly::from_const(&top).scale_poly(&ff);
        }
        acc
    }

    pub fn evaluate(&self, b: &Bindings) -> Result<DiffOp> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|f| f.evaluate(b))
            .collect::<Result<_>>()?;
        Ok(Self::from_coeffs(self.size, coeffs))
    }

    pub fn map_entries<F>(&self, f: F) -> Result<DiffOp>
    where
        F: Fn(&RatFunc) -> Result<RatFunc>,
    {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.map_entries(&f))
            .collect::<Result<_>>()?;
        Ok(Self::from_coeffs(self.size, coeffs))
    }

    fn check(&self, o: &DiffOp) {
        assert_eq!(self.size, o.size, "operator size mismatch");
    }
}

/// `[w]_i = w (w-1) ... (w-i+1)` as a polynomial in `w`.
pub fn falling_factorial_poly(i: usize) -> UPoly {
    (0..i).fold(UPoly::one(), |acc, k| {
        &acc * &UPoly::shifted(RatFunc::from_int(-(k as i64)))
    })
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        self.check(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        DiffOp::from_coeffs(self.size, coeffs)
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            size: self.size,
            coeffs: self.coeffs.iter().map(|f| -f).collect(),
        }
    }
}

/// Composition; panics on a size mismatch (use [`DiffOp::compose`] to get
/// an error instead).
impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs).expect("operator size mismatch")
    }
}

impl Add for DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: DiffOp) -> DiffOp {
        &self + &rhs
    }
}

impl Sub for DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: DiffOp) -> DiffOp {
        &self - &rhs
    }
}

impl Mul for DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: DiffOp) -> DiffOp {
        &self * &rhs
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("d {c}"),
                _ => format!("d^{i} {c}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

/// A square matrix of polynomials in the eigenvalue variable `w`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EigenPoly {
    size: usize,
    entries: Vec<UPoly>,
}

impl EigenPoly {
    pub fn zero(size: usize) -> Self {
        EigenPoly {
            size,
            entries: vec![UPoly::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::scalar(size, UPoly::one())
    }

    pub fn scalar(size: usize, c: UPoly) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.entries[i * size + i] = c.clone();
        }
        m
    }

    pub fn from_entries(size: usize, entries: Vec<UPoly>) -> Self {
        assert_eq!(entries.len(), size * size);
        EigenPoly { size, entries }
    }

    pub fn from_const(m: &ConstMat) -> Self {
        EigenPoly {
            size: m.size(),
            entries: m
                .entries()
                .iter()
                .map(|e| UPoly::constant(e.clone()))
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &UPoly {
        &self.entries[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: UPoly) {
        self.entries[r * self.size + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(UPoly::is_zero)
    }

    /// Degree in `w` (maximum over entries).
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(UPoly::degree).max()
    }

    pub fn as_scalar(&self) -> Option<UPoly> {
        let n = self.size;
        let c = self.get(0, 0).clone();
        let ok = (0..n).all(|r| {
            (0..n).all(|k| {
                if r == k {
                    *self.get(r, k) == c
                } else {
                    self.get(r, k).is_zero()
                }
            })
        });
        ok.then_some(c)
    }

    pub fn scale_poly(&self, c: &UPoly) -> EigenPoly {
        EigenPoly {
            size: self.size,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn conjugate_by_t(&self) -> Result<EigenPoly> {
        if self.size != 2 {
            return Err(Error::NotSizeTwo(self.size));
        }
        let mut m = self.clone();
        m.entries[1] = -&m.entries[1];
        m.entries[2] = -&m.entries[2];
        Ok(m)
    }

    /// The value at a specific `w`.
    pub fn at(&self, w: &RatFunc) -> ConstMat {
        let rows = (0..self.size)
            .map(|r| (0..self.size).map(|c| self.get(r, c).eval(w)).collect())
            .collect();
        ConstMat::from_rows(rows)
    }

    pub fn evaluate(&self, b: &Bindings) -> Result<EigenPoly> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.map_coeffs(|c| c.evaluate(b)))
            .collect::<Result<_>>()?;
        Ok(EigenPoly {
            size: self.size,
            entries,
        })
    }
}

impl Add for &EigenPoly {
    type Output = EigenPoly;
    fn add(self, rhs: &EigenPoly) -> EigenPoly {
        assert_eq!(self.size, rhs.size);
        EigenPoly {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &EigenPoly {
    type Output = EigenPoly;
    fn sub(self, rhs: &EigenPoly) -> EigenPoly {
        assert_eq!(self.size, rhs.size);
        EigenPoly {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &EigenPoly {
    type Output = EigenPoly;
    fn mul(self, rhs: &EigenPoly) -> EigenPoly {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        let mut out = EigenPoly::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = UPoly::zero();
                for k in 0..n {
                    let (a, b) = (self.get(r, k), rhs.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.entries[r * n + c] = acc;
            }
        }
        out
    }
}

impl fmt::Display for EigenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.size {
            if r > 0 {
                f.write_str(", ")?;
            }
            let cells: Vec<String> = (0..self.size)
                .map(|c| self.get(r, c).display_in("w"))
                .collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for EigenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EigenPoly{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Var;
    use proptest::prelude::*;

    fn mp(entries: [&str; 4]) -> MatPoly {
        MatPoly::from_strs(2, &entries).unwrap()
    }

    #[test]
    fn identity_operator() {
        let p = mp(["x^3 + p", "x", "n", "x^2"]);
        assert_eq!(DiffOp::identity(2).apply(&p).unwrap(), p);
        let d = DiffOp::from_coeffs(2, vec![mp(["p", "x", "0", "1"]), mp(["x", "0", "0", "x"])]);
        assert_eq!(d.apply(&MatPoly::identity(2)).unwrap(), d.coeff(0));
    }

    #[test]
    fn order_zero_composition_multiplies() {
        let f = mp(["x", "1", "0", "p"]);
        let g = mp(["0", "n", "x", "1"]);
        let h = DiffOp::multiplication(f.clone())
            .compose(&DiffOp::multiplication(g.clone()))
            .unwrap();
        assert_eq!(h, DiffOp::multiplication(&f * &g));
    }

    #[test]
    fn scalar_d_times_x() {
        // P (d)(x) = P' x, then P (x)(d) = (P x)' = P' x + P: so (x)(d) = d x + 1.
        let d = DiffOp::monomial(1, MatPoly::identity(1));
        let x = DiffOp::multiplication(MatPoly::from_strs(1, &["x"]).unwrap());
        let xd = x.compose(&d).unwrap();
        let expected = &d.compose(&x).unwrap() + &DiffOp::identity(1);
        assert_eq!(xd, expected);
    }

    #[test]
    fn commutator_with_self_vanishes() {
        let d = DiffOp::from_coeffs(
            2,
            vec![mp(["p", "x", "0", "1"]), mp(["x^2", "0", "1", "x"])],
        );
        assert!(d.commutator(&d).unwrap().is_zero());
    }

    #[test]
    fn eigenvalue_map_of_identity() {
        assert_eq!(DiffOp::identity(2).eigenvalue_map(), EigenPoly::identity(2));
    }

    #[test]
    fn falling_factorial_polynomial() {
        let ff = falling_factorial_poly(3);
        assert_eq!(
            ff.to_ratfunc(Var::W),
            crate::exactfield::rf("w*(w-1)*(w-2)")
        );
    }

    #[test]
    fn size_errors() {
        let a = DiffOp::identity(2);
        let b = DiffOp::identity(3);
        assert_eq!(a.compose(&b), Err(Error::SizeMismatch(2, 3)));
        assert_eq!(b.tilde(), Err(Error::NotSizeTwo(3)));
        assert!(a.apply(&MatPoly::identity(3)).is_err());
    }

    fn entry() -> impl Strategy<Value = RatFunc> {
        (-2i64..=2, 0u32..=1)
            .prop_map(|(c, e)| &RatFunc::var(Var::P).pow(e) * &RatFunc::from_int(c))
    }

    fn matpoly(max_deg: usize) -> impl Strategy<Value = MatPoly> {
        prop::collection::vec(prop::collection::vec(entry(), 4), 0..=max_deg + 1).prop_map(|cs| {
            let coeffs = cs
                .into_iter()
                .map(|e| ConstMat::from_rows(vec![e[..2].to_vec(), e[2..].to_vec()]))
                .collect();
            MatPoly::from_coeffs(2, coeffs)
        })
    }

    fn diffop() -> impl Strategy<Value = DiffOp> {
        prop::collection::vec(matpoly(3), 0..=4).prop_map(|cs| DiffOp::from_coeffs(2, cs))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn composition_is_sequential_application(p in matpoly(3), d in diffop(), e in diffop()) {
            let lhs = d.compose(&e).unwrap().apply(&p).unwrap();
            let rhs = e.apply(&d.apply(&p).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn tilde_is_an_involutive_automorphism(d in diffop(), e in diffop()) {
            prop_assert_eq!(d.tilde().unwrap().tilde().unwrap(), d.clone());
            let lhs = d.compose(&e).unwrap().tilde().unwrap();
            let rhs = d.tilde().unwrap().compose(&e.tilde().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
