//! Matrix-valued polynomials in `x` with rational-function entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactfield::{Bindings, Rat, RatFunc, UPoly, Var};

/// A constant `N x N` matrix over the rational function field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConstMat {
    size: usize,
    entries: Vec<RatFunc>,
}

impl ConstMat {
    pub fn zero(size: usize) -> Self {
        ConstMat {
            size,
            entries: vec![RatFunc::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::scalar(size, RatFunc::one())
    }

    pub fn scalar(size: usize, c: RatFunc) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.entries[i * size + i] = c.clone();
        }
        m
    }

    pub fn diag(values: Vec<RatFunc>) -> Self {
        let size = values.len();
        let mut m = Self::zero(size);
        for (i, v) in values.into_iter().enumerate() {
            m.entries[i * size + i] = v;
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Self {
        let size = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == size),
            "matrix must be square"
        );
        ConstMat {
            size,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// `[[a, b], [c, d]]` from string literals.
    pub fn from_strs2(rows: [[&str; 2]; 2]) -> Self {
        ConstMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| crate::exactfield::rf(s)).collect())
                .collect(),
        )
    }

    /// The matrix unit `E_{rc}`.
    pub fn unit(size: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zero(size);
        m.entries[r * size + c] = RatFunc::one();
        m
    }

    /// The reflection `T = diag(1, -1)`.
    pub fn t_matrix() -> Self {
        Self::diag(vec![RatFunc::one(), RatFunc::from_int(-1)])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &RatFunc {
        &self.entries[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFunc) {
        self.entries[r * self.size + c] = v;
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<RatFunc>> {
        self.entries.chunks(self.size).map(|c| c.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RatFunc::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal_entries().all(RatFunc::is_zero)
    }

    /// Nonzero entries only on the anti-diagonal.
    pub fn is_antidiagonal(&self) -> bool {
        let n = self.size;
        (0..n).all(|r| (0..n).all(|c| r + c == n - 1 || self.get(r, c).is_zero()))
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        if !self.is_diagonal() {
            return None;
        }
        let c = self.get(0, 0).clone();
        (1..self.size).all(|i| *self.get(i, i) == c).then_some(c)
    }

    fn off_diagonal_entries(&self) -> impl Iterator<Item = &RatFunc> {
        let n = self.size;
        self.entries
            .iter()
            .enumerate()
            .filter(move |(k, _)| k / n != k % n)
            .map(|(_, v)| v)
    }

    pub fn scale(&self, c: &RatFunc) -> ConstMat {
        ConstMat {
            size: self.size,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn transpose(&self) -> ConstMat {
        let n = self.size;
        let mut m = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                m.entries[c * n + r] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn conjugate_by_t(&self) -> Result<ConstMat> {
        if self.size != 2 {
            return Err(Error::NotSizeTwo(self.size));
        }
        let mut m = self.clone();
        m.entries[1] = -&m.entries[1];
        m.entries[2] = -&m.entries[2];
        Ok(m)
    }

    pub fn map<F>(&self, f: F) -> Result<ConstMat>
    where
        F: Fn(&RatFunc) -> Result<RatFunc>,
    {
        Ok(ConstMat {
            size: self.size,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn evaluate(&self, b: &Bindings) -> Result<ConstMat> {
        self.map(|e| e.evaluate(b))
    }

    /// Determinant by fraction-based elimination.
    pub fn determinant(&self) -> RatFunc {
        let n = self.size;
        let mut m = self.rows();
        let mut det = RatFunc::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return RatFunc::zero();
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            let pv = m[col][col].clone();
            det = &det * &pv;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &pv;
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
            }
        }
        det
    }

    /// Leading principal minors, top-left `1x1` first.
    pub fn leading_minors(&self) -> Vec<RatFunc> {
        (1..=self.size)
            .map(|k| {
                let rows = (0..k)
                    .map(|r| (0..k).map(|c| self.get(r, c).clone()).collect())
                    .collect();
                ConstMat::from_rows(rows).determinant()
            })
            .collect()
    }

    fn check(&self, o: &ConstMat) {
        assert_eq!(self.size, o.size, "matrix size mismatch");
    }
}

impl Add for &ConstMat {
    type Output = ConstMat;
    fn add(self, rhs: &ConstMat) -> ConstMat {
        self.check(rhs);
        ConstMat {
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

impl Sub for &ConstMat {
    type Output = ConstMat;
    fn sub(self, rhs: &ConstMat) -> ConstMat {
        self.check(rhs);
        ConstMat {
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

impl Mul for &ConstMat {
    type Output = ConstMat;
    fn mul(self, rhs: &ConstMat) -> ConstMat {
        self.check(rhs);
        let n = self.size;
        let mut out = ConstMat::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * n + c] = &out.entries[r * n + c] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Neg for &ConstMat {
    type Output = ConstMat;
    fn neg(self) -> ConstMat {
        ConstMat {
            size: self.size,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Display for ConstMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ConstMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `sum_j x^j M_j` with constant matrices `M_j`; trailing zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatPoly {
    size: usize,
    coeffs: Vec<ConstMat>,
}

/// Binary operations on matrix polynomials, selected at runtime.
#[derive(Clone, Debug)]
pub enum MatOp {
    Add,
    Sub,
    Mul,
}

impl MatPoly {
    pub fn zero(size: usize) -> Self {
        MatPoly {
            size,
            coeffs: Vec::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::constant(ConstMat::identity(size))
    }

    pub fn constant(m: ConstMat) -> Self {
        Self::from_coeffs(m.size(), vec![m])
    }

    /// `x^j M`.
    pub fn monomial(j: usize, m: ConstMat) -> Self {
        let size = m.size();
        let mut coeffs = vec![ConstMat::zero(size); j];
        coeffs.push(m);
        Self::from_coeffs(size, coeffs)
    }

    pub fn from_coeffs(size: usize, mut coeffs: Vec<ConstMat>) -> Self {
        assert!(
            coeffs.iter().all(|c| c.size() == size),
            "coefficient size mismatch"
        );
        while coeffs.last().is_some_and(ConstMat::is_zero) {
            coeffs.pop();
        }
        MatPoly { size, coeffs }
    }

    /// Entry-wise construction from univariate polynomials in `x`.
    pub fn from_entries(size: usize, entries: &[UPoly]) -> Self {
        assert_eq!(entries.len(), size * size);
        let deg = entries.iter().map(|e| e.coeffs().len()).max().unwrap_or(0);
        let coeffs = (0..deg)
            .map(|j| ConstMat {
                size,
                entries: entries.iter().map(|e| e.coeff(j)).collect(),
            })
            .collect();
        Self::from_coeffs(size, coeffs)
    }

    /// Builds from entries written as polynomials in `x`.
    pub fn from_strs(size: usize, entries: &[&str]) -> Result<Self> {
        let polys = entries
            .iter()
            .map(|s| UPoly::from_ratfunc(&s.parse::<RatFunc>()?, Var::X))
            .collect::<Result<Vec<_>>>()?;
        if polys.len() != size * size {
            return Err(Error::SizeMismatch(polys.len(), size * size));
        }
        Ok(Self::from_entries(size, &polys))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[ConstMat] {
        &self.coeffs
    }

    /// Coefficient of `x^j` (zero beyond the degree).
    pub fn coeff(&self, j: usize) -> ConstMat {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| ConstMat::zero(self.size))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&ConstMat> {
        self.coeffs.last()
    }

    /// Entry `(r, c)` as a univariate polynomial in `x`.
    pub fn entry(&self, r: usize, c: usize) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|m| m.get(r, c).clone()).collect())
    }

    pub fn scalar_mul(&self, c: &RatFunc) -> MatPoly {
        Self::from_coeffs(self.size, self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    /// `M * self` for a constant matrix `M`.
    pub fn left_mul_const(&self, m: &ConstMat) -> MatPoly {
        Self::from_coeffs(self.size, self.coeffs.iter().map(|c| m * c).collect())
    }

    pub fn right_mul_const(&self, m: &ConstMat) -> MatPoly {
        Self::from_coeffs(self.size, self.coeffs.iter().map(|c| c * m).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> MatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![ConstMat::zero(self.size); k];
        coeffs.extend(self.coeffs.iter().cloned());
        MatPoly {
            size: self.size,
            coeffs,
        }
    }

    pub fn mp_arith(&self, other: &MatPoly, op: MatOp) -> Result<MatPoly> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.size, other.size));
        }
        Ok(match op {
            MatOp::Add => self + other,
            MatOp::Sub => self - other,
            MatOp::Mul => self * other,
        })
    }

    /// The `i`-th derivative in `x`.
    pub fn derivative(&self, i: usize) -> MatPoly {
        if i == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= i {
            return MatPoly::zero(self.size);
        }
        let coeffs = (i..self.coeffs.len())
            .map(|j| {
                // j (j-1) ... (j-i+1)
                let f =
                    ((j - i + 1)..=j).fold(Rat::one(), |acc, v| &acc * &Rat::from_int(v as i64));
                self.coeffs[j].scale(&RatFunc::from_rat(f))
            })
            .collect();
        Self::from_coeffs(self.size, coeffs)
    }

    /// `x -> -x`.
    pub fn reflect(&self) -> MatPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, m)| if j % 2 == 1 { -m } else { m.clone() })
            .collect();
        MatPoly {
            size: self.size,
            coeffs,
        }
    }

    /// `T M T` with `T = diag(1, -1)`.
    pub fn conjugate_by_t(&self) -> Result<MatPoly> {
        if self.size != 2 {
            return Err(Error::NotSizeTwo(self.size));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| m.conjugate_by_t())
            .collect::<Result<_>>()?;
        Ok(MatPoly { size: 2, coeffs })
    }

    pub fn transpose(&self) -> MatPoly {
        MatPoly {
            size: self.size,
            coeffs: self.coeffs.iter().map(ConstMat::transpose).collect(),
        }
    }

    pub fn evaluate(&self, b: &Bindings) -> Result<MatPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| m.evaluate(b))
            .collect::<Result<_>>()?;
        Ok(Self::from_coeffs(self.size, coeffs))
    }

    pub fn map_entries<F>(&self, f: F) -> Result<MatPoly>
    where
        F: Fn(&RatFunc) -> Result<RatFunc>,
    {
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| m.map(&f))
            .collect::<Result<_>>()?;
        Ok(Self::from_coeffs(self.size, coeffs))
    }

    fn check(&self, o: &MatPoly) {
        assert_eq!(self.size, o.size, "matrix polynomial size mismatch");
    }
}

impl Add for &MatPoly {
    type Output = MatPoly;
    fn add(self, rhs: &MatPoly) -> MatPoly {
        self.check(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|j| match (self.coeffs.get(j), rhs.coeffs.get(j)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        MatPoly::from_coeffs(self.size, coeffs)
    }
}

impl Sub for &MatPoly {
    type Output = MatPoly;
    fn sub(self, rhs: &MatPoly) -> MatPoly {
        self + &(-rhs)
    }
}

impl Mul for &MatPoly {
    type Output = MatPoly;
    fn mul(self, rhs: &MatPoly) -> MatPoly {
        self.check(rhs);
        if self.is_zero() || rhs.is_zero() {
            return MatPoly::zero(self.size);
        }
        let mut out = vec![ConstMat::zero(self.size); self.coeffs.len() + rhs.coeffs.len() - 1];
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
        MatPoly::from_coeffs(self.size, out)
    }
}

impl Neg for &MatPoly {
    type Output = MatPoly;
    fn neg(self) -> MatPoly {
        MatPoly {
            size: self.size,
            coeffs: self.coeffs.iter().map(|m| -m).collect(),
        }
    }
}

impl Add for MatPoly {
    type Output = MatPoly;
    fn add(self, rhs: MatPoly) -> MatPoly {
        &self + &rhs
    }
}

impl Sub for MatPoly {
    type Output = MatPoly;
    fn sub(self, rhs: MatPoly) -> MatPoly {
        &self - &rhs
    }
}

impl Mul for MatPoly {
    type Output = MatPoly;
    fn mul(self, rhs: MatPoly) -> MatPoly {
        &self * &rhs
    }
}

impl fmt::Display for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.size {
            if r > 0 {
                f.write_str(", ")?;
            }
            let cells: Vec<String> = (0..self.size)
                .map(|c| self.entry(r, c).display_in("x"))
                .collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatPoly{self}")
    }
}
