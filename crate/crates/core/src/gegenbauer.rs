//! The 2x2 Gegenbauer weight
//!
//! ```text
//! W(x) = (1 - x^2)^(n/2 - 1) [[p x^2 + n - p, -n x], [-n x, (n - p) x^2 + p]]
//! ```
//!
//! its monic orthogonal polynomials `Q_w` (built two independent ways), the
//! second-order operators `D1..D4` spanning the order-2 part of `D(W)`, and
//! exact moments for checking orthogonality when `n` is even.

use std::sync::OnceLock;

use crate::diffop::{DiffOp, EigenPoly};
use crate::error::{Error, Result};
use crate::exactfield::{binomial, factorial, pochhammer, rf, Bindings, Rat, RatFunc, UPoly, Var};
use crate::matpoly::{ConstMat, MatPoly};

/// The weight `W_{p,n}` split into its scalar factor and polynomial part.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightData {
    /// The 2x2 bracket multiplying `(1 - x^2)^exponent`.
    pub polynomial_part: MatPoly,
    /// `n/2 - 1`.
    pub exponent: RatFunc,
}

pub fn weight() -> WeightData {
    WeightData {
        polynomial_part: MatPoly::from_strs(
            2,
            &["p*x^2 + n - p", "-n*x", "-n*x", "(n - p)*x^2 + p"],
        )
        .expect("valid literal"),
        exponent: rf("n/2 - 1"),
    }
}

/// Gegenbauer polynomial `C_m^lambda` as a polynomial in `x`, via
/// `sum_k (-1)^k (lambda)_{m-k} / (k! (m-2k)!) (2x)^{m-2k}`. Zero for
/// negative `m`.
pub fn gegenbauer_upoly(m: i64, lambda: &RatFunc) -> UPoly {
    if m < 0 {
        return UPoly::zero();
    }
    let m = m as u32;
    let mut coeffs = vec![RatFunc::zero(); m as usize + 1];
    for k in 0..=m / 2 {
        let deg = m - 2 * k;
        let mut c = pochhammer(lambda, m - k);
        let denom = &factorial(k) * &factorial(deg);
        let mut scalar = &Rat::from_int(2).pow(deg) / &denom;
        if k % 2 == 1 {
            scalar = -scalar;
        }
        c = c.scale(&scalar);
        coeffs[deg as usize] = c;
    }
    UPoly::from_coeffs(coeffs)
}

/// [`gegenbauer_upoly`] as a 1x1 matrix polynomial.
pub fn gegenbauer_poly(m: i64, lambda: &RatFunc) -> MatPoly {
    MatPoly::from_entries(1, &[gegenbauer_upoly(m, lambda)])
}

/// A monic matrix orthogonal polynomial `Q_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicMOP {
    pub w: usize,
    pub poly: MatPoly,
}

impl MonicMOP {
    /// Coefficient `B_i^w` of `x^i`.
    pub fn coeff(&self, i: usize) -> ConstMat {
        self.poly.coeff(i)
    }

    pub fn is_monic(&self) -> bool {
        self.poly.degree() == Some(self.w) && self.poly.coeff(self.w) == ConstMat::identity(2)
    }

    /// `x^{w-2k}` coefficients diagonal, `x^{w-2k-1}` anti-diagonal.
    pub fn has_parity_structure(&self) -> bool {
        (0..=self.w).all(|i| {
            let c = self.poly.coeff(i);
            if (self.w - i).is_multiple_of(2) {
                c.is_diagonal()
            } else {
                c.is_antidiagonal()
            }
        })
    }
}

fn lambda1() -> RatFunc {
    rf("(n + 1)/2")
}

fn lambda2() -> RatFunc {
    rf("(n + 3)/2")
}

/// `Q_w` from the closed Gegenbauer-combination formula.
pub fn monic_mop_closed(w: usize) -> MonicMOP {
    let wi = w as i64;
    let l1 = lambda1();
    let l2 = lambda2();
    let prefactor = RatFunc::from_rat(factorial(w as u32))
        .checked_div(&pochhammer(&l1, w as u32).scale(&Rat::from_int(2).pow(w as u32)))
        .expect("nonzero Pochhammer");
    let np1 = rf("n + 1");
    let wf = RatFunc::from_int(wi);
    let c1 = np1
        .checked_div(&(&RatFunc::var(Var::P) + &wf))
        .expect("nonzero");
    let c2 = np1.checked_div(&(&rf("n - p") + &wf)).expect("nonzero");

    let cw = gegenbauer_upoly(wi, &l1);
    let cm1 = gegenbauer_upoly(wi - 1, &l2);
    let cm2 = gegenbauer_upoly(wi - 2, &l2);

    let entries = [
        &cw + &cm2.scale(&c1),
        cm1.scale(&c1),
        cm1.scale(&c2),
        &cw + &cm2.scale(&c2),
    ];
    let entries: Vec<UPoly> = entries.iter().map(|e| e.scale(&prefactor)).collect();
    MonicMOP {
        w,
        poly: MatPoly::from_entries(2, &entries),
    }
}

/// The scalar factor `w! (-1)^k 4^{-k} / ((n+1)/2 + w - k)_k k! j!` shared by
/// the even and odd coefficient formulas (with `j = w-2k` or `w-2k-1`).
fn coefficient_scalar(w: usize, k: usize, j: usize) -> RatFunc {
    let base = &lambda1() + &RatFunc::from_int((w - k) as i64);
    let mut num = &factorial(w as u32) / &Rat::from_int(4).pow(k as u32);
    if k % 2 == 1 {
        num = -num;
    }
    let den = pochhammer(&base, k as u32).scale(&(&factorial(k as u32) * &factorial(j as u32)));
    RatFunc::from_rat(num).checked_div(&den).expect("nonzero")
}

/// `B^w_{w-2k}` (diagonal).
pub fn even_coefficient(w: usize, k: usize) -> ConstMat {
    let s = coefficient_scalar(w, k, w - 2 * k);
    let p = RatFunc::var(Var::P);
    let nmp = rf("n - p");
    let wf = RatFunc::from_int(w as i64);
    let shift = RatFunc::from_int((w - 2 * k) as i64);
    let d11 = (&p + &shift).checked_div(&(&p + &wf)).expect("nonzero");
    let d22 = (&nmp + &shift).checked_div(&(&nmp + &wf)).expect("nonzero");
    ConstMat::diag(vec![&s * &d11, &s * &d22])
}

/// `B^w_{w-2k-1}` (anti-diagonal).
pub fn odd_coefficient(w: usize, k: usize) -> ConstMat {
    let s = coefficient_scalar(w, k, w - 2 * k - 1);
    let wf = RatFunc::from_int(w as i64);
    let a12 = s
        .checked_div(&(&RatFunc::var(Var::P) + &wf))
        .expect("nonzero");
    let a21 = s.checked_div(&(&rf("n - p") + &wf)).expect("nonzero");
    ConstMat::from_rows(vec![vec![RatFunc::zero(), a12], vec![a21, RatFunc::zero()]])
}

/// `Q_w` assembled directly from the explicit coefficient formulas.
pub fn monic_mop_coeffs(w: usize) -> MonicMOP {
    let mut coeffs = vec![ConstMat::zero(2); w + 1];
    for k in 0..=w / 2 {
        coeffs[w - 2 * k] = even_coefficient(w, k);
        if 2 * k < w {
            coeffs[w - 2 * k - 1] = odd_coefficient(w, k);
        }
    }
    MonicMOP {
        w,
        poly: MatPoly::from_coeffs(2, coeffs),
    }
}

/// The four second-order generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators {
    pub d1: DiffOp,
    pub d2: DiffOp,
    pub d3: DiffOp,
    pub d4: DiffOp,
}

impl Generators {
    pub fn all(&self) -> [&DiffOp; 4] {
        [&self.d1, &self.d2, &self.d3, &self.d4]
    }

    /// `D_j` for `j` in `1..=4`.
    pub fn get(&self, j: usize) -> &DiffOp {
        self.all()[j - 1]
    }

    pub fn evaluate(&self, b: &Bindings) -> Result<Generators> {
        Ok(Generators {
            d1: self.d1.evaluate(b)?,
            d2: self.d2.evaluate(b)?,
            d3: self.d3.evaluate(b)?,
            d4: self.d4.evaluate(b)?,
        })
    }
}

fn op2(second: [&str; 4], first: [&str; 4], zeroth: [&str; 4]) -> DiffOp {
    let m = |e: [&str; 4]| MatPoly::from_strs(2, &e).expect("valid literal");
    DiffOp::from_coeffs(2, vec![m(zeroth), m(first), m(second)])
}

/// `D1..D4` with symbolic `p`, `n`.
pub fn build_generators() -> Generators {
    Generators {
        d1: op2(
            ["x^2", "x", "-x", "-1"],
            ["(n + 2)*x", "n - p + 2", "-p", "0"],
            ["p*(n - p + 1)", "0", "0", "0"],
        ),
        d2: op2(
            ["-1", "-x", "x", "x^2"],
            ["0", "p - n", "p + 2", "(n + 2)*x"],
            ["0", "0", "0", "(p + 1)*(n - p)"],
        ),
        d3: op2(
            ["-x", "-1", "x^2", "x"],
            ["-p", "0", "2*(p + 1)*x", "p + 2"],
            ["0", "0", "p*(p + 1)", "0"],
        ),
        d4: op2(
            ["x", "x^2", "-1", "-x"],
            ["n - p + 2", "2*(n - p + 1)*x", "0", "p - n"],
            ["0", "(n - p)*(n - p + 1)", "0", "0"],
        ),
    }
}

/// Shared symbolic generators.
pub fn generators() -> &'static Generators {
    static G: OnceLock<Generators> = OnceLock::new();
    G.get_or_init(build_generators)
}

/// The eigenvalue matrices of `D1..D4` written out in closed form.
pub fn expected_eigenvalues() -> [EigenPoly; 4] {
    let up = |s: &str| UPoly::from_ratfunc(&rf(s), Var::W).expect("polynomial in w");
    let z = UPoly::zero;
    [
        EigenPoly::from_entries(2, vec![up("(w + p)*(w + n - p + 1)"), z(), z(), z()]),
        EigenPoly::from_entries(2, vec![z(), z(), z(), up("(w + p + 1)*(w + n - p)")]),
        EigenPoly::from_entries(2, vec![z(), z(), up("(w + p)*(w + p + 1)"), z()]),
        EigenPoly::from_entries(2, vec![z(), up("(w + n - p)*(w + n - p + 1)"), z(), z()]),
    ]
}

/// Checks `Q D = Lambda Q` for a constant `Lambda`, returning the residual
/// `Q D - Lambda Q` where `Lambda` is read off the `x^w` coefficient of
/// `Q D`. A zero residual means `Q` is an eigenfunction of `D`.
pub fn eigen_residual(q: &MonicMOP, d: &DiffOp) -> Result<MatPoly> {
    let qd = d.apply(&q.poly)?;
    let lambda = qd.coeff(q.w);
    Ok(&qd - &q.poly.left_mul_const(&lambda))
}

/// `int_{-1}^{1} x^m (1 - x^2)^k dx`.
pub fn exact_moment(m: u32, k: u32) -> Rat {
    if m % 2 == 1 {
        return Rat::zero();
    }
    let mut acc = Rat::zero();
    for j in 0..=k {
        let term = &binomial(k, j) * &Rat::new(2, (m + 2 * j + 1) as i64);
        if j % 2 == 1 {
            acc = &acc - &term;
        } else {
            acc = &acc + &term;
        }
    }
    acc
}

/// Validates `(n, p)` for exact integration: `n` even and at least 4,
/// `0 < p < n/2`.
pub fn check_parameters(n_val: &Rat, p_val: &Rat) -> Result<u32> {
    let n = n_val
        .to_i64()
        .filter(|n| n % 2 == 0 && *n >= 4)
        .ok_or_else(|| {
            Error::InvalidParameters(format!("n = {n_val} must be an even integer >= 4"))
        })?;
    let half = Rat::new(n, 2);
    if !p_val.is_positive() || *p_val >= half {
        return Err(Error::InvalidParameters(format!(
            "p = {p_val} must satisfy 0 < p < n/2"
        )));
    }
    Ok((n / 2 - 1) as u32)
}

pub fn parameter_bindings(n_val: &Rat, p_val: &Rat) -> Bindings {
    [(Var::N, n_val.clone()), (Var::P, p_val.clone())].into()
}

/// `(Q_i, Q_j) = int_{-1}^{1} Q_i W Q_j^T dx` at numeric `n`, `p`.
pub fn gram_entry(i: usize, j: usize, n_val: &Rat, p_val: &Rat) -> Result<ConstMat> {
    let k = check_parameters(n_val, p_val)?;
    let b = parameter_bindings(n_val, p_val);
    let qi = monic_mop_closed(i).poly.evaluate(&b)?;
    let qj = monic_mop_closed(j).poly.evaluate(&b)?;
    let wp = weight().polynomial_part.evaluate(&b)?;
    Ok(integrate_against(&(&(&qi * &wp) * &qj.transpose()), k))
}

/// `int_{-1}^{1} M(x) (1 - x^2)^k dx` for a matrix polynomial with constant
/// rational entries.
pub fn integrate_against(m: &MatPoly, k: u32) -> ConstMat {
    let mut acc = ConstMat::zero(m.size());
    for (deg, c) in m.coeffs().iter().enumerate() {
        let mom = exact_moment(deg as u32, k);
        if !mom.is_zero() {
            acc = &acc + &c.scale(&RatFunc::from_rat(mom));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gegenbauer_low_degrees() {
        let lam = RatFunc::var(Var::A);
        assert!(gegenbauer_poly(-1, &lam).is_zero());
        assert_eq!(gegenbauer_poly(0, &lam), MatPoly::identity(1));
        // Hand expansion of the series at m = 2.
        let c2 = gegenbauer_upoly(2, &lam);
        assert_eq!(c2.to_ratfunc(Var::X), rf("2*a*(a + 1)*x^2 - a"));
    }

    #[test]
    fn gegenbauer_leading_coefficient() {
        let lam = rf("(n + 1)/2");
        for m in 0..8u32 {
            let lc = gegenbauer_upoly(m as i64, &lam).lc();
            let expected = pochhammer(&lam, m).scale(&(&Rat::from_int(2).pow(m) / &factorial(m)));
            assert_eq!(lc, expected);
        }
    }

    #[test]
    fn first_polynomials() {
        assert_eq!(monic_mop_closed(0).poly, MatPoly::identity(2));
        let q1 = MatPoly::from_strs(2, &["x", "1/(p + 1)", "1/(n - p + 1)", "x"]).unwrap();
        assert_eq!(monic_mop_closed(1).poly, q1);
        assert_eq!(monic_mop_coeffs(1).poly, q1);
        assert!(monic_mop_closed(5).is_monic());
        assert_eq!(monic_mop_coeffs(0).coeff(0), ConstMat::identity(2));
        assert_eq!(
            odd_coefficient(1, 0),
            ConstMat::from_strs2([["0", "1/(p + 1)"], ["1/(n - p + 1)", "0"]])
        );
    }

    #[test]
    fn moments() {
        assert_eq!(exact_moment(1, 3), Rat::zero());
        assert_eq!(exact_moment(0, 1), Rat::new(4, 3));
        assert_eq!(exact_moment(2, 1), Rat::new(4, 15));
        assert_eq!(exact_moment(0, 0), Rat::from_int(2));
    }

    #[test]
    fn weight_reflection_symmetry() {
        let w = weight().polynomial_part;
        assert_eq!(w.reflect().conjugate_by_t().unwrap(), w);
        assert_eq!(w.transpose(), w);
    }

    #[test]
    fn generator_eigenvalues_match_closed_form() {
        let g = generators();
        for (d, e) in g.all().iter().zip(expected_eigenvalues()) {
            assert_eq!(d.eigenvalue_map(), e);
        }
    }

    #[test]
    fn first_eigen_equation() {
        let g = generators();
        let q1 = monic_mop_closed(1);
        let lam = ConstMat::from_strs2([["(1 + p)*(n - p + 2)", "0"], ["0", "0"]]);
        assert_eq!(g.d1.apply(&q1.poly).unwrap(), q1.poly.left_mul_const(&lam));
        assert_eq!(g.d1.eigenvalue_map().at(&RatFunc::one()), lam);
    }

    #[test]
    fn gram_errors() {
        assert!(gram_entry(0, 0, &Rat::from_int(5), &Rat::one()).is_err());
        assert!(gram_entry(0, 0, &Rat::from_int(4), &Rat::from_int(2)).is_err());
        assert!(gram_entry(0, 0, &Rat::from_int(4), &Rat::zero()).is_err());
    }

    #[test]
    fn orthogonality_at_small_degree() {
        let (n, p) = (Rat::from_int(4), Rat::one());
        assert!(gram_entry(0, 1, &n, &p).unwrap().is_zero());
        assert!(gram_entry(1, 0, &n, &p).unwrap().is_zero());
        let g00 = gram_entry(0, 0, &n, &p).unwrap();
        for m in g00.leading_minors() {
            assert!(m.as_constant().unwrap().is_positive(), "{g00}");
        }
    }
}
