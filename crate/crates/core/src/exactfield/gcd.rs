//! Multivariate polynomial gcd over the rationals.
//!
//! The first attempt is the heuristic integer gcd: clear denominators,
//! evaluate one variable at a large integer, recurse, rebuild the candidate
//! from its balanced digits and accept it only if it divides both inputs.
//! When the evaluation points grow too large the polynomial is viewed as
//! univariate in its most significant variable, contents are split off
//! recursively and the primitive parts are reduced with a primitive
//! pseudo-remainder sequence. Purely univariate inputs fall through to
//! Euclid over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mpoly::{MPoly, Monomial, Var};
use super::Rat;

/// Evaluation points above this many bits abandon the heuristic route.
const HEURISTIC_BIT_LIMIT: u64 = 6000;

/// Monic gcd of `a` and `b`; `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 {
        return monomial_gcd(&a.terms()[0].0, b);
    }
    if b.len() == 1 {
        return monomial_gcd(&b.terms()[0].0, a);
    }
    let (small, big) = if a.total_degree() <= b.total_degree() {
        (a, b)
    } else {
        (b, a)
    };
    if big.div_exact(small).is_some() {
        return small.monic();
    }

    if let Some(g) = heuristic_gcd(&integer_primitive(a), &integer_primitive(b)) {
        return g.monic();
    }

    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument cannot occur in the gcd.
    for &v in va.iter().rev() {
        if !vb.contains(&v) {
            return gcd(&content_in(a, v), b);
        }
    }
    for &v in vb.iter().rev() {
        if !va.contains(&v) {
            return gcd(a, &content_in(b, v));
        }
    }

    let v = *va.last().expect("non-constant");
    let ac = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    if va.len() == 1 {
        return univariate_gcd(v, &ac, &bc);
    }
    let ca = gcd_list(&ac);
    let cb = gcd_list(&bc);
    let c = gcd(&ca, &cb);
    let pa = divide_all(&ac, &ca);
    let pb = divide_all(&bc, &cb);
    let g = primitive_prs(pa, pb);
    (&c * &MPoly::from_coeffs_in(v, &g)).monic()
}

/// `f` scaled to coprime integer coefficients.
fn integer_primitive(f: &MPoly) -> MPoly {
    let c = f.rational_content();
    if c.is_one() || c.is_zero() {
        f.clone()
    } else {
        f.scale(&c.recip().expect("nonzero"))
    }
}

fn int(r: &Rat) -> BigInt {
    debug_assert!(r.is_integer());
    r.numer()
}

fn max_norm(f: &MPoly) -> BigInt {
    f.terms()
        .iter()
        .map(|(_, c)| int(c).abs())
        .max()
        .unwrap_or_default()
}

/// `f` with `v = xi`.
fn evaluate_at(f: &MPoly, v: Var, xi: &BigInt) -> MPoly {
    let deg = f.degree_in(v).unwrap_or(0) as usize;
    let mut powers = Vec::with_capacity(deg + 1);
    powers.push(BigInt::one());
    for k in 1..=deg {
        let next = &powers[k - 1] * xi;
        powers.push(next);
    }
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let e = m.exp(v) as usize;
            (
                m.with_exp(v, 0),
                Rat::from_bigints(&int(c) * &powers[e], BigInt::one()).expect("nonzero"),
            )
        })
        .collect();
    MPoly::from_terms(terms)
}

/// Inverse of [`evaluate_at`] for polynomials whose coefficients in `v` lie
/// in `(-xi/2, xi/2]`.
fn balanced_digits(g: &MPoly, v: Var, xi: &BigInt) -> MPoly {
    let half = xi >> 1;
    let mut terms = Vec::new();
    for (m, c) in g.terms() {
        let mut rest = int(c);
        let mut e = 0u16;
        while !rest.is_zero() {
            let mut d = rest.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            rest = (&rest - &d) / xi;
            if !d.is_zero() {
                terms.push((
                    m.with_exp(v, e),
                    Rat::from_bigints(d, BigInt::one()).expect("nonzero"),
                ));
            }
            e += 1;
        }
    }
    MPoly::from_terms(terms)
}

fn integer_content(f: &MPoly) -> BigInt {
    f.terms()
        .iter()
        .fold(BigInt::zero(), |g, (_, c)| g.gcd(&int(c)))
}

/// Gcd of two integer polynomials including the integer content, or `None`
/// if the evaluation points exceed [`HEURISTIC_BIT_LIMIT`].
fn heuristic_gcd(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let ca = integer_content(a);
    let cb = integer_content(b);
    let c = ca.gcd(&cb);
    let content = MPoly::constant(Rat::from_bigints(c.clone(), BigInt::one()).expect("nonzero"));
    if a.is_constant() || b.is_constant() {
        return Some(content);
    }
    let inv = |x: &BigInt| Rat::from_bigints(BigInt::one(), x.clone()).expect("nonzero");
    let pa = a.scale(&inv(&ca));
    let pb = b.scale(&inv(&cb));
    let v = *pa
        .vars()
        .iter()
        .chain(pb.vars().iter())
        .max()
        .expect("non-constant");
    let mut xi: BigInt = 2 * max_norm(&pa).min(max_norm(&pb)) + 29;
    for _ in 0..6 {
        let deg = pa
            .degree_in(v)
            .unwrap_or(0)
            .max(pb.degree_in(v).unwrap_or(0)) as u64;
        if xi.bits() * deg.max(1) > HEURISTIC_BIT_LIMIT {
            return None;
        }
        let ea = evaluate_at(&pa, v, &xi);
        let eb = evaluate_at(&pb, v, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            let gamma = heuristic_gcd(&ea, &eb)?;
            let cand = balanced_digits(&gamma, v, &xi);
            if !cand.is_zero() {
                let cand = cand.scale(&inv(&integer_content(&cand)));
                if pa.div_exact(&cand).is_some() && pb.div_exact(&cand).is_some() {
                    return Some(&cand * &content);
                }
            }
        }
        xi = &xi * 73794u32 / 27011u32;
    }
    None
}

/// Monic gcd of a list of polynomials.
pub fn gcd_list(polys: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

/// The gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub fn content_in(f: &MPoly, v: Var) -> MPoly {
    gcd_list(&f.coeffs_in(v))
}

fn monomial_gcd(m: &Monomial, f: &MPoly) -> MPoly {
    let g = f.terms().iter().fold(*m, |acc, (tm, _)| acc.gcd(tm));
    MPoly::term(g, Rat::one())
}

fn divide_all(coeffs: &[MPoly], d: &MPoly) -> Vec<MPoly> {
    if d.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.div_exact(d).expect("content divides every coefficient"))
        .collect()
}

fn trim(v: &mut Vec<MPoly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Removes the polynomial content and the rational content.
fn primitive_part(mut coeffs: Vec<MPoly>) -> Vec<MPoly> {
    trim(&mut coeffs);
    if coeffs.is_empty() {
        return coeffs;
    }
    let g = gcd_list(&coeffs);
    let mut coeffs = divide_all(&coeffs, &g);
    let rc = coeffs
        .iter()
        .fold(Rat::zero(), |acc, c| acc.gcd(&c.rational_content()));
    if !rc.is_zero() && !rc.is_one() {
        let inv = rc.recip().expect("nonzero");
        coeffs = coeffs.iter().map(|c| c.scale(&inv)).collect();
    }
    coeffs
}

/// Pseudo-remainder of `a` by `b` (both dense in the main variable).
fn pseudo_rem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                r[k + shift] = &r[k + shift] - &(bk * &lr);
            }
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
    }
    r
}

fn primitive_prs(a: Vec<MPoly>, b: Vec<MPoly>) -> Vec<MPoly> {
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    trim(&mut b);
    while !b.is_empty() {
        if b.len() == 1 {
            // b is free of the main variable and primitive: the gcd is trivial.
            return vec![MPoly::one()];
        }
        let r = primitive_part(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    primitive_part(a)
}

fn univariate_gcd(v: Var, a: &[MPoly], b: &[MPoly]) -> MPoly {
    let to_rat = |c: &[MPoly]| -> Vec<Rat> {
        c.iter()
            .map(|m| m.as_constant().expect("univariate coefficients"))
            .collect()
    };
    let mut x = to_rat(a);
    let mut y = to_rat(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while y.iter().any(|c| !c.is_zero()) {
        let r = rat_rem(&x, &y);
        x = y;
        y = r;
    }
    let coeffs: Vec<MPoly> = x.into_iter().map(MPoly::constant).collect();
    MPoly::from_coeffs_in(v, &coeffs).monic()
}

fn rat_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut b = b.to_vec();
    while b.last().is_some_and(|c| c.is_zero()) {
        b.pop();
    }
    let mut r = a.to_vec();
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    let db = b.len() - 1;
    let inv = b[db].recip().expect("nonzero leading coefficient");
    while r.len() > db {
        let dr = r.len() - 1;
        let q = &r[dr] * &inv;
        let shift = dr - db;
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] = &r[k + shift] - &(bk * &q);
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::parse::parse_mpoly;

    fn mp(s: &str) -> MPoly {
        parse_mpoly(s).unwrap()
    }

    #[test]
    fn univariate() {
        let g = gcd(&mp("n^2 - 1"), &mp("n^2 + 2*n + 1"));
        assert_eq!(g, mp("n + 1"));
    }

    #[test]
    fn bivariate_common_factor() {
        let f = mp("(n - 2*p)*(p + 1)^2*(n + 3)");
        let g = mp("(n - 2*p)*(p + 1)*(n - p + 1)");
        assert_eq!(gcd(&f, &g), mp("(n - 2*p)*(p + 1)").monic());
    }

    #[test]
    fn coprime() {
        assert!(gcd(&mp("p + n + 1"), &mp("p - n")).is_one());
        assert!(gcd(&mp("p^2 + n^2"), &mp("p*n + 1")).is_one());
    }

    #[test]
    fn three_variables() {
        let common = mp("a^2*p - n + w");
        let f = &common * &mp("a + p*w");
        let g = &common * &mp("a - n^2");
        assert_eq!(gcd(&f, &g), common.monic());
    }

    #[test]
    fn monomial_factors() {
        assert_eq!(gcd(&mp("p^2*n"), &mp("p*n^3 + p^2")), mp("p"));
    }
}
