//! Structure of the algebra `D(W)`: the generators `A`, `B`, membership by
//! stripping leading terms, the center `C1`, `C2`, and the Hermite bridge.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::json;

use crate::diffop::{DiffOp, EigenPoly};
use crate::error::{Error, Result};
use crate::exactfield::{rf, RatFunc, UPoly, Var};
use crate::gegenbauer::generators;
use crate::report::Check;

/// Unital algebra over `Q(p, n)` (possibly with extra indeterminates), enough
/// to evaluate the relation batteries in several representations.
pub trait Algebra: Clone + PartialEq {
    fn one(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &RatFunc) -> Self;
    fn is_zero(&self) -> bool;

    fn pow(&self, e: u32) -> Self {
        let mut acc = self.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn comm(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

impl Algebra for DiffOp {
    fn one(&self) -> Self {
        DiffOp::identity(self.size())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &RatFunc) -> Self {
        DiffOp::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        DiffOp::is_zero(self)
    }
}

impl Algebra for EigenPoly {
    fn one(&self) -> Self {
        EigenPoly::identity(self.size())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &RatFunc) -> Self {
        self.scale_poly(&UPoly::constant(c.clone()))
    }
    fn is_zero(&self) -> bool {
        EigenPoly::is_zero(self)
    }
}

/// `n - 2p`.
pub fn shift_constant() -> RatFunc {
    rf("n - 2*p")
}

fn shift_op() -> DiffOp {
    DiffOp::scalar(2, shift_constant())
}

/// `A = (D1 + D2)/(n - 2p)`, `B = (D3 + D4)/(n - 2p)`.
pub fn build_ab() -> (DiffOp, DiffOp) {
    let g = generators();
    let inv = shift_constant().inv().expect("nonzero");
    ((&g.d1 + &g.d2).scale(&inv), (&g.d3 + &g.d4).scale(&inv))
}

/// Shared `(A, B)`.
pub fn ab() -> &'static (DiffOp, DiffOp) {
    static AB: OnceLock<(DiffOp, DiffOp)> = OnceLock::new();
    AB.get_or_init(build_ab)
}

/// A named identity `lhs = rhs`, stored as `lhs - rhs`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub residual: DiffOp,
}

impl Relation {
    fn new(name: &str, lhs: DiffOp, rhs: DiffOp) -> Relation {
        Relation {
            name: name.into(),
            residual: &lhs - &rhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn check(&self) -> Check {
        Check::residual(self.name.clone(), &self.residual)
    }
}

/// All sixteen products `Di Dj` expressed back in the generators.
pub fn product_table_relations() -> Vec<Relation> {
    let g = generators();
    let (d1, d2, d3, d4) = (&g.d1, &g.d2, &g.d3, &g.d4);
    let c = shift_op();
    let s = d1 + d2;
    let z = DiffOp::zero(2);
    vec![
        Relation::new("D1D1 = (D1+D2)D1", d1 * d1, &s * d1),
        Relation::new("D1D2 = 0", d1 * d2, z.clone()),
        Relation::new("D1D3 = 0", d1 * d3, z.clone()),
        Relation::new("D1D4 = D4D2 - (n-2p)D4", d1 * d4, &(d4 * d2) - &(d4 * &c)),
        Relation::new("D2D1 = 0", d2 * d1, z.clone()),
        Relation::new("D2D2 = (D1+D2)D2", d2 * d2, &s * d2),
        Relation::new("D2D3 = D3D1 + (n-2p)D3", d2 * d3, &(d3 * d1) + &(d3 * &c)),
        Relation::new("D2D4 = 0", d2 * d4, z.clone()),
        Relation::new(
            "D3D1 = (D1+D2)D3 - (n-2p)D3",
            d3 * d1,
            &(&s * d3) - &(d3 * &c),
        ),
        Relation::new("D3D2 = 0", d3 * d2, z.clone()),
        Relation::new("D3D3 = 0", d3 * d3, z.clone()),
        Relation::new("D3D4 = D2^2 - (n-2p)D2", d3 * d4, &(d2 * d2) - &(d2 * &c)),
        Relation::new("D4D1 = 0", d4 * d1, z.clone()),
        Relation::new(
            "D4D2 = (D1+D2)D4 + (n-2p)D4",
            d4 * d2,
            &(&s * d4) + &(d4 * &c),
        ),
        Relation::new("D4D3 = D1^2 + (n-2p)D1", d4 * d3, &(d1 * d1) + &(d1 * &c)),
        Relation::new("D4D4 = 0", d4 * d4, z),
    ]
}

/// The four defining relations between `A` and `B`, in any representation.
pub fn ab_relations<T: Algebra>(a: &T, b: &T) -> Vec<(&'static str, T)> {
    let a2 = a.mul(a);
    let b2 = b.mul(b);
    let aba = a.mul(b).mul(a);
    vec![
        ("B^2A - AB^2 = 0", b2.mul(a).sub(&a.mul(&b2))),
        (
            "BA^2 + A^2B - 2ABA - B = 0",
            b.mul(&a2)
                .add(&a2.mul(b))
                .sub(&aba.scale(&RatFunc::from_int(2)))
                .sub(b),
        ),
        (
            "BAB + A^3 - 2AB^2 - A = 0",
            b.mul(a)
                .mul(b)
                .add(&a2.mul(a))
                .sub(&a.mul(&b2).scale(&RatFunc::from_int(2)))
                .sub(a),
        ),
        (
            "B^3 - 2A^2B + ABA = 0",
            b2.mul(b)
                .sub(&a2.mul(b).scale(&RatFunc::from_int(2)))
                .add(&aba),
        ),
    ]
}

pub fn rel_relations() -> Vec<Relation> {
    let (a, b) = ab();
    ab_relations(a, b)
        .into_iter()
        .map(|(name, r)| Relation {
            name: name.into(),
            residual: r,
        })
        .collect()
}

/// The cubic relation satisfied by `A` and `B`. The fourth entry of
/// [`rel_relations`], `B^3 - 2A^2B + ABA`, leaves a nonzero residual.
pub fn cubic_relation() -> Relation {
    let (a, b) = ab();
    Relation::new("B^3 = ABA", &(b * b) * b, &(a * b) * a)
}

/// `D1..D4` rebuilt from `A`, `B`.
pub fn ds_relations() -> Vec<Relation> {
    let (a, b) = ab();
    let g = generators();
    let half = &shift_constant() * &rf("1/2");
    let (a2, b2, ab_, ba) = (a * a, b * b, a * b, b * a);
    vec![
        Relation::new(
            "D1 = (B^2 - A^2 + A)(n-2p)/2",
            (&(&b2 - &a2) + a).scale(&half),
            g.d1.clone(),
        ),
        Relation::new(
            "D2 = (A^2 - B^2 + A)(n-2p)/2",
            (&(&a2 - &b2) + a).scale(&half),
            g.d2.clone(),
        ),
        Relation::new(
            "D3 = (AB - BA + B)(n-2p)/2",
            (&(&ab_ - &ba) + b).scale(&half),
            g.d3.clone(),
        ),
        Relation::new(
            "D4 = (BA - AB + B)(n-2p)/2",
            (&(&ba - &ab_) + b).scale(&half),
            g.d4.clone(),
        ),
    ]
}

/// `(D3 + D4)^2 = (D1 + D2)^2 + (n - 2p)(D1 - D2)`.
pub fn sum_square_relation() -> Relation {
    let g = generators();
    let s = &g.d1 + &g.d2;
    let t = &g.d3 + &g.d4;
    Relation::new(
        "(D3+D4)^2 = (D1+D2)^2 + (n-2p)(D1-D2)",
        &t * &t,
        &(&s * &s) + &(&g.d1 - &g.d2).scale(&shift_constant()),
    )
}

/// `sum c_ij (D1+D2)^i D_j + const_term I`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpanDecomp {
    pub const_term: RatFunc,
    #[serde(serialize_with = "serialize_table")]
    pub table: BTreeMap<(usize, usize), RatFunc>,
}

fn serialize_table<S: serde::Serializer>(
    t: &BTreeMap<(usize, usize), RatFunc>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for ((i, j), c) in t {
        seq.serialize_element(&json!({"i": i, "j": j, "coeff": c}))?;
    }
    seq.end()
}

impl SpanDecomp {
    pub fn get(&self, i: usize, j: usize) -> RatFunc {
        self.table.get(&(i, j)).cloned().unwrap_or_default()
    }

    fn add_entry(&mut self, i: usize, j: usize, c: &RatFunc) {
        let e = self.table.entry((i, j)).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.table.remove(&(i, j));
        }
    }

    pub fn add(&self, other: &SpanDecomp) -> SpanDecomp {
        let mut out = self.clone();
        out.const_term = &out.const_term + &other.const_term;
        for ((i, j), c) in &other.table {
            out.add_entry(*i, *j, c);
        }
        out
    }

    pub fn reassemble(&self) -> DiffOp {
        let g = generators();
        let s = &g.d1 + &g.d2;
        let mut out = DiffOp::scalar(2, self.const_term.clone());
        let mut power = DiffOp::identity(2);
        let mut at = 0;
        for ((i, j), c) in &self.table {
            while at < *i {
                power = &power * &s;
                at += 1;
            }
            out = &out + &(&power * g.get(*j)).scale(c);
        }
        out
    }
}

impl fmt::Display for SpanDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.const_term.is_zero() {
            parts.push(format!("({})*I", self.const_term));
        }
        for ((i, j), c) in &self.table {
            let s = match i {
                0 => String::new(),
                1 => "(D1+D2)*".into(),
                _ => format!("(D1+D2)^{i}*"),
            };
            parts.push(format!("({c})*{s}D{j}"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Writes `D` in the spanning set `{I, (D1+D2)^i Dj}` by repeatedly removing
/// the top-order term; fails with [`Error::NonMember`] when the operator is
/// outside `D(W)`.
pub fn decompose(d: &DiffOp) -> Result<SpanDecomp> {
    if d.size() != 2 {
        return Err(Error::NotSizeTwo(d.size()));
    }
    let g = generators();
    let s = &g.d1 + &g.d2;
    let mut powers = vec![DiffOp::identity(2)];
    let mut out = SpanDecomp::default();
    let mut residual = d.clone();
    while let Some(order) = residual.order() {
        let lead = residual.leading_coeff().expect("nonzero");
        if order == 0 {
            return match lead
                .degree()
                .and_then(|deg| (deg == 0).then(|| lead.coeff(0).as_scalar()))
                .flatten()
            {
                Some(c) => {
                    out.const_term = c;
                    Ok(out)
                }
                None => Err(Error::NonMember(format!(
                    "order-0 residual is not a scalar: {lead}"
                ))),
            };
        }
        if order % 2 == 1 {
            return Err(Error::NonMember(format!("residual has odd order {order}")));
        }
        if lead.degree() != Some(order) {
            return Err(Error::NonMember(format!(
                "leading coefficient of the order-{order} residual has degree {:?}",
                lead.degree()
            )));
        }
        let top = lead.coeff(order);
        let i = order / 2 - 1;
        while powers.len() <= i {
            let next = powers.last().expect("nonempty") * &s;
            powers.push(next);
        }
        let parts = [
            (1, top.get(0, 0)),
            (2, top.get(1, 1)),
            (3, top.get(1, 0)),
            (4, top.get(0, 1)),
        ];
        let mut inner = DiffOp::zero(2);
        for (j, c) in parts {
            if !c.is_zero() {
                inner = &inner + &g.get(j).scale(c);
                out.add_entry(i, j, c);
            }
        }
        residual = &residual - &(&powers[i] * &inner);
    }
    Ok(out)
}

/// `C1 = (D3+D4)^2`, `C2 = D3 D1 D4 + D4 (D2 - (n-2p)I) D3`.
pub fn build_center() -> (DiffOp, DiffOp) {
    let g = generators();
    let t = &g.d3 + &g.d4;
    let c1 = &t * &t;
    let c2 = &(&(&g.d3 * &g.d1) * &g.d4) + &(&(&g.d4 * &(&g.d2 - &shift_op())) * &g.d3);
    (c1, c2)
}

pub fn center() -> &'static (DiffOp, DiffOp) {
    static C: OnceLock<(DiffOp, DiffOp)> = OnceLock::new();
    C.get_or_init(build_center)
}

/// Scalar eigenvalues of `C1` and `C2`:
/// `(w+p)(w+p+1)(w+n-p+1)(w+n-p)` and `(w+p)^2(w+p+1)(w+n-p+1)^2(w+n-p)`.
pub fn center_eigenvalues() -> (UPoly, UPoly) {
    let up = |s: &str| UPoly::from_ratfunc(&rf(s), Var::W).expect("polynomial in w");
    (
        up("(w + p)*(w + p + 1)*(w + n - p + 1)*(w + n - p)"),
        up("(w + p)^2*(w + p + 1)*(w + n - p + 1)^2*(w + n - p)"),
    )
}

/// `C1^3 - C2^2 = (n-2p) C1 C2`.
pub fn curve_relation() -> Relation {
    let (c1, c2) = center();
    Relation::new(
        "C1^3 - C2^2 = (n-2p)C1C2",
        &(&(c1 * c1) * c1) - &(c2 * c2),
        (c1 * c2).scale(&shift_constant()),
    )
}

pub fn is_central(d: &DiffOp) -> Result<bool> {
    for g in generators().all() {
        if !d.commutator(g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `D = p(C1) + q(C1) C2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterDecomp {
    pub p_poly: UPoly,
    pub q_poly: UPoly,
}

impl CenterDecomp {
    pub fn reassemble(&self) -> DiffOp {
        let (c1, c2) = center();
        let horner = |u: &UPoly| {
            let mut acc = DiffOp::zero(2);
            for c in u.coeffs().iter().rev() {
                acc = &(&acc * c1) + &DiffOp::scalar(2, c.clone());
            }
            acc
        };
        &horner(&self.p_poly) + &(&horner(&self.q_poly) * c2)
    }
}

impl fmt::Display for CenterDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p(t) = {}, q(t) = {}",
            self.p_poly.display_in("t"),
            self.q_poly.display_in("t")
        )
    }
}

/// Reduces the scalar eigenvalue polynomial of a central operator by the
/// images of `C1^i` (degree `4i`) and `C1^i C2` (degree `4i + 6`), then checks
/// the reassembled operator against the input.
pub fn center_decompose(d: &DiffOp) -> Result<CenterDecomp> {
    if d.size() != 2 {
        return Err(Error::NotSizeTwo(d.size()));
    }
    if !is_central(d)? {
        return Err(Error::NotCentral(
            "operator does not commute with D1..D4".into(),
        ));
    }
    let mut r = d
        .eigenvalue_map()
        .as_scalar()
        .ok_or_else(|| Error::NotCentral("eigenvalue is not a scalar matrix".into()))?;
    let (p1, p2) = center_eigenvalues();
    let mut p_coeffs = Vec::new();
    let mut q_coeffs = Vec::new();
    let put = |v: &mut Vec<RatFunc>, k: usize, c: RatFunc| {
        if v.len() <= k {
            v.resize(k + 1, RatFunc::zero());
        }
        v[k] = &v[k] + &c;
    };
    while let Some(deg) = r.degree() {
        let lc = r.lc();
        let image = match deg {
            0 => {
                put(&mut p_coeffs, 0, lc.clone());
                UPoly::constant(lc)
            }
            _ if deg % 4 == 0 => {
                let k = deg / 4;
                put(&mut p_coeffs, k, lc.clone());
                p1.pow(k as u32).scale(&lc)
            }
            _ if deg % 4 == 2 && deg >= 6 => {
                let k = (deg - 6) / 4;
                put(&mut q_coeffs, k, lc.clone());
                (&p1.pow(k as u32) * &p2).scale(&lc)
            }
            _ => {
                return Err(Error::DecompositionFailure(format!(
                    "eigenvalue residual of degree {deg} is not reachable from C1, C2"
                )))
            }
        };
        r = &r - &image;
    }
    let out = CenterDecomp {
        p_poly: UPoly::from_coeffs(p_coeffs),
        q_poly: UPoly::from_coeffs(q_coeffs),
    };
    if out.reassemble() != *d {
        return Err(Error::DecompositionFailure(
            "reassembled operator differs from the input".into(),
        ));
    }
    Ok(out)
}

/// The corrected Hermite relations evaluated at `E = A - 2I/a^2`,
/// `F = (4 + a^4)B + (4 - a^4)[B, A]`, in any representation of `A`, `B`.
pub fn hermite_relations<T: Algebra>(a_op: &T, b_op: &T) -> Vec<(&'static str, T)> {
    let c = |s: &str| rf(s);
    let one = a_op.one();
    let e = a_op.sub(&one.scale(&c("2/a^2")));
    let f = b_op
        .scale(&c("4 + a^4"))
        .add(&b_op.comm(a_op).scale(&c("4 - a^4")));
    let ef = e.comm(&f);
    let (e2, f2) = (e.mul(&e), f.mul(&f));
    let (e3, e4) = (e2.mul(&e), e2.mul(&e2));
    let f3 = f2.mul(&f);
    let f4 = f2.mul(&f2);

    let quartic = f4
        .scale(&c("1/16"))
        .sub(&f2.mul(&e2).scale(&c("a^2/2")))
        .sub(&f2.mul(&e).scale(&c("2*a")))
        .sub(&f2.scale(&c("2")))
        .add(&e4.scale(&c("a^4")))
        .add(&e3.scale(&c("8*a^3")))
        .sub(&e2.scale(&c("a^2*(a^2 - 24)")))
        .sub(&e.scale(&c("4*a*(a^2 - 8)")))
        .sub(&one.scale(&c("4*(a^2 - 4)")));
    let cubic = f3
        .add(&f2.mul(&ef))
        .sub(&e2.mul(&f).scale(&c("4*a^2")))
        .sub(&e2.mul(&ef).scale(&c("4*a^2")))
        .add(&e.mul(&f).scale(&c("4*a*(a - 4)")))
        .add(&e.mul(&ef).scale(&c("4*a*(a - 4)")))
        .add(&f.scale(&c("8*(a - 2)")))
        .add(&ef.scale(&c("8*(a - 2)")));
    vec![
        ("Hermite relation quartic in F", quartic),
        ("Hermite relation cubic in F", cubic),
    ]
}

/// `A` and `B` through `xi` and back through `phi`: returns
/// `(phi(xi(E)) - A, phi(xi(F)) - B)` in the given representation.
pub fn bridge_round_trip<T: Algebra>(a_op: &T, b_op: &T) -> (T, T) {
    let c = |s: &str| rf(s);
    let one = a_op.one();
    let e = a_op.sub(&one.scale(&c("2/a^2")));
    let f = b_op
        .scale(&c("4 + a^4"))
        .add(&b_op.comm(a_op).scale(&c("4 - a^4")));
    let a_back = e.add(&one.scale(&c("2/a^2")));
    let b_back = f
        .scale(&c("4 + a^4"))
        .add(&e.comm(&f).scale(&c("4 - a^4")))
        .scale(&c("1/(8*a^4)"));
    (a_back.sub(a_op), b_back.sub(b_op))
}

fn eigen_ab() -> (EigenPoly, EigenPoly) {
    let (a, b) = ab();
    (a.eigenvalue_map(), b.eigenvalue_map())
}

/// Hermite bridge checks in the eigenvalue representation (faithful on
/// `D(W)`), optionally repeated on the concrete operators.
pub fn hermite_bridge_check(concrete: bool) -> Vec<Check> {
    let mut out = Vec::new();
    let (ea, eb) = eigen_ab();
    for (name, r) in hermite_relations(&ea, &eb) {
        out.push(Check::from_bool(
            format!("{name} [eigenvalue]"),
            r.is_zero(),
            || json!(r.to_string()),
        ));
    }
    let (ra, rb) = bridge_round_trip(&ea, &eb);
    out.push(Check::from_bool(
        "phi(xi(E)) = A [eigenvalue]",
        ra.is_zero(),
        || json!(ra.to_string()),
    ));
    out.push(round_trip_b_check(&rb, &eb));
    if concrete {
        let (a, b) = ab();
        for (name, r) in hermite_relations(a, b) {
            out.push(Check::residual(format!("{name} [operator]"), &r));
        }
        let (ra, _) = bridge_round_trip(a, b);
        out.push(Check::residual("phi(xi(E)) = A [operator]", &ra));
    }
    out
}

/// `phi(xi(F))` as written comes out as a multiple of `B`; the check reports
/// the factor in the witness when it is not 1.
fn round_trip_b_check(rb: &EigenPoly, eb: &EigenPoly) -> Check {
    if rb.is_zero() {
        return Check::pass("phi(xi(F)) = B [eigenvalue]");
    }
    let back = rb + eb;
    let factor = (0..2)
        .flat_map(|r| (0..2).map(move |c| (r, c)))
        .find(|&(r, c)| !eb.get(r, c).is_zero())
        .map(|(r, c)| {
            back.get(r, c)
                .lc()
                .checked_div(&eb.get(r, c).lc())
                .expect("nonzero")
        });
    let proportional = factor.as_ref().is_some_and(|k| eb.scale(k) == back);
    let msg = match (factor, proportional) {
        (Some(k), true) => format!("phi(xi(F)) = ({k})*B"),
        _ => format!("residual {rb}"),
    };
    Check::fail("phi(xi(F)) = B [eigenvalue]", json!(msg))
}
