//! Exact arithmetic: rationals, multivariate polynomials and the rational
//! function field over the parameters `p`, `n` (with optional extra
//! indeterminates `a`, `w`, `x`, `alpha`).

pub mod gcd;
pub mod mpoly;
pub mod parse;
pub mod rat;
pub mod ratfunc;
pub mod symbols;
pub mod upoly;

use std::collections::BTreeMap;

pub use mpoly::{MPoly, Monomial, Var};
pub use rat::Rat;
pub use ratfunc::RatFunc;
pub use symbols::{binomial, factorial, falling_factorial, pochhammer};
pub use upoly::UPoly;

/// Exact substitution map for [`RatFunc::evaluate`] and friends.
pub type Bindings = BTreeMap<Var, Rat>;

/// Shorthand for parsing a rational function literal; panics on bad input.
/// Intended for constants written in source code.
pub fn rf(s: &str) -> RatFunc {
    s.parse()
        .unwrap_or_else(|e| panic!("bad literal `{s}`: {e}"))
}

/// Arithmetic on two field elements selected at runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(x: &RatFunc, y: &RatFunc, op: FieldOp) -> crate::Result<RatFunc> {
    Ok(match op {
        FieldOp::Add => x + y,
        FieldOp::Sub => x - y,
        FieldOp::Mul => x * y,
        FieldOp::Div => x.checked_div(y)?,
    })
}

/// Parses `n=4,p=1` style binding lists.
pub fn parse_bindings(s: &str) -> crate::Result<Bindings> {
    let mut out = Bindings::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| crate::Error::Parse(format!("expected name=value, got `{part}`")))?;
        out.insert(mpoly::parse_var(k)?, v.trim().parse()?);
    }
    Ok(out)
}
