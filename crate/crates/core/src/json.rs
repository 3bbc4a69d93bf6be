//! JSON encodings. Field elements are strings (`"(p + 1)/(n - 2*p)"`),
//! matrix polynomials are `{"size":2,"coeffs":[[["f11","f12"],["f21","f22"]],...]}`
//! with `coeffs[j]` the `x^j` coefficient, and operators are
//! `{"order":s,"coeffs":[MatPoly,...]}` with `coeffs[i]` the `d^i` coefficient.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diffop::DiffOp;
use crate::exactfield::{RatFunc, UPoly};
use crate::matpoly::{ConstMat, MatPoly};
use crate::Result;

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Ascending coefficient list.
impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(UPoly::from_coeffs(Vec::<RatFunc>::deserialize(d)?))
    }
}

/// Row-major nested list.
impl Serialize for ConstMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
struct MatPolyRepr {
    size: usize,
    coeffs: Vec<Vec<Vec<RatFunc>>>,
}

impl From<&MatPoly> for MatPolyRepr {
    fn from(m: &MatPoly) -> Self {
        MatPolyRepr {
            size: m.size(),
            coeffs: m.coeffs().iter().map(ConstMat::rows).collect(),
        }
    }
}

impl TryFrom<MatPolyRepr> for MatPoly {
    type Error = String;
    fn try_from(r: MatPolyRepr) -> std::result::Result<Self, String> {
        if r.size == 0 {
            return Err("size must be positive".into());
        }
        let mut coeffs = Vec::with_capacity(r.coeffs.len());
        for rows in r.coeffs {
            if rows.len() != r.size || rows.iter().any(|row| row.len() != r.size) {
                return Err(format!("coefficient is not {0}x{0}", r.size));
            }
            coeffs.push(ConstMat::from_rows(rows));
        }
        Ok(MatPoly::from_coeffs(r.size, coeffs))
    }
}

impl Serialize for MatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatPolyRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatPolyRepr::deserialize(d)?
            .try_into()
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct DiffOpRepr {
    order: Option<usize>,
    coeffs: Vec<MatPoly>,
}

impl Serialize for DiffOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiffOpRepr {
            order: self.order(),
            coeffs: self.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DiffOpRepr::deserialize(d)?;
        let size = r.coeffs.first().map_or(2, MatPoly::size);
        if r.coeffs.iter().any(|c| c.size() != size) {
            return Err(D::Error::custom("coefficients of different sizes"));
        }
        let op = DiffOp::from_coeffs(size, r.coeffs);
        if r.order.is_some() && op.order() != r.order {
            return Err(D::Error::custom(format!(
                "declared order {:?} but coefficients give {:?}",
                r.order,
                op.order()
            )));
        }
        Ok(op)
    }
}

pub fn diffop_to_json(op: &DiffOp) -> String {
    serde_json::to_string(op).expect("serializable")
}

pub fn diffop_from_json(s: &str) -> Result<DiffOp> {
    Ok(serde_json::from_str(s)?)
}

pub fn matpoly_to_json(m: &MatPoly) -> String {
    serde_json::to_string(m).expect("serializable")
}

pub fn matpoly_from_json(s: &str) -> Result<MatPoly> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gegenbauer::{generators, monic_mop_closed};

    #[test]
    fn matpoly_layout() {
        let m = MatPoly::from_strs(2, &["x", "1/(p + 1)", "0", "x^2"]).unwrap();
        assert_eq!(
            matpoly_to_json(&m),
            r#"{"size":2,"coeffs":[[["0","1/(p + 1)"],["0","0"]],[["1","0"],["0","0"]],[["0","0"],["0","1"]]]}"#
        );
    }

    #[test]
    fn roundtrips() {
        let q = monic_mop_closed(3).poly;
        assert_eq!(matpoly_from_json(&matpoly_to_json(&q)).unwrap(), q);
        for d in generators().all() {
            let s = diffop_to_json(d);
            assert!(s.starts_with(r#"{"order":2,"#));
            assert_eq!(&diffop_from_json(&s).unwrap(), d);
        }
        let z = DiffOp::zero(2);
        assert_eq!(diffop_to_json(&z), r#"{"order":null,"coeffs":[]}"#);
        assert_eq!(diffop_from_json(&diffop_to_json(&z)).unwrap(), z);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(
            diffop_from_json(r#"{"order":3,"coeffs":[{"size":1,"coeffs":[[["1"]]]}]}"#).is_err()
        );
        assert!(matpoly_from_json(r#"{"size":2,"coeffs":[[["1"]]]}"#).is_err());
        assert!(matpoly_from_json(r#"{"size":1,"coeffs":[[["1/"]]]}"#).is_err());
    }
}
