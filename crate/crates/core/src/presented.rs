//! The algebra on two letters `alpha`, `beta` modulo the four relations
//! satisfied by `A`, `B`, kept as a free module of rank 4 over the
//! polynomial ring in `alpha` with basis `{I, beta^2, beta, beta alpha}`.
//!
//! Elements multiply by folding right multiplication by single letters. The
//! cubic rule for `beta^3` is selectable: [`CubicRule::AsStated`] rewrites
//! `beta^3 = 2 alpha^2 beta - alpha beta alpha`, [`CubicRule::Corrected`]
//! rewrites `beta^3 = alpha beta alpha`, which is the relation the concrete
//! operators satisfy.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::diffop::DiffOp;
use crate::dwalgebra::{ab, shift_constant};
use crate::error::{Error, Result};
use crate::exactfield::{RatFunc, UPoly};
use crate::gegenbauer::generators;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Alpha,
    Beta,
}

/// A word in `alpha`, `beta`; written with `A` for `alpha` and `B` for
/// `beta`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn random<R: Rng>(rng: &mut R, len: usize) -> Word {
        Word(
            (0..len)
                .map(|_| {
                    if rng.gen() {
                        Letter::Alpha
                    } else {
                        Letter::Beta
                    }
                })
                .collect(),
        )
    }

    /// Product of `A`, `B` along the word.
    pub fn to_diffop(&self) -> DiffOp {
        let (a, b) = ab();
        self.0.iter().fold(DiffOp::identity(2), |acc, l| match l {
            Letter::Alpha => &acc * a,
            Letter::Beta => &acc * b,
        })
    }

    /// `(n-2p)^len` times [`Word::to_diffop`]: the same product of
    /// `D1 + D2` and `D3 + D4`.
    pub fn to_diffop_scaled(&self) -> DiffOp {
        let g = generators();
        let s = &g.d1 + &g.d2;
        let t = &g.d3 + &g.d4;
        self.0.iter().fold(DiffOp::identity(2), |acc, l| match l {
            Letter::Alpha => &acc * &s,
            Letter::Beta => &acc * &t,
        })
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut out = Vec::new();
        for ch in s.chars() {
            match ch {
                'A' | 'a' | 'α' => out.push(Letter::Alpha),
                'B' | 'b' | 'β' => out.push(Letter::Beta),
                '1' | '*' | '·' => {}
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected `{c}` in word"))),
            }
        }
        Ok(Word(out))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{}", if *l == Letter::Alpha { 'A' } else { 'B' })?;
        }
        Ok(())
    }
}

/// `m1 I + m2 beta^2 + m3 beta + m4 beta alpha`, `mi` polynomials in `alpha`
/// acting on the left.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgElem {
    pub m: [UPoly; 4],
}

impl AlgElem {
    pub fn zero() -> AlgElem {
        AlgElem::default()
    }

    pub fn one() -> AlgElem {
        AlgElem::basis(0)
    }

    /// Basis vector `k` in `0..4`: `I`, `beta^2`, `beta`, `beta alpha`.
    pub fn basis(k: usize) -> AlgElem {
        let mut out = AlgElem::zero();
        out.m[k] = UPoly::one();
        out
    }

    pub fn alpha() -> AlgElem {
        AlgElem::new([UPoly::x(), UPoly::zero(), UPoly::zero(), UPoly::zero()])
    }

    pub fn beta() -> AlgElem {
        AlgElem::basis(2)
    }

    pub fn new(m: [UPoly; 4]) -> AlgElem {
        AlgElem { m }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(UPoly::is_zero)
    }

    pub fn scale(&self, c: &RatFunc) -> AlgElem {
        AlgElem {
            m: self.m.clone().map(|u| u.scale(c)),
        }
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        AlgElem {
            m: std::array::from_fn(|k| &self.m[k] + &other.m[k]),
        }
    }

    pub fn sub(&self, other: &AlgElem) -> AlgElem {
        AlgElem {
            m: std::array::from_fn(|k| &self.m[k] - &other.m[k]),
        }
    }

    /// Left multiplication by a polynomial in `alpha`.
    pub fn left_mul(&self, u: &UPoly) -> AlgElem {
        AlgElem {
            m: self.m.clone().map(|c| u * &c),
        }
    }

    /// Largest `alpha`-degree among the coefficients.
    pub fn alpha_degree(&self) -> Option<usize> {
        self.m.iter().filter_map(UPoly::degree).max()
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.m[0].display_in("alpha"),
            self.m[1].display_in("alpha"),
            self.m[2].display_in("alpha"),
            self.m[3].display_in("alpha")
        )
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElem{self}")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CubicRule {
    /// `beta^3 = 2 alpha^2 beta - alpha beta alpha`.
    #[default]
    AsStated,
    /// `beta^3 = alpha beta alpha`.
    Corrected,
}

/// Multiplication table of the presented algebra.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub cubic: CubicRule,
}

fn poly(coeffs: &[i64]) -> UPoly {
    UPoly::from_coeffs(coeffs.iter().map(|&c| RatFunc::from_int(c)).collect())
}

impl Presentation {
    pub fn new(cubic: CubicRule) -> Presentation {
        Presentation { cubic }
    }

    /// `x alpha`.
    pub fn mul_alpha(&self, x: &AlgElem) -> AlgElem {
        let t = UPoly::x();
        let [m1, m2, m3, m4] = &x.m;
        AlgElem::new([
            &t * m1,
            &t * m2,
            // beta alpha alpha = (1 - alpha^2) beta + 2 alpha beta alpha
            &poly(&[1, 0, -1]) * m4,
            m3 + &(&poly(&[0, 2]) * m4),
        ])
    }

    /// `x beta`.
    pub fn mul_beta(&self, x: &AlgElem) -> AlgElem {
        let [m1, m2, m3, m4] = &x.m;
        // beta alpha beta = alpha - alpha^3 + 2 alpha beta^2
        let mut out = [
            &poly(&[0, 1, 0, -1]) * m4,
            m3 + &(&poly(&[0, 2]) * m4),
            m1.clone(),
            UPoly::zero(),
        ];
        match self.cubic {
            CubicRule::AsStated => {
                out[2] = &out[2] + &(&poly(&[0, 0, 2]) * m2);
                out[3] = &poly(&[0, -1]) * m2;
            }
            CubicRule::Corrected => {
                out[3] = &poly(&[0, 1]) * m2;
            }
        }
        AlgElem::new(out)
    }

    pub fn mul_letter(&self, x: &AlgElem, l: Letter) -> AlgElem {
        match l {
            Letter::Alpha => self.mul_alpha(x),
            Letter::Beta => self.mul_beta(x),
        }
    }

    /// Folds the word left to right starting from `I`.
    pub fn normal_form(&self, w: &Word) -> AlgElem {
        w.0.iter()
            .fold(AlgElem::one(), |acc, &l| self.mul_letter(&acc, l))
    }

    /// `x` times `p(alpha)`.
    fn mul_alpha_poly(&self, x: &AlgElem, p: &UPoly) -> AlgElem {
        let mut acc = AlgElem::zero();
        let mut power = x.clone();
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
            if i + 1 < p.coeffs().len() {
                power = self.mul_alpha(&power);
            }
        }
        acc
    }

    pub fn alg_mul(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (k, m) in y.m.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let xm = self.mul_alpha_poly(x, m);
            let term = match k {
                0 => xm,
                1 => self.mul_beta(&self.mul_beta(&xm)),
                2 => self.mul_beta(&xm),
                _ => self.mul_alpha(&self.mul_beta(&xm)),
            };
            out = out.add(&term);
        }
        out
    }

    /// Left-hand sides of the four defining relations, reduced.
    pub fn relation_residuals(&self) -> [AlgElem; 4] {
        let nf = |s: &str| self.normal_form(&s.parse().expect("valid word"));
        let two = RatFunc::from_int(2);
        [
            nf("BBA").sub(&nf("ABB")),
            nf("BAA")
                .add(&nf("AAB"))
                .sub(&nf("ABA").scale(&two))
                .sub(&nf("B")),
            nf("BAB")
                .add(&nf("AAA"))
                .sub(&nf("ABB").scale(&two))
                .sub(&nf("A")),
            nf("BBB").sub(&nf("AAB").scale(&two)).add(&nf("ABA")),
        ]
    }
}

pub fn normal_form(w: &Word) -> AlgElem {
    Presentation::default().normal_form(w)
}

pub fn alg_mul(x: &AlgElem, y: &AlgElem) -> AlgElem {
    Presentation::default().alg_mul(x, y)
}

/// `I`, `T^2`, `T`, `T S` with `S = D1 + D2`, `T = D3 + D4`: the basis images
/// `I`, `B^2`, `B`, `B A` scaled by `(n-2p)^{0,2,1,2}`.
const BASIS_WEIGHT: [usize; 4] = [0, 2, 1, 2];

struct ImageCache {
    s: DiffOp,
    /// `levels[i][k] = S^i * (scaled basis image k)`.
    levels: Vec<Arc<[DiffOp; 4]>>,
}

fn image_cache() -> &'static Mutex<ImageCache> {
    static CACHE: OnceLock<Mutex<ImageCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let g = generators();
        let s = &g.d1 + &g.d2;
        let t = &g.d3 + &g.d4;
        let base = [DiffOp::identity(2), &t * &t, t.clone(), &t * &s];
        Mutex::new(ImageCache {
            s,
            levels: vec![Arc::new(base)],
        })
    })
}

fn scaled_images(i: usize) -> Arc<[DiffOp; 4]> {
    let mut cache = image_cache().lock().expect("image cache");
    while cache.levels.len() <= i {
        let prev = cache.levels.last().expect("nonempty").clone();
        let next: [DiffOp; 4] = std::array::from_fn(|k| &cache.s * &prev[k]);
        cache.levels.push(Arc::new(next));
    }
    cache.levels[i].clone()
}

/// Smallest `L` with `(n-2p)^L * evaluate_concrete(x)` free of denominators
/// in `n - 2p`.
pub fn homogeneous_level(x: &AlgElem) -> usize {
    x.m.iter()
        .zip(BASIS_WEIGHT)
        .filter_map(|(m, wt)| m.degree().map(|d| d + wt))
        .max()
        .unwrap_or(0)
}

/// `(n-2p)^level * evaluate_concrete(x)`, built from products of `D1 + D2` and
/// `D3 + D4` so that no intermediate result carries a denominator.
pub fn evaluate_concrete_scaled(x: &AlgElem, level: usize) -> Result<DiffOp> {
    let need = homogeneous_level(x);
    if need > level {
        return Err(Error::InvalidParameters(format!(
            "level {level} is below the required {need}"
        )));
    }
    let k = shift_constant();
    let mut k_pows = vec![RatFunc::one()];
    for j in 1..=level {
        let next = &k_pows[j - 1] * &k;
        k_pows.push(next);
    }
    let mut out = DiffOp::zero(2);
    for (kidx, m) in x.m.iter().enumerate() {
        for (i, c) in m.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let imgs = scaled_images(i);
            let factor = c * &k_pows[level - i - BASIS_WEIGHT[kidx]];
            out = &out + &imgs[kidx].scale(&factor);
        }
    }
    Ok(out)
}

/// `alpha -> A`, `beta -> B`.
pub fn evaluate_concrete(x: &AlgElem) -> DiffOp {
    let level = homogeneous_level(x);
    let scaled = evaluate_concrete_scaled(x, level).expect("level is sufficient");
    if level == 0 {
        return scaled;
    }
    let inv = shift_constant().pow(level as u32).inv().expect("nonzero");
    scaled.scale(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_parsing() {
        assert_eq!(w("BAB").0, vec![Letter::Beta, Letter::Alpha, Letter::Beta]);
        assert_eq!(w("β α").to_string(), "BA");
        assert_eq!(w("").to_string(), "1");
        assert!("BXA".parse::<Word>().is_err());
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(normal_form(&Word::empty()), AlgElem::one());
        let t = UPoly::x();
        assert_eq!(
            normal_form(&w("BBA")),
            AlgElem::new([UPoly::zero(), t.clone(), UPoly::zero(), UPoly::zero()])
        );
        let bab = AlgElem::new([
            poly(&[0, 1, 0, -1]),
            poly(&[0, 2]),
            UPoly::zero(),
            UPoly::zero(),
        ]);
        assert_eq!(normal_form(&w("BAB")), bab);
        assert_eq!(normal_form(&w("BA")), AlgElem::basis(3));
    }

    #[test]
    fn cubic_rules() {
        let stated = Presentation::new(CubicRule::AsStated).normal_form(&w("BBB"));
        assert_eq!(
            stated,
            AlgElem::new([
                UPoly::zero(),
                UPoly::zero(),
                poly(&[0, 0, 2]),
                poly(&[0, -1])
            ])
        );
        let corrected = Presentation::new(CubicRule::Corrected).normal_form(&w("BBB"));
        assert_eq!(
            corrected,
            AlgElem::new([UPoly::zero(), UPoly::zero(), UPoly::zero(), UPoly::x()])
        );
        for r in Presentation::new(CubicRule::Corrected)
            .relation_residuals()
            .iter()
            .take(3)
        {
            assert!(r.is_zero());
        }
    }

    #[test]
    fn identity_is_neutral() {
        let x = normal_form(&w("ABBAB"));
        assert_eq!(alg_mul(&x, &AlgElem::one()), x);
        assert_eq!(alg_mul(&AlgElem::one(), &x), x);
    }

    #[test]
    fn evaluation_basics() {
        assert_eq!(evaluate_concrete(&AlgElem::one()), DiffOp::identity(2));
        let (a, b) = ab();
        assert_eq!(evaluate_concrete(&AlgElem::alpha()), *a);
        assert_eq!(evaluate_concrete(&AlgElem::beta()), *b);
        assert_eq!(evaluate_concrete(&normal_form(&w("BAB"))), &(b * a) * b);
    }
}
