//! Centralizers inside the truncated Weyl algebra of operators
//! `sum_{i<=s} d^i F_i(x)` with `deg F_i <= d`, by exact linear algebra.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diffop::DiffOp;
use crate::dwalgebra::{center, decompose};
use crate::error::{Error, Result};
use crate::exactfield::gcd::{gcd, gcd_list};
use crate::exactfield::{Bindings, MPoly, Rat, RatFunc, Var};
use crate::gegenbauer::{eigen_residual, generators, monic_mop_closed};
use crate::matpoly::{ConstMat, MatPoly};

/// The linearly parametrized operator with one unknown per derivative order
/// `i <= s`, power `x^j` with `j <= d` and matrix entry `(r, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenericOp {
    pub order_bound: usize,
    pub degree_bound: usize,
}

impl GenericOp {
    pub fn new(order_bound: usize, degree_bound: usize) -> GenericOp {
        GenericOp {
            order_bound,
            degree_bound,
        }
    }

    pub fn unknowns(&self) -> usize {
        (self.order_bound + 1) * (self.degree_bound + 1) * 4
    }

    /// `(i, j, r, c)` of unknown `k`.
    pub fn unknown(&self, k: usize) -> Slot {
        let e = k % 4;
        let rest = k / 4;
        (
            rest / (self.degree_bound + 1),
            rest % (self.degree_bound + 1),
            e / 2,
            e % 2,
        )
    }

    /// `d^i x^j E_rc` for unknown `k`.
    pub fn basis_op(&self, k: usize) -> DiffOp {
        let (i, j, r, c) = self.unknown(k);
        DiffOp::monomial(i, MatPoly::monomial(j, ConstMat::unit(2, r, c)))
    }

    pub fn instantiate(&self, values: &[RatFunc]) -> DiffOp {
        assert_eq!(values.len(), self.unknowns());
        let mut coeffs = vec![vec![ConstMat::zero(2); self.degree_bound + 1]; self.order_bound + 1];
        for (k, v) in values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let (i, j, r, c) = self.unknown(k);
            coeffs[i][j].set(r, c, v.clone());
        }
        DiffOp::from_coeffs(
            2,
            coeffs
                .into_iter()
                .map(|cs| MatPoly::from_coeffs(2, cs))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Symbolic,
    /// Solved at each binding; the basis is the one at the first binding.
    NumericSpecialized {
        bindings: Vec<BTreeMap<String, String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSpace {
    pub generic: GenericOp,
    pub basis: Vec<DiffOp>,
    pub dimension: usize,
    pub method: Method,
}

#[derive(Clone, Debug)]
pub struct CentralizerOptions {
    /// Largest number of terms any polynomial may reach during symbolic
    /// elimination.
    pub max_terms: usize,
    /// Bindings tried by the numeric fallback (at least 3).
    pub samples: usize,
    pub seed: u64,
    pub fallback: bool,
}

impl Default for CentralizerOptions {
    fn default() -> Self {
        CentralizerOptions {
            max_terms: 4000,
            samples: 3,
            seed: 0x5eed,
            fallback: true,
        }
    }
}

/// Entries a fraction-free elimination can run over.
trait Entry: Clone + Send + Sync {
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn gcd(&self, o: &Self) -> Self;
    fn gcd_all(xs: &[&Self]) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn size(&self) -> usize;
    fn ratio(a: &Self, b: &Self) -> RatFunc;
}

impl Entry for MPoly {
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn gcd(&self, o: &Self) -> Self {
        gcd(self, o)
    }
    fn gcd_all(xs: &[&Self]) -> Self {
        gcd_list(&xs.iter().map(|x| (*x).clone()).collect::<Vec<_>>())
    }
    fn div_exact(&self, o: &Self) -> Self {
        MPoly::div_exact(self, o).expect("exact division")
    }
    fn is_negative(&self) -> bool {
        self.lc().is_negative()
    }
    fn neg(&self) -> Self {
        -self
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn ratio(a: &Self, b: &Self) -> RatFunc {
        RatFunc::new(a.clone(), b.clone()).expect("nonzero pivot")
    }
}

impl Entry for Rat {
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn gcd(&self, o: &Self) -> Self {
        Rat::gcd(self, o)
    }
    fn gcd_all(xs: &[&Self]) -> Self {
        xs.iter().fold(Rat::zero(), |g, x| g.gcd(x))
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negative(&self) -> bool {
        Rat::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn size(&self) -> usize {
        1
    }
    fn ratio(a: &Self, b: &Self) -> RatFunc {
        RatFunc::from_rat(a / b)
    }
}

type Row<T> = BTreeMap<usize, T>;

/// `(coeff order, x power, row, col)`.
type Slot = (usize, usize, usize, usize);

fn make_primitive<T: Entry>(row: &mut Row<T>) {
    let entries: Vec<&T> = row.values().collect();
    if entries.is_empty() {
        return;
    }
    let mut g = T::gcd_all(&entries);
    if row.values().next().expect("nonempty").is_negative() {
        g = g.neg();
    }
    for v in row.values_mut() {
        *v = v.div_exact(&g);
    }
}

/// Fraction-free Gauss-Jordan elimination. Pivots are taken column by
/// column, each on the remaining row whose entry in that column is smallest
/// (ties broken by row length, then position); rows are kept primitive.
/// Returns the pivot rows with their pivot columns.
fn eliminate<T: Entry>(mut rows: Vec<Row<T>>, max_terms: usize) -> Result<Vec<(usize, Row<T>)>> {
    rows.retain(|r| !r.is_empty());
    for r in rows.iter_mut() {
        make_primitive(r);
    }
    let ncols = rows
        .iter()
        .filter_map(|r| r.keys().next_back())
        .max()
        .map_or(0, |c| c + 1);
    let mut pivots: Vec<(usize, Row<T>)> = Vec::new();
    for c in 0..ncols {
        let Some(at) = rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get(&c).map(|e| ((e.size(), r.len(), i), i)))
            .min()
            .map(|(_, i)| i)
        else {
            continue;
        };
        let pivot = rows.swap_remove(at);
        let a = pivot[&c].clone();
        let reduce = |row: &mut Row<T>| -> Result<()> {
            let Some(b) = row.get(&c).cloned() else {
                return Ok(());
            };
            let g = a.gcd(&b);
            let (a1, b1) = (a.div_exact(&g), b.div_exact(&g));
            let mut out = Row::new();
            for (k, v) in row.iter() {
                out.insert(*k, a1.mul(v));
            }
            for (k, v) in &pivot {
                let e = out.entry(*k).or_insert_with(|| a1.sub(&a1));
                *e = e.sub(&b1.mul(v));
            }
            out.retain(|_, v| !v.is_zero());
            make_primitive(&mut out);
            if let Some(big) = out.values().map(T::size).max().filter(|&s| s > max_terms) {
                return Err(Error::ResourceGuard(format!(
                    "entry with {big} terms exceeds the ceiling of {max_terms}"
                )));
            }
            *row = out;
            Ok(())
        };
        for row in rows.iter_mut() {
            reduce(row)?;
        }
        rows.retain(|r| !r.is_empty());
        for (_, row) in pivots.iter_mut() {
            reduce(row)?;
        }
        pivots.push((c, pivot));
    }
    Ok(pivots)
}

/// Null space of the system whose rows are `rows`, one vector per free
/// column, over `ncols` unknowns.
fn null_space<T: Entry>(pivots: &[(usize, Row<T>)], ncols: usize) -> Vec<Vec<RatFunc>> {
    let pivot_cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
    (0..ncols)
        .filter(|f| !pivot_cols.contains(f))
        .map(|f| {
            let mut v = vec![RatFunc::zero(); ncols];
            v[f] = RatFunc::one();
            for (c, row) in pivots {
                if let Some(e) = row.get(&f) {
                    v[*c] = -&T::ratio(e, &row[c]);
                }
            }
            v
        })
        .collect()
}

/// Common denominator cleared and content removed, with a positive leading
/// entry.
fn normalize_vector(v: &[RatFunc]) -> Vec<RatFunc> {
    let nonzero: Vec<&RatFunc> = v.iter().filter(|x| !x.is_zero()).collect();
    if nonzero.is_empty() {
        return v.to_vec();
    }
    let lcm = nonzero.iter().fold(MPoly::one(), |l, x| {
        let g = gcd(&l, x.den());
        &l * &x.den().div_exact(&g).expect("divisor")
    });
    let nums: Vec<MPoly> = nonzero
        .iter()
        .map(|x| x.num() * &lcm.div_exact(x.den()).expect("divisor"))
        .collect();
    let mut g = gcd_list(&nums);
    if nums[0].lc().is_negative() != g.lc().is_negative() {
        g = -&g;
    }
    let scale = RatFunc::new(lcm, g).expect("nonzero");
    v.iter().map(|x| x * &scale).collect()
}

/// Coefficients of an operator by slot.
fn flatten(d: &DiffOp) -> BTreeMap<Slot, RatFunc> {
    let mut out = BTreeMap::new();
    for (i, f) in d.coeffs().iter().enumerate() {
        for (j, m) in f.coeffs().iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    let e = m.get(r, c);
                    if !e.is_zero() {
                        out.insert((i, j, r, c), e.clone());
                    }
                }
            }
        }
    }
    out
}

/// One row per coefficient of `[X, t]`, over the unknowns of `g`.
fn equations(g: &GenericOp, targets: &[DiffOp]) -> Result<Vec<Row<RatFunc>>> {
    let columns: Vec<Vec<BTreeMap<Slot, RatFunc>>> = (0..g.unknowns())
        .into_par_iter()
        .map(|k| {
            let x = g.basis_op(k);
            targets
                .iter()
                .map(|t| x.commutator(t).map(|c| flatten(&c)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut rows: BTreeMap<(usize, Slot), Row<RatFunc>> = BTreeMap::new();
    for (k, per_target) in columns.into_iter().enumerate() {
        for (t, entries) in per_target.into_iter().enumerate() {
            for (key, v) in entries {
                rows.entry((t, key)).or_default().insert(k, v);
            }
        }
    }
    Ok(rows.into_values().collect())
}

fn clear_denominators(row: &Row<RatFunc>) -> Row<MPoly> {
    let lcm = row.values().fold(MPoly::one(), |l, x| {
        let g = gcd(&l, x.den());
        &l * &x.den().div_exact(&g).expect("divisor")
    });
    row.iter()
        .map(|(k, x)| (*k, x.num() * &lcm.div_exact(x.den()).expect("divisor")))
        .collect()
}

fn to_rat_row(row: &Row<RatFunc>) -> Result<Row<Rat>> {
    row.iter()
        .map(|(k, x)| {
            x.as_constant().map(|c| (*k, c)).ok_or_else(|| {
                Error::InvalidParameters(format!("coefficient {x} is not a number after binding"))
            })
        })
        .collect()
}

/// Solves over `Q(p, n)` by fraction-free elimination.
pub fn centralizer_symbolic(
    targets: &[DiffOp],
    s: usize,
    d: usize,
    max_terms: usize,
) -> Result<SolutionSpace> {
    let g = GenericOp::new(s, d);
    let rows: Vec<Row<MPoly>> = equations(&g, targets)?
        .iter()
        .map(clear_denominators)
        .collect();
    let pivots = eliminate(rows, max_terms)?;
    let basis: Vec<DiffOp> = null_space(&pivots, g.unknowns())
        .iter()
        .map(|v| g.instantiate(&normalize_vector(v)))
        .collect();
    Ok(SolutionSpace {
        generic: g,
        dimension: basis.len(),
        basis,
        method: Method::Symbolic,
    })
}

fn binding_strings(b: &Bindings) -> BTreeMap<String, String> {
    b.iter()
        .map(|(v, x)| (v.name().to_string(), x.to_string()))
        .collect()
}

/// Solves at each binding of `p`, `n`; the dimensions must agree.
pub fn centralizer_numeric(
    targets: &[DiffOp],
    s: usize,
    d: usize,
    bindings: &[Bindings],
) -> Result<SolutionSpace> {
    let g = GenericOp::new(s, d);
    let mut first: Option<Vec<DiffOp>> = None;
    for b in bindings {
        let bound: Vec<DiffOp> = targets
            .iter()
            .map(|t| t.evaluate(b))
            .collect::<Result<_>>()?;
        let rows: Vec<Row<Rat>> = equations(&g, &bound)?
            .iter()
            .map(to_rat_row)
            .collect::<Result<_>>()?;
        let pivots = eliminate(rows, usize::MAX)?;
        let basis: Vec<DiffOp> = null_space(&pivots, g.unknowns())
            .iter()
            .map(|v| g.instantiate(&normalize_vector(v)))
            .collect();
        match &first {
            None => first = Some(basis),
            Some(f) if f.len() != basis.len() => {
                return Err(Error::SpecializationMismatch(format!(
                    "dimension {} at {:?} but {} at the first binding",
                    basis.len(),
                    binding_strings(b),
                    f.len()
                )))
            }
            Some(_) => {}
        }
    }
    let basis = first.ok_or_else(|| Error::InvalidParameters("no bindings given".into()))?;
    Ok(SolutionSpace {
        generic: g,
        dimension: basis.len(),
        basis,
        method: Method::NumericSpecialized {
            bindings: bindings.iter().map(binding_strings).collect(),
        },
    })
}

/// Random rational `(p, n)` with `0 < p < n/2`.
pub fn random_bindings(count: usize, seed: u64) -> Vec<Bindings> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = Rat::new(rng.gen_range(9..80), rng.gen_range(1..4));
            let den = rng.gen_range(3..12);
            let p = &(&n * &Rat::new(rng.gen_range(1..den), den)) / &Rat::from_int(2);
            [(Var::N, n), (Var::P, p)].into()
        })
        .collect()
}

/// Symbolic elimination, falling back to the numeric route when the
/// resource guard trips and `opts.fallback` is set.
pub fn centralizer_with(
    targets: &[DiffOp],
    s: usize,
    d: usize,
    opts: &CentralizerOptions,
) -> Result<SolutionSpace> {
    match centralizer_symbolic(targets, s, d, opts.max_terms) {
        Err(Error::ResourceGuard(_)) if opts.fallback => centralizer_numeric(
            targets,
            s,
            d,
            &random_bindings(opts.samples.max(3), opts.seed),
        ),
        other => other,
    }
}

pub fn centralizer_truncated(targets: &[DiffOp], s: usize, d: usize) -> Result<SolutionSpace> {
    centralizer_with(targets, s, d, &CentralizerOptions::default())
}

/// Rank over `Q(p, n)` of a list of operators.
pub fn rank(ops: &[DiffOp]) -> Result<usize> {
    let keys: BTreeMap<Slot, usize> = ops
        .iter()
        .flat_map(|d| flatten(d).into_keys())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let rows: Vec<Row<MPoly>> = ops
        .iter()
        .map(|d| clear_denominators(&flatten(d).into_iter().map(|(k, v)| (keys[&k], v)).collect()))
        .collect();
    Ok(eliminate(rows, usize::MAX)?.len())
}

/// Whether two lists of operators span the same space over `Q(p, n)`.
pub fn same_span(a: &[DiffOp], b: &[DiffOp]) -> Result<bool> {
    let both: Vec<DiffOp> = a.iter().chain(b).cloned().collect();
    let r = rank(&both)?;
    Ok(rank(a)? == r && rank(b)? == r)
}

/// `I` and `(D1+D2)^i Dj` of order at most `s`.
pub fn spanning_set(s: usize) -> Vec<DiffOp> {
    let g = generators();
    let sum = &g.d1 + &g.d2;
    let mut out = vec![DiffOp::identity(2)];
    let mut power = DiffOp::identity(2);
    for i in 0.. {
        if 2 * i + 2 > s {
            break;
        }
        out.extend(g.all().iter().map(|d| &power * *d));
        power = &power * &sum;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub decomposes: bool,
    pub commutes_with_center: bool,
    pub eigenfunctions: bool,
    pub wmax: usize,
}

impl Membership {
    pub fn agree(&self) -> bool {
        self.decomposes == self.commutes_with_center && self.decomposes == self.eigenfunctions
    }

    pub fn member(&self) -> Option<bool> {
        self.agree().then_some(self.decomposes)
    }
}

/// Three independent membership tests for `D(W)`: the span decomposition,
/// commutation with `C1` and `C2`, and the eigenfunction property for the
/// monic orthogonal polynomials of degree at most `wmax`.
pub fn membership_cross_check(d: &DiffOp, wmax: usize) -> Result<Membership> {
    if d.size() != 2 {
        return Err(Error::NotSizeTwo(d.size()));
    }
    let decomposes = match decompose(d) {
        Ok(dec) => dec.reassemble() == *d,
        Err(Error::NonMember(_)) => false,
        Err(e) => return Err(e),
    };
    let (c1, c2) = center();
    let commutes_with_center = d.commutator(c1)?.is_zero() && d.commutator(c2)?.is_zero();
    let mut eigenfunctions = true;
    for w in 0..=wmax {
        if !eigen_residual(&monic_mop_closed(w), d)?.is_zero() {
            eigenfunctions = false;
            break;
        }
    }
    Ok(Membership {
        decomposes,
        commutes_with_center,
        eigenfunctions,
        wmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_indexing_round_trips() {
        let g = GenericOp::new(2, 3);
        assert_eq!(g.unknowns(), 48);
        let mut values = vec![RatFunc::zero(); 48];
        for k in 0..48 {
            values[k] = RatFunc::one();
            assert_eq!(g.instantiate(&values), g.basis_op(k));
            values[k] = RatFunc::zero();
        }
    }

    #[test]
    fn identity_target_gives_constants() {
        let sp = centralizer_truncated(&[DiffOp::identity(2)], 0, 0).unwrap();
        assert_eq!(sp.dimension, 4);
        assert_eq!(sp.method, Method::Symbolic);
    }

    #[test]
    fn elimination_over_rationals() {
        let row = |xs: &[i64]| -> Row<Rat> {
            xs.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(|(k, v)| (k, Rat::from_int(*v)))
                .collect()
        };
        let pivots = eliminate(
            vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])],
            usize::MAX,
        )
        .unwrap();
        assert_eq!(pivots.len(), 2);
        let ns = null_space(&pivots, 3);
        assert_eq!(ns.len(), 1);
        assert_eq!(
            normalize_vector(&ns[0]),
            vec![
                RatFunc::from_int(1),
                RatFunc::from_int(1),
                RatFunc::from_int(-1)
            ]
        );
    }

    #[test]
    fn rank_of_generators() {
        let g = generators();
        let mut ops: Vec<DiffOp> = g.all().iter().map(|d| (*d).clone()).collect();
        assert_eq!(rank(&ops).unwrap(), 4);
        ops.push(&g.d1 + &g.d3);
        assert_eq!(rank(&ops).unwrap(), 4);
    }

    #[test]
    fn bindings_respect_the_parameter_range() {
        for b in random_bindings(20, 1) {
            let (n, p) = (&b[&Var::N], &b[&Var::P]);
            assert!(p.is_positive());
            assert!((&(p * &Rat::from_int(2)) - n).is_negative());
        }
    }
}
