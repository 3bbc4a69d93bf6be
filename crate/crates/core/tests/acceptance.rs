//! Acceptance criteria 1 to 11, one PASS/FAIL line each.
//!
//! Criteria 2, 5, 7 and 11 compare against formulas that do not hold for
//! these operators; they are run as stated and are expected to print FAIL
//! with a witness. The process exits nonzero if any other criterion fails or
//! if one of those four starts passing.

use std::time::{Duration, Instant};

use dwalg::centralizer::{centralizer_truncated, same_span};
use dwalg::diffop::{DiffOp, EigenPoly};
use dwalg::dwalgebra::{
    center, center_decompose, center_eigenvalues, curve_relation, decompose, ds_relations,
    hermite_bridge_check, product_table_relations, rel_relations, shift_constant, Relation,
};
use dwalg::exactfield::{rf, RatFunc, UPoly, Var};
use dwalg::gegenbauer::{
    expected_eigenvalues, generators, gram_entry, monic_mop_closed, monic_mop_coeffs,
};
use dwalg::presented::{
    evaluate_concrete_scaled, homogeneous_level, AlgElem, CubicRule, Presentation, Word,
};
use dwalg::report::Status;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILING: [u32; 4] = [2, 5, 7, 11];

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            pass: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.pass = false;
            self.notes.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn budget(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.require(t <= limit, || format!("took {t:.1?}, budget {limit:?}"));
    }
}

fn clip(s: &str) -> String {
    const MAX: usize = 300;
    if s.len() <= MAX {
        s.to_string()
    } else {
        let cut = (0..=MAX)
            .rev()
            .find(|&i| s.is_char_boundary(i))
            .unwrap_or(0);
        format!("{}... ({} chars)", &s[..cut], s.len())
    }
}

fn require_relations(out: &mut Outcome, rels: &[Relation]) {
    for r in rels {
        out.require(r.holds(), || {
            format!(
                "{}: residual {}",
                r.name,
                clip(&format!("{:?}", r.residual))
            )
        });
    }
}

fn up(s: &str) -> UPoly {
    UPoly::from_ratfunc(&rf(s), Var::W).expect("polynomial in w")
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let rels = product_table_relations();
    out.require(rels.len() == 16, || {
        format!("{} products, expected 16", rels.len())
    });
    require_relations(&mut out, &rels);
    out.budget(start, Duration::from_secs(10));
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    require_relations(&mut out, &rel_relations());
    require_relations(&mut out, &ds_relations());
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let g = generators();
    let expected = expected_eigenvalues();
    for w in 0..=12usize {
        let q = monic_mop_closed(w);
        let wv = RatFunc::from_int(w as i64);
        for (i, (d, e)) in g.all().iter().zip(&expected).enumerate() {
            let lambda = e.at(&wv);
            out.require(d.eigenvalue_map().at(&wv) == lambda, || {
                format!("Lambda_{w}(D{}) differs", i + 1)
            });
            let lhs = d.apply(&q.poly).expect("same size");
            let rhs = q.poly.left_mul_const(&lambda);
            out.require(lhs == rhs, || format!("Q_{w} D{} != Lambda Q_{w}", i + 1));
        }
    }
    out.budget(start, Duration::from_secs(60));
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    for w in 0..=12 {
        out.require(monic_mop_closed(w) == monic_mop_coeffs(w), || {
            format!("w = {w}")
        });
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let (c1, c2) = center();
    let printed = [
        (
            "C1",
            c1,
            up("(w + p)*(w + p + 1)*(w + n - p + 1)*(w + n - p)"),
        ),
        (
            "C2",
            c2,
            up("(w + p)*(w + p + 1)^2*(w + n - p + 1)*(w + n - p)^2"),
        ),
    ];
    for (name, c, lam) in printed {
        let got = c.eigenvalue_map();
        let want = EigenPoly::scalar(2, lam);
        out.require(got == want, || {
            let factored = [center_eigenvalues().0, center_eigenvalues().1]
                .into_iter()
                .zip([
                    "(w + p)*(w + p + 1)*(w + n - p + 1)*(w + n - p)",
                    "(w + p)^2*(w + p + 1)*(w + n - p + 1)^2*(w + n - p)",
                ])
                .find(|(e, _)| EigenPoly::scalar(2, e.clone()) == got)
                .map(|(_, f)| f.to_string());
            let g = factored.unwrap_or_else(|| clip(&got.to_string()));
            format!("Lambda_w({name}) = {g} * I, not the printed form")
        });
    }
    require_relations(&mut out, &[curve_relation()]);
    for (name, d) in [
        ("C1", c1.clone()),
        ("C2", c2.clone()),
        ("C1^2", c1 * c1),
        ("C1 C2 + C1", &(c1 * c2) + c1),
    ] {
        match center_decompose(&d) {
            Ok(dec) => out.require(dec.reassemble() == d, || {
                format!("{name} does not reassemble")
            }),
            Err(e) => out.require(false, || format!("{name}: {e}")),
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let (c1, _) = center();
    let g = generators();
    let mut span = vec![DiffOp::identity(2)];
    span.extend(g.all().into_iter().cloned());
    for d in [2, 4, 6] {
        match centralizer_truncated(std::slice::from_ref(c1), 2, d) {
            Ok(sp) => {
                out.require(sp.dimension == 5, || {
                    format!("d = {d}: dimension {}", sp.dimension)
                });
                if d == 6 {
                    out.require(same_span(&sp.basis, &span).unwrap_or(false), || {
                        "span differs from I, D1..D4".into()
                    });
                    out.note(format!("d = 6 solved by {:?}", sp.method));
                }
            }
            Err(e) => out.require(false, || format!("d = {d}: {e}")),
        }
    }
    out.budget(start, Duration::from_secs(300));
    out
}

/// `x` evaluated and scaled by `(n-2p)^level`, for `level` at least the
/// homogeneous level of `x`.
fn scaled(x: &AlgElem, level: usize) -> DiffOp {
    evaluate_concrete_scaled(x, level).expect("level is sufficient")
}

/// `(inconsistent, not homomorphic)` counts over the pairs, with a first
/// witness of each.
fn presented_battery(p: &Presentation, pairs: &[(Word, Word)]) -> (usize, usize, Vec<String>) {
    let (mut bad_nf, mut bad_hom, mut witnesses) = (0, 0, Vec::new());
    let k = shift_constant();
    for (u, v) in pairs {
        let (nu, nv) = (p.normal_form(u), p.normal_form(v));
        let prod = p.alg_mul(&nu, &nv);
        let nf = p.normal_form(&u.concat(v));
        if nf != prod {
            bad_nf += 1;
            if bad_nf == 1 {
                witnesses.push(format!("nf({u}{v}) = {nf} but alg_mul gives {prod}"));
            }
        }
        // Both sides scaled by (n-2p)^level; n - 2p is nonzero.
        let (lu, lv) = (homogeneous_level(&nu), homogeneous_level(&nv));
        let level = homogeneous_level(&prod).max(lu + lv);
        let lhs = scaled(&prod, level);
        let rhs = (&scaled(&nu, lu) * &scaled(&nv, lv)).scale(&k.pow((level - lu - lv) as u32));
        if lhs != rhs {
            bad_hom += 1;
            if bad_hom == 1 {
                witnesses.push(format!(
                    "evaluate(alg_mul(nf({u}), nf({v}))) != evaluate(nf({u})) evaluate(nf({v}))"
                ));
            }
        }
    }
    (bad_nf, bad_hom, witnesses)
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs: Vec<(Word, Word)> = (0..500)
        .map(|_| {
            let (lu, lv) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
            (Word::random(&mut rng, lu), Word::random(&mut rng, lv))
        })
        .collect();
    let (nf, hom, wit) = presented_battery(&Presentation::new(CubicRule::AsStated), &pairs);
    out.require(nf == 0 && hom == 0, || {
        format!("{nf}/500 pairs inconsistent, {hom}/500 not homomorphic")
    });
    for w in wit {
        out.require(false, || w);
    }
    let (nf, hom, _) = presented_battery(&Presentation::new(CubicRule::Corrected), &pairs);
    out.note(format!(
        "with beta^3 = alpha beta alpha: {nf}/500 inconsistent, {hom}/500 not homomorphic"
    ));
    out
}

fn random_words(seed: u64, count: usize) -> Vec<(String, DiffOp)> {
    let g = generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=4);
            let idx: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
            let name = idx
                .iter()
                .map(|j| format!("D{j}"))
                .collect::<Vec<_>>()
                .join(" ");
            let op = idx
                .iter()
                .skip(1)
                .fold(g.get(idx[0]).clone(), |acc, &j| &acc * g.get(j));
            (name, op)
        })
        .collect()
}

fn criterion_8(words: &[(String, DiffOp)]) -> Outcome {
    let mut out = Outcome::new();
    let mut nonzero = 0;
    for (name, d) in words {
        let Some(order) = d.order() else { continue };
        nonzero += 1;
        out.require(order % 2 == 0, || format!("{name}: odd order {order}"));
        let lead = d.leading_coeff().expect("nonzero").degree();
        out.require(lead == Some(order), || {
            format!("{name}: leading degree {lead:?}, order {order}")
        });
        let eig = d.eigenvalue_map().degree();
        out.require(eig == Some(order), || {
            format!("{name}: eigenvalue degree {eig:?}, order {order}")
        });
        match decompose(d) {
            Ok(dec) => out.require(dec.reassemble() == *d, || {
                format!("{name}: decomposition does not reassemble")
            }),
            Err(e) => out.require(false, || format!("{name}: {e}")),
        }
    }
    out.note(format!("{nonzero} of {} words nonzero", words.len()));
    out
}

fn criterion_9(words: &[(String, DiffOp)]) -> Outcome {
    let mut out = Outcome::new();
    let tildes: Vec<DiffOp> = words
        .iter()
        .map(|(_, d)| d.tilde().expect("size 2"))
        .collect();
    for ((name, d), t) in words.iter().zip(&tildes) {
        out.require(t.tilde().expect("size 2") == *d, || {
            format!("{name}: tilde^2 != id")
        });
        let conj = d.eigenvalue_map().conjugate_by_t().expect("size 2");
        out.require(t.eigenvalue_map() == conj, || {
            format!("{name}: Lambda(tilde D) != T Lambda(D) T")
        });
    }
    for (i, ((na, a), (nb, b))) in words.iter().zip(words.iter().skip(1)).enumerate() {
        let lhs = (a * b).tilde().expect("size 2");
        out.require(lhs == &tildes[i] * &tildes[i + 1], || {
            format!("tilde(({na})({nb})) is not multiplicative")
        });
    }
    out
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let (n, p) = (4.into(), 1.into());
    for i in 0..=6 {
        for j in 0..=6 {
            let g = gram_entry(i, j, &n, &p).expect("valid parameters");
            if i == j {
                let pd = g
                    .leading_minors()
                    .iter()
                    .all(|m| m.as_constant().is_some_and(|c| c.is_positive()));
                out.require(pd, || format!("(Q_{i}, Q_{i}) not positive definite"));
            } else {
                out.require(g.is_zero(), || format!("(Q_{i}, Q_{j}) != 0"));
            }
        }
    }
    out.budget(start, Duration::from_secs(30));
    out
}

fn criterion_11() -> Outcome {
    let mut out = Outcome::new();
    for c in hermite_bridge_check(true) {
        let detail = c
            .witness
            .as_ref()
            .map(|w| clip(&w.to_string()))
            .unwrap_or_default();
        out.require(c.status != Status::Fail, || format!("{}: {detail}", c.name));
    }
    out
}

fn main() {
    let words = random_words(8, 200);
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "product table of D1..D4", Box::new(criterion_1)),
        (
            2,
            "relations of A, B and reconstruction of D1..D4",
            Box::new(criterion_2),
        ),
        (3, "eigenfunction property, w <= 12", Box::new(criterion_3)),
        (
            4,
            "closed form and coefficient formula agree, w <= 12",
            Box::new(criterion_4),
        ),
        (
            5,
            "center eigenvalues, curve, decomposition",
            Box::new(criterion_5),
        ),
        (6, "order-2 centralizer of C1", Box::new(criterion_6)),
        (
            7,
            "presented algebra on 500 word pairs",
            Box::new(criterion_7),
        ),
        (
            8,
            "structure of 200 random words",
            Box::new(|| criterion_8(&words)),
        ),
        (
            9,
            "tilde involution on the random words",
            Box::new(|| criterion_9(&words)),
        ),
        (
            10,
            "exact orthogonality at n = 4, p = 1",
            Box::new(criterion_10),
        ),
        (11, "Hermite bridge relations", Box::new(criterion_11)),
    ];
    let mut unexpected = Vec::new();
    for (k, title, run) in criteria {
        let start = Instant::now();
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {k}: {title} [{:.1?}]", start.elapsed());
        for n in &out.notes {
            println!("    {n}");
        }
        if out.pass == KNOWN_FAILING.contains(&k) {
            unexpected.push(k);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: outcome matches the recorded analysis (criteria {KNOWN_FAILING:?} fail as stated)");
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
