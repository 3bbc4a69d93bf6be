use dwalg::exactfield::{RatFunc, UPoly};
use dwalg::presented::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pairs(seed: u64, count: usize, max_len: usize) -> Vec<(Word, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let lu = rng.gen_range(0..=max_len);
            let lv = rng.gen_range(0..=max_len);
            (Word::random(&mut rng, lu), Word::random(&mut rng, lv))
        })
        .collect()
}

#[test]
fn corrected_table_is_consistent() {
    let p = Presentation::new(CubicRule::Corrected);
    for (u, v) in pairs(7, 60, 5) {
        let lhs = p.normal_form(&u.concat(&v));
        let rhs = p.alg_mul(&p.normal_form(&u), &p.normal_form(&v));
        assert_eq!(lhs, rhs, "u = {u}, v = {v}");
    }
}

#[test]
fn corrected_table_is_associative() {
    let p = Presentation::new(CubicRule::Corrected);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let [x, y, z]: [AlgElem; 3] = std::array::from_fn(|_| {
            let len = rng.gen_range(0..5);
            p.normal_form(&Word::random(&mut rng, len))
        });
        assert_eq!(
            p.alg_mul(&p.alg_mul(&x, &y), &z),
            p.alg_mul(&x, &p.alg_mul(&y, &z))
        );
    }
}

#[test]
fn corrected_table_is_homomorphic() {
    let p = Presentation::new(CubicRule::Corrected);
    for (u, v) in pairs(3, 12, 3) {
        let (nu, nv) = (p.normal_form(&u), p.normal_form(&v));
        let lhs = evaluate_concrete(&p.alg_mul(&nu, &nv));
        let rhs = &evaluate_concrete(&nu) * &evaluate_concrete(&nv);
        assert_eq!(lhs, rhs, "u = {u}, v = {v}");
        assert_eq!(evaluate_concrete(&nu), u.to_diffop());
    }
}

#[test]
fn stated_table_is_inconsistent() {
    let p = Presentation::new(CubicRule::AsStated);
    let bad = pairs(7, 60, 5)
        .into_iter()
        .filter(|(u, v)| {
            p.normal_form(&u.concat(v)) != p.alg_mul(&p.normal_form(u), &p.normal_form(v))
        })
        .count();
    assert!(bad > 0);
    let res = p.relation_residuals();
    assert!(res[..3].iter().all(AlgElem::is_zero));
}

#[test]
fn evaluation_is_injective_on_low_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..6 {
        let m: [UPoly; 4] = std::array::from_fn(|_| {
            UPoly::from_coeffs(
                (0..3)
                    .map(|_| RatFunc::from_int(rng.gen_range(-3..=3)))
                    .collect(),
            )
        });
        let x = AlgElem::new(m);
        assert_eq!(evaluate_concrete(&x).is_zero(), x.is_zero(), "{x}");
    }
}

#[test]
fn scaled_evaluation_matches_scaled_words() {
    for s in ["", "A", "B", "BA", "ABAB", "BBA"] {
        let w: Word = s.parse().unwrap();
        let x = normal_form(&w);
        assert_eq!(
            evaluate_concrete_scaled(&x, w.len()).unwrap(),
            w.to_diffop_scaled(),
            "{s}"
        );
    }
    assert!(evaluate_concrete_scaled(&normal_form(&"AB".parse().unwrap()), 1).is_err());
}
