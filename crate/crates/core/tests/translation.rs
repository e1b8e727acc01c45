use mirp::algebra::{
    coeff, enumerate_forests, enumerate_populated, gl_product, pairing_mi, prelie_graft, ratio, z, Coeff, Forest, ForestSum,
    MiSum, MultiIndex,
};
use mirp::translation::{
    coproduct_minus, coproduct_minus_table, insert_prelie, insert_prelie_sum, insert_simultaneous, ito_strat_character,
    renormalise0, translate_dual0, Character, Translation,
};
use num_traits::{One, Zero};

fn mi(parts: &[(u32, u32)]) -> MultiIndex {
    parts.iter().fold(MultiIndex::one(), |m, &(i, k)| m.mul(&z(i, k)))
}

fn delta(a: u32, b: u32) -> Coeff {
    if a == b {
        Coeff::one()
    } else {
        Coeff::zero()
    }
}

fn sample_character() -> Character {
    Character::new(0, [(z(0, 0), coeff(1)), (mi(&[(1, 0), (1, 1)]), ratio(1, 3)), (mi(&[(0, 0), (1, 1)]), ratio(-1, 2))]).unwrap()
}

#[test]
fn renormalisation_level_two() {
    let l = ito_strat_character(2);
    for i in 1..=2 {
        for j in 1..=2 {
            let b = mi(&[(i, 0), (j, 1)]);
            let mut want = MiSum::basis(b.clone());
            want.add_term(z(0, 0), delta(i, j) * ratio(1, 2));
            assert_eq!(renormalise0(&l, 2, &b).unwrap(), want, "{b}");
        }
    }
}

#[test]
fn renormalisation_level_three() {
    // At j = k every correction carries an extra 1/2: z_(j,1) occurs twice
    // and S counts no repetitions.
    let l = ito_strat_character(2);
    for i in 1..=2 {
        for j in 1..=2 {
            for k in 1..=2 {
                let b = mi(&[(i, 0), (j, 1), (k, 1)]);
                let rep = if j == k { ratio(1, 2) } else { Coeff::one() };
                let mut want = MiSum::basis(b.clone());
                want.add_term(mi(&[(0, 0), (k, 1)]), delta(i, j) * ratio(1, 2) * &rep);
                want.add_term(mi(&[(0, 0), (j, 1)]), delta(i, k) * ratio(1, 2) * &rep);
                want.add_term(mi(&[(i, 0), (0, 1)]), delta(j, k) * &rep);
                assert_eq!(renormalise0(&l, 2, &b).unwrap(), want, "{b}");
            }
        }
    }
}

#[test]
fn coproduct_routes_agree() {
    let n = 4;
    let table = coproduct_minus_table(2, n);
    for b in enumerate_populated(2, n) {
        assert_eq!(&coproduct_minus(2, &b).unwrap(), table.get(&b).unwrap(), "{b}");
    }
}

#[test]
fn renormalisation_is_transpose_of_translation() {
    for l in [ito_strat_character(2), sample_character()] {
        let t = Translation::new(&[l.clone()], 2).unwrap();
        for b in enumerate_populated(2, 4) {
            assert_eq!(renormalise0(&l, 2, &b).unwrap(), t.transpose_mi(&b), "{b}");
        }
    }
}

#[test]
fn dual_translation_matches_generators() {
    for l in [ito_strat_character(2), sample_character()] {
        let t = Translation::new(&[l.clone()], 2).unwrap();
        for b in enumerate_populated(2, 4) {
            assert_eq!(translate_dual0(&l, &b).unwrap(), t.apply_mi(&b, None), "{b}");
        }
    }
}

#[test]
fn simultaneous_insertion_adjoint_to_coproduct() {
    // ⟨F ⋆₁ a, b⟩ = ⟨F ⊗ a, Δ⁻ b⟩ via the direct coproduct
    let d = 1;
    let forests = enumerate_forests(d, 3);
    for a in enumerate_populated(d, 3) {
        for f in forests.iter().filter(|f| f.card() == a.letter0_count() && !f.is_empty()) {
            let ins = insert_simultaneous(f, &a);
            for (b, _) in &ins {
                let lhs = pairing_mi(&ins, &MiSum::basis(b.clone()));
                let c = coproduct_minus(d, b).unwrap().coeff(&(f.clone(), a.clone()));
                let rhs = c * Coeff::from_integer(f.symmetry_factor().into()) * Coeff::from_integer(a.symmetry_factor().into());
                assert_eq!(lhs, rhs, "{f} {a} {b}");
            }
        }
    }
}

#[test]
fn prelie_insertion_is_prelie() {
    let keys = enumerate_populated(1, 2);
    let e = |x: &MultiIndex| MiSum::basis(x.clone());
    for a in &keys {
        for b in &keys {
            for c in &keys {
                let assoc = |x: &MultiIndex, y: &MultiIndex| {
                    let l = insert_prelie_sum(&insert_prelie(x, y), &e(c));
                    l.sub(&insert_prelie_sum(&e(x), &insert_prelie(y, c)))
                };
                assert_eq!(assoc(a, b), assoc(b, a), "{a} {b} {c}");
            }
        }
    }
}

#[test]
fn translation_is_a_morphism() {
    let t = Translation::new(&[sample_character()], 1).unwrap();
    let keys = enumerate_populated(1, 2);
    for a in &keys {
        for b in &keys {
            let lhs = t.apply_mi_sum(&prelie_graft(a, b), None);
            let (ta, tb) = (t.apply_mi(a, None), t.apply_mi(b, None));
            assert_eq!(lhs, mirp::algebra::prelie_graft_sum(&ta, &tb), "{a} {b}");
        }
    }
    let forests: Vec<Forest> = enumerate_forests(1, 2).into_iter().collect();
    for u in &forests {
        for v in &forests {
            let lhs = t.apply(&gl_product(&ForestSum::basis(u.clone()), &ForestSum::basis(v.clone()), None), None);
            let rhs = gl_product(&t.apply(&ForestSum::basis(u.clone()), None), &t.apply(&ForestSum::basis(v.clone()), None), None);
            assert_eq!(lhs, rhs, "{u} {v}");
        }
    }
}

#[test]
fn translation_preserves_population() {
    let chars = [ito_strat_character(2), Character::new(1, [(z(1, 0), coeff(1)), (mi(&[(2, 0), (1, 1)]), ratio(2, 5))]).unwrap()];
    let t = Translation::new(&chars, 2).unwrap();
    for b in enumerate_populated(2, 4) {
        for (m, _) in &t.apply_mi(&b, None) {
            assert!(m.is_populated(), "{b} -> {m}");
        }
    }
}

mod paths {
    use mirp::algebra::{parse_rational64, Grading};
    use mirp::rough_path::{lift_brownian, lift_piecewise_linear, BrownianMode};
    use mirp::translation::{regularity_factor, translate_roughpath, Character};
    use mirp::Error;

    use super::*;

    #[test]
    fn identity_translation_is_exact() {
        let g = Grading::new(3, parse_rational64("1/3").unwrap()).unwrap();
        let times: Vec<f64> = (0..=8).map(|j| j as f64 / 8.0).collect();
        let values: Vec<Vec<f64>> = times.iter().map(|&t| vec![(3.0 * t).sin(), t * t]).collect();
        let p = lift_piecewise_linear(&times, &values, g).unwrap();
        let q = translate_roughpath(&[], &p, None).unwrap();
        assert_eq!(q.grading(), p.grading());
        for (a, b) in p.increments().iter().zip(q.increments()) {
            assert_eq!(a.values(), b.values());
        }
    }

    #[test]
    fn regularity_factor_examples() {
        let g = parse_rational64("1/3").unwrap();
        assert_eq!(regularity_factor(&[ito_strat_character(2)], 2, g).unwrap(), 1.into());
        let c = Character::new(1, [(mi(&[(1, 0), (2, 1)]), coeff(1))]).unwrap();
        assert_eq!(regularity_factor(&[c], 2, g).unwrap(), 2.into());
    }

    #[test]
    fn short_truncation_is_reported() {
        let g = Grading::new(2, parse_rational64("2/5").unwrap()).unwrap();
        let times = vec![0.0, 1.0];
        let p = lift_piecewise_linear(&times, &[vec![0.0], vec![1.0]], g).unwrap();
        let out = Grading::new(3, parse_rational64("2/5").unwrap()).unwrap();
        let c = Character::new(1, [(mi(&[(1, 0), (1, 1)]), coeff(1))]).unwrap();
        assert!(matches!(translate_roughpath(&[c], &p, Some(out)), Err(Error::Truncation { .. })));
    }

    #[test]
    fn ito_to_stratonovich_pathwise() {
        // the Itô–Stratonovich gap is a quadratic-variation effect, so it
        // closes pathwise as the lattice refines
        let g = Grading::new(3, parse_rational64("2/5").unwrap()).unwrap();
        let n = 1 << 14;
        let ito = lift_brownian::<f64>(2, 1.0, n, 11, 0, BrownianMode::Ito, g).unwrap();
        let strat = lift_brownian::<f64>(2, 1.0, n, 11, 0, BrownianMode::Strat, g).unwrap();
        let tr = translate_roughpath(&[ito_strat_character(2)], &ito, None).unwrap();
        let (a, b) = (tr.eval(0, n).unwrap(), strat.eval(0, n).unwrap());
        assert!(a.max_abs_diff(&b).unwrap() < 0.05, "{}", a.max_abs_diff(&b).unwrap());
        let raw = ito.eval(0, n).unwrap().max_abs_diff(&b).unwrap();
        assert!(raw > 0.2, "{raw}");
    }
}

#[test]
fn ito_strat_small_monte_carlo() {
    use mirp::translation::{gbm_comparison, level_two_statistics};
    let rows = level_two_statistics(2, 200, 256, 5, &[0.5, 1.0]).unwrap();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert!(r.z_score() < 4.5, "{r:?}");
    }
    for r in gbm_comparison(2, 1024, 5, 0.1, 0.2, 1.0).unwrap() {
        assert!(r.sup_gap < 5e-3 && r.closed_form_gap < 5e-3, "{r:?}");
    }
}
