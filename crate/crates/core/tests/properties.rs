use std::sync::OnceLock;

use mirp::algebra::*;
use mirp::rough_path::{lift_piecewise_linear, GroupElement, LieElement, RoughPathGrid};
use mirp::translation::{coproduct_minus, insert_simultaneous, Character, Translation};
use num_rational::Rational64;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn keys() -> &'static [MultiIndex] {
    static K: OnceLock<Vec<MultiIndex>> = OnceLock::new();
    K.get_or_init(|| enumerate_populated(2, 3))
}

fn forests() -> &'static [Forest] {
    static F: OnceLock<Vec<Forest>> = OnceLock::new();
    F.get_or_init(|| enumerate_forests(2, 3))
}

fn key() -> impl Strategy<Value = MultiIndex> {
    (0..keys().len()).prop_map(|j| keys()[j].clone())
}

fn forest() -> impl Strategy<Value = Forest> {
    (0..forests().len()).prop_map(|j| forests()[j].clone())
}

fn monomial() -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(((0u32..3, 0u32..3), 1u32..3), 0..4).prop_map(MultiIndex::from_entries)
}

fn grading3() -> Grading {
    Grading::new(3, Rational64::new(1, 3)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative_and_graded(a in monomial(), b in monomial(), c in monomial()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).degree(), a.degree() + b.degree());
        let g = Rational64::new(2, 5);
        prop_assert_eq!(a.mul(&b).gamma_degree(g), a.gamma_degree(g) + b.gamma_degree(g));
        prop_assert_eq!(a.mul(&b).population(), a.population() + b.population() - 0);
    }

    #[test]
    fn grammar_round_trip(f in forest(), m in monomial()) {
        prop_assert_eq!(parse_forest(&f.to_string()).unwrap(), f);
        prop_assert_eq!(parse_multi_index(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn d_is_a_derivation(a in key(), b in key()) {
        // D(ab) = (Da) b + a (Db)
        let lhs = derive_mi(&a.mul(&b));
        let mut rhs = mi_sum_product(&derive_mi(&a), &MiSum::basis(b.clone()));
        rhs.add_assign(&mi_sum_product(&MiSum::basis(a.clone()), &derive_mi(&b)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_is_associative(u in forest(), v in forest(), w in forest()) {
        let (u, v, w) = (ForestSum::basis(u), ForestSum::basis(v), ForestSum::basis(w));
        prop_assert_eq!(gl_product(&gl_product(&u, &v, None), &w, None), gl_product(&u, &gl_product(&v, &w, None), None));
    }

    #[test]
    fn simultaneous_insertion_is_adjoint(f in forest(), a in key()) {
        let ins = insert_simultaneous(&f, &a);
        for (b, c) in &ins {
            let sym = |n: num_bigint::BigUint| Coeff::from_integer(n.into());
            let lhs = c * sym(b.symmetry_factor());
            let rhs = coproduct_minus(2, b).unwrap().coeff(&(f.clone(), a.clone())) * sym(f.symmetry_factor()) * sym(a.symmetry_factor());
            prop_assert_eq!(lhs, rhs);
            prop_assert!(b.is_populated());
        }
    }

    #[test]
    fn translation_preserves_population(a in key(), p in -3i64..4, q in 1i64..4, b in key()) {
        let l = Character::new(0, [(z(0, 0), Coeff::one()), (b, ratio(p, q))]).unwrap();
        let t = Translation::new(&[l], 2).unwrap();
        for (m, _) in &t.apply_mi(&a, Some(6)) {
            prop_assert!(m.is_populated());
        }
    }

    #[test]
    fn exp_log_round_trip(vals in proptest::collection::vec(-1.0f64..1.0, 1..64)) {
        let g = grading3();
        let zero = LieElement::<f64>::zero(2, g);
        let n = zero.values().len();
        let lie = LieElement::from_dense(2, g, (0..n).map(|j| vals[j % vals.len()] * 0.5).collect()).unwrap();
        let x = lie.exp();
        prop_assert!(x.log().max_rel_diff(&lie).unwrap() <= 1e-12);
        let back = x.chen(&x.inverse()).unwrap();
        prop_assert!(back.max_abs_diff(&GroupElement::identity(2, g)).unwrap() <= 1e-12);
        // the logarithm is primitive
        for j in 0..x.basis().forest_count() {
            let f = x.basis().forest(j);
            if f.card() >= 2 {
                prop_assert!(x.log().eval(&f).unwrap().abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn chen_on_random_polylines(pts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..9), cut in 1usize..7) {
        let g = grading3();
        let times: Vec<f64> = (0..pts.len()).map(|j| j as f64 * 0.25).collect();
        let values: Vec<Vec<f64>> = pts.iter().map(|&(a, b)| vec![a, b]).collect();
        let p: RoughPathGrid<f64> = lift_piecewise_linear(&times, &values, g).unwrap();
        let n = times.len() - 1;
        let m = cut.min(n - 1).max(1);
        let joined = p.eval(0, m).unwrap().chen(&p.eval(m, n).unwrap()).unwrap();
        prop_assert!(joined.max_rel_diff(&p.eval(0, n).unwrap()).unwrap() <= 1e-12);
    }

    #[test]
    fn character_json_round_trip(b in key(), p in -5i64..6, q in 1i64..6) {
        prop_assume!(p != 0);
        let l = Character::new(0, [(z(0, 0), Coeff::one()), (b, ratio(p, q))]).unwrap();
        prop_assert_eq!(Character::from_json(&l.to_json()).unwrap(), l);
    }
}

#[test]
fn coefficients_stay_exact() {
    // a sanity anchor for the proptest helpers: S of a repeated variable is
    // not a repetition factorial
    let m = z(1, 2).mul(&z(1, 2));
    assert_eq!(Coeff::from_integer(m.symmetry_factor().into()), coeff(4));
    assert!(!Coeff::zero().is_one());
}
