use mirp::algebra::{z, Forest, Grading};
use mirp::rough_path::*;
use num_rational::Rational64;

fn grading(n: usize) -> Grading {
    Grading::new(n, Rational64::new(1, 3)).unwrap()
}

fn random_char(seed: u64, d: usize, n: usize) -> GroupElement<f64> {
    // exp of a random primitive is a character
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let g = grading(n);
    let k = LieElement::<f64>::zero(d, g).values().len();
    let vals = (0..k)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect();
    LieElement::from_dense(d, g, vals).unwrap().exp()
}

#[test]
fn affine_segment_satisfies_chen() {
    let g = grading(3);
    let v = [0.7, -1.3];
    let at = |t: f64| vec![v[0] * t, v[1] * t];
    let whole = lift_piecewise_linear(&[0.0, 1.0], &[at(0.0), at(1.0)], g).unwrap();
    let split = lift_piecewise_linear(&[0.0, 0.5, 1.0], &[at(0.0), at(0.5), at(1.0)], g).unwrap();
    let a = whole.eval(0, 1).unwrap();
    let b = split.eval(0, 2).unwrap();
    assert!(a.max_rel_diff(&b).unwrap() < 1e-12, "{:?}\n{:?}", a.values(), b.values());
}

#[test]
fn chen_on_bent_path() {
    // three-piece path vs its two-way regrouping
    let g = grading(3);
    let ts = [0.0, 0.3, 0.55, 1.0];
    let xs = vec![vec![0.0, 0.0], vec![0.4, -0.2], vec![-0.1, 0.5], vec![0.3, 0.3]];
    let p = lift_piecewise_linear(&ts, &xs, g).unwrap();
    let left = p.eval(0, 2).unwrap().chen(&p.eval(2, 3).unwrap()).unwrap();
    let right = p.eval(0, 1).unwrap().chen(&p.eval(1, 3).unwrap()).unwrap();
    assert!(left.max_rel_diff(&right).unwrap() < 1e-13);
}

#[test]
fn linear_closed_forms() {
    let g = grading(2);
    let p = lift_piecewise_linear::<f64>(&[0.25, 1.0], &[vec![0.0, 0.0], vec![1.5, -3.0]], g).unwrap();
    let x = p.eval(0, 1).unwrap();
    let (v1, v2, h) = (2.0, -4.0, 0.75);
    assert!((x.value(&z(1, 0)).unwrap() - v1 * h).abs() < 1e-14);
    let b = z(1, 0).mul(&z(2, 1));
    assert!((x.value(&b).unwrap() - v1 * v2 * h * h / 2.0).abs() < 1e-13);
}

#[test]
fn log_exp_round_trip_and_primitive() {
    for seed in 0..5 {
        let x = random_char(seed, 2, 3);
        let dense = x.log_dense();
        let b = x.basis();
        for j in 0..b.forest_count() {
            if b.forest_keys(j).len() >= 2 {
                assert!(dense[j].abs() < 1e-12, "forest {} -> {}", b.forest(j), dense[j]);
            }
        }
        let back = x.log().exp();
        assert!(back.max_rel_diff(&x).unwrap() < 1e-12);
        let l = x.log();
        assert_eq!(l.value(&z(1, 0)).unwrap(), x.value(&z(1, 0)).unwrap());
        assert_eq!(l.eval(&Forest::from_items(vec![z(1, 0), z(2, 0)])).unwrap(), 0.0);
    }
}

#[test]
fn chen_associative() {
    let (a, b, c) = (random_char(1, 2, 3), random_char(2, 2, 3), random_char(3, 2, 3));
    let l = a.chen(&b).unwrap().chen(&c).unwrap();
    let r = a.chen(&b.chen(&c).unwrap()).unwrap();
    assert!(l.max_rel_diff(&r).unwrap() < 1e-12);
    let inv = a.inverse();
    assert!(a.chen(&inv).unwrap().values().iter().all(|x| x.abs() < 1e-12));
}
