use mirp::algebra::{ratio, Grading};
use mirp::differentials::{LinearField, Poly, PolynomialField};
use mirp::rough_path::{lift_piecewise_linear, GroupElement, LieElement, RoughPathGrid};
use mirp::solver::*;
use mirp::algebra::z;
use num_rational::Rational64;

fn cos_taylor() -> Poly {
    Poly::from_coeffs(vec![ratio(1, 1), ratio(0, 1), ratio(-1, 2), ratio(0, 1), ratio(1, 24), ratio(0, 1), ratio(-1, 720), ratio(0, 1)])
}

fn field() -> PolynomialField {
    PolynomialField::new(vec![Poly::from_coeffs(vec![ratio(1, 4), ratio(-1, 2)]), cos_taylor()]).unwrap()
}

fn smooth_path(fine: u32, keep: u32) -> RoughPathGrid<f64> {
    let g = Grading::new(2, Rational64::new(1, 2)).unwrap();
    let n = 1usize << fine;
    let ts: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
    let xs: Vec<Vec<f64>> = ts.iter().map(|t| vec![t.sin()]).collect();
    lift_piecewise_linear(&ts, &xs, g).unwrap().coarsen(1 << (fine - keep)).unwrap()
}

#[test]
fn smooth_driver_matches_reference() {
    let f = field();
    let (rt, rv) = reference_ode_solve(&f, &|_, t: f64| t.cos(), 0.3, 0.0, 1.0, 1 << 14).unwrap();
    let path = smooth_path(14, 10);
    let mut errs = Vec::new();
    for level in 7..=10 {
        let sol = solve_flow(&path, &f, 0.3, &SolveConfig::dyadic(level)).unwrap();
        let e = sol.times.iter().zip(&sol.values).map(|(t, y)| {
            let j = rt.iter().position(|s| (s - t).abs() < 1e-12).unwrap();
            (y - rv[j]).abs()
        }).fold(0.0, f64::max);
        errs.push(e);
    }
    eprintln!("errors {errs:?}");
    assert!(errs[3] <= 1e-5);
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn residual_rate() {
    let f = field();
    let path = smooth_path(14, 10);
    let sol = solve_flow(&path, &f, 0.3, &SolveConfig::dyadic(10)).unwrap();
    let pairs = dyadic_pairs(&sol, 2..=7);
    let rep = davie_residual_report(&path, &f, &sol, &pairs).unwrap();
    eprintln!("{:?} slope {:?}", rep.scales, rep.slope);
    assert!(rep.slope.unwrap() >= 1.35);
    let af = almost_flow_report(&path, &f, 0.3, 2..=7, 8).unwrap();
    eprintln!("almost flow {:?}", af.slope);
}

#[test]
fn linear_closed_form() {
    let g = Grading::new(2, Rational64::new(1, 2)).unwrap();
    let n = 64;
    let ts: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
    let xs: Vec<Vec<f64>> = ts.iter().map(|t| vec![0.8 * t]).collect();
    let path = lift_piecewise_linear(&ts, &xs, g).unwrap();
    let f = LinearField::new(vec![0.0, 1.3]).unwrap();
    let sol = solve_flow(&path, &f, 2.0, &SolveConfig::default()).unwrap();
    let want = 2.0 * (1.3f64 * 0.8).exp();
    assert!((sol.endpoint() - want).abs() < 1e-8 * want, "{} vs {want}", sol.endpoint());
}

#[test]
fn step_fixtures() {
    let g = Grading::new(2, Rational64::new(1, 2)).unwrap();
    let f = PolynomialField::new(vec![Poly::from_i64(&[1]), Poly::from_i64(&[0, 1])]).unwrap();
    let zero = LieElement::<f64>::zero(1, g);
    assert_eq!(logode_step(&zero, &f, 0.7, 8).unwrap(), 0.7);
    let drift = LieElement::from_pairs(1, g, [(z(0, 0), 0.25)]).unwrap();
    assert_eq!(logode_step(&drift, &f, 0.5, 8).unwrap(), 0.75);
    let lin = LieElement::from_pairs(1, g, [(z(1, 0), 0.1)]).unwrap();
    assert!((logode_step(&lin, &f, 1.0, 8).unwrap() - 0.1f64.exp()).abs() < 1e-10);
    let x = GroupElement::<f64>::from_pairs(1, g, [(z(1, 0), 0.1)]).unwrap();
    assert!((davie_increment(&x, &f, 2.0).unwrap() - 2.2).abs() < 1e-15);
    let blow = PolynomialField::new(vec![Poly::from_i64(&[0, 0, 1]), Poly::zero()]).unwrap();
    let big = LieElement::from_pairs(1, g, [(z(0, 0), 10.0)]).unwrap();
    assert!(matches!(logode_step(&big, &blow, 1.0, 8), Err(mirp::Error::Diverged { .. })));
}
