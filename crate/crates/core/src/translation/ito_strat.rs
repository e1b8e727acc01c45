use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::character::ito_strat_character;
use num_traits::Zero;

use crate::algebra::{z, Coeff, Grading};
use crate::differentials::{parse_exact, Poly, PolynomialField, TranslatedField, VectorField};
use crate::error::{invalid, Result};
use crate::rough_path::{lift_brownian, BrownianMode};
use crate::solver::{solve_flow, Mesh, SolveConfig};

/// Grading used for Brownian lifts in the Itô–Stratonovich experiments.
pub fn brownian_grading() -> Grading {
    Grading::new(3, num_rational::Rational64::new(1, 3)).expect("valid grading")
}

/// Monte-Carlo mean of `X^Strat(z_(i,0)z_(j,1)) − X^Itô(z_(i,0)z_(j,1))`
/// over `(0, t)`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelTwoRow {
    pub i: usize,
    pub j: usize,
    pub t: f64,
    pub mean: f64,
    pub std_err: f64,
    /// `t/2` when `i = j`, else 0.
    pub expected: f64,
}

impl LevelTwoRow {
    /// `|mean − expected|` in standard errors.
    pub fn z_score(&self) -> f64 {
        if self.std_err > 0.0 {
            (self.mean - self.expected).abs() / self.std_err
        } else if self.mean == self.expected {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Paths are independent ChaCha streams `0..n_paths` of one seed; `times`
/// must lie on the lattice of `n_steps` steps of `[0, 1]`.
pub fn level_two_statistics(d: usize, n_paths: usize, n_steps: usize, seed: u64, times: &[f64]) -> Result<Vec<LevelTwoRow>> {
    if n_paths < 2 {
        return invalid("need at least two paths for a standard error");
    }
    let idx: Vec<usize> = times
        .iter()
        .map(|&t| {
            let j = (t * n_steps as f64).round();
            if !(t > 0.0 && t <= 1.0) || (j - t * n_steps as f64).abs() > 1e-9 {
                return invalid(format!("time {t} is not on the lattice"));
            }
            Ok(j as usize)
        })
        .collect::<Result<_>>()?;
    // level two is all the statistic reads
    let g = Grading::new(2, num_rational::Rational64::new(1, 2))?;
    let pairs: Vec<(usize, usize)> = (1..=d).flat_map(|i| (1..=d).map(move |j| (i, j))).collect();
    let keys: Vec<_> = pairs.iter().map(|&(i, j)| z(i as u32, 0).mul(&z(j as u32, 1))).collect();
    let samples: Vec<Vec<f64>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| -> Result<Vec<f64>> {
            let ito = lift_brownian::<f64>(d, 1.0, n_steps, seed, p, BrownianMode::Ito, g)?;
            let strat = lift_brownian::<f64>(d, 1.0, n_steps, seed, p, BrownianMode::Strat, g)?;
            let mut out = Vec::with_capacity(idx.len() * keys.len());
            let mut from = 0;
            let (mut xi, mut xs) = (ito.eval(0, 0)?, strat.eval(0, 0)?);
            for &j in &idx {
                if j < from {
                    return invalid("times must be increasing");
                }
                xi = xi.chen(&ito.eval(from, j)?)?;
                xs = xs.chen(&strat.eval(from, j)?)?;
                from = j;
                for k in &keys {
                    out.push(xs.value(k)? - xi.value(k)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (a, (&t, _)) in times.iter().zip(&idx).enumerate() {
        for (b, &(i, j)) in pairs.iter().enumerate() {
            let col = a * keys.len() + b;
            let n = n_paths as f64;
            let mean = samples.iter().map(|s| s[col]).sum::<f64>() / n;
            let var = samples.iter().map(|s| (s[col] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            rows.push(LevelTwoRow { i, j, t, mean, std_err: (var / n).sqrt(), expected: if i == j { t / 2.0 } else { 0.0 } });
        }
    }
    Ok(rows)
}

/// Sup-norm gap between geometric Brownian motion solved with the Itô lift
/// and the translated field `f^ℓ`, and with the Stratonovich lift and `f`.
#[derive(Clone, Debug, Serialize)]
pub struct GbmRow {
    pub path: u64,
    pub sup_gap: f64,
    /// Sup distance of the Stratonovich route to `y0 exp(μt + σB_t)`.
    pub closed_form_gap: f64,
}

pub fn gbm_comparison(n_paths: usize, n_steps: usize, seed: u64, mu: f64, sigma: f64, y0: f64) -> Result<Vec<GbmRow>> {
    let g = brownian_grading();
    let linear = |c: f64| -> Result<Poly> { Ok(Poly::from_coeffs(vec![Coeff::zero(), parse_exact(&c.to_string())?])) };
    let f = vec![linear(mu)?, linear(sigma)?];
    let base: Arc<dyn VectorField<f64>> = Arc::new(PolynomialField::new(f)?);
    let translated = TranslatedField::new(base.clone(), &[ito_strat_character(1)])?;
    let cfg = SolveConfig { mesh: Mesh::Grid, substeps: 2, ..SolveConfig::default() };
    (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let ito = lift_brownian::<f64>(1, 1.0, n_steps, seed, p, BrownianMode::Ito, g)?;
            let strat = lift_brownian::<f64>(1, 1.0, n_steps, seed, p, BrownianMode::Strat, g)?;
            let a = solve_flow(&ito, &translated, y0, &cfg)?;
            let b = solve_flow(&strat, base.as_ref(), y0, &cfg)?;
            if !a.is_complete() || !b.is_complete() {
                return invalid(format!("gBM path {p} diverged"));
            }
            let sup_gap = a.values.iter().zip(&b.values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            let closed_form_gap = b
                .values
                .iter()
                .zip(strat.running()?)
                .zip(&b.times)
                .fold(0.0f64, |m, ((y, x), t)| m.max((y - y0 * (mu * t + sigma * x.value(&z(1, 0)).unwrap_or(f64::NAN)).exp()).abs()));
            Ok(GbmRow { path: p, sup_gap, closed_form_gap })
        })
        .collect()
}
