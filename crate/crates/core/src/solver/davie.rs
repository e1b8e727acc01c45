use serde::Serialize;

use super::flow::FlowSolution;
use super::logode::{davie_increment, logode_field, rk4_unit, DEFAULT_GUARD};
use crate::differentials::VectorField;
use crate::error::{invalid, Result};
use crate::rough_path::RoughPathGrid;
use crate::scalar::Scalar;

/// `y + Σ_{1 ≤ |β|_γ ≤ N_γ} Υ_f[z^β](y)/S(z^β) X_{s,t}(z^β)` for grid indices
/// `s ≤ t`.
pub fn davie_expansion<T: Scalar>(path: &RoughPathGrid<T>, f: &dyn VectorField<T>, s: usize, t: usize, y: T) -> Result<T> {
    davie_increment(&path.eval(s, t)?, f, y)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub s: f64,
    pub t: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleRow {
    pub h: f64,
    pub max_residual: f64,
    pub pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub scales: Vec<ScaleRow>,
    /// Least-squares slope of `log max r` against `log h` over the scales.
    pub slope: Option<f64>,
    /// `(N_γ + 1) γ`.
    pub target_slope: f64,
}

/// Least-squares slope of `log y` on `log x` over points with `y > 0`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

fn group_scales(rows: &[(f64, f64)]) -> Vec<ScaleRow> {
    let mut scales: Vec<ScaleRow> = Vec::new();
    for &(h, r) in rows {
        match scales.iter_mut().find(|s| (s.h - h).abs() <= 1e-9 * h) {
            Some(s) => {
                s.max_residual = s.max_residual.max(r);
                s.pairs += 1;
            }
            None => scales.push(ScaleRow { h, max_residual: r, pairs: 1 }),
        }
    }
    scales.sort_by(|a, b| a.h.total_cmp(&b.h));
    scales
}

/// Pairs `(t_0 + k δ, t_0 + (k+1) δ)` with `δ = (t_n - t_0) 2^{-l}` for each
/// level, keeping those on the solution mesh.
pub fn dyadic_pairs<T: Scalar>(sol: &FlowSolution<T>, levels: impl IntoIterator<Item = u32>) -> Vec<(T, T)> {
    let (t0, t1) = (sol.times[0], *sol.times.last().expect("non-empty"));
    let mut out = Vec::new();
    for l in levels {
        let m = 1usize << l;
        for k in 0..m {
            let s = t0 + (t1 - t0) * T::of(k as f64 / m as f64);
            let t = t0 + (t1 - t0) * T::of((k + 1) as f64 / m as f64);
            if sol.value_at(s).is_some() && sol.value_at(t).is_some() {
                out.push((s, t));
            }
        }
    }
    out
}

/// Residuals `|Y_t - davie_expansion(s, t, Y_s)|` and the fitted rate.
pub fn davie_residual_report<T: Scalar>(
    path: &RoughPathGrid<T>,
    f: &dyn VectorField<T>,
    sol: &FlowSolution<T>,
    pairs: &[(T, T)],
) -> Result<ResidualReport> {
    let mut rows = Vec::with_capacity(pairs.len());
    for &(s, t) in pairs {
        let (Some(ys), Some(yt)) = (sol.value_at(s), sol.value_at(t)) else {
            return invalid(format!("pair ({s}, {t}) is not on the solution mesh"));
        };
        let e = davie_expansion(path, f, path.index_of(s)?, path.index_of(t)?, ys)?;
        rows.push(ResidualRow { s: s.as_f64(), t: t.as_f64(), residual: (yt - e).abs().as_f64() });
    }
    let scales = group_scales(&rows.iter().map(|r| (r.t - r.s, r.residual)).collect::<Vec<_>>());
    let slope = fit_loglog_slope(&scales.iter().map(|s| (s.h, s.max_residual)).collect::<Vec<_>>());
    let g = path.grading();
    Ok(ResidualReport { rows, scales, slope, target_slope: (g.n_gamma() as f64 + 1.0) * g.gamma_f64() })
}

/// Almost-flow defects `|μ_{s,t}(y) - μ_{r,t}(μ_{s,r}(y))|` with `r` the
/// midpoint, over dyadic triples of the given levels.
pub fn almost_flow_report<T: Scalar>(
    path: &RoughPathGrid<T>,
    f: &dyn VectorField<T>,
    y: T,
    levels: impl IntoIterator<Item = u32>,
    substeps: usize,
) -> Result<ResidualReport> {
    let n = path.times().len() - 1;
    let (t0, t1) = (path.times()[0], path.times()[n]);
    let guard = T::of(DEFAULT_GUARD);
    let mu = |a: usize, b: usize, y: T| -> Result<T> { rk4_unit(&logode_field(&path.eval(a, b)?.log()), f, y, substeps, guard) };
    let mut rows = Vec::new();
    for l in levels {
        let m = 1usize << l;
        for k in 0..m {
            let at = |j: usize| path.index_of(t0 + (t1 - t0) * T::of(j as f64 / (2 * m) as f64));
            let (a, r, b) = (at(2 * k)?, at(2 * k + 1)?, at(2 * k + 2)?);
            let direct = mu(a, b, y)?;
            let split = mu(r, b, mu(a, r, y)?)?;
            rows.push(ResidualRow {
                s: path.times()[a].as_f64(),
                t: path.times()[b].as_f64(),
                residual: (direct - split).abs().as_f64(),
            });
        }
    }
    let scales = group_scales(&rows.iter().map(|r| (r.t - r.s, r.residual)).collect::<Vec<_>>());
    let slope = fit_loglog_slope(&scales.iter().map(|s| (s.h, s.max_residual)).collect::<Vec<_>>());
    let g = path.grading();
    Ok(ResidualReport { rows, scales, slope, target_slope: (g.n_gamma() as f64 + 1.0) * g.gamma_f64() })
}
