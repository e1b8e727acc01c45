use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::basis::{LiftMode, TruncatedBasis};
use super::grid::RoughPathGrid;
use super::group::GroupElement;
use crate::algebra::{ratio, Coeff, Grading, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Name and version of the generator behind [`brownian_samples`], for
/// provenance headers.
pub const RNG_NAME: &str = "rand_chacha::ChaCha20Rng 0.3 (seed_from_u64, stream = path index)";

/// Highest truncation level accepted by [`lift_brownian`].
pub const BROWNIAN_MAX_LEVEL: usize = 3;

struct Coefficients {
    mode: LiftMode,
    memo_c: HashMap<MultiIndex, Coeff>,
    memo_t: HashMap<(MultiIndex, u32), Coeff>,
}

impl Coefficients {
    fn allowed(&self, (i, k): (u32, u32)) -> bool {
        match self.mode {
            LiftMode::Geometric => true,
            // the integrand vanishes at the left endpoint of the step
            LiftMode::Ito => i == 0 || k == 0,
        }
    }

    // Sum over ordered k-tuples of populated multi-indices with product `r`
    // of the product of their coefficients.
    fn tuples(&mut self, r: &MultiIndex, k: u32) -> Coeff {
        if k == 0 {
            return if r.is_one() { Coeff::one() } else { Coeff::zero() };
        }
        if r.degree() < k as usize {
            return Coeff::zero();
        }
        let key = (r.clone(), k);
        if let Some(c) = self.memo_t.get(&key) {
            return c.clone();
        }
        let mut acc = Coeff::zero();
        for s in r.divisors() {
            if s.is_one() || !s.is_populated() {
                continue;
            }
            let cs = self.coeff(&s);
            if cs.is_zero() {
                continue;
            }
            let rest = r.checked_div(&s).expect("divisor");
            let t = self.tuples(&rest, k - 1);
            acc += cs * t;
        }
        self.memo_t.insert(key, acc.clone());
        acc
    }

    fn coeff(&mut self, b: &MultiIndex) -> Coeff {
        if let Some(c) = self.memo_c.get(b) {
            return c.clone();
        }
        let mut acc = Coeff::zero();
        for &(v, _) in b.entries() {
            if !self.allowed(v) {
                continue;
            }
            let rest = b.without_var(v).expect("present");
            acc += self.tuples(&rest, v.1);
        }
        let c = acc * ratio(1, b.degree() as i64);
        self.memo_c.insert(b.clone(), c.clone());
        c
    }
}

/// Exact `C(β)` for each key: over one affine step with increments `Δ^i`
/// (`Δ^0` the time step), `X(z^β) = C(β) Π_{(i,k)} (Δ^i)^{β(i,k)}`.
pub fn affine_coefficients(keys: &[MultiIndex], mode: LiftMode) -> Vec<Coeff> {
    let mut c = Coefficients { mode, memo_c: HashMap::new(), memo_t: HashMap::new() };
    keys.iter().map(|b| c.coeff(b)).collect()
}

/// One step's character from its increments `Δ = (h, ΔX^1, …, ΔX^d)`.
pub fn step_increment<T: Scalar>(grading: Grading, delta: &[T], mode: LiftMode) -> Result<GroupElement<T>> {
    if delta.is_empty() {
        return invalid("increment vector is empty");
    }
    let d = delta.len() - 1;
    let basis = TruncatedBasis::shared(d, grading.max_norm());
    let coeffs = basis.lift_coefficients(mode);
    let mut values = Vec::with_capacity(coeffs.len());
    for (m, &c) in basis.keys().iter().zip(coeffs) {
        let mut x = T::of(c);
        if c != 0.0 {
            for &((i, _), f) in m.entries() {
                x *= delta[i as usize].powi(f as i32);
            }
        }
        values.push(x);
    }
    GroupElement::from_dense(d, grading, values)
}

fn check_samples<T: Scalar>(times: &[T], values: &[Vec<T>]) -> Result<usize> {
    if times.len() < 2 {
        return invalid("need at least 2 samples");
    }
    if times.len() != values.len() {
        return invalid(format!("{} times but {} sample rows", times.len(), values.len()));
    }
    let d = values[0].len();
    if d == 0 {
        return invalid("samples have no path components");
    }
    for (j, w) in times.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return invalid(format!("times not strictly increasing at row {}", j + 1));
        }
    }
    if let Some(j) = values.iter().position(|r| r.len() != d) {
        return invalid(format!("row {j} has {} components, expected {d}", values[j].len()));
    }
    if times.iter().chain(values.iter().flatten()).any(|x| !x.is_finite()) {
        return invalid("non-finite sample");
    }
    Ok(d)
}

/// Lift of sampled path values with the given per-step rule. `values[j]`
/// holds `X^1..X^d` at `times[j]`; `X^0 = t` is adjoined.
pub fn lift_samples<T: Scalar>(times: &[T], values: &[Vec<T>], grading: Grading, mode: LiftMode) -> Result<RoughPathGrid<T>> {
    let d = check_samples(times, values)?;
    let mut incs = Vec::with_capacity(times.len() - 1);
    let mut delta = vec![T::zero(); d + 1];
    for j in 0..times.len() - 1 {
        delta[0] = times[j + 1] - times[j];
        for i in 0..d {
            delta[i + 1] = values[j + 1][i] - values[j][i];
        }
        incs.push(step_increment(grading, &delta, mode)?);
    }
    RoughPathGrid::new(grading, times.to_vec(), incs)
}

/// Exact lift of the piecewise-linear interpolation of the samples.
pub fn lift_piecewise_linear<T: Scalar>(times: &[T], values: &[Vec<T>], grading: Grading) -> Result<RoughPathGrid<T>> {
    lift_samples(times, values, grading, LiftMode::Geometric)
}

/// Brownian sample path on `n_steps` equal steps of `[0, t_end]`, starting
/// at 0. Draws are step-major, components inner. `stream` selects an
/// independent ChaCha stream so parallel paths never share draws.
pub fn brownian_samples(d: usize, t_end: f64, n_steps: usize, seed: u64, stream: u64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if d == 0 || n_steps == 0 || !(t_end > 0.0) || !t_end.is_finite() {
        return invalid("need d ≥ 1, n_steps ≥ 1 and a positive finite horizon");
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let dt = t_end / n_steps as f64;
    let sd = dt.sqrt();
    let times: Vec<f64> = (0..=n_steps).map(|j| if j == n_steps { t_end } else { j as f64 * dt }).collect();
    let mut vals = Vec::with_capacity(n_steps + 1);
    let mut cur = vec![0.0; d];
    vals.push(cur.clone());
    for _ in 0..n_steps {
        for x in cur.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *x += sd * z;
        }
        vals.push(cur.clone());
    }
    Ok((times, vals))
}

/// Brownian rough path on `[0, t_end]`. Itô mode freezes integrands against
/// `dB^i` at the left point of each step; Stratonovich mode integrates
/// exactly along the piecewise-linear interpolation.
pub fn lift_brownian<T: Scalar>(
    d: usize,
    t_end: f64,
    n_steps: usize,
    seed: u64,
    stream: u64,
    mode: BrownianMode,
    grading: Grading,
) -> Result<RoughPathGrid<T>> {
    if grading.max_norm() > BROWNIAN_MAX_LEVEL {
        return Err(Error::Unsupported(format!(
            "Brownian lift above level {BROWNIAN_MAX_LEVEL} (requested {})",
            grading.max_norm()
        )));
    }
    if !n_steps.is_power_of_two() {
        return invalid(format!("n_steps = {n_steps} is not a power of two"));
    }
    let (times, vals) = brownian_samples(d, t_end, n_steps, seed, stream)?;
    let times: Vec<T> = times.into_iter().map(T::of).collect();
    let vals: Vec<Vec<T>> = vals.into_iter().map(|r| r.into_iter().map(T::of).collect()).collect();
    lift_samples(&times, &vals, grading, mode.lift_mode())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BrownianMode {
    Ito,
    Strat,
}

impl BrownianMode {
    pub fn lift_mode(self) -> LiftMode {
        match self {
            BrownianMode::Ito => LiftMode::Ito,
            BrownianMode::Strat => LiftMode::Geometric,
        }
    }
}

impl std::str::FromStr for BrownianMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ito" | "itô" => Ok(BrownianMode::Ito),
            "strat" | "stratonovich" => Ok(BrownianMode::Strat),
            _ => invalid(format!("unknown mode {s:?} (expected ito or strat)")),
        }
    }
}
