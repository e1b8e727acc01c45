use serde::{Deserialize, Serialize};

use super::logode::{logode_field, rk4_unit, DEFAULT_GUARD};
use crate::differentials::VectorField;
use crate::error::{invalid, Error, Result};
use crate::rough_path::RoughPathGrid;
use crate::scalar::Scalar;

/// Which grid points of the rough path the flow is composed over.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mesh {
    /// Every grid point.
    Grid,
    /// Every `n`-th grid point (plus the last).
    Stride(usize),
    /// Points `t_0 + j (t_n - t_0) 2^{-L}`; each must be a grid point.
    Dyadic(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub mesh: Mesh,
    pub substeps: usize,
    pub guard: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { mesh: Mesh::Grid, substeps: 8, guard: DEFAULT_GUARD }
    }
}

impl SolveConfig {
    pub fn dyadic(level: u32) -> Self {
        Self { mesh: Mesh::Dyadic(level), ..Self::default() }
    }
}

/// Where a solve stopped early.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    /// Mesh step (0-based) whose log-ODE blew up.
    pub step: usize,
    pub substep: usize,
    pub last_finite: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
    /// Grid indices of `times` in the driving path.
    pub grid_index: Vec<usize>,
    /// Set when the solution is local: values stop at the last finite state.
    pub divergence: Option<Divergence>,
}

impl<T: Scalar> FlowSolution<T> {
    pub fn endpoint(&self) -> T {
        *self.values.last().expect("at least the initial value")
    }

    pub fn is_complete(&self) -> bool {
        self.divergence.is_none()
    }

    /// `sup_j |Y_j - g(t_j)|`.
    pub fn sup_error(&self, g: impl Fn(T) -> T) -> T {
        self.times.iter().zip(&self.values).fold(T::zero(), |m, (&t, &y)| m.max((y - g(t)).abs()))
    }

    /// Value at a mesh time (relative tolerance 1e-12).
    pub fn value_at(&self, t: T) -> Option<T> {
        let tol = T::of(1e-12) * t.abs().max(T::one());
        self.times.iter().position(|&s| (s - t).abs() <= tol).map(|j| self.values[j])
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,y\n");
        for (t, y) in self.times.iter().zip(&self.values) {
            s.push_str(&format!("{:e},{:e}\n", t.as_f64(), y.as_f64()));
        }
        s
    }
}

/// Grid indices selected by `mesh`.
pub fn mesh_indices<T: Scalar>(path: &RoughPathGrid<T>, mesh: Mesh) -> Result<Vec<usize>> {
    let n = path.times().len() - 1;
    Ok(match mesh {
        Mesh::Grid => (0..=n).collect(),
        Mesh::Stride(s) => {
            if s == 0 {
                return invalid("mesh stride must be positive");
            }
            let mut v: Vec<usize> = (0..=n).step_by(s).collect();
            if *v.last().expect("non-empty") != n {
                v.push(n);
            }
            v
        }
        Mesh::Dyadic(l) => {
            if l > 40 {
                return invalid(format!("mesh level {l} too fine"));
            }
            let (t0, t1) = (path.times()[0], path.times()[n]);
            let m = 1usize << l;
            (0..=m)
                .map(|j| {
                    let t = t0 + (t1 - t0) * T::of(j as f64 / m as f64);
                    path.index_of(t).map_err(|_| {
                        Error::InvalidInput(format!("dyadic mesh level {l} needs time {t}, which is not on the path grid"))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    })
}

/// Compose log-ODE steps along the mesh. Divergence ends the solution early
/// and is recorded rather than returned as an error.
pub fn solve_flow<T: Scalar>(path: &RoughPathGrid<T>, f: &dyn VectorField<T>, y0: T, cfg: &SolveConfig) -> Result<FlowSolution<T>> {
    if f.d() != path.d() {
        return invalid(format!("field has d = {} but the path has d = {}", f.d(), path.d()));
    }
    if cfg.substeps == 0 {
        return invalid("substeps must be at least 1");
    }
    let idx = mesh_indices(path, cfg.mesh)?;
    let guard = T::of(cfg.guard);
    let mut sol = FlowSolution {
        times: vec![path.times()[idx[0]]],
        values: vec![y0],
        grid_index: vec![idx[0]],
        divergence: None,
    };
    let mut y = y0;
    for (step, w) in idx.windows(2).enumerate() {
        let lambda = path.eval(w[0], w[1])?.log();
        match rk4_unit(&logode_field(&lambda), f, y, cfg.substeps, guard) {
            Ok(next) => y = next,
            Err(Error::Diverged { substep, last }) => {
                sol.divergence = Some(Divergence { step, substep, last_finite: last });
                break;
            }
            Err(e) => return Err(e),
        }
        sol.times.push(path.times()[w[1]]);
        sol.values.push(y);
        sol.grid_index.push(w[1]);
    }
    Ok(sol)
}
