use serde_json::{json, Map, Value};

use super::group::{GroupElement, LieElement};
use crate::algebra::{format_rational64, parse_multi_index, parse_rational64, Grading};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Rough path stored as consecutive increments over a time grid.
#[derive(Clone, Debug)]
pub struct RoughPathGrid<T> {
    grading: Grading,
    times: Vec<T>,
    increments: Vec<GroupElement<T>>,
}

impl<T: Scalar> RoughPathGrid<T> {
    pub fn new(grading: Grading, times: Vec<T>, increments: Vec<GroupElement<T>>) -> Result<Self> {
        if times.len() < 2 || increments.len() + 1 != times.len() {
            return invalid(format!("{} times need {} increments, got {}", times.len(), times.len().saturating_sub(1), increments.len()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("grid times not strictly increasing");
        }
        let d = increments[0].d();
        if let Some(x) = increments.iter().find(|x| x.grading() != grading || x.d() != d) {
            return Err(Error::GradingMismatch(format!(
                "increment with d={}, N={} in a grid with d={d}, N={}",
                x.d(),
                x.grading().max_norm(),
                grading.max_norm()
            )));
        }
        Ok(Self { grading, times, increments })
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn d(&self) -> usize {
        self.increments[0].d()
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn increments(&self) -> &[GroupElement<T>] {
        &self.increments
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// `X_{t_a, t_b}` for grid indices `a ≤ b`.
    pub fn eval(&self, a: usize, b: usize) -> Result<GroupElement<T>> {
        if a > b || b >= self.times.len() {
            return invalid(format!("grid indices ({a}, {b}) out of range 0..{}", self.times.len()));
        }
        let mut x = GroupElement::identity(self.d(), self.grading);
        for inc in &self.increments[a..b] {
            x = x.chen(inc)?;
        }
        Ok(x)
    }

    /// Grid index of `t`, which must coincide with a grid point up to a
    /// relative `1e-12`.
    pub fn index_of(&self, t: T) -> Result<usize> {
        let span = (self.times[self.times.len() - 1] - self.times[0]).abs();
        let tol = T::of(1e-12) * span.max(T::one());
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .ok_or_else(|| Error::InvalidInput(format!("time {t} is not a grid point")))
    }

    pub fn eval_at(&self, s: T, t: T) -> Result<GroupElement<T>> {
        self.eval(self.index_of(s)?, self.index_of(t)?)
    }

    /// `X_{t_0, t_j}` for every grid index `j`.
    pub fn running(&self) -> Result<Vec<GroupElement<T>>> {
        let mut out = Vec::with_capacity(self.times.len());
        let mut x = GroupElement::identity(self.d(), self.grading);
        out.push(x.clone());
        for inc in &self.increments {
            x = x.chen(inc)?;
            out.push(x.clone());
        }
        Ok(out)
    }

    /// Coarsen by keeping every `stride`-th grid point (plus the last).
    pub fn coarsen(&self, stride: usize) -> Result<Self> {
        if stride == 0 {
            return invalid("stride must be positive");
        }
        let n = self.times.len() - 1;
        let mut idx: Vec<usize> = (0..=n).step_by(stride).collect();
        if *idx.last().expect("non-empty") != n {
            idx.push(n);
        }
        let mut incs = Vec::with_capacity(idx.len() - 1);
        for w in idx.windows(2) {
            incs.push(self.eval(w[0], w[1])?);
        }
        Self::new(self.grading, idx.iter().map(|&j| self.times[j]).collect(), incs)
    }

    /// Sup over grid pairs and basis forests of
    /// `(|X_{s,t}(u)| / |t-s|^{|u|_γ})^{1/|u|}`.
    pub fn norm(&self) -> Result<T> {
        let b = self.increments[0].basis().clone();
        let gamma = self.grading.gamma();
        let weights: Vec<(T, T)> = (0..b.forest_count())
            .map(|j| {
                let f = b.forest(j);
                let gd = f.gamma_degree(gamma);
                (T::of(*gd.numer() as f64 / *gd.denom() as f64), T::of(f.degree().max(1) as f64))
            })
            .collect();
        let mut sup = vec![T::zero(); weights.len()];
        for a in 0..self.increments.len() {
            let mut x = GroupElement::identity(self.d(), self.grading);
            for c in a..self.increments.len() {
                x = x.chen(&self.increments[c])?;
                let h = self.times[c + 1] - self.times[a];
                let fv = x.forest_values();
                for j in 1..fv.len() {
                    let r = fv[j].abs() / h.powf(weights[j].0);
                    if r > sup[j] {
                        sup[j] = r;
                    }
                }
            }
        }
        Ok((1..sup.len()).fold(T::zero(), |m, j| m.max(sup[j].powf(T::one() / weights[j].1))))
    }

    /// The same norm applied to `Λ_{s,t} = log X_{s,t}` (only single
    /// multi-indices contribute).
    pub fn log_norm(&self) -> Result<T> {
        let b = self.increments[0].basis().clone();
        let gamma = self.grading.gamma();
        let weights: Vec<(T, T)> = b
            .keys()
            .iter()
            .map(|m| {
                let gd = m.gamma_degree(gamma);
                (T::of(*gd.numer() as f64 / *gd.denom() as f64), T::of(m.degree() as f64))
            })
            .collect();
        let mut sup = vec![T::zero(); weights.len()];
        for a in 0..self.increments.len() {
            let mut x = GroupElement::identity(self.d(), self.grading);
            for c in a..self.increments.len() {
                x = x.chen(&self.increments[c])?;
                let h = self.times[c + 1] - self.times[a];
                let l: LieElement<T> = x.log();
                for (j, &v) in l.values().iter().enumerate() {
                    let r = v.abs() / h.powf(weights[j].0);
                    if r > sup[j] {
                        sup[j] = r;
                    }
                }
            }
        }
        Ok(sup.iter().zip(&weights).fold(T::zero(), |m, (&s, w)| m.max(s.powf(T::one() / w.1))))
    }

    pub fn map_increments(&self, mut f: impl FnMut(&GroupElement<T>) -> Result<GroupElement<T>>) -> Result<Self> {
        let incs = self.increments.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        let g = incs[0].grading();
        Self::new(g, self.times.clone(), incs)
    }

    pub fn to_json(&self) -> Value {
        let incs: Vec<Value> = self
            .increments
            .iter()
            .map(|x| {
                let m: Map<String, Value> = x.iter().map(|(k, v)| (k.to_string(), json!(v.as_f64()))).collect();
                Value::Object(m)
            })
            .collect();
        json!({
            "d": self.d(),
            "gamma": format_rational64(self.grading.gamma()),
            "max_norm": self.grading.max_norm(),
            "times": self.times.iter().map(|t| t.as_f64()).collect::<Vec<_>>(),
            "increments": incs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::InvalidInput(format!("missing field {k:?}")));
        let d = field("d")?.as_u64().ok_or_else(|| Error::InvalidInput("d must be a non-negative integer".into()))? as usize;
        let gamma = parse_rational64(field("gamma")?.as_str().ok_or_else(|| Error::InvalidInput("gamma must be a string".into()))?)?;
        let n = field("max_norm")?.as_u64().ok_or_else(|| Error::InvalidInput("max_norm must be an integer".into()))? as usize;
        let grading = Grading::new(n, gamma)?;
        let times = field("times")?
            .as_array()
            .ok_or_else(|| Error::InvalidInput("times must be an array".into()))?
            .iter()
            .map(|t| t.as_f64().map(T::of).ok_or_else(|| Error::InvalidInput("non-numeric time".into())))
            .collect::<Result<Vec<T>>>()?;
        let incs = field("increments")?
            .as_array()
            .ok_or_else(|| Error::InvalidInput("increments must be an array".into()))?
            .iter()
            .map(|o| {
                let o = o.as_object().ok_or_else(|| Error::InvalidInput("increment must be an object".into()))?;
                let pairs = o
                    .iter()
                    .map(|(k, x)| {
                        let x = x.as_f64().ok_or_else(|| Error::InvalidInput(format!("value of {k} not numeric")))?;
                        Ok((parse_multi_index(k)?, T::of(x)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupElement::from_pairs(d, grading, pairs)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(grading, times, incs)
    }
}
