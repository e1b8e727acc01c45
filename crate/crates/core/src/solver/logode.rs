use crate::algebra::{Grading, MultiIndex, Var};
use crate::differentials::VectorField;
use crate::error::{Error, Result};
use crate::rough_path::{GroupElement, LieElement, TruncatedBasis};
use crate::scalar::Scalar;

/// Default `|Z|` above which a log-ODE step is declared divergent.
pub const DEFAULT_GUARD: f64 = 1e12;

/// Keys entering the expansion and the log-ODE: populated, `1 ≤ |β|_γ ≤ N_γ`
/// and within the stored truncation. Returned as indices into
/// `basis.keys()`.
pub fn active_keys(basis: &TruncatedBasis, grading: Grading) -> Vec<usize> {
    let ng = num_rational::Rational64::from_integer(grading.n_gamma() as i64);
    basis
        .keys()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.gamma_degree(grading.gamma()) <= ng)
        .map(|(j, _)| j)
        .collect()
}

/// Weighted sum `Σ_β w_β Υ_f[z^β](y)` with the derivative values shared
/// across terms.
#[derive(Clone, Debug)]
pub struct ElementarySum<T> {
    vars: Vec<Var>,
    // per term: weight and (position in `vars`, exponent)
    terms: Vec<(T, Vec<(usize, i32)>)>,
}

impl<T: Scalar> ElementarySum<T> {
    pub fn new<'a>(terms: impl IntoIterator<Item = (&'a MultiIndex, T)>) -> Self {
        let mut vars: Vec<Var> = Vec::new();
        let mut out = Vec::new();
        for (m, w) in terms {
            if w == T::zero() {
                continue;
            }
            let factors = m
                .entries()
                .iter()
                .map(|&(v, e)| {
                    let p = match vars.iter().position(|&u| u == v) {
                        Some(p) => p,
                        None => {
                            vars.push(v);
                            vars.len() - 1
                        }
                    };
                    (p, e as i32)
                })
                .collect();
            out.push((w, factors));
        }
        Self { vars, terms: out }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, f: &dyn VectorField<T>, y: T, scratch: &mut Vec<T>) -> Result<T> {
        scratch.clear();
        for &(i, k) in &self.vars {
            scratch.push(f.derivative(i as usize, k as usize, y)?);
        }
        let mut acc = T::zero();
        for (w, factors) in &self.terms {
            let mut p = *w;
            for &(v, e) in factors {
                p *= scratch[v].powi(e);
            }
            acc += p;
        }
        Ok(acc)
    }
}

/// Log-ODE right-hand side `Σ Υ_f[z^β]/S(z^β) Λ(z^β)` over the active keys.
pub fn logode_field<T: Scalar>(lambda: &LieElement<T>) -> ElementarySum<T> {
    let b = lambda.basis();
    let act = active_keys(b, lambda.grading());
    ElementarySum::new(act.into_iter().map(|j| (&b.keys()[j], lambda.values()[j] / T::of(b.key_symmetry(j)))))
}

/// Classical RK4 for `ż = g(z)` over unit time; `Diverged` when the state
/// leaves the finite range or exceeds `guard` in absolute value.
pub fn rk4_unit<T: Scalar>(g: &ElementarySum<T>, f: &dyn VectorField<T>, y: T, substeps: usize, guard: T) -> Result<T> {
    if substeps == 0 {
        return Err(Error::InvalidInput("substeps must be at least 1".into()));
    }
    if g.is_empty() {
        return Ok(y);
    }
    let h = T::one() / T::of(substeps as f64);
    let half = T::of(0.5);
    let two = T::of(2.0);
    let sixth = h / T::of(6.0);
    let mut z = y;
    let mut s = Vec::new();
    for n in 0..substeps {
        let k1 = g.eval(f, z, &mut s)?;
        let k2 = g.eval(f, z + half * h * k1, &mut s)?;
        let k3 = g.eval(f, z + half * h * k2, &mut s)?;
        let k4 = g.eval(f, z + h * k3, &mut s)?;
        let next = z + sixth * (k1 + two * k2 + two * k3 + k4);
        if !next.is_finite() || next.abs() > guard {
            return Err(Error::Diverged { substep: n + 1, last: z.as_f64() });
        }
        z = next;
    }
    Ok(z)
}

/// One log-ODE almost-flow step `μ(y)`: time-1 RK4 solution of the log-ODE
/// driven by `Λ`.
pub fn logode_step<T: Scalar>(lambda: &LieElement<T>, f: &dyn VectorField<T>, y: T, substeps: usize) -> Result<T> {
    rk4_unit(&logode_field(lambda), f, y, substeps, T::of(DEFAULT_GUARD))
}

/// Truncated expansion `y + Σ Υ_f[z^β](y)/S(z^β) X(z^β)` over the active keys.
pub fn davie_increment<T: Scalar>(x: &GroupElement<T>, f: &dyn VectorField<T>, y: T) -> Result<T> {
    let b = x.basis();
    let act = active_keys(b, x.grading());
    let sum = ElementarySum::new(act.into_iter().map(|j| (&b.keys()[j], x.values()[j] / T::of(b.key_symmetry(j)))));
    Ok(y + sum.eval(f, y, &mut Vec::new())?)
}
