use crate::differentials::VectorField;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Classical ODE `dY = f_0(Y) dt + Σ_i f_i(Y) Ẋ^i(t) dt` by RK4 on
/// `n_steps` equal steps of `[t0, t1]`. `xdot(i, t)` is called for
/// `i = 1..=d`. Returns `(times, values)`.
pub fn reference_ode_solve<T: Scalar>(
    f: &dyn VectorField<T>,
    xdot: &dyn Fn(usize, T) -> T,
    y0: T,
    t0: T,
    t1: T,
    n_steps: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    if n_steps == 0 || !(t1 > t0) {
        return invalid("need n_steps ≥ 1 and t1 > t0");
    }
    let d = f.d();
    let rhs = |t: T, y: T| -> Result<T> {
        let mut v = f.derivative(0, 0, y)?;
        for i in 1..=d {
            v += f.derivative(i, 0, y)? * xdot(i, t);
        }
        Ok(v)
    };
    let h = (t1 - t0) / T::of(n_steps as f64);
    let (half, two, sixth) = (T::of(0.5), T::of(2.0), h / T::of(6.0));
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut y = y0;
    times.push(t0);
    values.push(y);
    for n in 0..n_steps {
        let t = t0 + h * T::of(n as f64);
        let k1 = rhs(t, y)?;
        let k2 = rhs(t + half * h, y + half * h * k1)?;
        let k3 = rhs(t + half * h, y + half * h * k2)?;
        let k4 = rhs(t + h, y + h * k3)?;
        let next = y + sixth * (k1 + two * k2 + two * k3 + k4);
        if !next.is_finite() {
            return Err(Error::Diverged { substep: n + 1, last: y.as_f64() });
        }
        y = next;
        times.push(if n + 1 == n_steps { t1 } else { t0 + h * T::of((n + 1) as f64) });
        values.push(y);
    }
    Ok((times, values))
}
