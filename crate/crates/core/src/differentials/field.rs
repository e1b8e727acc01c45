use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::poly::{parse_exact, Poly};
use crate::algebra::format_rational;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Scalar vector fields `f_0, …, f_d` with derivative access
/// `(i, k, y) ↦ f_i^{(k)}(y)`.
pub trait VectorField<T: Scalar>: Send + Sync {
    /// Number of driving components (`f_0` is the drift).
    fn d(&self) -> usize;

    /// Highest derivative order available; `None` when unlimited.
    fn max_order(&self) -> Option<usize>;

    fn derivative(&self, i: usize, k: usize, y: T) -> Result<T>;

    /// Whether the fields and their derivatives are declared bounded.
    fn bounded(&self) -> bool {
        false
    }
}

pub(crate) fn check_access(d: usize, max: Option<usize>, i: usize, k: usize) -> Result<()> {
    if i > d {
        return invalid(format!("field index {i} exceeds d = {d}"));
    }
    if let Some(m) = max {
        if k > m {
            return Err(Error::DerivativeOrder { index: i, order: k, max: m });
        }
    }
    Ok(())
}

/// Polynomial fields, differentiated exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialField {
    polys: Vec<Poly>,
    // derivs[i][k] rounded coefficients of f_i^{(k)}, k ≤ degree
    derivs: Vec<Vec<Vec<f64>>>,
}

impl PolynomialField {
    /// `polys[i]` is `f_i`; `polys.len() = d + 1`.
    pub fn new(polys: Vec<Poly>) -> Result<Self> {
        if polys.len() < 2 {
            return invalid("need at least f_0 and f_1");
        }
        let derivs = polys
            .iter()
            .map(|p| {
                let mut out = Vec::new();
                let mut q = p.clone();
                while !q.is_zero() {
                    out.push(q.coeffs_f64());
                    q = q.derivative();
                }
                out
            })
            .collect();
        Ok(Self { polys, derivs })
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn to_json(&self) -> Value {
        let fields: Vec<Value> = self
            .polys
            .iter()
            .enumerate()
            .map(|(i, p)| json!({"i": i, "coeffs": p.coeffs().iter().map(format_rational).collect::<Vec<_>>()}))
            .collect();
        json!({"d": self.polys.len() - 1, "fields": fields})
    }

    /// `{"d":…, "fields":[{"i":0,"coeffs":["1","0.5"]}, …]}`; missing
    /// indices are the zero field. Coefficients may also be JSON numbers.
    pub fn from_json(v: &Value) -> Result<Self> {
        let d = v
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("field JSON needs integer \"d\"".into()))? as usize;
        let mut polys = vec![Poly::zero(); d + 1];
        let fields = v
            .get("fields")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("field JSON needs array \"fields\"".into()))?;
        for f in fields {
            let i = f.get("i").and_then(Value::as_u64).ok_or_else(|| Error::InvalidInput("field entry needs \"i\"".into()))?
                as usize;
            if i > d {
                return invalid(format!("field index {i} exceeds d = {d}"));
            }
            let cs = f
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidInput(format!("field {i} needs \"coeffs\"")))?
                .iter()
                .map(|c| match c {
                    Value::String(s) => parse_exact(s),
                    Value::Number(n) => parse_exact(&n.to_string()),
                    _ => invalid("coefficient must be a string or number"),
                })
                .collect::<Result<Vec<_>>>()?;
            polys[i] = polys[i].add(&Poly::from_coeffs(cs));
        }
        Self::new(polys)
    }
}

impl<T: Scalar> VectorField<T> for PolynomialField {
    fn d(&self) -> usize {
        self.polys.len() - 1
    }

    fn max_order(&self) -> Option<usize> {
        None
    }

    fn derivative(&self, i: usize, k: usize, y: T) -> Result<T> {
        check_access(self.polys.len() - 1, None, i, k)?;
        Ok(match self.derivs[i].get(k) {
            Some(c) => c.iter().rev().fold(T::zero(), |acc, &a| acc * y + T::of(a)),
            None => T::zero(),
        })
    }
}

type DerivFn<T> = dyn Fn(usize, usize, T) -> T + Send + Sync;

/// Fields given by a user closure `(i, k, y) ↦ f_i^{(k)}(y)` valid up to
/// `max_order`.
#[derive(Clone)]
pub struct ClosureField<T> {
    d: usize,
    max_order: usize,
    bounded: bool,
    f: Arc<DerivFn<T>>,
}

impl<T: Scalar> ClosureField<T> {
    pub fn new(d: usize, max_order: usize, f: impl Fn(usize, usize, T) -> T + Send + Sync + 'static) -> Self {
        Self { d, max_order, bounded: false, f: Arc::new(f) }
    }

    pub fn with_bounded(mut self, bounded: bool) -> Self {
        self.bounded = bounded;
        self
    }
}

impl<T> fmt::Debug for ClosureField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosureField {{ d: {}, max_order: {} }}", self.d, self.max_order)
    }
}

impl<T: Scalar> VectorField<T> for ClosureField<T> {
    fn d(&self) -> usize {
        self.d
    }

    fn max_order(&self) -> Option<usize> {
        Some(self.max_order)
    }

    fn derivative(&self, i: usize, k: usize, y: T) -> Result<T> {
        check_access(self.d, Some(self.max_order), i, k)?;
        Ok((self.f)(i, k, y))
    }

    fn bounded(&self) -> bool {
        self.bounded
    }
}

/// `f_i(y) = a_i y`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearField<T> {
    a: Vec<T>,
}

impl<T: Scalar> LinearField<T> {
    pub fn new(a: Vec<T>) -> Result<Self> {
        if a.len() < 2 {
            return invalid("need coefficients for f_0 and f_1");
        }
        Ok(Self { a })
    }

    pub fn coefficients(&self) -> &[T] {
        &self.a
    }
}

impl<T: Scalar> VectorField<T> for LinearField<T> {
    fn d(&self) -> usize {
        self.a.len() - 1
    }

    fn max_order(&self) -> Option<usize> {
        None
    }

    fn derivative(&self, i: usize, k: usize, y: T) -> Result<T> {
        check_access(self.a.len() - 1, None, i, k)?;
        Ok(match k {
            0 => self.a[i] * y,
            1 => self.a[i],
            _ => T::zero(),
        })
    }
}

/// Test function `ψ` with derivative access.
pub trait SmoothTest<T: Scalar>: Send + Sync {
    fn derivative(&self, n: usize, y: T) -> Result<T>;
}

/// `ψ(y) = y`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl<T: Scalar> SmoothTest<T> for Identity {
    fn derivative(&self, n: usize, y: T) -> Result<T> {
        Ok(match n {
            0 => y,
            1 => T::one(),
            _ => T::zero(),
        })
    }
}

impl<T: Scalar> SmoothTest<T> for Poly {
    fn derivative(&self, n: usize, y: T) -> Result<T> {
        Ok(self.nth_derivative(n).eval(y))
    }
}
