use std::sync::Arc;

use super::basis::TruncatedBasis;
use crate::algebra::{Forest, Grading, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Dense convolution of two functionals on basis forests (`x(∅)`, `y(∅)`
/// included).
pub fn star_dense<T: Scalar>(basis: &TruncatedBasis, x: &[T], y: &[T]) -> Vec<T> {
    let mut out: Vec<T> = (0..x.len()).map(|w| x[0] * y[w] + x[w] * y[0]).collect();
    out[0] = x[0] * y[0];
    for e in basis.product_entries() {
        let (u, v, w) = (e.u as usize, e.v as usize, e.w as usize);
        out[w] += x[u] * y[v] * T::of(e.c);
    }
    out
}

fn check_key(basis: &TruncatedBasis, m: &MultiIndex) -> Result<usize> {
    if !m.is_populated() {
        return invalid(format!("{m} is not populated"));
    }
    m.check_alphabet(basis.d() as u32)?;
    if m.degree() > basis.max_norm() {
        return Err(Error::Truncation { needed: m.degree(), have: basis.max_norm() });
    }
    basis.key_index(m).ok_or_else(|| Error::InvalidInput(format!("{m} not in basis")))
}

fn check_forest(basis: &TruncatedBasis, f: &Forest) -> Result<()> {
    for m in f.items() {
        check_key(basis, m)?;
    }
    if f.degree() > basis.max_norm() {
        return Err(Error::Truncation { needed: f.degree(), have: basis.max_norm() });
    }
    Ok(())
}

fn same_grading(a: &Grading, b: &Grading, da: usize, db: usize) -> Result<()> {
    if a != b || da != db {
        return Err(Error::GradingMismatch(format!(
            "(d={da}, N={}, γ={}) vs (d={db}, N={}, γ={})",
            a.max_norm(),
            a.gamma(),
            b.max_norm(),
            b.gamma()
        )));
    }
    Ok(())
}

/// Truncated character: values on populated multi-indices of degree ≤ N,
/// extended multiplicatively to forests.
#[derive(Clone, Debug)]
pub struct GroupElement<T> {
    grading: Grading,
    basis: Arc<TruncatedBasis>,
    values: Vec<T>,
}

/// Truncated primitive element; zero on `∅` and on forests with two or more
/// components.
#[derive(Clone, Debug)]
pub struct LieElement<T> {
    grading: Grading,
    basis: Arc<TruncatedBasis>,
    values: Vec<T>,
}

macro_rules! shared_accessors {
    ($ty:ident) => {
        impl<T: Scalar> $ty<T> {
            pub fn zero_values(d: usize, grading: Grading) -> Self {
                let basis = TruncatedBasis::shared(d, grading.max_norm());
                let values = vec![T::zero(); basis.keys().len()];
                Self { grading, basis, values }
            }

            /// Values listed in the order of `basis().keys()`.
            pub fn from_dense(d: usize, grading: Grading, values: Vec<T>) -> Result<Self> {
                let basis = TruncatedBasis::shared(d, grading.max_norm());
                if values.len() != basis.keys().len() {
                    return invalid(format!("expected {} values, got {}", basis.keys().len(), values.len()));
                }
                Ok(Self { grading, basis, values })
            }

            /// Unlisted keys get value 0.
            pub fn from_pairs<I>(d: usize, grading: Grading, pairs: I) -> Result<Self>
            where
                I: IntoIterator<Item = (MultiIndex, T)>,
            {
                let mut out = Self::zero_values(d, grading);
                for (m, x) in pairs {
                    let j = check_key(&out.basis, &m)?;
                    out.values[j] = x;
                }
                Ok(out)
            }

            pub fn grading(&self) -> Grading {
                self.grading
            }

            pub fn d(&self) -> usize {
                self.basis.d()
            }

            pub fn basis(&self) -> &Arc<TruncatedBasis> {
                &self.basis
            }

            pub fn values(&self) -> &[T] {
                &self.values
            }

            pub fn keys(&self) -> &[MultiIndex] {
                self.basis.keys()
            }

            pub fn value(&self, m: &MultiIndex) -> Result<T> {
                Ok(self.values[check_key(&self.basis, m)?])
            }

            pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, T)> + '_ {
                self.basis.keys().iter().zip(self.values.iter().copied())
            }

            pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> $ty<U> {
                $ty { grading: self.grading, basis: self.basis.clone(), values: self.values.iter().map(|&x| f(x)).collect() }
            }

            /// Largest `|self(β) - other(β)|` over the basis.
            pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
                same_grading(&self.grading, &other.grading, self.d(), other.d())?;
                Ok(self.values.iter().zip(&other.values).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
            }

            /// `max |a-b| / max(1, |b|)` over the basis.
            pub fn max_rel_diff(&self, other: &Self) -> Result<T> {
                same_grading(&self.grading, &other.grading, self.d(), other.d())?;
                Ok(self
                    .values
                    .iter()
                    .zip(&other.values)
                    .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs() / b.abs().max(T::one()))))
            }
        }
    };
}

shared_accessors!(GroupElement);
shared_accessors!(LieElement);

impl<T: Scalar> GroupElement<T> {
    /// The unit character (0 on every populated multi-index).
    pub fn identity(d: usize, grading: Grading) -> Self {
        Self::zero_values(d, grading)
    }

    /// Multiplicative value on a forest; 1 on `∅`.
    pub fn char_eval(&self, f: &Forest) -> Result<T> {
        check_forest(&self.basis, f)?;
        let mut p = T::one();
        for m in f.items() {
            p *= self.values[self.basis.key_index(m).expect("checked")];
        }
        Ok(p)
    }

    /// Values on every basis forest, in basis forest order.
    pub fn forest_values(&self) -> Vec<T> {
        (0..self.basis.forest_count())
            .map(|j| self.basis.forest_keys(j).iter().fold(T::one(), |p, &k| p * self.values[k]))
            .collect()
    }

    /// Truncated convolution `self ⋆ other` (Chen composition).
    pub fn chen(&self, other: &Self) -> Result<Self> {
        same_grading(&self.grading, &other.grading, self.d(), other.d())?;
        let mut values: Vec<T> = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        let entries = self.basis.chen_entries();
        if !entries.is_empty() {
            let fa = self.forest_values();
            let fb = other.forest_values();
            for e in entries {
                values[e.w as usize] += fa[e.u as usize] * fb[e.v as usize] * T::of(e.c);
            }
        }
        Ok(Self { grading: self.grading, basis: self.basis.clone(), values })
    }

    /// The log series as a dense functional on all basis forests. A
    /// character gives zero on forests with two or more components; callers
    /// that need the check read it from here.
    pub fn log_dense(&self) -> Vec<T> {
        let mut y = self.forest_values();
        y[0] = T::zero();
        let mut out = y.clone();
        let mut pow = y.clone();
        for k in 2..=self.basis.max_norm() {
            pow = star_dense(&self.basis, &pow, &y);
            let c = T::of(if k % 2 == 0 { -1.0 } else { 1.0 } / k as f64);
            for (o, p) in out.iter_mut().zip(&pow) {
                *o += c * *p;
            }
        }
        out
    }

    pub fn log(&self) -> LieElement<T> {
        let dense = self.log_dense();
        let mut values = vec![T::zero(); self.values.len()];
        for (j, x) in dense.into_iter().enumerate() {
            if let Some(k) = self.basis.forest_as_key(j) {
                values[k] = x;
            }
        }
        LieElement { grading: self.grading, basis: self.basis.clone(), values }
    }

    /// Inverse character, via `exp(-log X)`.
    pub fn inverse(&self) -> Self {
        let l = self.log();
        l.map(|x| -x).exp()
    }
}

impl<T: Scalar> LieElement<T> {
    pub fn zero(d: usize, grading: Grading) -> Self {
        Self::zero_values(d, grading)
    }

    /// 0 on `∅` and on forests with two or more components.
    pub fn eval(&self, f: &Forest) -> Result<T> {
        check_forest(&self.basis, f)?;
        Ok(match f.as_single() {
            Some(m) => self.values[self.basis.key_index(m).expect("checked")],
            None => T::zero(),
        })
    }

    pub fn forest_values(&self) -> Vec<T> {
        (0..self.basis.forest_count())
            .map(|j| self.basis.forest_as_key(j).map_or(T::zero(), |k| self.values[k]))
            .collect()
    }

    pub fn exp(&self) -> GroupElement<T> {
        let l = self.forest_values();
        let mut acc: Vec<T> = l.clone();
        let mut pow = l.clone();
        let mut fact = 1.0;
        for k in 2..=self.basis.max_norm() {
            pow = star_dense(&self.basis, &pow, &l);
            fact *= k as f64;
            let c = T::of(1.0 / fact);
            for (a, p) in acc.iter_mut().zip(&pow) {
                *a += c * *p;
            }
        }
        let mut values = vec![T::zero(); self.values.len()];
        for (j, x) in acc.into_iter().enumerate() {
            if let Some(k) = self.basis.forest_as_key(j) {
                values[k] = x;
            }
        }
        GroupElement { grading: self.grading, basis: self.basis.clone(), values }
    }

    pub fn scaled(&self, c: T) -> Self {
        self.map(|x| x * c)
    }
}
