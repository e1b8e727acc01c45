use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::field::{check_access, VectorField};
use super::poly::Poly;
use super::upsilon::{upsilon_mi, upsilon_mi_poly};
use crate::algebra::{derive_mi_pow, Coeff, FormalSum, MiSum, MultiIndex};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::translation::{complete_characters, Character};

/// Derivative orders precomputed for translated fields.
pub const TRANSLATED_MAX_ORDER: usize = 16;

/// `f_i^ℓ = Σ ℓ_i(z^β)/S(z^β) Υ_f[z^β]` as a sum over multi-indices.
pub fn translated_generator(l: &Character) -> MiSum {
    let mut out = FormalSum::zero();
    for (m, c) in l.terms() {
        let s = Coeff::from_integer(BigInt::from(m.symmetry_factor()));
        out.add_term(m.clone(), c / s);
    }
    out
}

/// Vector field `f^ℓ` whose `k`-th derivative is `Υ_f[D^k Σ ℓ_i/S z^β]`.
pub struct TranslatedField<T: Scalar> {
    base: Arc<dyn VectorField<T>>,
    generators: Vec<MiSum>,
    // per direction, per order: rounded terms of D^k of the generator
    cache: Vec<Vec<OnceLock<Vec<(MultiIndex, f64)>>>>,
    max_order: Option<usize>,
}

impl<T: Scalar> TranslatedField<T> {
    /// Directions without a character are left untouched.
    pub fn new(base: Arc<dyn VectorField<T>>, chars: &[Character]) -> Result<Self> {
        let d = base.d();
        let chars = complete_characters(chars, d)?;
        let generators: Vec<MiSum> = chars.iter().map(translated_generator).collect();
        let arity = chars.iter().flat_map(|c| c.terms().keys()).map(|m| m.max_arity() as usize).max().unwrap_or(0);
        let max_order = match base.max_order() {
            None => Some(TRANSLATED_MAX_ORDER),
            Some(k) if k >= arity => Some((k - arity).min(TRANSLATED_MAX_ORDER)),
            Some(k) => return invalid(format!("character needs derivative order {arity} but the field provides {k}")),
        };
        let cache = (0..=d).map(|_| (0..=TRANSLATED_MAX_ORDER).map(|_| OnceLock::new()).collect()).collect();
        Ok(Self { base, generators, cache, max_order })
    }

    pub fn generator(&self, i: usize) -> &MiSum {
        &self.generators[i]
    }

    fn terms(&self, i: usize, k: usize) -> &[(MultiIndex, f64)] {
        self.cache[i][k].get_or_init(|| {
            let mut acc = FormalSum::zero();
            for (m, c) in &self.generators[i] {
                acc.add_scaled(&derive_mi_pow(m, k), c);
            }
            acc.iter().map(|(m, c)| (m.clone(), c.to_f64().unwrap_or(f64::NAN))).collect()
        })
    }
}

impl<T: Scalar> VectorField<T> for TranslatedField<T> {
    fn d(&self) -> usize {
        self.base.d()
    }

    fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    fn derivative(&self, i: usize, k: usize, y: T) -> Result<T> {
        check_access(self.base.d(), self.max_order, i, k)?;
        let mut acc = T::zero();
        for (m, c) in self.terms(i, k) {
            acc += T::of(*c) * upsilon_mi(m, self.base.as_ref(), y)?;
        }
        Ok(acc)
    }

    fn bounded(&self) -> bool {
        self.base.bounded()
    }
}

/// Exact `f^ℓ` for polynomial `f`.
pub fn translated_field_poly(f: &[Poly], chars: &[Character]) -> Result<Vec<Poly>> {
    let chars = complete_characters(chars, f.len().saturating_sub(1))?;
    chars
        .iter()
        .map(|c| {
            let mut p = Poly::zero();
            for (m, a) in &translated_generator(c) {
                p = p.add(&upsilon_mi_poly(m, f)?.scale(a));
            }
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differentials::field::PolynomialField;
    use crate::translation::ito_strat_character;

    #[test]
    fn ito_strat_drift() {
        // f0 = 1, f1 = y^2: f0^ℓ = 1 + y^3, f1^ℓ = y^2
        let polys = vec![Poly::from_i64(&[1]), Poly::from_i64(&[0, 0, 1])];
        let ex = translated_field_poly(&polys, &[ito_strat_character(1)]).unwrap();
        assert_eq!(ex[0], Poly::from_i64(&[1, 0, 0, 1]));
        assert_eq!(ex[1], polys[1]);
        let base: Arc<dyn VectorField<f64>> = Arc::new(PolynomialField::new(polys).unwrap());
        let tf = TranslatedField::new(base, &[ito_strat_character(1)]).unwrap();
        for y in [-1.5, 0.3, 2.0] {
            for k in 0..5 {
                let want = ex[0].nth_derivative(k).eval(y);
                assert!((tf.derivative(0, k, y).unwrap() - want).abs() < 1e-12);
            }
        }
    }
}
