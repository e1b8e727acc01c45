use num_rational::Rational64;
use num_traits::ToPrimitive;

use super::character::Character;
use super::translate::Translation;
use crate::algebra::{z, Grading};
use crate::error::{invalid, Error, Result};
use crate::rough_path::{GroupElement, RoughPathGrid, TruncatedBasis};
use crate::scalar::Scalar;

/// Largest `|α|_γ / |z_(i,0)|_γ` over every direction `i` and key `α` of
/// `ℓ_i` (at least 1; identities give exactly 1).
pub fn regularity_factor(chars: &[Character], d: usize, gamma: Rational64) -> Result<Rational64> {
    let t = Translation::new(chars, d)?;
    let mut r = Rational64::from_integer(1);
    for c in t.characters() {
        let base = z(c.direction() as u32, 0).gamma_degree(gamma);
        for m in c.terms().keys() {
            r = r.max(m.gamma_degree(gamma) / base);
        }
    }
    Ok(r)
}

/// Default grading of a translated path: `γ' = γ / N_ℓ` and
/// `N' = max(⌊1/γ'⌋, N)`.
pub fn translated_grading(chars: &[Character], d: usize, g: Grading) -> Result<Grading> {
    let gamma = g.gamma() / regularity_factor(chars, d, g.gamma())?;
    let out = Grading::for_gamma(gamma)?;
    out.with_max_norm(out.max_norm().max(g.max_norm()))
}

/// Dense linear map sending the values of `X` on the input basis to those of
/// `T_ℓ X` on the output basis: `(T_ℓ X)(z^γ) = Σ_β [M_ℓ z^γ]_β X(z^β)`.
pub struct PathTranslation {
    d: usize,
    input: Grading,
    output: Grading,
    rows: Vec<Vec<(usize, f64)>>,
}

impl PathTranslation {
    pub fn new(chars: &[Character], d: usize, input: Grading, output: Option<Grading>) -> Result<Self> {
        let output = match output {
            Some(g) => g,
            None => translated_grading(chars, d, input)?,
        };
        let t = Translation::new(chars, d)?;
        let src = TruncatedBasis::shared(d, input.max_norm());
        let dst = TruncatedBasis::shared(d, output.max_norm());
        let mut rows = Vec::with_capacity(dst.keys().len());
        for g in dst.keys() {
            let mut row = Vec::new();
            for (b, c) in &t.transpose_mi(g) {
                let Some(j) = src.key_index(b) else {
                    return Err(Error::Truncation { needed: b.degree(), have: input.max_norm() });
                };
                row.push((j, c.to_f64().unwrap_or(f64::NAN)));
            }
            rows.push(row);
        }
        Ok(Self { d, input, output, rows })
    }

    pub fn output_grading(&self) -> Grading {
        self.output
    }

    pub fn apply<T: Scalar>(&self, x: &GroupElement<T>) -> Result<GroupElement<T>> {
        if x.grading() != self.input || x.d() != self.d {
            return Err(Error::GradingMismatch(format!(
                "translation built for d={}, N={}, got d={}, N={}",
                self.d,
                self.input.max_norm(),
                x.d(),
                x.grading().max_norm()
            )));
        }
        let v = x.values();
        let values = self
            .rows
            .iter()
            .map(|row| row.iter().fold(T::zero(), |acc, &(j, c)| acc + T::of(c) * v[j]))
            .collect();
        GroupElement::from_dense(self.d, self.output, values)
    }
}

/// `T_ℓ X` increment by increment. Without an explicit output grading the
/// regularity drops to `γ / N_ℓ`.
pub fn translate_roughpath<T: Scalar>(chars: &[Character], path: &RoughPathGrid<T>, output: Option<Grading>) -> Result<RoughPathGrid<T>> {
    if let Some(c) = chars.iter().find(|c| c.max_letter() > path.d()) {
        return invalid(format!("character for direction {} uses letters beyond d = {}", c.direction(), path.d()));
    }
    let map = PathTranslation::new(chars, path.d(), path.grading(), output)?;
    let incs = path.increments().iter().map(|x| map.apply(x)).collect::<Result<Vec<_>>>()?;
    RoughPathGrid::new(map.output_grading(), path.times().to_vec(), incs)
}
