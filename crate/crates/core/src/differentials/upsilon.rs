use num_traits::ToPrimitive;

use super::field::{SmoothTest, VectorField};
use super::poly::Poly;
use crate::algebra::{Coeff, Forest, ForestSum, MiSum, MultiIndex};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

fn to_t<T: Scalar>(c: &Coeff) -> T {
    T::of(c.to_f64().unwrap_or(f64::NAN))
}

/// `Υ_f[z^β](y) = Π (f_i^{(k)}(y))^{β(i,k)}`.
pub fn upsilon_mi<T: Scalar>(m: &MultiIndex, f: &dyn VectorField<T>, y: T) -> Result<T> {
    let mut p = T::one();
    for &((i, k), e) in m.entries() {
        p *= f.derivative(i as usize, k as usize, y)?.powi(e as i32);
    }
    Ok(p)
}

/// Product of `Υ_f` over the components of a forest; 1 on `∅`.
pub fn upsilon<T: Scalar>(forest: &Forest, f: &dyn VectorField<T>, y: T) -> Result<T> {
    let mut p = T::one();
    for m in forest.items() {
        p *= upsilon_mi(m, f, y)?;
    }
    Ok(p)
}

pub fn upsilon_mi_sum<T: Scalar>(u: &MiSum, f: &dyn VectorField<T>, y: T) -> Result<T> {
    let mut acc = T::zero();
    for (m, c) in u {
        acc += to_t::<T>(c) * upsilon_mi(m, f, y)?;
    }
    Ok(acc)
}

/// Elementary vector field applied to `ψ`: `Υ_f[F](ψ)(y) = Υ_f[F](y) ψ^{(card F)}(y)`.
pub fn upsilon_vf<T: Scalar>(forest: &Forest, f: &dyn VectorField<T>, psi: &dyn SmoothTest<T>, y: T) -> Result<T> {
    let dpsi = psi.derivative(forest.card(), y)?;
    if dpsi == T::zero() {
        return Ok(T::zero());
    }
    Ok(upsilon(forest, f, y)? * dpsi)
}

/// Linear extension of [`upsilon_vf`] to formal sums.
pub fn upsilon_vf_sum<T: Scalar>(u: &ForestSum, f: &dyn VectorField<T>, psi: &dyn SmoothTest<T>, y: T) -> Result<T> {
    let mut acc = T::zero();
    for (forest, c) in u {
        acc += to_t::<T>(c) * upsilon_vf(forest, f, psi, y)?;
    }
    Ok(acc)
}

/// Exact `Υ_f[z^β]` for polynomial fields.
pub fn upsilon_mi_poly(m: &MultiIndex, f: &[Poly]) -> Result<Poly> {
    let mut p = Poly::constant(Coeff::from_integer(1.into()));
    for &((i, k), e) in m.entries() {
        let Some(fi) = f.get(i as usize) else {
            return invalid(format!("field index {i} exceeds d = {}", f.len().saturating_sub(1)));
        };
        p = p.mul(&fi.nth_derivative(k as usize).pow(e));
    }
    Ok(p)
}

pub fn upsilon_poly(forest: &Forest, f: &[Poly]) -> Result<Poly> {
    let mut p = Poly::constant(Coeff::from_integer(1.into()));
    for m in forest.items() {
        p = p.mul(&upsilon_mi_poly(m, f)?);
    }
    Ok(p)
}

/// Exact `Υ_f[F](ψ)` as a polynomial.
pub fn upsilon_vf_poly(forest: &Forest, f: &[Poly], psi: &Poly) -> Result<Poly> {
    Ok(upsilon_poly(forest, f)?.mul(&psi.nth_derivative(forest.card())))
}

pub fn upsilon_vf_poly_sum(u: &ForestSum, f: &[Poly], psi: &Poly) -> Result<Poly> {
    let mut acc = Poly::zero();
    for (forest, c) in u {
        acc = acc.add(&upsilon_vf_poly(forest, f, psi)?.scale(c));
    }
    Ok(acc)
}

/// `Υ_f[u]∘Υ_f[v](ψ)`, exact: the differential operator of `u` applied to
/// the polynomial `Υ_f[v](ψ)`.
pub fn compose_vf_poly(u: &ForestSum, v: &ForestSum, f: &[Poly], psi: &Poly) -> Result<Poly> {
    let inner = upsilon_vf_poly_sum(v, f, psi)?;
    upsilon_vf_poly_sum(u, f, &inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::z;
    use crate::differentials::field::{Identity, PolynomialField};

    fn field() -> PolynomialField {
        PolynomialField::new(vec![Poly::from_i64(&[1]), Poly::from_i64(&[0, 0, 1])]).unwrap()
    }

    #[test]
    fn single_letters() {
        let f = field();
        let b = Forest::single(z(1, 0).mul(&z(1, 1)));
        assert_eq!(upsilon::<f64>(&b, &f, 2.0).unwrap(), 16.0);
        assert_eq!(upsilon::<f64>(&Forest::single(z(1, 1)), &f, 2.0).unwrap(), 4.0);
        assert_eq!(upsilon::<f64>(&Forest::empty(), &f, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn vector_field_application() {
        let f = PolynomialField::new(vec![Poly::zero(), Poly::x()]).unwrap();
        let psi = Poly::from_i64(&[0, 0, 1]);
        assert_eq!(upsilon_vf::<f64>(&Forest::single(z(1, 0)), &f, &psi, 3.0).unwrap(), 18.0);
        let two = Forest::from_items(vec![z(1, 0), z(1, 0)]);
        assert_eq!(upsilon_vf::<f64>(&two, &f, &Identity, 3.0).unwrap(), 0.0);
        assert_eq!(upsilon_vf::<f64>(&Forest::empty(), &f, &psi, 3.0).unwrap(), 9.0);
    }
}
