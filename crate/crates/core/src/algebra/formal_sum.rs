use std::collections::btree_map::{self, BTreeMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational coefficient.
pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Coeff {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Finite linear combination of basis elements with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSum<B: Ord> {
    terms: BTreeMap<B, Coeff>,
}

impl<B: Ord> Default for FormalSum<B> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> FormalSum<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Coeff::one())
    }

    pub fn term(b: B, c: Coeff) -> Self {
        let mut s = Self::zero();
        s.add_term(b, c);
        s
    }

    pub fn add_term(&mut self, b: B, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FormalSum<B>, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn add_assign(&mut self, other: &FormalSum<B>) {
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x.clone());
        }
    }

    pub fn sub(&self, other: &FormalSum<B>) -> FormalSum<B> {
        let mut out = self.clone();
        out.add_scaled(other, &-Coeff::one());
        out
    }

    pub fn scale(&self, c: &Coeff) -> FormalSum<B> {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, b: &B) -> Coeff {
        self.terms.get(b).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Coeff> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&B) -> bool) {
        self.terms.retain(|b, _| keep(b));
    }

    pub fn map_basis<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> C) -> FormalSum<C> {
        let mut out = FormalSum::zero();
        for (b, x) in &self.terms {
            out.add_term(f(b), x.clone());
        }
        out
    }

    /// Linear extension of `f` to the whole sum.
    pub fn flat_map<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> FormalSum<C>) -> FormalSum<C> {
        let mut out = FormalSum::zero();
        for (b, x) in &self.terms {
            out.add_scaled(&f(b), x);
        }
        out
    }
}

impl<B: Ord + Clone> FromIterator<(B, Coeff)> for FormalSum<B> {
    fn from_iter<I: IntoIterator<Item = (B, Coeff)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (b, c) in iter {
            s.add_term(b, c);
        }
        s
    }
}

impl<'a, B: Ord> IntoIterator for &'a FormalSum<B> {
    type Item = (&'a B, &'a Coeff);
    type IntoIter = btree_map::Iter<'a, B, Coeff>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_terms_are_dropped() {
        let mut s: FormalSum<u32> = FormalSum::basis(3);
        s.add_term(3, coeff(-1));
        assert!(s.is_zero());
        s.add_term(1, coeff(0));
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn exact_arithmetic() {
        let mut s: FormalSum<u32> = FormalSum::term(1, ratio(1, 3));
        s.add_term(1, ratio(1, 6));
        assert_eq!(s.coeff(&1), ratio(1, 2));
        assert_eq!(s.scale(&coeff(4)).coeff(&1), coeff(2));
    }
}
