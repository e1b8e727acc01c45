use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, Zero};

use super::multiindex::{factorial, MultiIndex};

/// Unordered finite multiset of multi-indices; the empty forest is `∅`.
///
/// Components are stored sorted so that multiset equality is plain equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Forest {
    items: Vec<MultiIndex>,
}

impl Forest {
    pub fn empty() -> Self {
        Self { items: Vec::new() }
    }

    pub fn single(m: MultiIndex) -> Self {
        Self { items: vec![m] }
    }

    pub fn from_items(mut items: Vec<MultiIndex>) -> Self {
        items.sort();
        Self { items }
    }

    pub fn items(&self) -> &[MultiIndex] {
        &self.items
    }

    pub fn into_items(self) -> Vec<MultiIndex> {
        self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn card(&self) -> usize {
        self.items.len()
    }

    /// The single component when `card == 1`.
    pub fn as_single(&self) -> Option<&MultiIndex> {
        match self.items.as_slice() {
            [m] => Some(m),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.items.iter().map(|m| m.degree()).sum()
    }

    pub fn gamma_degree(&self, gamma: Rational64) -> Rational64 {
        self.items.iter().fold(Rational64::zero(), |acc, m| acc + m.gamma_degree(gamma))
    }

    pub fn all_populated(&self) -> bool {
        self.items.iter().all(|m| m.is_populated())
    }

    /// Forest product `•` (multiset union).
    pub fn product(&self, other: &Forest) -> Forest {
        let mut items = Vec::with_capacity(self.items.len() + other.items.len());
        let (a, b) = (&self.items, &other.items);
        let (mut p, mut q) = (0, 0);
        while p < a.len() && q < b.len() {
            if a[p] <= b[q] {
                items.push(a[p].clone());
                p += 1;
            } else {
                items.push(b[q].clone());
                q += 1;
            }
        }
        items.extend_from_slice(&a[p..]);
        items.extend_from_slice(&b[q..]);
        Forest { items }
    }

    /// Distinct components with their multiplicities.
    pub fn grouped(&self) -> Vec<(&MultiIndex, usize)> {
        let mut out: Vec<(&MultiIndex, usize)> = Vec::new();
        for m in &self.items {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }

    /// `Π r_j! S(z^{β_j})^{r_j}` over distinct components; `S(∅) = 1`.
    pub fn symmetry_factor(&self) -> BigUint {
        let mut s = BigUint::one();
        for (m, r) in self.grouped() {
            s *= factorial(r as u32);
            let sm = m.symmetry_factor();
            for _ in 0..r {
                s *= &sm;
            }
        }
        s
    }
}

impl From<MultiIndex> for Forest {
    fn from(m: MultiIndex) -> Self {
        Forest::single(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_equality() {
        let a = MultiIndex::var(1, 0);
        let b = MultiIndex::var(0, 0);
        assert_eq!(
            Forest::from_items(vec![a.clone(), b.clone()]),
            Forest::from_items(vec![b.clone(), a.clone()])
        );
        assert_eq!(Forest::empty().card(), 0);
        assert_eq!(Forest::single(a.clone()).product(&Forest::single(b)).card(), 2);
    }

    #[test]
    fn repetition_factorial() {
        let a = MultiIndex::var(1, 0);
        let f = Forest::from_items(vec![a.clone(), a]);
        assert_eq!(f.symmetry_factor(), BigUint::from(2u32));
        assert_eq!(Forest::empty().symmetry_factor(), BigUint::from(1u32));
    }
}
