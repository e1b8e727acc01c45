use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::One;

use crate::error::{invalid, Result};

/// A variable `z_(i,k)`: letter `i` (0 is time) and arity `k`.
pub type Var = (u32, u32);

/// Sparse monomial `z^β` in the variables `z_(i,k)`.
///
/// Entries are kept sorted by variable with strictly positive frequencies, so
/// the derived ordering is lexicographic on the sorted `((i,k), freq)` list and
/// equality is equality of the frequency maps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct MultiIndex {
    entries: Vec<(Var, u32)>,
}

impl MultiIndex {
    /// The all-zero multi-index (multiplicative unit, not populated).
    pub fn one() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn var(i: u32, k: u32) -> Self {
        Self { entries: vec![((i, k), 1)] }
    }

    pub fn from_entries<I: IntoIterator<Item = (Var, u32)>>(it: I) -> Self {
        let mut entries: Vec<(Var, u32)> = it.into_iter().filter(|e| e.1 > 0).collect();
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(entries.len());
        for (v, m) in entries {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += m,
                _ => out.push((v, m)),
            }
        }
        Self { entries: out }
    }

    pub fn entries(&self) -> &[(Var, u32)] {
        &self.entries
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn freq(&self, v: Var) -> u32 {
        match self.entries.binary_search_by_key(&v, |e| e.0) {
            Ok(p) => self.entries[p].1,
            Err(_) => 0,
        }
    }

    /// `|β|`, the number of variables counted with multiplicity.
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|e| e.1 as usize).sum()
    }

    pub fn arity_sum(&self) -> usize {
        self.entries.iter().map(|e| (e.0 .1 * e.1) as usize).sum()
    }

    /// `|β| - Σ k β(i,k)`; equal to 1 exactly for populated multi-indices.
    pub fn population(&self) -> i64 {
        self.degree() as i64 - self.arity_sum() as i64
    }

    pub fn is_populated(&self) -> bool {
        self.population() == 1
    }

    /// `|β|_0`: number of letter-0 variables.
    pub fn letter0_count(&self) -> usize {
        self.entries.iter().filter(|e| e.0 .0 == 0).map(|e| e.1 as usize).sum()
    }

    pub fn max_letter(&self) -> Option<u32> {
        self.entries.iter().map(|e| e.0 .0).max()
    }

    pub fn max_arity(&self) -> u32 {
        self.entries.iter().map(|e| e.0 .1).max().unwrap_or(0)
    }

    /// Multi-index product: entrywise sum of frequencies.
    pub fn mul(&self, other: &MultiIndex) -> MultiIndex {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() && q < b.len() {
            match a[p].0.cmp(&b[q].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[p]);
                    p += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[q]);
                    q += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[p].0, a[p].1 + b[q].1));
                    p += 1;
                    q += 1;
                }
            }
        }
        out.extend_from_slice(&a[p..]);
        out.extend_from_slice(&b[q..]);
        MultiIndex { entries: out }
    }

    /// Multi-index product with an alphabet check against letters `0..=d`.
    pub fn mul_checked(&self, other: &MultiIndex, d: u32) -> Result<MultiIndex> {
        self.check_alphabet(d)?;
        other.check_alphabet(d)?;
        Ok(self.mul(other))
    }

    pub fn check_alphabet(&self, d: u32) -> Result<()> {
        match self.max_letter() {
            Some(l) if l > d => invalid(format!("letter {l} outside alphabet 0..={d}")),
            _ => Ok(()),
        }
    }

    /// Multiply by `z_v^m`.
    pub fn times_var(&self, v: Var, m: u32) -> MultiIndex {
        self.mul(&MultiIndex { entries: vec![(v, m)] })
    }

    /// Remove one copy of `v`; `None` when absent.
    pub fn without_var(&self, v: Var) -> Option<MultiIndex> {
        let p = self.entries.binary_search_by_key(&v, |e| e.0).ok()?;
        let mut entries = self.entries.clone();
        if entries[p].1 == 1 {
            entries.remove(p);
        } else {
            entries[p].1 -= 1;
        }
        Some(MultiIndex { entries })
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_div(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.entries.len());
        let mut q = 0;
        for &(v, m) in &self.entries {
            let mut m = m;
            if q < other.entries.len() && other.entries[q].0 == v {
                if other.entries[q].1 > m {
                    return None;
                }
                m -= other.entries[q].1;
                q += 1;
            } else if q < other.entries.len() && other.entries[q].0 < v {
                return None;
            }
            if m > 0 {
                out.push((v, m));
            }
        }
        if q < other.entries.len() {
            return None;
        }
        Some(MultiIndex { entries: out })
    }

    /// `S(z^β) = Π (k!)^{β(i,k)}`.
    pub fn symmetry_factor(&self) -> BigUint {
        let mut s = BigUint::one();
        for &((_, k), m) in &self.entries {
            let f = factorial(k);
            for _ in 0..m {
                s *= &f;
            }
        }
        s
    }

    /// `|β|_γ = Σ_k β(0,k)/γ + Σ_{i≥1,k} β(i,k)`.
    pub fn gamma_degree(&self, gamma: Rational64) -> Rational64 {
        let zero = self.letter0_count() as i64;
        let rest = self.degree() as i64 - zero;
        Rational64::from_integer(zero) / gamma + Rational64::from_integer(rest)
    }

    /// Iterate over every sub-multi-index `σ ≤ β` (including 1 and β itself).
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::one()];
        for &(v, m) in &self.entries {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for base in &out {
                for j in 0..=m {
                    if j == 0 {
                        next.push(base.clone());
                    } else {
                        let mut e = base.entries.clone();
                        e.push((v, j));
                        next.push(MultiIndex { entries: e });
                    }
                }
            }
            out = next;
        }
        out
    }
}

pub(crate) fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, j| acc * BigUint::from(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u32, k: u32) -> MultiIndex {
        MultiIndex::var(i, k)
    }

    #[test]
    fn product_adds_frequencies() {
        let sq = z(1, 0).mul(&z(1, 0));
        assert_eq!(sq.freq((1, 0)), 2);
        assert_eq!(sq.degree(), 2);
        assert_eq!(z(1, 0).mul(&MultiIndex::one()), z(1, 0));
        let m = z(1, 0).mul(&z(1, 1));
        assert_eq!(m.entries(), &[((1, 0), 1), ((1, 1), 1)]);
    }

    #[test]
    fn alphabet_checked() {
        assert!(z(3, 0).mul_checked(&z(1, 0), 2).is_err());
        assert!(z(2, 0).mul_checked(&z(1, 0), 2).is_ok());
    }

    #[test]
    fn population() {
        assert!(z(1, 0).is_populated());
        assert!(z(1, 0).mul(&z(1, 1)).is_populated());
        assert!(!z(1, 1).is_populated());
    }

    #[test]
    fn symmetry() {
        let b = MultiIndex::from_entries([((1, 0), 2), ((1, 2), 1)]);
        assert_eq!(b.symmetry_factor(), BigUint::from(2u32));
        let b = z(1, 0).mul(&z(2, 1));
        assert_eq!(b.symmetry_factor(), BigUint::from(1u32));
    }

    #[test]
    fn gamma_degree() {
        let g = Rational64::new(1, 2);
        assert_eq!(z(1, 0).mul(&z(1, 1)).gamma_degree(g), Rational64::from_integer(2));
        assert_eq!(z(0, 0).gamma_degree(Rational64::new(1, 3)), Rational64::from_integer(3));
        assert_eq!(MultiIndex::one().gamma_degree(g), Rational64::from_integer(0));
    }

    #[test]
    fn division() {
        let b = MultiIndex::from_entries([((1, 0), 2), ((1, 2), 1)]);
        assert_eq!(b.checked_div(&z(1, 0)), Some(MultiIndex::from_entries([((1, 0), 1), ((1, 2), 1)])));
        assert_eq!(b.checked_div(&z(1, 1)), None);
        assert_eq!(b.divisors().len(), 6);
    }
}
