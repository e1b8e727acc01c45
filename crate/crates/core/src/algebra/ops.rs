use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::formal_sum::{Coeff, FormalSum};
use super::{Forest, MultiIndex};

pub type MiSum = FormalSum<MultiIndex>;
pub type ForestSum = FormalSum<Forest>;

fn big(n: u64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// `D z^α = Σ α(i,k) z_(i,k+1) z^α / z_(i,k)`.
pub fn derive_mi(a: &MultiIndex) -> MiSum {
    let mut out = MiSum::zero();
    for &((i, k), m) in a.entries() {
        let lowered = a.without_var((i, k)).expect("entry present");
        out.add_term(lowered.times_var((i, k + 1), 1), big(m as u64));
    }
    out
}

pub fn derive_mi_sum(u: &MiSum) -> MiSum {
    u.flat_map(derive_mi)
}

/// `D^k z^α`.
pub fn derive_mi_pow(a: &MultiIndex, k: usize) -> MiSum {
    let mut cur = MiSum::basis(a.clone());
    for _ in 0..k {
        cur = derive_mi_sum(&cur);
    }
    cur
}

/// Multi-index product extended bilinearly.
pub fn mi_sum_product(a: &MiSum, b: &MiSum) -> MiSum {
    let mut out = MiSum::zero();
    for (x, cx) in a {
        for (y, cy) in b {
            out.add_term(x.mul(y), cx * cy);
        }
    }
    out
}

pub fn mi_sum_shift(a: &MiSum, by: &MultiIndex) -> MiSum {
    a.map_basis(|m| m.mul(by))
}

/// D on a forest by the Leibniz rule; `D ∅ = 0`.
pub fn derive_forest(f: &Forest) -> ForestSum {
    let mut out = ForestSum::zero();
    let items = f.items();
    for j in 0..items.len() {
        if j > 0 && items[j] == items[j - 1] {
            continue;
        }
        let mult = items.iter().filter(|m| **m == items[j]).count() as u64;
        let mut rest: Vec<MultiIndex> = items.to_vec();
        rest.remove(j);
        for (dm, c) in &derive_mi(&items[j]) {
            let mut comps = rest.clone();
            comps.push(dm.clone());
            out.add_term(Forest::from_items(comps), c * big(mult));
        }
    }
    out
}

pub fn derivation_d(u: &ForestSum) -> ForestSum {
    u.flat_map(derive_forest)
}

/// Pre-Lie grafting `z^β ▷ z^α = z^β D z^α`.
pub fn prelie_graft(b: &MultiIndex, a: &MultiIndex) -> MiSum {
    mi_sum_shift(&derive_mi(a), b)
}

pub fn prelie_graft_sum(b: &MiSum, a: &MiSum) -> MiSum {
    let mut out = MiSum::zero();
    for (x, cx) in b {
        for (y, cy) in a {
            out.add_scaled(&prelie_graft(x, y), &(cx * cy));
        }
    }
    out
}

/// Expand a product of multi-index sums, one per forest slot, into forests.
fn expand_forest_product(slots: &[MiSum]) -> ForestSum {
    let mut acc: Vec<(Vec<MultiIndex>, Coeff)> = vec![(Vec::new(), Coeff::one())];
    for s in slots {
        let mut next = Vec::with_capacity(acc.len() * s.len());
        for (comps, c) in &acc {
            for (m, cm) in s {
                let mut v = comps.clone();
                v.push(m.clone());
                next.push((v, c * cm));
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc.into_iter().map(|(v, c)| (Forest::from_items(v), c)).collect()
}

/// Simultaneous grafting `F ⋆₂ G`.
///
/// Each component of `F` is grafted through one application of `D` onto some
/// component of `G`, and is multiplied into that same component.
pub fn graft_simultaneous(f: &Forest, g: &Forest) -> ForestSum {
    if f.is_empty() {
        return ForestSum::basis(g.clone());
    }
    if g.is_empty() {
        return ForestSum::basis(f.clone());
    }
    let (n, m) = (f.card(), g.card());
    let mut dpow: Vec<Vec<MiSum>> = Vec::with_capacity(m);
    for comp in g.items() {
        let mut row = vec![MiSum::basis(comp.clone())];
        for k in 1..=n {
            let next = derive_mi_sum(&row[k - 1]);
            row.push(next);
        }
        dpow.push(row);
    }
    let mut out = ForestSum::zero();
    let mut assign = vec![0usize; n];
    loop {
        let mut counts = vec![0usize; m];
        let mut factors = vec![MultiIndex::one(); m];
        for (i, &j) in assign.iter().enumerate() {
            counts[j] += 1;
            factors[j] = factors[j].mul(&f.items()[i]);
        }
        let slots: Vec<MiSum> = (0..m).map(|j| mi_sum_shift(&dpow[j][counts[j]], &factors[j])).collect();
        out.add_assign(&expand_forest_product(&slots));
        let mut p = 0;
        loop {
            if p == n {
                return out;
            }
            assign[p] += 1;
            if assign[p] < m {
                break;
            }
            assign[p] = 0;
            p += 1;
        }
    }
}

pub fn graft_simultaneous_sum(u: &ForestSum, v: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (x, cx) in u {
        for (y, cy) in v {
            out.add_scaled(&graft_simultaneous(x, y), &(cx * cy));
        }
    }
    out
}

/// Deshuffle coproduct: every sub-multiset goes left, its complement right.
pub fn deshuffle(f: &Forest) -> FormalSum<(Forest, Forest)> {
    let items = f.items();
    let n = items.len();
    let mut out = FormalSum::zero();
    for mask in 0u64..(1u64 << n) {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for (j, m) in items.iter().enumerate() {
            if mask >> j & 1 == 1 {
                l.push(m.clone());
            } else {
                r.push(m.clone());
            }
        }
        out.add_term((Forest::from_items(l), Forest::from_items(r)), Coeff::one());
    }
    out
}

pub fn deshuffle_sum(u: &ForestSum) -> FormalSum<(Forest, Forest)> {
    u.flat_map(deshuffle)
}

/// Grossman–Larson product of two forests, `μ(id ⊗ (· ⋆₂ v)) Δ_⧢ u`,
/// with optional degree cutoff.
pub fn gl_forests(u: &Forest, v: &Forest, trunc: Option<usize>) -> ForestSum {
    if let Some(n) = trunc {
        if u.degree() + v.degree() > n {
            return ForestSum::zero();
        }
    }
    if u.is_empty() {
        return ForestSum::basis(v.clone());
    }
    if v.is_empty() {
        return ForestSum::basis(u.clone());
    }
    let mut out = ForestSum::zero();
    for ((left, right), c) in &deshuffle(u) {
        for (g, cg) in &graft_simultaneous(right, v) {
            out.add_term(left.product(g), c * cg);
        }
    }
    out
}

pub fn gl_product(u: &ForestSum, v: &ForestSum, trunc: Option<usize>) -> ForestSum {
    let mut out = ForestSum::zero();
    for (x, cx) in u {
        for (y, cy) in v {
            out.add_scaled(&gl_forests(x, y, trunc), &(cx * cy));
        }
    }
    out
}

/// `⟨u, v⟩` with `⟨z^α, z^β⟩ = δ S(z^α)` extended to forests.
pub fn pairing(u: &ForestSum, v: &ForestSum) -> Coeff {
    let mut acc = Coeff::zero();
    for (f, c) in u {
        let d = v.coeff(f);
        if !d.is_zero() {
            acc += c * d * BigRational::from_integer(BigInt::from(f.symmetry_factor()));
        }
    }
    acc
}

pub fn pairing_mi(u: &MiSum, v: &MiSum) -> Coeff {
    let mut acc = Coeff::zero();
    for (m, c) in u {
        let d = v.coeff(m);
        if !d.is_zero() {
            acc += c * d * BigRational::from_integer(BigInt::from(m.symmetry_factor()));
        }
    }
    acc
}

/// Forest product extended bilinearly.
pub fn forest_sum_product(a: &ForestSum, b: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (x, cx) in a {
        for (y, cy) in b {
            out.add_term(x.product(y), cx * cy);
        }
    }
    out
}

pub fn truncate(u: &ForestSum, n: usize) -> ForestSum {
    let mut out = u.clone();
    out.retain(|f| f.degree() <= n);
    out
}
