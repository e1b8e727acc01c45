use crate::algebra::{derive_mi_pow, forest_sum_product, mi_sum_product, Coeff, Forest, ForestSum, FormalSum, MiSum, MultiIndex};

fn letter0_split(a: &MultiIndex) -> (Vec<u32>, MultiIndex) {
    let mut labels = Vec::new();
    let mut rest = Vec::new();
    for &((i, k), m) in a.entries() {
        if i == 0 {
            labels.extend(std::iter::repeat(k).take(m as usize));
        } else {
            rest.push(((i, k), m));
        }
    }
    (labels, MultiIndex::from_entries(rest))
}

/// `z^α ▶ z^β = Σ_k (D^k z^α) ∂_{z_(0,k)} z^β`, the partial derivative
/// carrying the multiplicity of `z_(0,k)`.
pub fn insert_prelie(a: &MultiIndex, b: &MultiIndex) -> MiSum {
    let mut out = MiSum::zero();
    for &((i, k), m) in b.entries() {
        if i != 0 {
            continue;
        }
        let rest = b.without_var((0, k)).expect("present");
        let c = Coeff::from_integer(m.into());
        for (x, cx) in &derive_mi_pow(a, k as usize) {
            out.add_term(x.mul(&rest), cx * &c);
        }
    }
    out
}

pub fn insert_prelie_sum(a: &MiSum, b: &MiSum) -> MiSum {
    let mut out = MiSum::zero();
    for (x, cx) in a {
        for (y, cy) in b {
            out.add_scaled(&insert_prelie(x, y), &(cx * cy));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `F ⋆₁ z^α`: every component of `F` replaces one distinct letter-0
/// occurrence `z_(0,k)` of `z^α` by `D^k` of itself, summed over all
/// bijections. Zero unless `card F = |α|_0`; `∅ ⋆₁ z^α = z^α`.
pub fn insert_simultaneous(f: &Forest, a: &MultiIndex) -> MiSum {
    if f.is_empty() {
        return MiSum::basis(a.clone());
    }
    let (labels, rest) = letter0_split(a);
    let n = f.card();
    if labels.len() != n {
        return MiSum::zero();
    }
    let comps = f.items();
    let mut out = MiSum::zero();
    for p in permutations(n) {
        let mut acc = MiSum::basis(rest.clone());
        for (j, &slot) in p.iter().enumerate() {
            acc = mi_sum_product(&acc, &derive_mi_pow(&comps[j], labels[slot] as usize));
            if acc.is_zero() {
                break;
            }
        }
        out.add_assign(&acc);
    }
    out
}

pub fn insert_simultaneous_sum(u: &ForestSum, v: &MiSum) -> MiSum {
    let mut out = MiSum::zero();
    for (f, cf) in u {
        for (a, ca) in v {
            out.add_scaled(&insert_simultaneous(f, a), &(cf * ca));
        }
    }
    out
}

/// `F ⋆₁ (a_1 • … • a_m)`: the components of `F` are distributed over the
/// `a_j` (Leibniz), each part inserted into its target.
pub fn insert_simultaneous_forest(f: &Forest, g: &Forest) -> ForestSum {
    if g.is_empty() {
        return if f.is_empty() { ForestSum::basis(Forest::empty()) } else { ForestSum::zero() };
    }
    let comps = f.items();
    let targets = g.items();
    let m = targets.len();
    let mut out = ForestSum::zero();
    let mut assign = vec![0usize; comps.len()];
    loop {
        let mut acc = ForestSum::basis(Forest::empty());
        for (j, t) in targets.iter().enumerate() {
            let part = Forest::from_items(comps.iter().zip(&assign).filter(|(_, &s)| s == j).map(|(c, _)| c.clone()).collect());
            let ins = insert_simultaneous(&part, t);
            acc = forest_sum_product(&acc, &ins.map_basis(|x| Forest::single(x.clone())));
            if acc.is_zero() {
                break;
            }
        }
        out.add_assign(&acc);
        // next assignment in base m
        let mut p = 0;
        loop {
            if p == assign.len() {
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

pub fn insert_simultaneous_forest_sum(u: &ForestSum, v: &ForestSum) -> ForestSum {
    let mut out = FormalSum::zero();
    for (f, cf) in u {
        for (g, cg) in v {
            out.add_scaled(&insert_simultaneous_forest(f, g), &(cf * cg));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{coeff, z};
    use num_traits::One;

    #[test]
    fn prelie_examples() {
        assert_eq!(insert_prelie(&z(1, 0), &z(0, 0)), MiSum::basis(z(1, 0)));
        let lhs = insert_prelie(&z(1, 0).mul(&z(1, 1)), &z(0, 1).mul(&z(1, 1)));
        let mut want = MiSum::zero();
        want.add_term(z(1, 1).mul(&z(1, 1)).mul(&z(1, 1)), Coeff::one());
        want.add_term(z(1, 0).mul(&z(1, 1)).mul(&z(1, 2)), Coeff::one());
        assert_eq!(lhs, want);
        assert!(insert_prelie(&z(1, 0), &z(1, 0)).is_zero());
    }

    #[test]
    fn simultaneous_examples() {
        let a = z(9, 0);
        assert_eq!(insert_simultaneous(&Forest::empty(), &a), MiSum::basis(a));
        let f = Forest::from_items(vec![z(1, 0), z(1, 0)]);
        let got = insert_simultaneous(&f, &z(0, 0).mul(&z(0, 1)));
        assert_eq!(got, MiSum::term(z(1, 0).mul(&z(1, 1)), coeff(2)));
        assert!(insert_simultaneous(&Forest::single(z(1, 0)), &z(1, 0).mul(&z(1, 1))).is_zero());
    }

    #[test]
    fn forest_right_argument() {
        // z(1,0) ⋆₁ (z(0,0) • z(2,0)) = z(1,0) • z(2,0)
        let g = Forest::from_items(vec![z(0, 0), z(2, 0)]);
        let got = insert_simultaneous_forest(&Forest::single(z(1, 0)), &g);
        assert_eq!(got, ForestSum::basis(Forest::from_items(vec![z(1, 0), z(2, 0)])));
    }
}
