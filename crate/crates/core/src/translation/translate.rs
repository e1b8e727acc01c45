use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;

use super::character::{complete_characters, Character};
use super::insertion::insert_simultaneous;
use crate::algebra::{derive_mi_pow, enumerate_populated, Coeff, Forest, ForestSum, FormalSum, MiSum, MultiIndex, Var};
use crate::error::{invalid, Result};

fn sym(m: &MultiIndex) -> Coeff {
    Coeff::from_integer(BigInt::from(m.symmetry_factor()))
}

fn sym_forest(f: &Forest) -> Coeff {
    Coeff::from_integer(BigInt::from(f.symmetry_factor()))
}

fn truncated_product(a: &MiSum, b: &MiSum, n: Option<usize>) -> MiSum {
    let mut out = MiSum::zero();
    for (x, cx) in a {
        for (y, cy) in b {
            if n.map_or(true, |n| x.degree() + y.degree() <= n) {
                out.add_term(x.mul(y), cx * cy);
            }
        }
    }
    out
}

/// The translation map `T_ℓ` for a family of characters, one per direction
/// (missing directions act as the identity).
pub struct Translation {
    d: usize,
    chars: Vec<Character>,
    generators: Mutex<HashMap<Var, MiSum>>,
}

impl Translation {
    pub fn new(chars: &[Character], d: usize) -> Result<Self> {
        Ok(Self { d, chars: complete_characters(chars, d)?, generators: Mutex::new(HashMap::new()) })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    /// `T(z_(i,k)) = Σ_α ℓ_i(α)/S(α) D^k z^α`.
    pub fn generator(&self, v: Var) -> MiSum {
        let (i, k) = v;
        if i as usize > self.d {
            return MiSum::basis(MultiIndex::var(i, k));
        }
        let mut cache = self.generators.lock().expect("generator cache");
        cache
            .entry(v)
            .or_insert_with(|| {
                let mut out = MiSum::zero();
                for (a, c) in self.chars[i as usize].terms() {
                    out.add_scaled(&derive_mi_pow(a, k as usize), &(c / sym(a)));
                }
                out
            })
            .clone()
    }

    /// `T(z^β)`, multiplicative over the multi-index product, keeping
    /// degrees `≤ trunc`.
    pub fn apply_mi(&self, b: &MultiIndex, trunc: Option<usize>) -> MiSum {
        let mut acc = MiSum::basis(MultiIndex::one());
        for &(v, m) in b.entries() {
            let g = self.generator(v);
            for _ in 0..m {
                acc = truncated_product(&acc, &g, trunc);
                if acc.is_zero() {
                    return acc;
                }
            }
        }
        acc
    }

    pub fn apply_mi_sum(&self, u: &MiSum, trunc: Option<usize>) -> MiSum {
        let mut out = MiSum::zero();
        for (b, c) in u {
            out.add_scaled(&self.apply_mi(b, trunc), c);
        }
        out
    }

    /// `T` on a forest: the product of the component images.
    pub fn apply_forest(&self, f: &Forest, trunc: Option<usize>) -> ForestSum {
        let mut acc = ForestSum::basis(Forest::empty());
        for comp in f.items() {
            let img = self.apply_mi(comp, trunc);
            let mut next = ForestSum::zero();
            for (g, cg) in &acc {
                for (m, cm) in &img {
                    let h = g.product(&Forest::single(m.clone()));
                    if trunc.map_or(true, |n| h.degree() <= n) {
                        next.add_term(h, cg * cm);
                    }
                }
            }
            acc = next;
        }
        acc
    }

    pub fn apply(&self, u: &ForestSum, trunc: Option<usize>) -> ForestSum {
        let mut out = ForestSum::zero();
        for (f, c) in u {
            out.add_scaled(&self.apply_forest(f, trunc), c);
        }
        out
    }

    /// Transpose `M_ℓ z^γ = Σ_β [T z^β]_γ S(γ)/S(β) z^β`. `T` never lowers
    /// degree, so only `|β| ≤ |γ|` contribute.
    pub fn transpose_mi(&self, g: &MultiIndex) -> MiSum {
        let n = g.degree();
        let sg = sym(g);
        let mut out = MiSum::zero();
        for b in enumerate_populated(self.d, n) {
            let c = self.apply_mi(&b, Some(n)).coeff(g);
            if !c.is_zero() {
                let w = c * &sg / sym(&b);
                out.add_term(b, w);
            }
        }
        out
    }
}

fn multisets<T: Clone>(items: &[T], n: usize, from: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for j in from..items.len() {
        cur.push(items[j].clone());
        multisets(items, n, j, cur, out);
        cur.pop();
    }
}

/// `T⁰ z^β = Σ_{card F = |β|_0} ℓ(F)/S(F) F ⋆₁ z^β` for a direction-0
/// character; the empty forest enters only when `|β|_0 = 0`.
pub fn translate_dual0(l: &Character, b: &MultiIndex) -> Result<MiSum> {
    if l.direction() != 0 {
        return invalid("dual translation needs a direction-0 character");
    }
    let n = b.letter0_count();
    let support: Vec<MultiIndex> = l.terms().keys().cloned().collect();
    let mut forests = Vec::new();
    multisets(&support, n, 0, &mut Vec::new(), &mut forests);
    let mut out = FormalSum::zero();
    for items in forests {
        let f = Forest::from_items(items);
        let w = l.eval_forest(&f) / sym_forest(&f);
        out.add_scaled(&insert_simultaneous(&f, b), &w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ratio, z};
    use crate::translation::ito_strat_character;

    #[test]
    fn identity_moves_nothing() {
        let t = Translation::new(&[], 2).unwrap();
        let b = z(0, 1).mul(&z(1, 2)).mul(&z(1, 0)).mul(&z(2, 0));
        assert_eq!(t.apply_mi(&b, None), MiSum::basis(b.clone()));
        assert_eq!(t.transpose_mi(&b), MiSum::basis(b));
    }

    #[test]
    fn ito_strat_generator() {
        let t = Translation::new(&[ito_strat_character(2)], 2).unwrap();
        let mut want = MiSum::basis(z(0, 0));
        want.add_term(z(1, 0).mul(&z(1, 1)), ratio(1, 2));
        want.add_term(z(2, 0).mul(&z(2, 1)), ratio(1, 2));
        assert_eq!(t.apply_mi(&z(0, 0), None), want);
    }

    #[test]
    fn dual_form_agrees() {
        let l = ito_strat_character(1);
        let t = Translation::new(&[l.clone()], 1).unwrap();
        for b in enumerate_populated(1, 4) {
            assert_eq!(translate_dual0(&l, &b).unwrap(), t.apply_mi(&b, None), "{b}");
        }
    }
}
