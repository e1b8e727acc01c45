use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::character::Character;
use super::insertion::insert_simultaneous;
use crate::algebra::{derive_mi_pow, enumerate_forests, enumerate_populated, Coeff, Forest, FormalSum, MiSum, MultiIndex};
use crate::error::{invalid, Result};

/// Terms `F ⊗ z^α` of the extraction-contraction coproduct.
pub type CoproductSum = FormalSum<(Forest, MultiIndex)>;

fn sym(m: &MultiIndex) -> Coeff {
    Coeff::from_integer(BigInt::from(m.symmetry_factor()))
}

fn factorial(n: u32) -> Coeff {
    (1..=n).fold(Coeff::one(), |a, k| a * Coeff::from_integer(k.into()))
}

/// `Δ⁻` for every populated `z^β` of degree `≤ n_max`, as the transpose of
/// `⋆₁` under the pairing.
pub fn coproduct_minus_table(d: usize, n_max: usize) -> HashMap<MultiIndex, CoproductSum> {
    let forests = enumerate_forests(d, n_max);
    let mut table: HashMap<MultiIndex, CoproductSum> = HashMap::new();
    for a in enumerate_populated(d, n_max) {
        let n = a.letter0_count();
        let sa = sym(&a);
        table.entry(a.clone()).or_default().add_term((Forest::empty(), a.clone()), Coeff::one());
        if n == 0 {
            continue;
        }
        for f in forests.iter().filter(|f| f.card() == n && f.degree() + a.degree() - n <= n_max) {
            let sf = Coeff::from_integer(BigInt::from(f.symmetry_factor()));
            for (b, c) in &insert_simultaneous(f, &a) {
                let w = c * sym(b) / (&sf * &sa);
                table.entry(b.clone()).or_default().add_term((f.clone(), a.clone()), w);
            }
        }
    }
    table
}

/// Populated `γ` with the same degree as `target` and `[D^k γ]_target ≠ 0`.
fn antiderivatives(d: usize, target: &MultiIndex, k: u32) -> Vec<(MultiIndex, Coeff)> {
    let arity = target.arity_sum();
    if arity < k as usize {
        return Vec::new();
    }
    enumerate_populated(d, target.degree())
        .into_iter()
        .filter(|g| g.degree() == target.degree() && g.arity_sum() + k as usize == arity)
        .filter_map(|g| {
            let c = derive_mi_pow(&g, k as usize).coeff(target);
            (!c.is_zero()).then_some((g, c))
        })
        .collect()
}

/// `Δ⁻ z^β` computed directly: extract ordered factors `γ̂_i = D^{k_i} γ_i`
/// from `z^β`, contract each to `z_(0,k_i)`.
pub fn coproduct_minus(d: usize, b: &MultiIndex) -> Result<CoproductSum> {
    if !b.is_populated() {
        return invalid(format!("{b} is not populated"));
    }
    b.check_alphabet(d as u32)?;
    let mut out = CoproductSum::zero();
    out.add_term((Forest::empty(), b.clone()), Coeff::one());
    let sb = sym(b);
    let mut stack: Vec<(MultiIndex, u32, MultiIndex, Coeff)> = Vec::new();
    extract(d, b, &sb, b, &mut stack, &mut out);
    Ok(out)
}

fn extract(
    d: usize,
    b: &MultiIndex,
    sb: &Coeff,
    rest: &MultiIndex,
    stack: &mut Vec<(MultiIndex, u32, MultiIndex, Coeff)>,
    out: &mut CoproductSum,
) {
    // only full extractions survive: every letter-0 variable of `z^α` is a contraction
    if !stack.is_empty() && rest.letter0_count() == 0 {
        let n = stack.len() as u32;
        let mut alpha = rest.clone();
        for (_, k, _, _) in stack.iter() {
            alpha = alpha.times_var((0, *k), 1);
        }
        let mut w = sb.clone();
        for &((i, _), m) in alpha.entries() {
            if i == 0 {
                w *= factorial(m);
            }
        }
        let mut den = factorial(n) * sym(&alpha);
        for (_, _, g, c) in stack.iter() {
            den *= sym(g);
            w *= c;
        }
        let f = Forest::from_items(stack.iter().map(|s| s.2.clone()).collect());
        out.add_term((f, alpha), w / den);
    }
    for hat in rest.divisors() {
        if hat.is_one() || hat.population() > 1 {
            continue;
        }
        let k = (1 - hat.population()) as u32;
        let remaining = rest.checked_div(&hat).expect("divisor");
        for (g, c) in antiderivatives(d, &hat, k) {
            stack.push((hat.clone(), k, g, c));
            extract(d, b, sb, &remaining, stack, out);
            stack.pop();
        }
    }
}

/// `M⁰ z^β = (ℓ ⊗ id) Δ⁻ z^β` over the terms with `card F = |α|_0`.
pub fn renormalise0(l: &Character, d: usize, b: &MultiIndex) -> Result<MiSum> {
    if l.direction() != 0 {
        return invalid("renormalisation needs a direction-0 character");
    }
    let mut out = MiSum::zero();
    for ((f, a), c) in &coproduct_minus(d, b)? {
        if f.card() != a.letter0_count() {
            continue;
        }
        let v = l.eval_forest(f);
        if !v.is_zero() {
            out.add_term(a.clone(), v * c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::z;

    #[test]
    fn single_letter() {
        let got = coproduct_minus(1, &z(1, 0)).unwrap();
        let mut want = CoproductSum::zero();
        want.add_term((Forest::empty(), z(1, 0)), Coeff::one());
        want.add_term((Forest::single(z(1, 0)), z(0, 0)), Coeff::one());
        assert_eq!(got, want);
    }

    #[test]
    fn routes_agree() {
        let n = 4;
        let table = coproduct_minus_table(1, n);
        for b in enumerate_populated(1, n) {
            let direct = coproduct_minus(1, &b).unwrap();
            assert_eq!(&direct, table.get(&b).unwrap(), "{b}");
        }
    }
}
