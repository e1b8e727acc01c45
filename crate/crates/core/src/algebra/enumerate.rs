use super::{Forest, MultiIndex, Var};

/// Populated multi-indices over letters `0..=d` with degree at most `n`,
/// each once, in canonical order.
pub fn enumerate_populated(d: usize, n: usize) -> Vec<MultiIndex> {
    if n == 0 {
        return Vec::new();
    }
    // arities above n-1 cannot occur: Σk = |β| - 1 ≤ n - 1
    let vars: Vec<Var> = (0..=d as u32).flat_map(|i| (0..n as u32).map(move |k| (i, k))).collect();
    let mut out = Vec::new();
    let mut cur: Vec<(Var, u32)> = Vec::new();
    rec(&vars, 0, n, 0, 0, &mut cur, &mut out);
    out.sort();
    out
}

fn rec(
    vars: &[Var],
    pos: usize,
    n: usize,
    size: usize,
    arity: usize,
    cur: &mut Vec<(Var, u32)>,
    out: &mut Vec<MultiIndex>,
) {
    if pos == vars.len() {
        if size >= 1 && arity + 1 == size {
            out.push(MultiIndex::from_entries(cur.iter().copied()));
        }
        return;
    }
    let v = vars[pos];
    let mut m = 0u32;
    loop {
        let s = size + m as usize;
        let a = arity + (m * v.1) as usize;
        if s > n || a + 1 > n {
            break;
        }
        if m > 0 {
            cur.push((v, m));
        }
        rec(vars, pos + 1, n, s, a, cur, out);
        if m > 0 {
            cur.pop();
        }
        m += 1;
    }
}

/// All forests of populated multi-indices (letters `0..=d`) with total degree
/// at most `n`, including `∅`, sorted by degree then canonical order.
pub fn enumerate_forests(d: usize, n: usize) -> Vec<Forest> {
    let keys = enumerate_populated(d, n);
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    forest_rec(&keys, 0, n, &mut cur, &mut out);
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out
}

fn forest_rec(keys: &[MultiIndex], start: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Forest>) {
    out.push(Forest::from_items(cur.iter().map(|&j| keys[j].clone()).collect()));
    for j in start..keys.len() {
        let dg = keys[j].degree();
        if dg <= budget {
            cur.push(j);
            forest_rec(keys, j, budget - dg, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(enumerate_populated(1, 1), vec![MultiIndex::var(0, 0), MultiIndex::var(1, 0)]);
        let l = enumerate_populated(1, 2);
        assert_eq!(l.len(), 6);
        for i in 0..2 {
            for j in 0..2 {
                assert!(l.contains(&MultiIndex::var(i, 0).mul(&MultiIndex::var(j, 1))));
            }
        }
        assert!(enumerate_populated(1, 0).is_empty());
    }

    #[test]
    fn forests_include_empty() {
        let fs = enumerate_forests(1, 2);
        assert_eq!(fs[0], Forest::empty());
        // ∅, 2 of degree 1, 4 + 3 of degree 2
        assert_eq!(fs.len(), 1 + 2 + 7);
    }
}
