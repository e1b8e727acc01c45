use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{enumerate_forests, enumerate_populated, gl_forests, Coeff, Forest, MultiIndex};

/// Which iterated integrals a lift evaluates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LiftMode {
    /// Every integral taken exactly along the affine interpolation
    /// (piecewise-linear and Stratonovich lifts).
    Geometric,
    /// Integrals against `X^i`, `i ≥ 1`, frozen at the left point; time
    /// integrals exact.
    Ito,
}

/// One structure constant of the truncated product on functionals:
/// `(x ⋆ y)(w) += x(u) y(v) c`.
#[derive(Clone, Copy, Debug)]
pub struct ProductEntry {
    pub u: u32,
    pub v: u32,
    pub w: u32,
    pub c: f64,
}

#[derive(Debug)]
struct Tables {
    all: Vec<ProductEntry>,
    // entries whose output forest is a single multi-index; `w` is a key index
    single: Vec<ProductEntry>,
}

/// Populated multi-indices and forests up to degree `n` over letters `0..=d`,
/// with lazily built product tables. Shared between group elements.
#[derive(Debug)]
pub struct TruncatedBasis {
    d: usize,
    n: usize,
    keys: Vec<MultiIndex>,
    key_index: HashMap<MultiIndex, usize>,
    key_sym: Vec<f64>,
    forests: Vec<Vec<usize>>,
    forest_index: HashMap<Vec<usize>, usize>,
    forest_single: Vec<Option<usize>>,
    tables: OnceLock<Tables>,
    lift_geometric: OnceLock<Vec<f64>>,
    lift_ito: OnceLock<Vec<f64>>,
}

fn to_f64(c: &Coeff) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

impl TruncatedBasis {
    pub fn new(d: usize, n: usize) -> Self {
        let keys = enumerate_populated(d, n);
        let key_index: HashMap<MultiIndex, usize> = keys.iter().cloned().enumerate().map(|(j, k)| (k, j)).collect();
        let key_sym = keys.iter().map(|k| k.symmetry_factor().to_f64().unwrap_or(f64::INFINITY)).collect();
        let mut forests = Vec::new();
        let mut forest_index = HashMap::new();
        let mut forest_single = Vec::new();
        for f in enumerate_forests(d, n) {
            let mut ix: Vec<usize> = f.items().iter().map(|m| key_index[m]).collect();
            ix.sort_unstable();
            forest_single.push(if ix.len() == 1 { Some(ix[0]) } else { None });
            forest_index.insert(ix.clone(), forests.len());
            forests.push(ix);
        }
        Self {
            d,
            n,
            keys,
            key_index,
            key_sym,
            forests,
            forest_index,
            forest_single,
            tables: OnceLock::new(),
            lift_geometric: OnceLock::new(),
            lift_ito: OnceLock::new(),
        }
    }

    /// Process-wide shared instance for `(d, n)`.
    pub fn shared(d: usize, n: usize) -> Arc<TruncatedBasis> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<TruncatedBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut g = cache.lock().expect("basis cache poisoned");
        g.entry((d, n)).or_insert_with(|| Arc::new(TruncatedBasis::new(d, n))).clone()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_norm(&self) -> usize {
        self.n
    }

    pub fn keys(&self) -> &[MultiIndex] {
        &self.keys
    }

    pub fn key_index(&self, m: &MultiIndex) -> Option<usize> {
        self.key_index.get(m).copied()
    }

    pub fn key_symmetry(&self, j: usize) -> f64 {
        self.key_sym[j]
    }

    pub fn forest_count(&self) -> usize {
        self.forests.len()
    }

    /// Components (as key indices) of forest number `j`; forest 0 is `∅`.
    pub fn forest_keys(&self, j: usize) -> &[usize] {
        &self.forests[j]
    }

    pub fn forest(&self, j: usize) -> Forest {
        Forest::from_items(self.forests[j].iter().map(|&k| self.keys[k].clone()).collect())
    }

    pub fn forest_position(&self, f: &Forest) -> Option<usize> {
        let mut ix = Vec::with_capacity(f.card());
        for m in f.items() {
            ix.push(self.key_index(m)?);
        }
        ix.sort_unstable();
        self.forest_index.get(&ix).copied()
    }

    pub fn forest_as_key(&self, j: usize) -> Option<usize> {
        self.forest_single[j]
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| self.build_tables())
    }

    fn build_tables(&self) -> Tables {
        let fs: Vec<Forest> = (0..self.forests.len()).map(|j| self.forest(j)).collect();
        let syms: Vec<BigRational> =
            fs.iter().map(|f| BigRational::from_integer(BigInt::from(f.symmetry_factor()))).collect();
        let mut all = Vec::new();
        let mut single = Vec::new();
        for (u, fu) in fs.iter().enumerate().skip(1) {
            for (v, fv) in fs.iter().enumerate().skip(1) {
                if fu.degree() + fv.degree() > self.n {
                    continue;
                }
                for (w, cw) in &gl_forests(fu, fv, Some(self.n)) {
                    let wi = self.forest_position(w).expect("product stays in basis");
                    let c = cw * &syms[wi] / (&syms[u] * &syms[v]);
                    if c.is_zero() {
                        continue;
                    }
                    let e = ProductEntry { u: u as u32, v: v as u32, w: wi as u32, c: to_f64(&c) };
                    all.push(e);
                    if let Some(k) = self.forest_single[wi] {
                        single.push(ProductEntry { w: k as u32, ..e });
                    }
                }
            }
        }
        Tables { all, single }
    }

    /// Entries with `u, v ≠ ∅` over all output forests.
    pub fn product_entries(&self) -> &[ProductEntry] {
        &self.tables().all
    }

    /// Entries with `u, v ≠ ∅` whose output is a single multi-index
    /// (`w` indexes `keys`).
    pub fn chen_entries(&self) -> &[ProductEntry] {
        &self.tables().single
    }

    /// Lift coefficient `C(β)` such that an affine segment with increments
    /// `Δ^i` has `X(z^β) = C(β) Π (Δ^i)^{β(i,k)}`.
    pub fn lift_coefficients(&self, mode: LiftMode) -> &[f64] {
        let cell = match mode {
            LiftMode::Geometric => &self.lift_geometric,
            LiftMode::Ito => &self.lift_ito,
        };
        cell.get_or_init(|| {
            let exact = super::lift::affine_coefficients(&self.keys, mode);
            exact.iter().map(to_f64).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forest_zero_is_empty() {
        let b = TruncatedBasis::new(1, 2);
        assert!(b.forest_keys(0).is_empty());
        assert_eq!(b.keys().len(), 6);
        assert_eq!(b.forest_count(), 10);
    }

    #[test]
    fn level_one_cross_term() {
        // (x⋆y)(z_(i,0)z_(j,1)) picks up x(z_(i,0)) y(z_(j,0))
        let b = TruncatedBasis::new(1, 2);
        let zi = b.forest_position(&Forest::single(MultiIndex::var(1, 0))).unwrap() as u32;
        let zj = b.forest_position(&Forest::single(MultiIndex::var(0, 0))).unwrap() as u32;
        let w = b.key_index(&MultiIndex::var(1, 0).mul(&MultiIndex::var(0, 1))).unwrap() as u32;
        let hit: Vec<_> = b.chen_entries().iter().filter(|e| e.w == w).collect();
        assert_eq!(hit.len(), 1);
        assert_eq!((hit[0].u, hit[0].v, hit[0].c), (zi, zj, 1.0));
    }
}
