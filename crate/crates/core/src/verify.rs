//! Exact identity suites over enumerated bases, shared by the CLI and the
//! test harness.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    deshuffle, enumerate_forests, enumerate_populated, gl_forests, graft_simultaneous, prelie_graft, prelie_graft_sum, ratio, z,
    Coeff, Forest, ForestSum, FormalSum, MiSum, MultiIndex,
};
use crate::differentials::{compose_vf_poly, upsilon_vf_poly, upsilon_vf_poly_sum, upsilon_vf_sum, PolynomialField, Poly};
use crate::error::{invalid, Result};
use crate::translation::{
    coproduct_minus, coproduct_minus_table, insert_prelie, insert_prelie_sum, insert_simultaneous, ito_strat_character,
    renormalise0, Character, Translation,
};

/// Suite names in report order.
pub const SUITES: &[&str] = &[
    "prelie",
    "nap",
    "star-associativity",
    "star-unit",
    "deshuffle-coassociativity",
    "deshuffle-cocommutativity",
    "bialgebra",
    "population",
    "grading",
    "adjointness",
    "coproduct-routes",
    "insertion-prelie",
    "translation-morphism",
    "renormalisation-transpose",
    "upsilon-morphism",
    "upsilon-leibniz",
];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub d: usize,
    /// Upper bound on every suite's degree budget.
    pub max_degree: usize,
    pub seed: u64,
    /// Perturb one coefficient in the pre-Lie suite (harness self-test).
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { d: 2, max_degree: 5, seed: 0, inject_fault: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub budget: usize,
    pub checked: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub d: usize,
    pub max_degree: usize,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

// only the first few failures are kept verbatim
const MAX_LISTED: usize = 20;

struct Tally {
    checked: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn new() -> Self {
        Self { checked: 0, failures: Vec::new(), failed: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(what());
            }
        }
    }

    fn finish(mut self, name: &str, budget: usize, start: Instant) -> SuiteReport {
        if self.failed > self.failures.len() {
            self.failures.push(format!("... {} more", self.failed - self.failures.len()));
        }
        SuiteReport { name: name.into(), budget, checked: self.checked, failures: self.failures, seconds: start.elapsed().as_secs_f64() }
    }
}

fn default_budget(name: &str) -> usize {
    match name {
        "prelie" | "nap" | "insertion-prelie" => 3,
        "bialgebra" | "adjointness" | "coproduct-routes" | "translation-morphism" | "renormalisation-transpose" | "upsilon-morphism"
        | "upsilon-leibniz" => 4,
        _ => 5,
    }
}

fn single(f: &Forest) -> ForestSum {
    ForestSum::basis(f.clone())
}

fn pairs_within<'a>(xs: &'a [Forest], budget: usize) -> impl Iterator<Item = (&'a Forest, &'a Forest)> + 'a {
    xs.iter().flat_map(move |u| xs.iter().filter(move |v| u.degree() + v.degree() <= budget).map(move |v| (u, v)))
}

fn triple_name(a: &impl std::fmt::Display, b: &impl std::fmt::Display, c: &impl std::fmt::Display) -> String {
    format!("({a}, {b}, {c})")
}

fn prelie_suite(cfg: &VerifyConfig, n: usize, t: &mut Tally, nap: bool) {
    let keys = enumerate_populated(cfg.d, n);
    let e = |x: &MultiIndex| MiSum::basis(x.clone());
    let mut first = true;
    for a in &keys {
        for b in &keys {
            for c in &keys {
                // a ▷ b = a D b
                let (lhs, rhs) = if nap {
                    // right-NAP: (a ▷ b) ▷ c = (a ▷ c) ▷ b
                    (prelie_graft_sum(&prelie_graft(a, b), &e(c)), prelie_graft_sum(&prelie_graft(a, c), &e(b)))
                } else {
                    let assoc = |x: &MultiIndex, y: &MultiIndex| {
                        prelie_graft_sum(&prelie_graft(x, y), &e(c)).sub(&prelie_graft_sum(&e(x), &prelie_graft(y, c)))
                    };
                    (assoc(a, b), assoc(b, a))
                };
                let mut lhs = lhs;
                if cfg.inject_fault && first && !nap {
                    lhs.add_term(a.clone(), Coeff::one());
                }
                first = false;
                let label = if nap { "right-NAP" } else { "pre-Lie" };
                t.check(lhs == rhs, || format!("{label} fails at {}", triple_name(a, b, c)));
            }
        }
    }
}

fn star_associativity(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    let forests = enumerate_forests(cfg.d, n);
    let results: Vec<(usize, Vec<String>)> = forests
        .par_iter()
        .map(|u| {
            let mut local = Vec::new();
            let mut count = 0;
            for v in forests.iter().filter(|v| u.degree() + v.degree() <= n) {
                let uv = gl_forests(u, v, None);
                for w in forests.iter().filter(|w| u.degree() + v.degree() + w.degree() <= n) {
                    let vw = gl_forests(v, w, None);
                    let mut lhs = ForestSum::zero();
                    for (x, c) in &uv {
                        lhs.add_scaled(&gl_forests(x, w, None), c);
                    }
                    let mut rhs = ForestSum::zero();
                    for (x, c) in &vw {
                        rhs.add_scaled(&gl_forests(u, x, None), c);
                    }
                    count += 1;
                    if lhs != rhs {
                        local.push(format!("⋆ associativity fails at {}", triple_name(u, v, w)));
                    }
                }
            }
            (count, local)
        })
        .collect();
    for (count, fails) in results {
        t.checked += count - fails.len();
        for f in fails {
            t.check(false, || f);
        }
    }
}

fn star_unit(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    let e = Forest::empty();
    for u in enumerate_forests(cfg.d, n) {
        t.check(gl_forests(&e, &u, None) == single(&u), || format!("∅ ⋆ u ≠ u at {u}"));
        t.check(gl_forests(&u, &e, None) == single(&u), || format!("u ⋆ ∅ ≠ u at {u}"));
    }
}

type Triple = (Forest, Forest, Forest);

fn coassociativity(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    for u in enumerate_forests(cfg.d, n) {
        let mut left: FormalSum<Triple> = FormalSum::zero();
        let mut right: FormalSum<Triple> = FormalSum::zero();
        for ((a, b), c) in &deshuffle(&u) {
            for ((a1, a2), c1) in &deshuffle(a) {
                left.add_term((a1.clone(), a2.clone(), b.clone()), c * c1);
            }
            for ((b1, b2), c2) in &deshuffle(b) {
                right.add_term((a.clone(), b1.clone(), b2.clone()), c * c2);
            }
        }
        t.check(left == right, || format!("Δ_⧢ coassociativity fails at {u}"));
    }
}

fn cocommutativity(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    for u in enumerate_forests(cfg.d, n) {
        let du = deshuffle(&u);
        let swapped = du.map_basis(|(a, b)| (b.clone(), a.clone()));
        t.check(du == swapped, || format!("Δ_⧢ cocommutativity fails at {u}"));
    }
}

fn bialgebra(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    let forests = enumerate_forests(cfg.d, n);
    for (u, v) in pairs_within(&forests, n) {
        let mut lhs: FormalSum<(Forest, Forest)> = FormalSum::zero();
        for (w, c) in &gl_forests(u, v, None) {
            lhs.add_scaled(&deshuffle(w), c);
        }
        let mut rhs: FormalSum<(Forest, Forest)> = FormalSum::zero();
        for ((u1, u2), cu) in &deshuffle(u) {
            for ((v1, v2), cv) in &deshuffle(v) {
                let (l, r) = (gl_forests(u1, v1, None), gl_forests(u2, v2, None));
                for (x, cx) in &l {
                    for (y, cy) in &r {
                        rhs.add_term((x.clone(), y.clone()), cu * cv * cx * cy);
                    }
                }
            }
        }
        t.check(lhs == rhs, || format!("bialgebra compatibility fails at ({u}, {v})"));
    }
}

fn all_populated(u: &ForestSum) -> bool {
    u.iter().all(|(f, _)| f.all_populated())
}

fn population(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    let keys = enumerate_populated(cfg.d, n);
    for a in &keys {
        for b in keys.iter().filter(|b| a.degree() + b.degree() <= n) {
            let ok = prelie_graft(a, b).iter().all(|(m, _)| m.is_populated());
            t.check(ok, || format!("▷ leaves the populated set at ({a}, {b})"));
        }
    }
    let forests = enumerate_forests(cfg.d, n);
    for (u, v) in pairs_within(&forests, n) {
        t.check(all_populated(&graft_simultaneous(u, v)), || format!("⋆₂ leaves the populated set at ({u}, {v})"));
        t.check(all_populated(&gl_forests(u, v, None)), || format!("⋆ leaves the populated set at ({u}, {v})"));
    }
}

fn grading(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    let gamma = num_rational::Rational64::new(1, 3);
    let forests = enumerate_forests(cfg.d, n);
    for (u, v) in pairs_within(&forests, n) {
        let ok = gl_forests(u, v, None).iter().all(|(w, _)| w.degree() <= u.degree() + v.degree());
        t.check(ok, || format!("⋆ raises degree at ({u}, {v})"));
        let p = u.product(v);
        t.check(p.gamma_degree(gamma) == u.gamma_degree(gamma) + v.gamma_degree(gamma), || {
            format!("γ-degree not additive at ({u}, {v})")
        });
    }
}

fn sym(m: &MultiIndex) -> Coeff {
    Coeff::from_integer(BigInt::from(m.symmetry_factor()))
}

fn adjointness(cfg: &VerifyConfig, n: usize, t: &mut Tally) -> Result<()> {
    let keys = enumerate_populated(cfg.d, n);
    let forests = enumerate_forests(cfg.d, n);
    let mut dminus = HashMap::new();
    for b in &keys {
        dminus.insert(b.clone(), coproduct_minus(cfg.d, b)?);
    }
    for f in &forests {
        let sf = Coeff::from_integer(BigInt::from(f.symmetry_factor()));
        for a in keys.iter().filter(|a| f.degree() + a.degree() <= n) {
            let ins = insert_simultaneous(f, a);
            let sa = sym(a);
            let key = (f.clone(), a.clone());
            for b in &keys {
                let lhs = ins.coeff(b) * sym(b);
                let rhs = dminus[b].coeff(&key) * &sf * &sa;
                t.check(lhs == rhs, || format!("⟨F ⋆₁ a, b⟩ ≠ ⟨F ⊗ a, Δ⁻b⟩ at {}", triple_name(f, a, b)));
            }
        }
    }
    Ok(())
}

fn coproduct_routes(cfg: &VerifyConfig, n: usize, t: &mut Tally) -> Result<()> {
    let table = coproduct_minus_table(cfg.d, n);
    for b in enumerate_populated(cfg.d, n) {
        let direct = coproduct_minus(cfg.d, &b)?;
        let ok = table.get(&b).is_some_and(|x| *x == direct);
        t.check(ok, || format!("Δ⁻ routes disagree at {b}"));
    }
    Ok(())
}

fn insertion_prelie(cfg: &VerifyConfig, n: usize, t: &mut Tally) {
    let keys = enumerate_populated(cfg.d, n);
    let e = |x: &MultiIndex| MiSum::basis(x.clone());
    for a in &keys {
        for b in &keys {
            for c in &keys {
                let assoc = |x: &MultiIndex, y: &MultiIndex| {
                    insert_prelie_sum(&insert_prelie(x, y), &e(c)).sub(&insert_prelie_sum(&e(x), &insert_prelie(y, c)))
                };
                t.check(assoc(a, b) == assoc(b, a), || format!("▶ pre-Lie fails at {}", triple_name(a, b, c)));
            }
        }
    }
}

/// Characters exercised by the translation suites: the Itô–Stratonovich
/// character in direction 0 and a non-trivial one in direction 1.
pub fn sample_characters(d: usize) -> Vec<Character> {
    let mut out = vec![ito_strat_character(d)];
    if d >= 1 {
        let other = if d >= 2 { z(2, 0).mul(&z(1, 1)) } else { z(0, 0).mul(&z(1, 1)) };
        out.push(Character::new(1, [(z(1, 0), Coeff::one()), (other, ratio(2, 5))]).expect("populated"));
    }
    out
}

fn translation_morphism(cfg: &VerifyConfig, n: usize, t: &mut Tally) -> Result<()> {
    let tr = Translation::new(&sample_characters(cfg.d), cfg.d)?;
    let trunc = Some(n + 2);
    let keys = enumerate_populated(cfg.d, n);
    for a in &keys {
        for b in keys.iter().filter(|b| a.degree() + b.degree() <= n) {
            let lhs = tr.apply_mi_sum(&prelie_graft(a, b), trunc);
            let rhs = prelie_graft_sum(&tr.apply_mi(a, trunc), &tr.apply_mi(b, trunc));
            let rhs = rhs.iter().filter(|(m, _)| m.degree() <= n + 2).map(|(m, c)| (m.clone(), c.clone())).collect::<MiSum>();
            t.check(lhs == rhs, || format!("T is not a ▷-morphism at ({a}, {b})"));
            t.check(lhs.iter().all(|(m, _)| m.is_populated()), || format!("T leaves the populated set at ({a}, {b})"));
        }
    }
    let forests = enumerate_forests(cfg.d, n);
    for (u, v) in pairs_within(&forests, n) {
        let mut lhs = tr.apply(&gl_forests(u, v, None), trunc);
        let (tu, tv) = (tr.apply_forest(u, trunc), tr.apply_forest(v, trunc));
        let mut rhs = ForestSum::zero();
        for (x, cx) in &tu {
            for (y, cy) in &tv {
                if x.degree() + y.degree() <= n + 2 {
                    rhs.add_scaled(&gl_forests(x, y, None), &(cx * cy));
                }
            }
        }
        lhs.retain(|f| f.degree() <= n + 2);
        t.check(lhs == rhs, || format!("T is not a ⋆-morphism at ({u}, {v})"));
    }
    Ok(())
}

fn renormalisation_transpose(cfg: &VerifyConfig, n: usize, t: &mut Tally) -> Result<()> {
    let sample0 = Character::new(0, [(z(0, 0), Coeff::one()), (z(1, 0).mul(&z(1, 1)), ratio(1, 3)), (z(0, 0).mul(&z(1, 1)), ratio(-1, 2))])?;
    let keys = enumerate_populated(cfg.d, n);
    for l in [ito_strat_character(cfg.d), sample0] {
        let tr = Translation::new(std::slice::from_ref(&l), cfg.d)?;
        for b in &keys {
            let m = tr.transpose_mi(b);
            t.check(renormalise0(&l, cfg.d, b)? == m, || format!("M_ℓ ≠ (ℓ ⊗ id)Δ⁻ at {b}"));
            t.check(m.iter().all(|(x, _)| x.is_populated()), || format!("M_ℓ leaves the populated set at {b}"));
        }
    }
    let general = Translation::new(&sample_characters(cfg.d), cfg.d)?;
    for g in &keys {
        let m = general.transpose_mi(g);
        // ⟨T z^β, z^γ⟩ = ⟨z^β, M z^γ⟩
        for b in keys.iter().filter(|b| b.degree() <= g.degree()) {
            let lhs = general.apply_mi(b, Some(g.degree())).coeff(g) * sym(g);
            let rhs = m.coeff(b) * sym(b);
            t.check(lhs == rhs, || format!("⟨T z^β, z^γ⟩ ≠ ⟨z^β, M z^γ⟩ at ({b}, {g})"));
        }
    }
    Ok(())
}

fn random_poly(rng: &mut ChaCha20Rng, deg: usize) -> Poly {
    Poly::from_i64(&(0..=deg).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
}

fn sample_fields(cfg: &VerifyConfig) -> (Vec<Poly>, Poly, Poly) {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let f = (0..=cfg.d).map(|_| random_poly(&mut rng, 3)).collect();
    (f, random_poly(&mut rng, 5), random_poly(&mut rng, 3))
}

fn upsilon_morphism(cfg: &VerifyConfig, n: usize, t: &mut Tally) -> Result<()> {
    let (f, psi, _) = sample_fields(cfg);
    let field = PolynomialField::new(f.clone())?;
    let forests = enumerate_forests(cfg.d, n);
    let ys: Vec<f64> = (0..10).map(|j| -0.9 + 0.2 * j as f64).collect();
    for (u, v) in pairs_within(&forests, n) {
        let prod = gl_forests(u, v, None);
        let exact = upsilon_vf_poly_sum(&prod, &f, &psi)?;
        let composed = compose_vf_poly(&single(u), &single(v), &f, &psi)?;
        t.check(exact == composed, || format!("Υ_f[u ⋆ v] ≠ Υ_f[u] ∘ Υ_f[v] exactly at ({u}, {v})"));
        // floating evaluation against the exact composition
        for &y in &ys {
            let lhs: f64 = upsilon_vf_sum(&prod, &field, &psi, y)?;
            let rhs = composed.eval(y);
            t.check((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), || format!("Υ_f morphism off by {:e} at ({u}, {v}), y = {y}", lhs - rhs));
        }
    }
    Ok(())
}

fn upsilon_leibniz(cfg: &VerifyConfig, n: usize, t: &mut Tally) -> Result<()> {
    let (f, phi, psi) = sample_fields(cfg);
    let prod = phi.mul(&psi);
    for u in enumerate_forests(cfg.d, n) {
        let mut lhs = Poly::zero();
        for ((a, b), c) in &deshuffle(&u) {
            lhs = lhs.add(&upsilon_vf_poly(a, &f, &phi)?.mul(&upsilon_vf_poly(b, &f, &psi)?).scale(c));
        }
        t.check(lhs == upsilon_vf_poly(&u, &f, &prod)?, || format!("Leibniz identity fails at {u}"));
    }
    Ok(())
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.d == 0 {
        return invalid("d must be at least 1");
    }
    let n = default_budget(name).min(cfg.max_degree);
    let start = Instant::now();
    let mut t = Tally::new();
    match name {
        "prelie" => prelie_suite(cfg, n, &mut t, false),
        "nap" => prelie_suite(cfg, n, &mut t, true),
        "star-associativity" => star_associativity(cfg, n, &mut t),
        "star-unit" => star_unit(cfg, n, &mut t),
        "deshuffle-coassociativity" => coassociativity(cfg, n, &mut t),
        "deshuffle-cocommutativity" => cocommutativity(cfg, n, &mut t),
        "bialgebra" => bialgebra(cfg, n, &mut t),
        "population" => population(cfg, n, &mut t),
        "grading" => grading(cfg, n, &mut t),
        "adjointness" => adjointness(cfg, n, &mut t)?,
        "coproduct-routes" => coproduct_routes(cfg, n, &mut t)?,
        "insertion-prelie" => insertion_prelie(cfg, n, &mut t),
        "translation-morphism" => translation_morphism(cfg, n, &mut t)?,
        "renormalisation-transpose" => renormalisation_transpose(cfg, n, &mut t)?,
        "upsilon-morphism" => upsilon_morphism(cfg, n, &mut t)?,
        "upsilon-leibniz" => upsilon_leibniz(cfg, n, &mut t)?,
        other => return invalid(format!("unknown suite {other}")),
    }
    Ok(t.finish(name, n, start))
}

/// Every suite, in parallel; the report keeps the order of [`SUITES`].
pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let suites = SUITES.par_iter().map(|s| run_suite(s, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { d: cfg.d, max_degree: cfg.max_degree, seed: cfg.seed, passed: suites.iter().all(|s| s.passed()), suites })
}
