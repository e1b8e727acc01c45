//! Exact combinatorial kernel over multi-indices and their forests.

pub mod enumerate;
pub mod forest;
pub mod formal_sum;
pub mod grading;
pub mod multiindex;
pub mod ops;
pub mod parse;

pub use enumerate::{enumerate_forests, enumerate_populated};
pub use forest::Forest;
pub use formal_sum::{coeff, ratio, Coeff, FormalSum};
pub use grading::{format_rational64, parse_rational64, Grading};
pub use multiindex::{MultiIndex, Var};
pub use ops::{
    deshuffle, deshuffle_sum, derivation_d, derive_forest, derive_mi, derive_mi_pow, derive_mi_sum,
    forest_sum_product, gl_forests, gl_product, graft_simultaneous, graft_simultaneous_sum, mi_sum_product,
    pairing, pairing_mi, prelie_graft, prelie_graft_sum, ForestSum, MiSum,
};
pub use parse::{format_rational, parse_forest, parse_forest_sum, parse_multi_index, parse_rational};

/// `z_(i,k)` as a multi-index.
pub fn z(i: u32, k: u32) -> MultiIndex {
    MultiIndex::var(i, k)
}
