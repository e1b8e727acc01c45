//! Elementary differentials `Υ_f` and translated vector fields.

pub mod field;
pub mod poly;
pub mod translated;
pub mod upsilon;

pub use field::{ClosureField, Identity, LinearField, PolynomialField, SmoothTest, VectorField};
pub use poly::{parse_exact, Poly};
pub use translated::{translated_field_poly, translated_generator, TranslatedField, TRANSLATED_MAX_ORDER};
pub use upsilon::{
    compose_vf_poly, upsilon, upsilon_mi, upsilon_mi_poly, upsilon_mi_sum, upsilon_poly, upsilon_vf, upsilon_vf_poly,
    upsilon_vf_poly_sum, upsilon_vf_sum,
};
