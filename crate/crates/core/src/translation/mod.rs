//! Insertion products, translations of paths and fields, and the
//! extraction-contraction coproduct.

pub mod character;
pub mod coproduct;
pub mod insertion;
pub mod ito_strat;
pub mod path;
pub mod translate;

pub use character::{complete_characters, ito_strat_character, Character};
pub use coproduct::{coproduct_minus, coproduct_minus_table, renormalise0, CoproductSum};
pub use insertion::{
    insert_prelie, insert_prelie_sum, insert_simultaneous, insert_simultaneous_forest, insert_simultaneous_forest_sum,
    insert_simultaneous_sum,
};
pub use ito_strat::{brownian_grading, gbm_comparison, level_two_statistics, GbmRow, LevelTwoRow};
pub use path::{regularity_factor, translate_roughpath, translated_grading, PathTranslation};
pub use translate::{translate_dual0, Translation};
