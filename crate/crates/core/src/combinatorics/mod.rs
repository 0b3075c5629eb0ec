//! Exact integer combinatorics: partitions, semistandard tableaux, the
//! path/tableau bijection, RSK on symmetric matrices, and closed-form counts.

mod counting;
mod partition;
mod rsk;
mod tableau;

pub use counting::{
    b_exact, b_inf, binomial, conditional_cdf_exact, multichoose, path_count, path_count_terms, ssyt_count,
    EnumerationBudget,
};
pub use partition::{partitions_of, Partition};
pub use rsk::{lds_length, lds_of_word, rsk_insert, rsk_shape, GenPerm, SymConfig};
pub use tableau::{gov_to_path, gov_to_tableau, PathConfig, Ssyt};
