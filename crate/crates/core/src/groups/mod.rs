//! Finite groups: multiplication tables, layered semidirect products,
//! series, wreath embeddings and the solvable-group pipeline.

pub mod builtin;
pub mod embedding;
pub mod pipeline;
pub mod semidirect;
pub mod series;
pub mod table;
pub mod wreath;

use thiserror::Error;

use crate::text::FormatError;

pub use embedding::GroupEmbedding;
pub use pipeline::{solvable_to_pi, PiEmbedding};
pub use semidirect::{SemidirectGroup, SemidirectSpec};
pub use series::{composition_series, derived_series, is_solvable, subgroup_of, CompositionSeries};
pub use table::{FiniteGroup, TableGroup};
pub use wreath::wreath_embed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group: {0}")]
    Invalid(String),
    #[error("not an embedding: {0}")]
    NotEmbedding(String),
    #[error(
        "group is not solvable: derived series stabilizes at a subgroup of order {order} generated by {generators}"
    )]
    NotSolvable { order: usize, generators: String },
    #[error("group order exceeds the budget of {limit} elements")]
    SizeBudgetExceeded { limit: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Format(#[from] FormatError),
}
