//! Relation matrices, commuting matrices and the SMS closed form.

pub mod dump;
pub mod local;
pub mod lu;
pub mod product;
pub mod relation;
pub mod series;

pub use local::{
    half_chain, localized_chain, recurrent_solve, sms_commuting_row, HalfChain, LocalChain,
    SmsPipeline, SmsWeights,
};
pub use lu::{lu_solve, Lu};
pub use product::{adjacent_tuples, forward_degree, layer_product, tuple_adjacent, LayerProduct};
pub use relation::{
    commuting_matrix, prune_zero_columns, prune_zero_columns_raw, relation_matrix, row_normalize,
    row_normalize_dense, CommutingMatrix, RelationMatrix, SparseMatrix,
};
pub use series::truncated_series;
