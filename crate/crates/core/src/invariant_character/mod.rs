//! The G-invariant part of the rank-2 beta-gamma system, its weight slices
//! and the length of each slice over the weight-zero part.

mod formula;
mod nakayama;
mod report;
mod slice;

pub use formula::{
    formula_length, formula_length_multichoose, formula_table, partitions_at_most,
    weighted_compositions, ProductCount,
};
pub use nakayama::{minimal_generators, nakayama_generators, GeneratorCount};
pub use report::{
    compare, default_cutoff, CharacterReport, CharacterRow, CSV_FORMAT_TAG, CSV_HEADER,
};
pub use slice::{
    enumerate_invariant_slice, enumerate_slice, field_counts, GAction, GradedSlice, SpanModel,
    SpanOracle,
};
