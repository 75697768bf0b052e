//! Finitely generated monoids in lattices, the smoothness and étaleness
//! criteria, and the log differentials of the `A_N` chart.

mod differentials;
mod monoid;
pub mod snf;

pub use differentials::{
    format_pullback, log_differentials, CliffordGenerators, LogDiffPresentation, PqCheck,
};
pub use monoid::{
    etale_from, lattice_map, parse_vectors, AbelianGroupData, EtaleVerdict, FinGenMonoid,
    Groupification, LatticeMapData, Membership, MonoidError, MonoidHom, SaturationReport,
    SmoothnessVerdict,
};
