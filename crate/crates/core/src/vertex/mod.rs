//! The vertex operation on the beta-gamma / b-c Fock module.
//!
//! Products use the uniform convention `Y(A, z) = sum_n A_(n) z^(-n-1)`.
//! The generating fields are `gamma = gamma_0|0>`, `beta = beta_-1|0>`,
//! `c = c_0|0>`, `b = b_-1|0>`, with `gamma_(j) = gamma_(j+1)`,
//! `c_(j) = c_(j+1)`, `beta_(j) = beta_j`, `b_(j) = b_j`.

mod product;
mod special;

pub use product::{nth_product, nth_product_exact, ProductCache};
pub use special::{
    apply_bracket, chiral_differential_apply, g_state, lie_bracket, ope_singular,
    ope_singular_with, q_state, translate, virasoro_state, OpeSingularPart,
};
