//! The Fock module of the rank-`N` beta-gamma / b-c system.
//!
//! States are rational combinations of normal-ordered creation monomials on
//! the vacuum. Modes act through the relations
//! `[beta_m, gamma_n] = delta_{m,-n}` and `[b_m, c_n]_+ = delta_{m,-n}`,
//! imposed for all index pairs, with Koszul signs for the odd modes.

mod grading;
mod mode;
mod monomial;
mod random;
mod state;
mod text;

pub use grading::{fermionic_charge_apply, grading_of, reduce_charge, Grading, GradingOf};
pub use mode::{Mode, ModeKind};
pub use monomial::NormalMonomial;
pub use random::{
    canonical_bracket, random_creation_mode, random_mode, random_state, supercommutator,
};
pub use state::{Gamma0Cutoff, StateVector, Truncated};
pub use text::{format_state, parse_state, ParseError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModeError {
    #[error("species {species} outside 1..={rank}")]
    SpeciesOutOfRange { species: u32, rank: u32 },
}

/// The rank-`N` system: `N` copies of beta-gamma and of b-c.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BgbcSystem {
    pub rank: u32,
}

impl BgbcSystem {
    pub fn new(rank: u32) -> Self {
        assert!(rank >= 1, "rank must be positive");
        Self { rank }
    }

    pub fn check_mode(&self, mode: Mode) -> Result<(), ModeError> {
        if (1..=self.rank).contains(&mode.species) {
            Ok(())
        } else {
            Err(ModeError::SpeciesOutOfRange {
                species: mode.species,
                rank: self.rank,
            })
        }
    }

    pub fn check_state(&self, v: &StateVector) -> Result<(), ModeError> {
        v.modes_present()
            .into_iter()
            .try_for_each(|m| self.check_mode(m))
    }

    /// Applies `mode` to `v`, dropping (and flagging) monomials whose
    /// gamma-zero degree exceeds the cutoff.
    pub fn apply_mode(
        &self,
        mode: Mode,
        v: &StateVector,
        cutoff: Gamma0Cutoff,
    ) -> Result<Truncated<StateVector>, ModeError> {
        self.check_mode(mode)?;
        self.check_state(v)?;
        Ok(v.apply_mode(mode, cutoff))
    }
}
