use serde::Serialize;

use super::mode::{Mode, ModeKind};
use super::state::StateVector;
use crate::series::rational::Rational;

/// Conformal weight, fermionic charge and cyclic charge of a homogeneous state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Grading {
    pub weight: i64,
    pub fermion_charge: i64,
    /// Charge under the cyclic group, reduced into `0..modulus`.
    pub g_charge: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradingOf {
    Homogeneous(Grading),
    Inhomogeneous,
    /// The zero state is homogeneous of every degree.
    Zero,
}

pub fn reduce_charge(raw: i64, modulus: u32) -> u32 {
    raw.rem_euclid(modulus as i64) as u32
}

/// Common grading of all monomials of `v`, with the cyclic charge taken
/// mod `modulus`.
pub fn grading_of(v: &StateVector, modulus: u32) -> GradingOf {
    let mut common = None;
    for (m, _) in v.terms() {
        let g = Grading {
            weight: m.weight(),
            fermion_charge: m.fermion_charge(),
            g_charge: reduce_charge(m.g_weight(), modulus),
        };
        match common {
            None => common = Some(g),
            Some(c) if c != g => return GradingOf::Inhomogeneous,
            Some(_) => {}
        }
    }
    common.map_or(GradingOf::Zero, GradingOf::Homogeneous)
}

/// Applies `F = sum_n :c_n b_-n:` mode by mode. Only the odd modes already
/// present in `v` can contribute, so the sum is finite.
pub fn fermionic_charge_apply(v: &StateVector) -> StateVector {
    let mut out = StateVector::zero();
    for mode in v.modes_present() {
        match mode.kind {
            // n <= 0: c_n (b_-n v), with b_-n an annihilator hitting c_n
            ModeKind::C => {
                let n = mode.index;
                let inner = v.apply_mode_unbounded(Mode::b(mode.species, -n));
                out.add_scaled(
                    &inner.apply_mode_unbounded(mode),
                    &Rational::from_integer(1.into()),
                );
            }
            // n > 0: -b_-n (c_n v), with c_n an annihilator hitting b_-n
            ModeKind::B => {
                let n = -mode.index;
                let inner = v.apply_mode_unbounded(Mode::c(mode.species, n));
                out.add_scaled(
                    &inner.apply_mode_unbounded(mode),
                    &Rational::from_integer((-1).into()),
                );
            }
            _ => {}
        }
    }
    out
}
