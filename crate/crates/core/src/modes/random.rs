use rand::Rng;

use super::mode::{Mode, ModeKind};
use super::state::StateVector;
use crate::series::Rational;

/// A mode of any kind with `species <= rank` and `|index| <= max_index`.
pub fn random_mode(rng: &mut impl Rng, rank: u32, max_index: i64) -> Mode {
    let kind = ModeKind::ALL[rng.gen_range(0..4)];
    Mode {
        kind,
        species: rng.gen_range(1..=rank),
        index: rng.gen_range(-max_index..=max_index),
    }
}

/// A creation mode (never annihilates the vacuum) of weight at most
/// `max_weight`.
pub fn random_creation_mode(rng: &mut impl Rng, rank: u32, max_weight: i64) -> Mode {
    loop {
        let m = random_mode(rng, rank, max_weight);
        if !m.is_annihilator() && m.weight() <= max_weight {
            return m;
        }
    }
}

/// Up to `max_terms` terms, each `k * m_1 ... m_j |0>` with `j <= max_modes`
/// random creation modes and `k` a small nonzero rational.
pub fn random_state(
    rng: &mut impl Rng,
    rank: u32,
    max_terms: usize,
    max_modes: usize,
    max_weight: i64,
) -> StateVector {
    let mut out = StateVector::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let len = rng.gen_range(0..=max_modes);
        let modes: Vec<Mode> = (0..len)
            .map(|_| random_creation_mode(rng, rank, max_weight))
            .collect();
        let mut num = rng.gen_range(-4..=4i64);
        if num == 0 {
            num = 1;
        }
        let k = Rational::new(num.into(), rng.gen_range(1..=3i64).into());
        out.add_scaled(&StateVector::from_modes(&modes), &k);
    }
    out
}

/// `a (b v) -+ b (a v)` with the sign `+` when both modes are odd.
pub fn supercommutator(a: Mode, b: Mode, v: &StateVector) -> StateVector {
    let ab = v.apply_mode_unbounded(b).apply_mode_unbounded(a);
    let ba = v.apply_mode_unbounded(a).apply_mode_unbounded(b);
    if a.kind.is_odd() && b.kind.is_odd() {
        ab.add(&ba)
    } else {
        ab.sub(&ba)
    }
}

/// The scalar `[a, b}` for the canonical relations: `[beta_m, gamma_n] =
/// delta_{m+n,0}`, `{b_m, c_n} = delta_{m+n,0}`, same species, all else 0.
pub fn canonical_bracket(a: Mode, b: Mode) -> i64 {
    if a.species != b.species || a.index + b.index != 0 {
        return 0;
    }
    use ModeKind::*;
    match (a.kind, b.kind) {
        (Beta, Gamma) => 1,
        (Gamma, Beta) => -1,
        (B, C) | (C, B) => 1,
        _ => 0,
    }
}
