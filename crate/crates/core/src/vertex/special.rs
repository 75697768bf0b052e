use serde::Serialize;

use super::product::ProductCache;
use crate::modes::{Gamma0Cutoff, Mode, ModeKind, StateVector};
use crate::series::rational::{binomial, int, Rational};

/// Translation `T`, acting as the derivation `[T, x_(j)] = -j x_(j-1)` on
/// each creation mode of a monomial.
pub fn translate(a: &StateVector) -> StateVector {
    let mut out = StateVector::zero();
    for (m, c) in a.terms() {
        let modes: Vec<Mode> = m.modes().collect();
        for (i, x) in modes.iter().enumerate() {
            let j = x.product_index();
            if j == 0 {
                continue;
            }
            let mut shifted = modes.clone();
            shifted[i] = Mode::from_product_index(x.kind, x.species, j - 1);
            out.add_scaled(&StateVector::from_modes(&shifted), &(c * int(-j)));
        }
    }
    out
}

/// The chiral de Rham differential `d = sum_n :beta_n c_-n:`. Only modes
/// already present in `v` can be contracted, so the sum is finite.
pub fn chiral_differential_apply(v: &StateVector) -> StateVector {
    let mut out = StateVector::zero();
    for mode in v.modes_present() {
        let s = mode.species;
        match mode.kind {
            // n >= 0: c_-n (beta_n v), with beta_n hitting gamma_-n
            ModeKind::Gamma => {
                let n = -mode.index;
                let inner = v.apply_mode_unbounded(Mode::beta(s, n));
                out = out.add(&inner.apply_mode_unbounded(Mode::c(s, -n)));
            }
            // n < 0: beta_n (c_-n v), with c_-n hitting b_n
            ModeKind::B => {
                let n = mode.index;
                let inner = v.apply_mode_unbounded(Mode::c(s, -n));
                out = out.add(&inner.apply_mode_unbounded(Mode::beta(s, n)));
            }
            _ => {}
        }
    }
    out
}

/// `sum_i gamma^i_-1 beta^i_-1 + c^i_-1 b^i_-1` on the vacuum.
pub fn virasoro_state(rank: u32) -> StateVector {
    let mut out = StateVector::zero();
    for i in 1..=rank {
        out = out.add(&StateVector::from_modes(&[
            Mode::gamma(i, -1),
            Mode::beta(i, -1),
        ]));
        out = out.add(&StateVector::from_modes(&[Mode::c(i, -1), Mode::b(i, -1)]));
    }
    out
}

/// `sum_i beta^i_-1 c^i_0`; its zero mode is the chiral differential.
pub fn q_state(rank: u32) -> StateVector {
    (1..=rank).fold(StateVector::zero(), |acc, i| {
        acc.add(&StateVector::from_modes(&[
            Mode::beta(i, -1),
            Mode::c(i, 0),
        ]))
    })
}

/// `sum_i b^i_-1 gamma^i_-1`.
pub fn g_state(rank: u32) -> StateVector {
    (1..=rank).fold(StateVector::zero(), |acc, i| {
        acc.add(&StateVector::from_modes(&[
            Mode::b(i, -1),
            Mode::gamma(i, -1),
        ]))
    })
}

/// Singular part of the OPE `A(z) B(w)`: entry `n` is `A_(n) B`, the
/// coefficient of `(z-w)^(-n-1)`. Trailing zero entries are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpeSingularPart {
    pub products: Vec<StateVector>,
    pub truncated: bool,
}

impl OpeSingularPart {
    pub fn is_regular(&self) -> bool {
        self.products.is_empty()
    }

    /// `(pole order, state)` pairs with nonzero state.
    pub fn poles(&self) -> Vec<(usize, &StateVector)> {
        self.products
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(n, s)| (n + 1, s))
            .collect()
    }
}

/// All `A_(n) B` for `n >= 0`. Beyond `wt A + wt B` every product vanishes.
pub fn ope_singular(a: &StateVector, b: &StateVector, cutoff: Gamma0Cutoff) -> OpeSingularPart {
    let mut cache = ProductCache::new();
    ope_singular_with(&mut cache, a, b, cutoff)
}

pub fn ope_singular_with(
    cache: &mut ProductCache,
    a: &StateVector,
    b: &StateVector,
    cutoff: Gamma0Cutoff,
) -> OpeSingularPart {
    let bound = a.max_weight() + b.max_weight();
    let mut products = Vec::new();
    let mut truncated = false;
    for n in 0..=bound {
        let cut = cache.product(a, n, b).truncate_gamma0(cutoff);
        truncated |= cut.truncated;
        products.push(cut.value);
    }
    while products.last().is_some_and(StateVector::is_zero) {
        products.pop();
    }
    OpeSingularPart {
        products,
        truncated,
    }
}

/// Right side of the commutator formula
/// `[A_(m), B_(k)] = sum_{n >= 0} C(m, n) (A_(n) B)_(m+k-n)`, as a list of
/// `(state, mode index)` pairs with the binomial folded into the state.
pub fn lie_bracket(a: &StateVector, m: i64, b: &StateVector, k: i64) -> Vec<(StateVector, i64)> {
    let mut cache = ProductCache::new();
    let bound = a.max_weight() + b.max_weight();
    let mut out = Vec::new();
    for n in 0..=bound {
        let coeff = Rational::from_integer(binomial(m, n as u64));
        if num::Zero::is_zero(&coeff) {
            continue;
        }
        let prod = cache.product(a, n, b);
        if !prod.is_zero() {
            out.push((prod.scale(&coeff), m + k - n));
        }
    }
    out
}

/// Applies a bracket (as returned by [`lie_bracket`]) to a state.
pub fn apply_bracket(bracket: &[(StateVector, i64)], v: &StateVector) -> StateVector {
    let mut cache = ProductCache::new();
    bracket.iter().fold(StateVector::zero(), |acc, (s, idx)| {
        acc.add(&cache.product(s, *idx, v))
    })
}
