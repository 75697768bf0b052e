use crate::modes::{Mode, NormalMonomial, StateVector};
use crate::series::{Rational, Series1};
use crate::vertex::ProductCache;

/// A state known only partially: every monomial that could be missing or
/// wrong has gamma number (`#gamma - #beta`) at least `floor`. Products
/// conserve the gamma number, which lets exactness be tracked through
/// vertex operations. Monomials at or above the floor are discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedState {
    known: StateVector,
    floor: Option<i64>,
}

impl TrackedState {
    pub fn exact(state: StateVector) -> Self {
        Self {
            known: state,
            floor: None,
        }
    }

    pub fn with_floor(state: StateVector, floor: Option<i64>) -> Self {
        let known = match floor {
            Some(f) => state.filter(|m| m.gamma_number() < f),
            None => state,
        };
        Self { known, floor }
    }

    /// `sum_k s_k gamma_0^k |0>` for one species; the terms past the series
    /// order are unknown.
    pub fn gamma_function(series: &Series1, species: u32) -> Self {
        let mut state = StateVector::zero();
        for (k, c) in series.coeffs().iter().enumerate() {
            let modes = vec![Mode::gamma(species, 0); k];
            state.add_scaled(&StateVector::from_modes(&modes), c);
        }
        Self::with_floor(state, Some(series.order() as i64 + 1))
    }

    pub fn known(&self) -> &StateVector {
        &self.known
    }

    /// Monomials with gamma number below the floor are exact.
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Lowest gamma number that the full (untruncated) state can contain.
    pub fn min_gamma_number(&self) -> i64 {
        let known = self.known.terms().map(|(m, _)| m.gamma_number()).min();
        match (known, self.floor) {
            (Some(k), Some(f)) => k.min(f),
            (Some(k), None) => k,
            (None, Some(f)) => f,
            (None, None) => i64::MAX,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = min_floor(self.floor, other.floor);
        Self::with_floor(self.known.add(&other.known), floor)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            known: self.known.scale(k),
            floor: self.floor,
        }
    }

    /// `A_(n) B`, with the floor of the result bounded by the floors of the
    /// factors shifted by the other factor's lowest gamma number.
    pub fn product(cache: &mut ProductCache, a: &Self, n: i64, b: &Self) -> Self {
        let from_a = a.floor.map(|f| f.saturating_add(b.min_gamma_number()));
        let from_b = b.floor.map(|f| f.saturating_add(a.min_gamma_number()));
        let floor = min_floor(from_a, from_b);
        Self::with_floor(cache.product(&a.known, n, &b.known), floor)
    }

    /// Compares the exact parts of two tracked states: monomials below
    /// both floors. Returns the first differing monomial.
    pub fn agrees_with(&self, other: &Self) -> Result<(), (NormalMonomial, Rational, Rational)> {
        let floor = min_floor(self.floor, other.floor);
        let diff = self.known.sub(&other.known);
        for (m, _) in diff.terms() {
            if floor.is_none_or(|f| m.gamma_number() < f) {
                return Err((m.clone(), self.known.coeff(m), other.known.coeff(m)));
            }
        }
        Ok(())
    }

    pub fn exact_part(&self) -> StateVector {
        self.known.clone()
    }
}

fn min_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `P(x) = sum_k p_k x^k` evaluated on a tracked state `x` with zero
/// vacuum component, using normal-ordered powers `x_(-1) x_(-1) ... |0>`.
pub fn evaluate_series(cache: &mut ProductCache, p: &Series1, x: &TrackedState) -> TrackedState {
    let qmin = x.min_gamma_number();
    assert!(qmin >= 1, "argument must have positive gamma number");
    let mut power = TrackedState::exact(StateVector::vacuum());
    let mut out = TrackedState::exact(StateVector::zero());
    for (k, c) in p.coeffs().iter().enumerate() {
        if k > 0 {
            power = TrackedState::product(cache, x, -1, &power);
        }
        out = out.add(&power.scale(c));
    }
    let truncation_floor = (p.order() as i64 + 1).saturating_mul(qmin);
    TrackedState::with_floor(out.known, min_floor(out.floor, Some(truncation_floor)))
}
