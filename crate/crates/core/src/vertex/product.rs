use std::collections::HashMap;

use crate::modes::{Gamma0Cutoff, Mode, NormalMonomial, StateVector, Truncated};
use crate::series::rational::{binomial, Rational};

/// Memo table for n-th products of monomials. Owned by one caller at a
/// time; share results, not caches, across threads.
#[derive(Default)]
pub struct ProductCache {
    memo: HashMap<(NormalMonomial, i64, NormalMonomial), StateVector>,
}

impl ProductCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// `A_(n) B` with no cutoff.
    pub fn product(&mut self, a: &StateVector, n: i64, b: &StateVector) -> StateVector {
        let mut out = StateVector::zero();
        for (ma, ca) in a.terms() {
            let partial = self.monomial_on_state(ma, n, b);
            out.add_scaled(&partial, ca);
        }
        out
    }

    fn monomial_on_state(&mut self, m: &NormalMonomial, n: i64, c: &StateVector) -> StateVector {
        let mut out = StateVector::zero();
        for (mc, cc) in c.terms() {
            let partial = self.monomial_product(m, n, mc);
            out.add_scaled(&partial, cc);
        }
        out
    }

    /// `(x_(j) R)_(n) C` for the leftmost mode `x` of `m`, expanded by the
    /// Borcherds identity
    /// `sum_k (-1)^k C(j,k) [x_(j-k) R_(n+k) C - (-1)^j p(x,R) R_(j+n-k) x_(k) C]`.
    /// Both sums are finite: a product `A_(m) B` vanishes once `m` reaches
    /// `wt A + wt B` because every state has non-negative weight.
    fn monomial_product(&mut self, m: &NormalMonomial, n: i64, c: &NormalMonomial) -> StateVector {
        let Some((x, rest)) = m.split_first() else {
            return if n == -1 {
                StateVector::from_monomial(c.clone())
            } else {
                StateVector::zero()
            };
        };
        let key = (m.clone(), n, c.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }

        let j = x.product_index();
        let wx = x.kind.field_weight();
        let wr = rest.weight();
        let wc = c.weight();
        let c_state = StateVector::from_monomial(c.clone());
        let mut out = StateVector::zero();

        let kmax1 = wr + wc - 1 - n;
        for k in 0..=kmax1.max(-1) {
            let coeff = signed_binomial(j, k);
            let inner = self.monomial_on_state(&rest, n + k, &c_state);
            if inner.is_zero() {
                continue;
            }
            let mode = Mode::from_product_index(x.kind, x.species, j - k);
            out.add_scaled(&inner.apply_mode_unbounded(mode), &coeff);
        }

        let parity = if x.is_odd() && rest.is_odd() { -1 } else { 1 };
        let outer_sign = if j.rem_euclid(2) == 1 {
            -parity
        } else {
            parity
        };
        let kmax2 = wx + wc - 1;
        for k in 0..=kmax2.max(-1) {
            let acted =
                c_state.apply_mode_unbounded(Mode::from_product_index(x.kind, x.species, k));
            if acted.is_zero() {
                continue;
            }
            let coeff = signed_binomial(j, k) * Rational::from_integer((-outer_sign).into());
            let inner = self.monomial_on_state(&rest, j + n - k, &acted);
            out.add_scaled(&inner, &coeff);
        }

        self.memo.insert(key, out.clone());
        out
    }
}

/// `(-1)^k C(j, k)` as a rational.
fn signed_binomial(j: i64, k: i64) -> Rational {
    let b = binomial(j, k as u64);
    let b = if k % 2 == 1 { -b } else { b };
    Rational::from_integer(b)
}

/// `A_(n) B`, truncated to the gamma-zero cutoff. Intermediate states are
/// kept exact; only the result is cut.
pub fn nth_product(
    a: &StateVector,
    n: i64,
    b: &StateVector,
    cutoff: Gamma0Cutoff,
) -> Truncated<StateVector> {
    ProductCache::new().product(a, n, b).truncate_gamma0(cutoff)
}

/// `A_(n) B` with no cutoff.
pub fn nth_product_exact(a: &StateVector, n: i64, b: &StateVector) -> StateVector {
    ProductCache::new().product(a, n, b)
}
