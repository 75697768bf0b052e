use num::Zero;

use super::TransformError;
use crate::series::{Rational, Series1};

/// A coordinate change `f(t) = a_1 t + a_2 t^2 + ...` of the formal disc
/// with `a_1 != 0`, together with its compositional inverse `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordTransform1 {
    f: Series1,
    g: Series1,
}

impl CoordTransform1 {
    pub fn new(f: Series1) -> Result<Self, TransformError> {
        if !f.coeff(0).is_zero() {
            return Err(TransformError::MovesBasePoint);
        }
        if f.order() == 0 || f.coeff(1).is_zero() {
            return Err(TransformError::Degenerate);
        }
        let g = f.comp_invert()?;
        Ok(Self { f, g })
    }

    pub fn identity(order: usize) -> Self {
        Self::new(Series1::variable(order)).expect("identity is valid")
    }

    pub fn scaling(order: usize, a: Rational) -> Result<Self, TransformError> {
        Self::new(Series1::monomial(order, 1, a))
    }

    pub fn f(&self) -> &Series1 {
        &self.f
    }

    pub fn g(&self) -> &Series1 {
        &self.g
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    /// `self ∘ inner`: the coordinate `f_self(f_inner(t))`.
    pub fn compose(&self, inner: &Self) -> Result<Self, TransformError> {
        Self::new(self.f.compose(&inner.f)?)
    }

    pub fn inverse(&self) -> Self {
        Self {
            f: self.g.clone(),
            g: self.f.clone(),
        }
    }

    pub fn is_linear(&self) -> bool {
        (2..=self.order()).all(|k| self.f.coeff(k).is_zero())
    }
}

/// `a_1 t + a_2 t^2 + ...` with `a_1` in `{±1, ±2, ±3}` and the higher
/// coefficients small integers or halves.
pub fn random_transform1(order: usize, rng: &mut impl rand::Rng) -> CoordTransform1 {
    let mut coeffs = vec![Rational::zero(); order + 1];
    if order >= 1 {
        let a = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        coeffs[1] = Rational::from_integer(a.into());
    }
    for c in coeffs.iter_mut().skip(2) {
        *c = Rational::new(
            rng.gen_range(-3..=3i64).into(),
            rng.gen_range(1..=2i64).into(),
        );
    }
    CoordTransform1::new(Series1::from_coeffs(order, coeffs)).expect("a_1 is nonzero")
}
