use num::Zero;
use serde::Serialize;

use super::disc::CoordTransform1;
use super::TransformError;
use crate::series::{Rational, Series2, SeriesError, Var};

/// One of the conditions defining the group of coordinate changes of the
/// bidisc that fix both coordinate axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Constraint {
    /// `rho(x)` has a constant term.
    ConstantInX,
    /// `rho(y)` has a constant term.
    ConstantInY,
    /// `rho(x)` has a term `y^j` with no `x`.
    PureYInX { degree: u32 },
    /// `rho(y)` has a term `x^i` with no `y`.
    PureXInY { degree: u32 },
    /// The coefficient of `x` in `rho(x)` is zero.
    LinearXVanishes,
    /// The coefficient of `y` in `rho(y)` is zero.
    LinearYVanishes,
}

/// `(x, y) -> (rho_x, rho_y)` preserving the base point and both axes,
/// with inverse `(theta_x, theta_y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordTransform2 {
    rho_x: Series2,
    rho_y: Series2,
    theta_x: Series2,
    theta_y: Series2,
}

pub fn constraint_violations(rho_x: &Series2, rho_y: &Series2) -> Vec<Constraint> {
    let mut out = Vec::new();
    if !rho_x.constant_term().is_zero() {
        out.push(Constraint::ConstantInX);
    }
    if !rho_y.constant_term().is_zero() {
        out.push(Constraint::ConstantInY);
    }
    for (i, j, _) in rho_x.terms() {
        if i == 0 && j > 0 {
            out.push(Constraint::PureYInX { degree: j });
        }
    }
    for (i, j, _) in rho_y.terms() {
        if j == 0 && i > 0 {
            out.push(Constraint::PureXInY { degree: i });
        }
    }
    if rho_x.coeff(1, 0).is_zero() {
        out.push(Constraint::LinearXVanishes);
    }
    if rho_y.coeff(0, 1).is_zero() {
        out.push(Constraint::LinearYVanishes);
    }
    out
}

impl CoordTransform2 {
    /// Checks the defining constraints and solves for the inverse degree by
    /// degree: the degree-`k` part of `rho_x(theta)` is `a_10` times the
    /// degree-`k` part of `theta_x` plus terms fixed by lower degrees.
    pub fn validate(rho_x: Series2, rho_y: Series2) -> Result<Self, TransformError> {
        if rho_x.order() != rho_y.order() {
            return Err(SeriesError::TruncationMismatch {
                left: rho_x.order(),
                right: rho_y.order(),
            }
            .into());
        }
        let violations = constraint_violations(&rho_x, &rho_y);
        if !violations.is_empty() {
            return Err(TransformError::Constraints(violations));
        }
        let d = rho_x.order();
        let ax = rho_x.coeff(1, 0);
        let ay = rho_y.coeff(0, 1);
        let mut theta_x = Series2::monomial(d, 1, 0, ax.recip());
        let mut theta_y = Series2::monomial(d, 0, 1, ay.recip());
        for k in 2..=d {
            let tx = theta_x.truncate(k);
            let ty = theta_y.truncate(k);
            let rx = rho_x.truncate(k).compose(&tx, &ty)?;
            let ry = rho_y.truncate(k).compose(&tx, &ty)?;
            let mut corr_x = Vec::new();
            let mut corr_y = Vec::new();
            for i in 0..=k as u32 {
                let j = k as u32 - i;
                corr_x.push((i, j, -rx.coeff(i, j) / &ax));
                corr_y.push((i, j, -ry.coeff(i, j) / &ay));
            }
            theta_x = theta_x.add(&Series2::from_terms(d, corr_x))?;
            theta_y = theta_y.add(&Series2::from_terms(d, corr_y))?;
        }
        Ok(Self {
            rho_x,
            rho_y,
            theta_x,
            theta_y,
        })
    }

    pub fn identity(order: usize) -> Self {
        Self::validate(
            Series2::variable(order, Var::X),
            Series2::variable(order, Var::Y),
        )
        .expect("identity is valid")
    }

    pub fn diagonal(order: usize, a: Rational, b: Rational) -> Result<Self, TransformError> {
        Self::validate(
            Series2::monomial(order, 1, 0, a),
            Series2::monomial(order, 0, 1, b),
        )
    }

    pub fn rho_x(&self) -> &Series2 {
        &self.rho_x
    }

    pub fn rho_y(&self) -> &Series2 {
        &self.rho_y
    }

    pub fn theta_x(&self) -> &Series2 {
        &self.theta_x
    }

    pub fn theta_y(&self) -> &Series2 {
        &self.theta_y
    }

    pub fn order(&self) -> usize {
        self.rho_x.order()
    }

    /// `self ∘ inner`: `(x, y) -> rho_self(rho_inner(x, y))`.
    pub fn compose(&self, inner: &Self) -> Result<Self, TransformError> {
        let x = self.rho_x.compose(&inner.rho_x, &inner.rho_y)?;
        let y = self.rho_y.compose(&inner.rho_x, &inner.rho_y)?;
        Self::validate(x, y)
    }

    pub fn inverse(&self) -> Result<Self, TransformError> {
        Self::validate(self.theta_x.clone(), self.theta_y.clone())
    }

    /// Applies the coordinate change to a function: `h(rho_x, rho_y)`.
    pub fn pull_back(&self, h: &Series2) -> Result<Series2, TransformError> {
        Ok(h.compose(&self.rho_x, &self.rho_y)?)
    }

    /// The unit `g_{m,n}` with `rho_x^m rho_y^n = x^m y^n g_{m,n}`. Known to
    /// total degree `D - 1`.
    pub fn unit_factor(&self, m: u32, n: u32) -> Series2 {
        let ux = self
            .rho_x
            .divide_by(Var::X)
            .expect("rho_x is divisible by x");
        let uy = self
            .rho_y
            .divide_by(Var::Y)
            .expect("rho_y is divisible by y");
        ux.pow(m as usize)
            .mul(&uy.pow(n as usize))
            .expect("same order")
    }

    /// Image of `((m, n), h)` under the induced map of log rings,
    /// `((m, n), g_{m,n} * h(rho))`. Both factors are taken to total
    /// degree `D - 1`.
    pub fn log_ring_image(
        &self,
        m: u32,
        n: u32,
        h: &Series2,
    ) -> Result<(u32, u32, Series2), TransformError> {
        let d = self.order().saturating_sub(1);
        let pulled = self.pull_back(h)?.truncate(d.min(h.order()));
        let unit = self.unit_factor(m, n).truncate(pulled.order());
        Ok((m, n, unit.mul(&pulled)?))
    }

    /// The two one-variable factors when `rho_x` depends only on `x` and
    /// `rho_y` only on `y`.
    pub fn diagonal_factors(&self) -> Option<(CoordTransform1, CoordTransform1)> {
        let x_only = self.rho_x.terms().all(|(_, j, _)| j == 0);
        let y_only = self.rho_y.terms().all(|(i, _, _)| i == 0);
        if !(x_only && y_only) {
            return None;
        }
        let fx = CoordTransform1::new(self.rho_x.restrict(Var::X)).ok()?;
        let fy = CoordTransform1::new(self.rho_y.restrict(Var::Y)).ok()?;
        Some((fx, fy))
    }

    pub fn is_identity(&self) -> bool {
        self.rho_x == Series2::variable(self.order(), Var::X)
            && self.rho_y == Series2::variable(self.order(), Var::Y)
    }
}

/// Builds `rho_x = x * (a + p(x, y))`, `rho_y = y * (b + q(x, y))` from
/// small random integers; always satisfies the constraints.
pub fn random_transform2(order: usize, rng: &mut impl rand::Rng) -> CoordTransform2 {
    let ux = random_unit2(order, rng);
    let uy = random_unit2(order, rng);
    let x = Series2::variable(order, Var::X);
    let y = Series2::variable(order, Var::Y);
    CoordTransform2::validate(x.mul(&ux).unwrap(), y.mul(&uy).unwrap())
        .expect("constraints hold by construction")
}

fn random_unit2(order: usize, rng: &mut impl rand::Rng) -> Series2 {
    let mut terms = vec![(
        0u32,
        0u32,
        Rational::from_integer(rng.gen_range(1..=3i64).into()),
    )];
    if rng.gen_bool(0.5) {
        terms[0].2 = -terms[0].2.clone();
    }
    for deg in 1..order as u32 {
        for i in 0..=deg {
            if rng.gen_bool(0.4) {
                let c = rng.gen_range(-3..=3i64);
                terms.push((i, deg - i, Rational::from_integer(c.into())));
            }
        }
    }
    Series2::from_terms(order, terms)
}
