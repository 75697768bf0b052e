use serde::Serialize;

use super::disc::CoordTransform1;
use super::tracked::{evaluate_series, TrackedState};
use super::TransformError;
use crate::modes::{Mode, StateVector};
use crate::series::{Rational, Series1};
use crate::vertex::{translate, ProductCache};

/// Which transformation law is applied to the generating fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldRule {
    /// Log-normalized fermions, `c' = (t f'/f) c` and `b' = (f/t) g'(f) b`,
    /// with `g''(f) f'` on `:c b:` in the new beta.
    LogSecondDerivative,
    /// Log-normalized fermions with `-g'(f) u'/u` on `:c b:`, where
    /// `u = t f'/f`, plus the `d gamma` term that cancels the double pole
    /// left in `beta beta`.
    LogJacobian,
    /// Ordinary fermions, `c' = f' c` and `b' = g'(f) b`, with `g''(f) f'`
    /// on `:c b:`.
    Ordinary,
}

impl FieldRule {
    pub const ALL: [FieldRule; 3] = [
        FieldRule::LogSecondDerivative,
        FieldRule::LogJacobian,
        FieldRule::Ordinary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FieldRule::LogSecondDerivative => "log-second-derivative",
            FieldRule::LogJacobian => "log-jacobian",
            FieldRule::Ordinary => "ordinary",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == name)
    }
}

/// The four generating fields of one species, possibly in a transformed
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedFields {
    pub species: u32,
    pub gamma: TrackedState,
    pub c: TrackedState,
    pub b: TrackedState,
    pub beta: TrackedState,
}

impl TransformedFields {
    /// `gamma_0|0>`, `c_0|0>`, `b_-1|0>`, `beta_-1|0>`.
    pub fn generators(species: u32) -> Self {
        let one = |m: Mode| TrackedState::exact(StateVector::from_modes(&[m]));
        Self {
            species,
            gamma: one(Mode::gamma(species, 0)),
            c: one(Mode::c(species, 0)),
            b: one(Mode::b(species, -1)),
            beta: one(Mode::beta(species, -1)),
        }
    }

    /// In the order gamma, c, b, beta.
    pub fn as_array(&self) -> [&TrackedState; 4] {
        [&self.gamma, &self.c, &self.b, &self.beta]
    }

    pub fn names() -> [&'static str; 4] {
        ["gamma", "c", "b", "beta"]
    }
}

/// Coefficient series of the transformed fields, as functions of the old
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCoefficients {
    /// `f`
    pub coordinate: Series1,
    /// multiplies `c`
    pub c_factor: Series1,
    /// multiplies `b`; the inverse of `c_factor`
    pub b_factor: Series1,
    /// `g'(f(t))`, multiplying `beta`
    pub beta_factor: Series1,
    /// multiplies `:c b:` in the new beta
    pub cb_factor: Series1,
    /// multiplies `d gamma` in the new beta, when present
    pub dgamma_factor: Option<Series1>,
}

impl FieldCoefficients {
    pub fn new(t: &CoordTransform1, rule: FieldRule) -> Result<Self, TransformError> {
        let f = t.f();
        let d = t.order();
        if d < 4 {
            return Err(TransformError::OrderTooSmall {
                order: d,
                needed: 4,
            });
        }
        let fp = f.derive();
        let f_over_t = f.shift_down()?;
        let beta_factor = t.g().derive().compose(&f.truncate(d - 1))?;
        let second = || -> Result<Series1, TransformError> {
            let g2 = t.g().derive().derive();
            Ok(g2.compose(&f.truncate(d - 2))?.mul(&fp.truncate(d - 2))?)
        };
        let (c_factor, b_factor, cb_factor, dgamma_factor) = match rule {
            FieldRule::Ordinary => (fp.clone(), beta_factor.clone(), second()?, None),
            FieldRule::LogSecondDerivative => {
                let u = fp.mul(&f_over_t.unit_invert()?)?;
                (u, f_over_t.mul(&beta_factor)?, second()?, None)
            }
            FieldRule::LogJacobian => {
                let u = fp.mul(&f_over_t.unit_invert()?)?;
                let a = beta_factor.truncate(d - 2);
                let log_u = u.derive().mul(&u.truncate(d - 2).unit_invert()?)?;
                let h = a.mul(&log_u)?.neg();
                let ap = beta_factor.derive();
                // cancels the double pole H^2 - (A')^2 of beta beta; the
                // A'' - H' part undoes the shift between :A beta: and the
                // free-field ordering
                let num = ap.mul(&ap)?.sub(&h.mul(&h)?)?;
                let wick = num
                    .mul(&a.unit_invert()?)?
                    .scale(&Rational::new(1.into(), 2.into()));
                let phi = wick.truncate(d - 3).add(&ap.derive().sub(&h.derive())?)?;
                (u, f_over_t.mul(&beta_factor)?, h, Some(phi))
            }
        };
        Ok(Self {
            coordinate: f.clone(),
            c_factor,
            b_factor,
            beta_factor,
            cb_factor,
            dgamma_factor,
        })
    }
}

/// Rewrites `base` in the coordinate `f(gamma)`:
/// `gamma' = f(gamma)`, `c' = :u(gamma) c:`, `b' = :u(gamma)^-1 b:`,
/// `beta' = :g'(f(gamma)) beta: + ::h(gamma) c: b:` (+ `:phi(gamma) d gamma:`).
pub fn transform_fields_on(
    cache: &mut ProductCache,
    coefficients: &FieldCoefficients,
    base: &TransformedFields,
) -> TransformedFields {
    let x = &base.gamma;
    let nop = |cache: &mut ProductCache, a: &TrackedState, b: &TrackedState| {
        TrackedState::product(cache, a, -1, b)
    };
    let gamma = evaluate_series(cache, &coefficients.coordinate, x);
    let u = evaluate_series(cache, &coefficients.c_factor, x);
    let c = nop(cache, &u, &base.c);
    let binv = evaluate_series(cache, &coefficients.b_factor, x);
    let b = nop(cache, &binv, &base.b);
    let a = evaluate_series(cache, &coefficients.beta_factor, x);
    let mut beta = nop(cache, &a, &base.beta);
    let h = evaluate_series(cache, &coefficients.cb_factor, x);
    let hc = nop(cache, &h, &base.c);
    beta = beta.add(&nop(cache, &hc, &base.b));
    if let Some(phi) = &coefficients.dgamma_factor {
        let p = evaluate_series(cache, phi, x);
        let dx = TrackedState::with_floor(translate(x.known()), x.floor());
        beta = beta.add(&nop(cache, &p, &dx));
    }
    TransformedFields {
        species: base.species,
        gamma,
        c,
        b,
        beta,
    }
}

/// The transformed generators of species 1.
pub fn transform_fields1(
    t: &CoordTransform1,
    rule: FieldRule,
) -> Result<TransformedFields, TransformError> {
    transform_fields_species(t, rule, 1)
}

pub fn transform_fields_species(
    t: &CoordTransform1,
    rule: FieldRule,
    species: u32,
) -> Result<TransformedFields, TransformError> {
    let coefficients = FieldCoefficients::new(t, rule)?;
    let mut cache = ProductCache::new();
    Ok(transform_fields_on(
        &mut cache,
        &coefficients,
        &TransformedFields::generators(species),
    ))
}
