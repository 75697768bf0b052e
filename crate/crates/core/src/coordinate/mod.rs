//! Coordinate changes of the formal disc and bidisc and their action on
//! the generating fields.

mod bidisc;
mod disc;
mod fields;
mod tracked;
mod verify;

pub use bidisc::{constraint_violations, random_transform2, Constraint, CoordTransform2};
pub use disc::{random_transform1, CoordTransform1};
pub use fields::{
    transform_fields1, transform_fields_on, transform_fields_species, FieldCoefficients, FieldRule,
    TransformedFields,
};
pub use tracked::{evaluate_series, TrackedState};
pub use verify::{
    ope_report, species_virasoro, transformed_virasoro, verify_tilde_ope,
    verify_virasoro_invariance, virasoro_report, OpeReport, PairReport, PoleCheck, VirasoroReport,
};

use thiserror::Error;

use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("transform moves the base point (nonzero constant term)")]
    MovesBasePoint,
    #[error("transform is not invertible: linear coefficient a1 = 0")]
    Degenerate,
    #[error("constraints violated: {0:?}")]
    Constraints(Vec<Constraint>),
    #[error("series order {order} too small, need at least {needed}")]
    OrderTooSmall { order: usize, needed: usize },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{parse_state, Gamma0Cutoff, StateVector};
    use crate::series::rational::{int, ratio};
    use crate::series::{Series1, Series2, Var};

    fn s2(order: usize, terms: &[(u32, u32, i64)]) -> Series2 {
        Series2::from_int_terms(order, terms)
    }

    #[test]
    fn validation_examples() {
        let id = CoordTransform2::identity(4);
        assert!(id.is_identity());
        assert_eq!(id.theta_x(), &Series2::variable(4, Var::X));

        let t =
            CoordTransform2::validate(s2(4, &[(1, 0, 2), (1, 1, 1)]), Series2::variable(4, Var::Y))
                .unwrap();
        assert_eq!(t.theta_x().coeff(1, 0), ratio(1, 2));
        assert_eq!(t.theta_x().coeff(1, 1), ratio(-1, 4));
        assert_eq!(t.theta_x().coeff(1, 2), ratio(1, 8));

        let err =
            CoordTransform2::validate(Series2::variable(3, Var::Y), Series2::variable(3, Var::Y))
                .unwrap_err();
        assert_eq!(
            err,
            TransformError::Constraints(vec![
                Constraint::PureYInX { degree: 1 },
                Constraint::LinearXVanishes
            ])
        );
        assert!(matches!(
            CoordTransform2::validate(s2(3, &[(1, 0, 1), (0, 0, 1)]), s2(3, &[(0, 1, 1), (2, 0, 1)])),
            Err(TransformError::Constraints(v)) if v == vec![Constraint::ConstantInX, Constraint::PureXInY { degree: 2 }]
        ));
    }

    #[test]
    fn group_examples() {
        let a = CoordTransform2::diagonal(4, int(2), int(3)).unwrap();
        let b = CoordTransform2::diagonal(4, int(5), ratio(1, 7)).unwrap();
        assert_eq!(
            a.compose(&b).unwrap(),
            CoordTransform2::diagonal(4, int(10), ratio(3, 7)).unwrap()
        );
        let t = CoordTransform2::validate(
            s2(5, &[(1, 0, 2), (1, 1, 1), (2, 0, -1)]),
            s2(5, &[(0, 1, 1), (1, 1, 3)]),
        )
        .unwrap();
        assert!(t.compose(&t.inverse().unwrap()).unwrap().is_identity());
        assert!(t.inverse().unwrap().compose(&t).unwrap().is_identity());
    }

    #[test]
    fn unit_factor_examples() {
        let id = CoordTransform2::identity(4);
        assert_eq!(id.unit_factor(3, 2), Series2::one(3));
        let d = CoordTransform2::diagonal(4, int(2), int(3)).unwrap();
        assert_eq!(d.unit_factor(1, 2), Series2::constant(3, int(18)));
        let t =
            CoordTransform2::validate(s2(4, &[(1, 0, 1), (1, 1, 1)]), Series2::variable(4, Var::Y))
                .unwrap();
        assert_eq!(
            t.unit_factor(2, 0),
            s2(3, &[(0, 0, 1), (0, 1, 2), (0, 2, 1)])
        );
    }

    #[test]
    fn diagonal_factors_split() {
        let t =
            CoordTransform2::validate(s2(5, &[(1, 0, 1), (2, 0, 1)]), s2(5, &[(0, 1, 2)])).unwrap();
        let (fx, fy) = t.diagonal_factors().unwrap();
        assert_eq!(fx.f(), &Series1::from_ints(5, &[0, 1, 1]));
        assert_eq!(fy.f(), &Series1::from_ints(5, &[0, 2]));
        let mixed =
            CoordTransform2::validate(s2(3, &[(1, 0, 1), (1, 1, 1)]), s2(3, &[(0, 1, 1)])).unwrap();
        assert!(mixed.diagonal_factors().is_none());
    }

    #[test]
    fn one_variable_validation() {
        assert_eq!(
            CoordTransform1::new(Series1::from_ints(4, &[0, 0, 1])),
            Err(TransformError::Degenerate)
        );
        assert_eq!(
            CoordTransform1::new(Series1::from_ints(4, &[1, 1])),
            Err(TransformError::MovesBasePoint)
        );
        let t = CoordTransform1::new(Series1::from_ints(6, &[0, 1, 1])).unwrap();
        assert_eq!(t.g(), &Series1::from_ints(6, &[0, 1, -1, 2, -5, 14, -42]));
    }

    #[test]
    fn scaling_transforms_fields_linearly() {
        let st = |s: &str| parse_state(s).unwrap();
        for rule in FieldRule::ALL {
            let id = transform_fields1(&CoordTransform1::identity(6), rule).unwrap();
            assert_eq!(id.gamma.known(), &st("g[1,0]|0>"));
            assert_eq!(id.c.known(), &st("C[1,0]|0>"));
            assert_eq!(id.b.known(), &st("B[1,-1]|0>"));
            assert_eq!(id.beta.known(), &st("b[1,-1]|0>"));

            let sc =
                transform_fields1(&CoordTransform1::scaling(6, int(3)).unwrap(), rule).unwrap();
            assert_eq!(sc.gamma.known(), &st("3 g[1,0]|0>"));
            assert_eq!(sc.beta.known(), &st("1/3 b[1,-1]|0>"));
        }
        let sc = transform_fields1(
            &CoordTransform1::scaling(6, int(3)).unwrap(),
            FieldRule::LogSecondDerivative,
        )
        .unwrap();
        assert_eq!(sc.c.known(), &st("C[1,0]|0>"));
        assert_eq!(sc.b.known(), &st("B[1,-1]|0>"));
    }

    #[test]
    fn quadratic_transform_has_cb_correction() {
        let t = CoordTransform1::new(Series1::from_ints(8, &[0, 1, 1])).unwrap();
        let coeffs = FieldCoefficients::new(&t, FieldRule::LogSecondDerivative).unwrap();
        assert_eq!(coeffs.cb_factor.coeff(0), &int(-2));
        let fields = transform_fields1(&t, FieldRule::LogSecondDerivative).unwrap();
        let cb =
            StateVector::from_modes(&[crate::modes::Mode::c(1, 0), crate::modes::Mode::b(1, -1)]);
        let (mono, sign) = cb.terms().next().unwrap();
        assert_eq!(fields.beta.known().coeff(mono), int(-2) * sign);
    }

    #[test]
    fn linear_transforms_pass_every_check() {
        for t in [
            CoordTransform1::identity(8),
            CoordTransform1::scaling(8, int(2)).unwrap(),
        ] {
            for rule in FieldRule::ALL {
                assert!(
                    verify_tilde_ope(&t, rule, Gamma0Cutoff::at(8))
                        .unwrap()
                        .pass
                );
                assert!(
                    verify_virasoro_invariance(&t, rule, Gamma0Cutoff::at(8))
                        .unwrap()
                        .pass
                );
            }
        }
    }

    #[test]
    fn nonlinear_transform_outcomes() {
        let t = CoordTransform1::new(Series1::from_ints(8, &[0, 1, 1])).unwrap();
        let cut = Gamma0Cutoff::at(8);
        let printed = verify_tilde_ope(&t, FieldRule::LogSecondDerivative, cut).unwrap();
        let failing: Vec<_> = printed
            .pairs
            .iter()
            .filter(|p| !p.pass)
            .map(|p| (p.left, p.right))
            .collect();
        assert_eq!(failing, vec![("c", "beta"), ("b", "beta")]);
        assert!(
            verify_tilde_ope(&t, FieldRule::LogJacobian, cut)
                .unwrap()
                .pass
        );
        assert!(
            !verify_virasoro_invariance(&t, FieldRule::LogJacobian, cut)
                .unwrap()
                .pass
        );
        assert!(verify_tilde_ope(&t, FieldRule::Ordinary, cut).unwrap().pass);
        assert!(
            verify_virasoro_invariance(&t, FieldRule::Ordinary, cut)
                .unwrap()
                .pass
        );
    }
}
