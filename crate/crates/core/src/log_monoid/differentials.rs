use serde::Serialize;

use super::monoid::{FinGenMonoid, MonoidError};
use super::snf::{solve_in_lattice, IntMatrix};
use crate::modes::{Gamma0Cutoff, Mode, StateVector};
use crate::series::rational::ratio;
use crate::series::Rational;
use crate::vertex::{ope_singular, OpeSingularPart};

/// `d q` for each generator in a basis of `Q^gp`, and the pullback of each
/// `d q` along the chart `Q -> N^d`, `q -> x^q`, as a combination of the
/// `d x_i / x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogDiffPresentation {
    pub basis_labels: Vec<String>,
    pub basis: IntMatrix,
    /// `(generator, coordinates of d(generator) in the basis)`
    pub expressions: Vec<(Vec<i64>, Vec<i64>)>,
    /// `(generator, coefficients of d x_i / x_i)`
    pub pullback: Vec<(Vec<i64>, Vec<i64>)>,
    /// Present for rank-2 monoids: how the pair `(1,1), (-1,1)` sits in
    /// `Q^gp`.
    pub pq_check: Option<PqCheck>,
}

/// Compares the lattice spanned by `p = (1,1)` and `q = (-1,1)` with
/// `Q^gp`. The two agree only when `Q^gp` is the index-2 lattice
/// `x = y mod 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PqCheck {
    pub pq_index: i64,
    pub group_index: Option<i64>,
    pub pq_inside_group: bool,
    pub pq_generates_group: bool,
}

pub fn log_differentials(q: &FinGenMonoid) -> Result<LogDiffPresentation, MonoidError> {
    if !q.is_embedded() {
        return Err(MonoidError::HasRelations);
    }
    let d = q.rank();
    let basis = q.groupify().basis;
    let basis_labels = (1..=basis.len()).map(|i| format!("e{i}")).collect();
    let expressions = q
        .generators()
        .iter()
        .map(|g| {
            let coords = solve_in_lattice(&basis, d, g).expect("generator lies in Q^gp");
            (g.clone(), coords)
        })
        .collect();
    let pullback = q
        .generators()
        .iter()
        .map(|g| (g.clone(), g.clone()))
        .collect();
    let pq_check = (d == 2).then(|| {
        let pq = FinGenMonoid::new(vec![vec![1, 1], vec![-1, 1]]).expect("two generators");
        let inside = [[1, 1], [-1, 1]]
            .iter()
            .all(|v| solve_in_lattice(&basis, d, v).is_some());
        let group_index = q.index_in_ambient();
        let pq_index = pq.index_in_ambient().expect("full rank");
        PqCheck {
            pq_index,
            group_index,
            pq_inside_group: inside,
            pq_generates_group: inside && group_index == Some(pq_index),
        }
    });
    Ok(LogDiffPresentation {
        basis_labels,
        basis,
        expressions,
        pullback,
        pq_check,
    })
}

/// Renders a pullback row as `N dγ¹/γ¹ + dγ²/γ²`.
pub fn format_pullback(coeffs: &[i64]) -> String {
    let sup = ['¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let s = sup
            .get(i)
            .map_or_else(|| format!("^{}", i + 1), |c| c.to_string());
        let term = format!("dγ{s}/γ{s}");
        let sign = if c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if c.abs() != 1 {
            out.push_str(&format!("{} ", c.abs()));
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `dp = c¹₀ + c²₀`, `dq = c²₀ - c¹₀`, `dp* = (b¹₋₁ + b²₋₁)/2`,
/// `dq* = (b²₋₁ - b¹₋₁)/2`, all on the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordGenerators {
    pub dp: StateVector,
    pub dq: StateVector,
    pub dp_star: StateVector,
    pub dq_star: StateVector,
}

impl CliffordGenerators {
    pub fn new() -> Self {
        let st = |m: Mode, k: Rational| StateVector::from_modes(&[m]).scale(&k);
        let one = || ratio(1, 1);
        let half = ratio(1, 2);
        Self {
            dp: st(Mode::c(1, 0), one()).add(&st(Mode::c(2, 0), one())),
            dq: st(Mode::c(2, 0), one()).sub(&st(Mode::c(1, 0), one())),
            dp_star: st(Mode::b(1, -1), half.clone()).add(&st(Mode::b(2, -1), half.clone())),
            dq_star: st(Mode::b(2, -1), half.clone()).sub(&st(Mode::b(1, -1), half)),
        }
    }

    /// `ope_singular` of `{dp, dq} x {dp*, dq*}`.
    pub fn pairing(&self) -> [[OpeSingularPart; 2]; 2] {
        let cut = Gamma0Cutoff::UNBOUNDED;
        let ope = |a: &StateVector, b: &StateVector| ope_singular(a, b, cut);
        [
            [ope(&self.dp, &self.dp_star), ope(&self.dp, &self.dq_star)],
            [ope(&self.dq, &self.dp_star), ope(&self.dq, &self.dq_star)],
        ]
    }

    /// Simple-pole coefficients of the vacuum in the pairing; the identity
    /// matrix for a Clifford pairing.
    pub fn pairing_matrix(&self) -> [[Rational; 2]; 2] {
        let vac = StateVector::vacuum();
        let (mono, _) = vac.terms().next().expect("vacuum is one term");
        let coeff = |p: &OpeSingularPart| {
            p.products
                .first()
                .map_or_else(|| ratio(0, 1), |s| s.coeff(mono))
        };
        let p = self.pairing();
        [
            [coeff(&p[0][0]), coeff(&p[0][1])],
            [coeff(&p[1][0]), coeff(&p[1][1])],
        ]
    }

    /// The pairing is the identity and nothing beyond the simple pole appears.
    pub fn is_clifford(&self) -> bool {
        let p = self.pairing();
        let m = self.pairing_matrix();
        let id = |i: usize, j: usize| ratio(i64::from(i == j), 1);
        (0..2).all(|i| {
            (0..2).all(|j| {
                m[i][j] == id(i, j)
                    && p[i][j].products.len() <= 1
                    && p[i][j].products.first().is_none_or(|s| {
                        s.sub(&StateVector::vacuum().scale(&m[i][j])).is_zero()
                    })
            })
        })
    }
}

impl Default for CliffordGenerators {
    fn default() -> Self {
        Self::new()
    }
}
