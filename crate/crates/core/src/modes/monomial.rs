use std::fmt;

use super::mode::{Mode, ModeKind};

/// A product of creation modes on the vacuum, sorted in canonical mode
/// order with multiplicities. Odd modes occur at most once.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NormalMonomial {
    factors: Vec<(Mode, u32)>,
}

impl NormalMonomial {
    pub fn vacuum() -> Self {
        Self::default()
    }

    /// Builds a monomial from sorted, deduplicated creation factors.
    /// Returns `None` if the input is not in normal form.
    pub fn from_factors(factors: Vec<(Mode, u32)>) -> Option<Self> {
        let sorted = factors.windows(2).all(|w| w[0].0 < w[1].0);
        let valid = factors
            .iter()
            .all(|&(m, e)| e > 0 && !m.is_annihilator() && (!m.is_odd() || e == 1));
        (sorted && valid).then_some(Self { factors })
    }

    pub fn factors(&self) -> &[(Mode, u32)] {
        &self.factors
    }

    pub fn is_vacuum(&self) -> bool {
        self.factors.is_empty()
    }

    /// Modes with multiplicity, left to right.
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        self.factors
            .iter()
            .flat_map(|&(m, e)| std::iter::repeat_n(m, e as usize))
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    fn sum_by(&self, f: impl Fn(Mode) -> i64) -> i64 {
        self.factors.iter().map(|&(m, e)| f(m) * e as i64).sum()
    }

    pub fn weight(&self) -> i64 {
        self.sum_by(Mode::weight)
    }

    pub fn fermion_charge(&self) -> i64 {
        self.sum_by(Mode::fermion_charge)
    }

    pub fn g_weight(&self) -> i64 {
        self.sum_by(Mode::g_weight)
    }

    pub fn gamma_number(&self) -> i64 {
        self.sum_by(Mode::gamma_number)
    }

    /// Total power of weight-zero gamma modes, over all species.
    pub fn gamma0_degree(&self) -> u32 {
        self.factors
            .iter()
            .filter(|(m, _)| m.is_gamma_zero())
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn is_odd(&self) -> bool {
        self.odd_count() % 2 == 1
    }

    fn odd_count(&self) -> usize {
        self.factors.iter().filter(|(m, _)| m.is_odd()).count()
    }

    pub fn exponent(&self, mode: Mode) -> u32 {
        self.factors
            .binary_search_by(|(m, _)| m.cmp(&mode))
            .map(|k| self.factors[k].1)
            .unwrap_or(0)
    }

    pub fn has_kind(&self, kind: ModeKind) -> bool {
        self.factors.iter().any(|(m, _)| m.kind == kind)
    }

    /// Left-multiplies by a creation mode. Returns the Koszul sign and the
    /// new monomial, or `None` when an odd mode is repeated.
    pub(crate) fn insert(&self, mode: Mode) -> Option<(i64, NormalMonomial)> {
        debug_assert!(!mode.is_annihilator());
        let pos = self.factors.partition_point(|(m, _)| *m < mode);
        let mut factors = self.factors.clone();
        if pos < factors.len() && factors[pos].0 == mode {
            if mode.is_odd() {
                return None;
            }
            factors[pos].1 += 1;
            return Some((1, Self { factors }));
        }
        let sign = if mode.is_odd() {
            let passed = self.factors[..pos]
                .iter()
                .filter(|(m, _)| m.is_odd())
                .count();
            if passed % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            1
        };
        factors.insert(pos, (mode, 1));
        Some((sign, Self { factors }))
    }

    /// Applies an annihilator: the list of `(coefficient, monomial)` terms
    /// produced by commuting it through to the vacuum.
    pub(crate) fn annihilate(&self, mode: Mode) -> Vec<(i64, NormalMonomial)> {
        debug_assert!(mode.is_annihilator());
        let mut out = Vec::new();
        let mut odd_passed = 0usize;
        for (k, &(factor, e)) in self.factors.iter().enumerate() {
            if factor.is_odd() == mode.is_odd() {
                if let Some(c) = mode.contraction(factor) {
                    let sign = if mode.is_odd() && odd_passed % 2 == 1 {
                        -1
                    } else {
                        1
                    };
                    let mut factors = self.factors.clone();
                    if e == 1 {
                        factors.remove(k);
                    } else {
                        factors[k].1 -= 1;
                    }
                    out.push((sign * c * e as i64, Self { factors }));
                }
            }
            if factor.is_odd() {
                odd_passed += 1;
            }
        }
        out
    }

    /// Splits off the leftmost mode: `self = first * rest`.
    pub fn split_first(&self) -> Option<(Mode, NormalMonomial)> {
        let &(first, e) = self.factors.first()?;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(0);
        } else {
            factors[0].1 -= 1;
        }
        Some((first, Self { factors }))
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(m, e) in &self.factors {
            if e == 1 {
                write!(f, "{m} ")?;
            } else {
                write!(f, "{m}^{e} ")?;
            }
        }
        write!(f, "|0>")
    }
}

impl serde::Serialize for NormalMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
