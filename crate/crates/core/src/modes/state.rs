use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use super::mode::Mode;
use super::monomial::NormalMonomial;
use crate::series::rational::{self, Rational};

/// Bound on the total power of weight-zero gamma modes kept in a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gamma0Cutoff(Option<u32>);

impl Gamma0Cutoff {
    pub const UNBOUNDED: Gamma0Cutoff = Gamma0Cutoff(None);

    pub fn at(max_degree: u32) -> Self {
        Self(Some(max_degree))
    }

    pub fn bound(self) -> Option<u32> {
        self.0
    }

    pub fn admits(self, degree: u32) -> bool {
        self.0.is_none_or(|b| degree <= b)
    }
}

/// A value together with a flag recording whether a cutoff discarded terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated<T> {
    pub value: T,
    pub truncated: bool,
}

impl<T> Truncated<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            truncated: false,
        }
    }
}

/// A finite rational combination of normal-ordered monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct StateVector {
    // zero coefficients are never stored
    terms: BTreeMap<NormalMonomial, Rational>,
}

impl StateVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(NormalMonomial::vacuum())
    }

    pub fn from_monomial(m: NormalMonomial) -> Self {
        Self::from_term(m, Rational::one())
    }

    pub fn from_term(m: NormalMonomial, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    /// The state `m_1 m_2 ... m_k |0>`, with the rightmost mode applied first.
    pub fn from_modes(modes: &[Mode]) -> Self {
        modes
            .iter()
            .rev()
            .fold(Self::vacuum(), |acc, &m| acc.apply_mode_unbounded(m))
    }

    pub fn add_term(&mut self, m: NormalMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &StateVector, k: &Rational) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, k: &Rational) -> StateVector {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn neg(&self) -> StateVector {
        self.scale(&-Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &NormalMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_gamma0_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(NormalMonomial::gamma0_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest conformal weight among the monomials (0 for the zero state).
    pub fn max_weight(&self) -> i64 {
        self.terms
            .keys()
            .map(NormalMonomial::weight)
            .max()
            .unwrap_or(0)
    }

    /// Keeps only monomials accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&NormalMonomial) -> bool) -> StateVector {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops monomials whose gamma-zero degree exceeds the cutoff.
    pub fn truncate_gamma0(&self, cutoff: Gamma0Cutoff) -> Truncated<StateVector> {
        let value = self.filter(|m| cutoff.admits(m.gamma0_degree()));
        let truncated = value.len() != self.len();
        Truncated { value, truncated }
    }

    /// Applies one mode with no cutoff. Species are not range-checked here.
    pub fn apply_mode_unbounded(&self, mode: Mode) -> StateVector {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if mode.is_annihilator() {
                for (k, result) in m.annihilate(mode) {
                    out.add_term(result, c * Rational::from_integer(k.into()));
                }
            } else if let Some((sign, result)) = m.insert(mode) {
                out.add_term(result, c * Rational::from_integer(sign.into()));
            }
        }
        out
    }

    pub fn apply_mode(&self, mode: Mode, cutoff: Gamma0Cutoff) -> Truncated<StateVector> {
        self.apply_mode_unbounded(mode).truncate_gamma0(cutoff)
    }

    /// Applies `modes` right to left.
    pub fn apply_modes(&self, modes: &[Mode]) -> StateVector {
        modes
            .iter()
            .rev()
            .fold(self.clone(), |acc, &m| acc.apply_mode_unbounded(m))
    }

    /// All distinct modes appearing in any monomial.
    pub fn modes_present(&self) -> Vec<Mode> {
        let mut out: Vec<Mode> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(mode, _)| mode))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{} ", rational::to_display(&mag))?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
