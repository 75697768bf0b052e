use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, Rational};
use super::{check_orders, SeriesError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// A power series in `x, y` truncated at total degree `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series2 {
    order: usize,
    // sparse; zero coefficients are never stored
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Series2 {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Rational::one())
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        Self::monomial(order, 0, 0, c)
    }

    pub fn variable(order: usize, var: Var) -> Self {
        match var {
            Var::X => Self::monomial(order, 1, 0, Rational::one()),
            Var::Y => Self::monomial(order, 0, 1, Rational::one()),
        }
    }

    pub fn monomial(order: usize, i: u32, j: u32, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.add_term(i, j, c);
        s
    }

    /// Builds a series from `(i, j, coefficient)` triples; repeated
    /// exponents accumulate and terms above the order are dropped.
    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (u32, u32, Rational)>) -> Self {
        let mut s = Self::zero(order);
        for (i, j, c) in terms {
            s.add_term(i, j, c);
        }
        s
    }

    pub fn from_int_terms(order: usize, terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(
            order,
            terms.iter().map(|&(i, j, c)| (i, j, rational::int(c))),
        )
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if (i + j) as usize > self.order || c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order, "cannot raise precision by truncation");
        Self::from_terms(order, self.terms().map(|(i, j, c)| (i, j, c.clone())))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        check_orders(self.order, other.order)?;
        let mut out = self.clone();
        for (i, j, c) in other.terms() {
            out.add_term(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.order, self.terms().map(|(i, j, c)| (i, j, c * k)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        check_orders(self.order, other.order)?;
        let mut out = Self::zero(self.order);
        for (i1, j1, a) in self.terms() {
            for (i2, j2, b) in other.terms() {
                out.add_term(i1 + i2, j1 + j2, a * b);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// Multiplicative inverse via the geometric series of `1 - a/a_00`.
    pub fn unit_invert(&self) -> Result<Self, SeriesError> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = a0.recip();
        // a = a0 (1 + e) with e(0, 0) = 0
        let mut e = self.scale(&inv0);
        e.add_term(0, 0, -Rational::one());
        let minus_e = e.neg();
        let mut sum = Self::one(self.order);
        let mut power = Self::one(self.order);
        for _ in 0..self.order {
            power = power.mul(&minus_e)?;
            sum = sum.add(&power)?;
        }
        Ok(sum.scale(&inv0))
    }

    /// `self(p(x, y), q(x, y))`; both substitutions must vanish at the origin.
    pub fn compose(&self, p: &Self, q: &Self) -> Result<Self, SeriesError> {
        check_orders(self.order, p.order)?;
        check_orders(self.order, q.order)?;
        if !p.constant_term().is_zero() || !q.constant_term().is_zero() {
            return Err(SeriesError::NonzeroInnerConstant);
        }
        let d = self.order;
        let powers = |s: &Self| {
            let mut out = vec![Self::one(d)];
            for k in 1..=d {
                out.push(out[k - 1].mul(s).expect("same order"));
            }
            out
        };
        let pp = powers(p);
        let qp = powers(q);
        let mut out = Self::zero(d);
        for (i, j, c) in self.terms() {
            let term = pp[i as usize].mul(&qp[j as usize])?.scale(c);
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Partial derivative; the result is known one total degree less.
    pub fn derive(&self, var: Var) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(order);
        for (i, j, c) in self.terms() {
            match var {
                Var::X if i > 0 => out.add_term(i - 1, j, c * Rational::from_integer(i.into())),
                Var::Y if j > 0 => out.add_term(i, j - 1, c * Rational::from_integer(j.into())),
                _ => {}
            }
        }
        out
    }

    /// Exact division by `var`, defined when every term contains it.
    /// The result is known one total degree less.
    pub fn divide_by(&self, var: Var) -> Option<Self> {
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(order);
        for (i, j, c) in self.terms() {
            match var {
                Var::X if i == 0 => return None,
                Var::Y if j == 0 => return None,
                Var::X => out.add_term(i - 1, j, c.clone()),
                Var::Y => out.add_term(i, j - 1, c.clone()),
            }
        }
        Some(out)
    }

    /// The series in one variable obtained by setting the other to zero.
    pub fn restrict(&self, keep: Var) -> super::Series1 {
        let mut out = super::Series1::zero(self.order);
        for (i, j, c) in self.terms() {
            match keep {
                Var::X if j == 0 => out.set_coeff(i as usize, c.clone()),
                Var::Y if i == 0 => out.set_coeff(j as usize, c.clone()),
                _ => {}
            }
        }
        out
    }

    /// Embeds a one-variable series as a series in `var`.
    pub fn from_series1(s: &super::Series1, var: Var) -> Self {
        Self::from_terms(
            s.order(),
            s.coeffs().iter().enumerate().map(|(k, c)| match var {
                Var::X => (k as u32, 0, c.clone()),
                Var::Y => (0, k as u32, c.clone()),
            }),
        )
    }
}

impl fmt::Display for Series2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|&(i, j, _)| (i + j, std::cmp::Reverse(i)));
        for (n, (i, j, c)) in terms.iter().enumerate() {
            let mag = rational::to_display(&c.abs());
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut vars = Vec::new();
            for (name, e) in [("x", *i), ("y", *j)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    e => vars.push(format!("{name}^{e}")),
                }
            }
            match (vars.is_empty(), mag.as_str()) {
                (true, m) => write!(f, "{m}")?,
                (false, "1") => write!(f, "{}", vars.join("*"))?,
                (false, m) => write!(f, "{m}*{}", vars.join("*"))?,
            }
        }
        if terms.is_empty() {
            write!(f, "0")?;
        }
        write!(f, " + O(deg {})", self.order + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct Series2Repr {
    order: usize,
    coeffs: Vec<(u32, u32, String)>,
}

impl Serialize for Series2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Series2Repr {
            order: self.order,
            coeffs: self
                .terms()
                .map(|(i, j, c)| (i, j, rational::to_canonical(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = Series2Repr::deserialize(d)?;
        let mut out = Series2::zero(repr.order);
        let mut last = None;
        for (i, j, text) in repr.coeffs {
            if (i + j) as usize > repr.order {
                return Err(D::Error::custom(format!("term ({i},{j}) exceeds order")));
            }
            if last.is_some_and(|l| l >= (i, j)) {
                return Err(D::Error::custom("exponents must be strictly increasing"));
            }
            last = Some((i, j));
            let c = rational::parse_canonical(&text).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficients are not stored"));
            }
            out.terms.insert((i, j), c);
        }
        Ok(out)
    }
}
