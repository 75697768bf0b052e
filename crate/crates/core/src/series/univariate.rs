use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, Rational};
use super::{check_orders, SeriesError};

/// A power series `a_0 + a_1 t + ... + a_D t^D + O(t^{D+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series1 {
    // always exactly `order + 1` entries
    coeffs: Vec<Rational>,
}

impl Series1 {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Rational::one())
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        Self::monomial(order, 0, c)
    }

    /// The coordinate `t` itself.
    pub fn variable(order: usize) -> Self {
        Self::monomial(order, 1, Rational::one())
    }

    pub fn monomial(order: usize, k: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from leading coefficients; entries past `order` are dropped.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_ints(order: usize, coeffs: &[i64]) -> Self {
        Self::from_coeffs(order, coeffs.iter().map(|&c| rational::int(c)))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`; zero for any `k` past the order is a caller bug.
    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: Rational) {
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Forgets coefficients above `order` (which must not exceed the current order).
    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot raise precision by truncation"
        );
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        check_orders(self.order(), other.order())?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        check_orders(self.order(), other.order())?;
        let d = self.order();
        let mut out = Self::zero(d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=d - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self).expect("same order");
        }
        acc
    }

    /// Multiplicative inverse of a series with nonzero constant term,
    /// by forward substitution in `a * b = 1`.
    pub fn unit_invert(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = a0.recip();
        let d = self.order();
        let mut b = Self::zero(d);
        b.coeffs[0] = inv0.clone();
        for k in 1..=d {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &b.coeffs[k - j];
                }
            }
            b.coeffs[k] = -(acc * &inv0);
        }
        Ok(b)
    }

    /// `self(inner(t))`, evaluated by Horner's rule. `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        check_orders(self.order(), inner.order())?;
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroInnerConstant);
        }
        let d = self.order();
        let mut acc = Self::constant(d, self.coeffs[d].clone());
        for k in (0..d).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `self(g(t)) = t`, solved one
    /// coefficient at a time: the degree-`k` coefficient of `f(g)` is
    /// `a_1 b_k` plus terms that only involve `b_1 .. b_{k-1}`.
    pub fn comp_invert(&self) -> Result<Self, SeriesError> {
        let d = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        if d == 0 {
            return Ok(Self::zero(0));
        }
        let a1 = &self.coeffs[1];
        if a1.is_zero() {
            return Err(SeriesError::ZeroLinearCoefficient);
        }
        let mut g = Self::monomial(d, 1, a1.recip());
        for k in 2..=d {
            let partial = self.truncate(k).compose(&g.truncate(k))?;
            let residual = partial.coeffs[k].clone();
            g.coeffs[k] = -(residual / a1);
        }
        Ok(g)
    }

    /// Formal derivative; the result is known one degree less.
    pub fn derive(&self) -> Self {
        let d = self.order();
        if d == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=d)
                .map(|k| &self.coeffs[k] * Rational::from_integer(k.into()))
                .collect(),
        }
    }

    /// Divides by `t`; requires a zero constant term. The result is known
    /// one degree less.
    pub fn shift_down(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let d = self.order();
        if d == 0 {
            return Ok(Self::zero(0));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplies by `t`, keeping the order (the top coefficient drops out).
    pub fn shift_up(&self) -> Self {
        let d = self.order();
        let mut out = Self::zero(d);
        for k in 1..=d {
            out.coeffs[k] = self.coeffs[k - 1].clone();
        }
        out
    }

    /// Parses a polynomial in `g` (or `t`), e.g. `"g + 2/3*g^2 - g^5"`.
    pub fn parse_polynomial(text: &str, order: usize) -> Result<Self, SeriesError> {
        let mut out = Self::zero(order);
        for (exp, coeff) in parse_terms(text)? {
            if exp <= order {
                out.coeffs[exp] += coeff;
            }
        }
        Ok(out)
    }
}

fn parse_terms(text: &str) -> Result<Vec<(usize, Rational)>, SeriesError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(SeriesError::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
            terms.push(parse_term(&compact[start..i])?);
            start = i;
        }
    }
    Ok(terms)
}

fn parse_term(term: &str) -> Result<(usize, Rational), SeriesError> {
    let bad = || SeriesError::Parse(format!("cannot parse term `{term}`"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-Rational::one(), &term[1..]),
        Some(b'+') => (Rational::one(), &term[1..]),
        _ => (Rational::one(), term),
    };
    let var_pos = body.find(['g', 't', 'x']);
    let (coeff_text, exp) = match var_pos {
        None => (body, 0usize),
        Some(p) => {
            let rest = &body[p + 1..];
            let exp = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(bad)?
                    .parse::<usize>()
                    .map_err(|_| bad())?
            };
            (body[..p].trim_end_matches('*'), exp)
        }
    };
    let coeff = if coeff_text.is_empty() {
        Rational::one()
    } else {
        let (n, d) = coeff_text.split_once('/').unwrap_or((coeff_text, "1"));
        let n: num::BigInt = n.parse().map_err(|_| bad())?;
        let d: num::BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Rational::new(n, d)
    };
    Ok((exp, sign * coeff))
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = rational::to_display(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (k, mag.as_str()) {
                (0, m) => write!(f, "{m}")?,
                (1, "1") => write!(f, "g")?,
                (1, m) => write!(f, "{m}*g")?,
                (k, "1") => write!(f, "g^{k}")?,
                (k, m) => write!(f, "{m}*g^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(g^{})", self.order() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct Series1Repr {
    order: usize,
    coeffs: Vec<(usize, String)>,
}

impl Serialize for Series1 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Series1Repr {
            order: self.order(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, rational::to_canonical(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series1 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = Series1Repr::deserialize(d)?;
        let mut out = Series1::zero(repr.order);
        let mut last = None;
        for (k, text) in repr.coeffs {
            if k > repr.order {
                return Err(D::Error::custom(format!("exponent {k} exceeds order")));
            }
            if last.is_some_and(|l| l >= k) {
                return Err(D::Error::custom("exponents must be strictly increasing"));
            }
            last = Some(k);
            let c = rational::parse_canonical(&text).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficients are not stored"));
            }
            out.coeffs[k] = c;
        }
        Ok(out)
    }
}

/// `a_1 t + ... + a_D t^D` with `a_1` a nonzero small integer and the rest
/// small rationals; always compositionally invertible.
pub fn random_admissible(order: usize, rng: &mut impl rand::Rng) -> Series1 {
    let mut coeffs = vec![Rational::from_integer(0.into())];
    let mut a1 = rng.gen_range(-3..=3i64);
    if a1 == 0 {
        a1 = 1;
    }
    coeffs.push(Rational::from_integer(a1.into()));
    for _ in 2..=order {
        coeffs.push(Rational::new(
            rng.gen_range(-4..=4i64).into(),
            rng.gen_range(1..=3i64).into(),
        ));
    }
    coeffs.truncate(order + 1);
    Series1::from_coeffs(order, coeffs)
}
