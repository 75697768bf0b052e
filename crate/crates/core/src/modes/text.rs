//! Text and JSON forms of states.
//!
//! Text: `2/3 b[1,-1] g[2,0]^3 |0> - C[1,0] |0>`, where `b`, `g` are the
//! bosonic beta/gamma modes and `B`, `C` the fermionic b/c modes, each
//! written `letter[species,index]`. Modes in a term are applied right to
//! left, so any order is accepted; the canonical printer emits normal order.

use std::fmt;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::mode::{Mode, ModeKind};
use super::monomial::NormalMonomial;
use super::state::StateVector;
use crate::series::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub input: String,
    pub span: std::ops::Range<usize>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let token = self.input.get(self.span.clone()).unwrap_or("");
        write!(
            f,
            "{} at {}..{} (`{}`) in `{}`",
            self.message, self.span.start, self.span.end, token, self.input
        )
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn error(&self, message: impl Into<String>, start: usize) -> ParseError {
        let end = if start < self.text.len() {
            let width = self.text[start..].chars().next().map_or(1, char::len_utf8);
            (start + width).max(self.pos).min(self.text.len())
        } else {
            self.text.len()
        };
        ParseError {
            message: message.into(),
            input: self.text.to_string(),
            span: start..end,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        let start = self.pos;
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`"), start))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("expected an integer", start))
    }

    fn small_integer<T: TryFrom<BigInt>>(&mut self, what: &str) -> Result<T, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let n = self.integer()?;
        T::try_from(n).map_err(|_| self.error(format!("{what} out of range"), start))
    }
}

/// Parses a state in the text syntax; `"0"` is the zero state.
pub fn parse_state(text: &str) -> Result<StateVector, ParseError> {
    let mut cur = Cursor { text, pos: 0 };
    if cur.at_end() {
        return Err(cur.error("empty state", 0));
    }
    let save = cur.pos;
    if cur.eat('0') && cur.at_end() {
        return Ok(StateVector::zero());
    }
    cur.pos = save;

    let mut out = StateVector::zero();
    let mut first = true;
    while !cur.at_end() {
        let start = cur.pos;
        let sign = if cur.eat('+') {
            Rational::one()
        } else if cur.eat('-') {
            -Rational::one()
        } else if first {
            Rational::one()
        } else {
            return Err(cur.error("expected `+` or `-` between terms", start));
        };
        first = false;
        let coeff = parse_coefficient(&mut cur)?;
        let modes = parse_modes(&mut cur)?;
        out.add_scaled(&StateVector::from_modes(&modes), &(sign * coeff));
    }
    Ok(out)
}

fn parse_coefficient(cur: &mut Cursor<'_>) -> Result<Rational, ParseError> {
    cur.skip_ws();
    if !matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        return Ok(Rational::one());
    }
    let start = cur.pos;
    let num = cur.integer()?;
    let den = if cur.eat('/') {
        cur.integer()?
    } else {
        BigInt::one()
    };
    if den <= BigInt::zero() {
        return Err(cur.error("denominator must be positive", start));
    }
    cur.eat('*');
    Ok(Rational::new(num, den))
}

fn parse_modes(cur: &mut Cursor<'_>) -> Result<Vec<Mode>, ParseError> {
    let mut modes = Vec::new();
    loop {
        if cur.eat_str("|0>") {
            return Ok(modes);
        }
        cur.skip_ws();
        let start = cur.pos;
        let kind = match cur.peek().and_then(ModeKind::from_letter) {
            Some(k) => k,
            None => return Err(cur.error("expected a mode (b, g, B, C) or `|0>`", start)),
        };
        cur.pos += 1;
        cur.expect('[')?;
        let species_start = cur.pos;
        let species: u32 = cur.small_integer("species")?;
        if species == 0 {
            return Err(cur.error("species are numbered from 1", species_start));
        }
        cur.expect(',')?;
        let index: i64 = cur.small_integer("mode index")?;
        cur.expect(']')?;
        let power: u32 = if cur.eat('^') {
            cur.small_integer("exponent")?
        } else {
            1
        };
        let mode = Mode::new(kind, species, index);
        modes.extend(std::iter::repeat_n(mode, power as usize));
    }
}

pub fn format_state(v: &StateVector) -> String {
    v.to_string()
}

#[derive(Serialize, Deserialize)]
struct ModeRepr {
    kind: ModeKind,
    species: u32,
    index: i64,
    power: u32,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "rational::serde_str")]
    coeff: Rational,
    modes: Vec<ModeRepr>,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StateRepr {
            terms: self
                .terms()
                .map(|(m, c)| TermRepr {
                    coeff: c.clone(),
                    modes: m
                        .factors()
                        .iter()
                        .map(|&(mode, power)| ModeRepr {
                            kind: mode.kind,
                            species: mode.species,
                            index: mode.index,
                            power,
                        })
                        .collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = StateRepr::deserialize(d)?;
        let mut out = StateVector::zero();
        let mut last: Option<NormalMonomial> = None;
        for term in repr.terms {
            let factors = term
                .modes
                .into_iter()
                .map(|m| (Mode::new(m.kind, m.species, m.index), m.power))
                .collect();
            let mono = NormalMonomial::from_factors(factors)
                .ok_or_else(|| D::Error::custom("monomial is not in normal form"))?;
            if last.as_ref().is_some_and(|l| *l >= mono) {
                return Err(D::Error::custom("terms must be strictly increasing"));
            }
            if term.coeff.is_zero() {
                return Err(D::Error::custom("zero coefficients are not stored"));
            }
            last = Some(mono.clone());
            out.add_term(mono, term.coeff);
        }
        Ok(out)
    }
}
