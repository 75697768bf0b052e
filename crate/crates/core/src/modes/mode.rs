use std::fmt;

use serde::{Deserialize, Serialize};

/// The four generating fields. The derived order is the canonical
/// monomial order `beta < gamma < b < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Beta,
    Gamma,
    B,
    C,
}

impl ModeKind {
    pub const ALL: [ModeKind; 4] = [ModeKind::Beta, ModeKind::Gamma, ModeKind::B, ModeKind::C];

    pub fn is_odd(self) -> bool {
        matches!(self, ModeKind::B | ModeKind::C)
    }

    /// Conformal weight of the generating field (1 for beta and b, 0 for gamma and c).
    pub fn field_weight(self) -> i64 {
        match self {
            ModeKind::Beta | ModeKind::B => 1,
            ModeKind::Gamma | ModeKind::C => 0,
        }
    }

    /// Offset between the field-adapted label and the uniform product index:
    /// `x_n = x_(n - shift)`.
    fn product_shift(self) -> i64 {
        match self {
            ModeKind::Gamma | ModeKind::C => 1,
            ModeKind::Beta | ModeKind::B => 0,
        }
    }

    pub(crate) fn letter(self) -> char {
        match self {
            ModeKind::Beta => 'b',
            ModeKind::Gamma => 'g',
            ModeKind::B => 'B',
            ModeKind::C => 'C',
        }
    }

    pub(crate) fn from_letter(c: char) -> Option<Self> {
        match c {
            'b' => Some(ModeKind::Beta),
            'g' => Some(ModeKind::Gamma),
            'B' => Some(ModeKind::B),
            'C' => Some(ModeKind::C),
            _ => None,
        }
    }
}

/// A single mode `x^i_n`, labelled the way the fields are expanded:
/// `gamma(z) = sum gamma_n z^-n`, `beta(z) = sum beta_n z^(-n-1)`,
/// `c(z) = sum c_n z^-n`, `b(z) = sum b_n z^(-n-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub kind: ModeKind,
    pub species: u32,
    pub index: i64,
}

impl Mode {
    pub fn new(kind: ModeKind, species: u32, index: i64) -> Self {
        Self {
            kind,
            species,
            index,
        }
    }

    pub fn beta(species: u32, index: i64) -> Self {
        Self::new(ModeKind::Beta, species, index)
    }

    pub fn gamma(species: u32, index: i64) -> Self {
        Self::new(ModeKind::Gamma, species, index)
    }

    pub fn b(species: u32, index: i64) -> Self {
        Self::new(ModeKind::B, species, index)
    }

    pub fn c(species: u32, index: i64) -> Self {
        Self::new(ModeKind::C, species, index)
    }

    /// The mode `x_(j)` of the field `x` in the uniform convention
    /// `Y(x, z) = sum x_(j) z^(-j-1)`.
    pub fn from_product_index(kind: ModeKind, species: u32, j: i64) -> Self {
        Self::new(kind, species, j + kind.product_shift())
    }

    pub fn product_index(self) -> i64 {
        self.index - self.kind.product_shift()
    }

    pub fn is_odd(self) -> bool {
        self.kind.is_odd()
    }

    /// Annihilators kill the vacuum: `beta_n (n >= 0)`, `gamma_n (n > 0)`,
    /// `b_n (n >= 0)`, `c_n (n > 0)`.
    pub fn is_annihilator(self) -> bool {
        match self.kind {
            ModeKind::Beta | ModeKind::B => self.index >= 0,
            ModeKind::Gamma | ModeKind::C => self.index > 0,
        }
    }

    /// Change of conformal weight caused by applying the mode.
    pub fn weight(self) -> i64 {
        -self.index
    }

    pub fn fermion_charge(self) -> i64 {
        match self.kind {
            ModeKind::C => 1,
            ModeKind::B => -1,
            _ => 0,
        }
    }

    /// Integer weight under the cyclic action on the first two species,
    /// before reduction mod the group order.
    pub fn g_weight(self) -> i64 {
        let sign = match self.species {
            1 => 1,
            2 => -1,
            _ => return 0,
        };
        match self.kind {
            ModeKind::Gamma => sign,
            ModeKind::Beta => -sign,
            _ => 0,
        }
    }

    /// `+1` for gamma, `-1` for beta; conserved by every vertex operation
    /// on the free-field generators.
    pub fn gamma_number(self) -> i64 {
        match self.kind {
            ModeKind::Gamma => 1,
            ModeKind::Beta => -1,
            _ => 0,
        }
    }

    pub fn is_gamma_zero(self) -> bool {
        self.kind == ModeKind::Gamma && self.index == 0
    }

    /// Value of the (anti)commutator `[self, other]` when `self` is an
    /// annihilator and `other` a creation mode; `None` when they commute.
    pub(crate) fn contraction(self, other: Mode) -> Option<i64> {
        if self.species != other.species || self.index + other.index != 0 {
            return None;
        }
        match (self.kind, other.kind) {
            (ModeKind::Beta, ModeKind::Gamma) => Some(1),
            (ModeKind::Gamma, ModeKind::Beta) => Some(-1),
            (ModeKind::B, ModeKind::C) | (ModeKind::C, ModeKind::B) => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind.letter(), self.species, self.index)
    }
}
