use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::log_monoid::FinGenMonoid;
use crate::modes::{Mode, ModeKind, NormalMonomial};

/// The cyclic group of order `N` acting on species 1 and 2 with weights
/// `gamma^1 +1`, `gamma^2 -1`, `beta^1 -1`, `beta^2 +1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GAction {
    pub order: u32,
}

impl GAction {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1, "group order must be positive");
        Self { order }
    }

    /// Total weight of a monomial, reduced mod `N`.
    pub fn charge(&self, m: &NormalMonomial) -> i64 {
        m.g_weight().rem_euclid(self.order as i64)
    }

    pub fn is_invariant(&self, m: &NormalMonomial) -> bool {
        self.charge(m) == 0
    }
}

/// `(#beta^1, #beta^2, #gamma^1, #gamma^2)` counted with multiplicity.
pub fn field_counts(m: &NormalMonomial) -> [i64; 4] {
    let mut out = [0i64; 4];
    for &(mode, e) in m.factors() {
        let slot = match (mode.kind, mode.species) {
            (ModeKind::Beta, 1) => 0,
            (ModeKind::Beta, 2) => 1,
            (ModeKind::Gamma, 1) => 2,
            (ModeKind::Gamma, 2) => 3,
            _ => continue,
        };
        out[slot] += e as i64;
    }
    out
}

/// Which monomials count as elements of `V_Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpanModel {
    /// Products of the building blocks `beta^i...beta^i` (N factors),
    /// `beta^1 beta^2`, `gamma^i...gamma^i` (N factors), `gamma^1 gamma^2`
    /// and `beta^i gamma^i`.
    BlockBasis,
    /// Every monomial fixed by the group action.
    Invariant,
}

/// Membership in the span model. A monomial lies in the block basis iff
/// its field counts lie in the monoid generated by the blocks' counts.
pub struct SpanOracle {
    action: GAction,
    blocks: FinGenMonoid,
    cache: HashMap<[i64; 4], bool>,
}

impl SpanOracle {
    pub fn new(action: GAction) -> Self {
        let n = action.order as i64;
        let blocks = FinGenMonoid::new(vec![
            vec![n, 0, 0, 0],
            vec![0, n, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, n, 0],
            vec![0, 0, 0, n],
            vec![0, 0, 1, 1],
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 1],
        ])
        .expect("eight generators");
        Self {
            action,
            blocks,
            cache: HashMap::new(),
        }
    }

    pub fn action(&self) -> GAction {
        self.action
    }

    pub fn in_block_basis(&mut self, m: &NormalMonomial) -> bool {
        let counts = field_counts(m);
        if let Some(&b) = self.cache.get(&counts) {
            return b;
        }
        let b = counts == [0; 4]
            || self
                .blocks
                .membership(&counts)
                .expect("blocks are positive on (1,1,1,1)")
                .member;
        self.cache.insert(counts, b);
        b
    }

    pub fn contains(&mut self, model: SpanModel, m: &NormalMonomial) -> bool {
        match model {
            SpanModel::Invariant => self.action.is_invariant(m),
            SpanModel::BlockBasis => self.in_block_basis(m),
        }
    }
}

/// Invariant beta-gamma monomials of one conformal weight, grouped by
/// `gamma_0` degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedSlice {
    pub weight: u32,
    pub cutoff: u32,
    pub by_gamma0_degree: BTreeMap<u32, Vec<NormalMonomial>>,
}

impl GradedSlice {
    pub fn len(&self) -> usize {
        self.by_gamma0_degree.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn monomials(&self) -> impl Iterator<Item = &NormalMonomial> {
        self.by_gamma0_degree.values().flatten()
    }

    pub fn contains(&self, m: &NormalMonomial) -> bool {
        self.by_gamma0_degree
            .get(&m.gamma0_degree())
            .is_some_and(|v| v.binary_search(m).is_ok())
    }
}

/// Creation modes of positive weight for species 1, 2.
fn positive_modes(max_weight: u32) -> Vec<Mode> {
    let mut out = Vec::new();
    for w in 1..=max_weight as i64 {
        for s in 1..=2 {
            out.push(Mode::beta(s, -w));
            out.push(Mode::gamma(s, -w));
        }
    }
    out
}

/// All multisets of positive-weight modes with total weight `r`.
fn positive_parts(r: u32) -> Vec<Vec<(Mode, u32)>> {
    fn go(
        modes: &[Mode],
        i: usize,
        left: i64,
        cur: &mut Vec<(Mode, u32)>,
        out: &mut Vec<Vec<(Mode, u32)>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if i == modes.len() {
            return;
        }
        let w = modes[i].weight();
        go(modes, i + 1, left, cur, out);
        let mut e = 1;
        while e * w <= left {
            cur.push((modes[i], e as u32));
            go(modes, i + 1, left - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let modes = positive_modes(r);
    let mut out = Vec::new();
    go(&modes, 0, r as i64, &mut Vec::new(), &mut out);
    out
}

pub fn monomial_from(parts: &[(Mode, u32)], g1: u32, g2: u32) -> NormalMonomial {
    let mut factors: BTreeMap<Mode, u32> = parts.iter().copied().collect();
    if g1 > 0 {
        factors.insert(Mode::gamma(1, 0), g1);
    }
    if g2 > 0 {
        factors.insert(Mode::gamma(2, 0), g2);
    }
    NormalMonomial::from_factors(factors.into_iter().collect()).expect("creation modes only")
}

/// Every beta-gamma monomial of weight `r` and `gamma_0` degree at most
/// `cutoff` that lies in the chosen span model.
pub fn enumerate_slice(
    oracle: &mut SpanOracle,
    model: SpanModel,
    r: u32,
    cutoff: u32,
) -> GradedSlice {
    let mut by_gamma0_degree: BTreeMap<u32, Vec<NormalMonomial>> = BTreeMap::new();
    for parts in positive_parts(r) {
        for deg in 0..=cutoff {
            for g1 in 0..=deg {
                let m = monomial_from(&parts, g1, deg - g1);
                if oracle.contains(model, &m) {
                    by_gamma0_degree.entry(deg).or_default().push(m);
                }
            }
        }
    }
    for v in by_gamma0_degree.values_mut() {
        v.sort();
    }
    GradedSlice {
        weight: r,
        cutoff,
        by_gamma0_degree,
    }
}

/// The G-invariant slice of weight `r`.
pub fn enumerate_invariant_slice(n: u32, r: u32, cutoff: u32) -> GradedSlice {
    let mut oracle = SpanOracle::new(GAction::new(n));
    enumerate_slice(&mut oracle, SpanModel::Invariant, r, cutoff)
}
