use serde::Serialize;

use super::slice::{enumerate_slice, monomial_from, GAction, SpanModel, SpanOracle};
use crate::modes::{Mode, NormalMonomial};

/// Minimal homogeneous generators of `V_Q^r` over
/// `V_Q^0 = C[(gamma_0^1)^N, (gamma_0^2)^N, gamma_0^1 gamma_0^2]`.
///
/// Both `V_Q^r` and the maximal ideal `m` of `V_Q^0` are spanned by
/// monomials, so `V_Q^r / m V_Q^r` has as basis the monomials of `V_Q^r`
/// that are not `u * Y` for a generator `u` of `m` and `Y` in `V_Q^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCount {
    pub n: u32,
    pub r: u32,
    pub model: SpanModel,
    pub cutoff: u32,
    pub count: usize,
    pub witnesses: Vec<NormalMonomial>,
    /// Counts at `cutoff`, `cutoff + N`, `cutoff + 2N`.
    pub counts_at: [usize; 3],
    pub stable: bool,
}

fn strip_gamma0(m: &NormalMonomial) -> (Vec<(Mode, u32)>, u32, u32) {
    let mut rest = Vec::new();
    let (mut g1, mut g2) = (0, 0);
    for &(mode, e) in m.factors() {
        if mode == Mode::gamma(1, 0) {
            g1 = e;
        } else if mode == Mode::gamma(2, 0) {
            g2 = e;
        } else {
            rest.push((mode, e));
        }
    }
    (rest, g1, g2)
}

/// Monomials of the slice not in `m V_Q^r`, sorted.
pub fn nakayama_generators(
    oracle: &mut SpanOracle,
    model: SpanModel,
    r: u32,
    cutoff: u32,
) -> Vec<NormalMonomial> {
    let n = oracle.action().order;
    let slice = enumerate_slice(oracle, model, r, cutoff);
    let mut out = Vec::new();
    for m in slice.monomials() {
        let (rest, g1, g2) = strip_gamma0(m);
        let mut quotients = Vec::new();
        if g1 >= n {
            quotients.push((g1 - n, g2));
        }
        if g2 >= n {
            quotients.push((g1, g2 - n));
        }
        if g1 >= 1 && g2 >= 1 {
            quotients.push((g1 - 1, g2 - 1));
        }
        let decomposable = quotients
            .into_iter()
            .any(|(a, b)| oracle.contains(model, &monomial_from(&rest, a, b)));
        if !decomposable {
            out.push(m.clone());
        }
    }
    out.sort();
    out
}

/// Runs the count at `cutoff`, `cutoff + N` and `cutoff + 2N` and reports
/// the first together with a stability flag.
pub fn minimal_generators(n: u32, r: u32, cutoff: u32, model: SpanModel) -> GeneratorCount {
    let mut oracle = SpanOracle::new(GAction::new(n));
    let runs: Vec<Vec<NormalMonomial>> = (0..3)
        .map(|k| nakayama_generators(&mut oracle, model, r, cutoff + k * n))
        .collect();
    let counts_at = [runs[0].len(), runs[1].len(), runs[2].len()];
    let stable = counts_at[0] == counts_at[1] && counts_at[1] == counts_at[2];
    let witnesses = runs.into_iter().next().unwrap_or_default();
    GeneratorCount {
        n,
        r,
        model,
        cutoff,
        count: witnesses.len(),
        witnesses,
        counts_at,
        stable,
    }
}
