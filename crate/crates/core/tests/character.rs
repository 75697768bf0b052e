use std::collections::BTreeSet;

use cdr_core::invariant_character::{
    enumerate_invariant_slice, enumerate_slice, minimal_generators, partitions_at_most, GAction,
    SpanModel, SpanOracle,
};
use cdr_core::modes::{Mode, NormalMonomial, StateVector};
use num::BigUint;

fn partitions_brute(m: i64, parts_left: u32, largest: i64) -> u64 {
    if m == 0 {
        return 1;
    }
    if parts_left == 0 {
        return 0;
    }
    (1..=largest.min(m))
        .map(|p| partitions_brute(m - p, parts_left - 1, p))
        .sum()
}

#[test]
fn partition_counts() {
    for n in 1..=6u32 {
        for m in -2..=20i64 {
            let want = if m <= 0 { 0 } else { partitions_brute(m, n, m) };
            assert_eq!(partitions_at_most(n, m), BigUint::from(want), "p_{n}({m})");
        }
    }
}

fn times(m: &NormalMonomial, modes: &[Mode]) -> NormalMonomial {
    let v = StateVector::from_monomial(m.clone()).apply_modes(modes);
    let m = v
        .terms()
        .next()
        .expect("bosonic product is nonzero")
        .0
        .clone();
    m
}

/// All multisets of `k` modes from `pool` with total weight at most `max_weight`.
fn multisets(pool: &[Mode], k: usize, max_weight: i64) -> Vec<Vec<Mode>> {
    fn go(
        pool: &[Mode],
        start: usize,
        k: usize,
        left: i64,
        cur: &mut Vec<Mode>,
        out: &mut Vec<Vec<Mode>>,
    ) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            let w = pool[i].weight();
            if w <= left {
                cur.push(pool[i]);
                go(pool, i, k - 1, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, 0, k, max_weight, &mut Vec::new(), &mut out);
    out
}

/// The building blocks as explicit mode words of weight at most `r`.
fn blocks(n: usize, r: i64) -> Vec<Vec<Mode>> {
    let betas = |s| (1..=r).map(|w| Mode::beta(s, -w)).collect::<Vec<_>>();
    let gammas = |s| (0..=r).map(|w| Mode::gamma(s, -w)).collect::<Vec<_>>();
    let mut out = Vec::new();
    for s in 1..=2 {
        out.extend(multisets(&betas(s), n, r));
        out.extend(multisets(&gammas(s), n, r));
    }
    for (x, y) in [
        (betas(1), betas(2)),
        (gammas(1), gammas(2)),
        (betas(1), gammas(1)),
        (betas(2), gammas(2)),
    ] {
        for &a in &x {
            for &b in &y {
                if a.weight() + b.weight() <= r {
                    out.push(vec![a, b]);
                }
            }
        }
    }
    out
}

/// Every product of blocks with weight at most `r` and `gamma_0` degree at
/// most `cutoff`, built by repeated multiplication from the vacuum.
fn block_closure(n: usize, r: i64, cutoff: u32) -> BTreeSet<NormalMonomial> {
    let blocks = blocks(n, r);
    let mut seen = BTreeSet::from([NormalMonomial::vacuum()]);
    let mut stack = vec![NormalMonomial::vacuum()];
    while let Some(m) = stack.pop() {
        for b in &blocks {
            let p = times(&m, b);
            if p.weight() <= r && p.gamma0_degree() <= cutoff && seen.insert(p.clone()) {
                stack.push(p);
            }
        }
    }
    seen
}

/// Weight-`r` elements of the closure that are not `u * Y` for `u` one of
/// `(gamma_0^1)^N`, `(gamma_0^2)^N`, `gamma_0^1 gamma_0^2`.
fn generators_by_marking(
    n: usize,
    r: i64,
    cutoff: u32,
) -> (BTreeSet<NormalMonomial>, Vec<NormalMonomial>) {
    let closure = block_closure(n, r, cutoff);
    let slice: BTreeSet<NormalMonomial> = closure.into_iter().filter(|m| m.weight() == r).collect();
    let units = [
        vec![Mode::gamma(1, 0); n],
        vec![Mode::gamma(2, 0); n],
        vec![Mode::gamma(1, 0), Mode::gamma(2, 0)],
    ];
    let mut decomposable = BTreeSet::new();
    for y in &slice {
        for u in &units {
            decomposable.insert(times(y, u));
        }
    }
    let gens = slice
        .iter()
        .filter(|m| !decomposable.contains(*m))
        .cloned()
        .collect();
    (slice, gens)
}

#[test]
fn block_slices_match_explicit_products() {
    for (n, r, cutoff) in [(2u32, 1u32, 5u32), (3, 1, 6), (2, 2, 6), (3, 2, 7)] {
        let (want, _) = generators_by_marking(n as usize, r as i64, cutoff);
        let mut oracle = SpanOracle::new(GAction::new(n));
        let got: BTreeSet<NormalMonomial> =
            enumerate_slice(&mut oracle, SpanModel::BlockBasis, r, cutoff)
                .monomials()
                .cloned()
                .collect();
        assert_eq!(got, want, "N={n} r={r}");
    }
}

#[test]
fn generator_counts_match_explicit_products() {
    for (n, r, expected) in [
        (2u32, 1u32, 6usize),
        (3, 1, 6),
        (4, 1, 6),
        (2, 2, 18),
        (3, 2, 20),
        (2, 3, 62),
    ] {
        let cutoff = n + r + 2;
        let (_, gens) = generators_by_marking(n as usize, r as i64, cutoff);
        let engine = minimal_generators(n, r, cutoff, SpanModel::BlockBasis);
        assert_eq!(engine.witnesses, gens, "N={n} r={r}");
        assert_eq!(gens.len(), expected, "N={n} r={r}");
        assert!(engine.stable);
    }
}

#[test]
fn invariant_slices_multiply() {
    for n in [2u32, 3] {
        let slices: Vec<_> = (0..=2)
            .map(|r| enumerate_invariant_slice(n, r, 3))
            .collect();
        let big = enumerate_invariant_slice(n, 3, 6);
        let action = GAction::new(n);
        for a in slices[1].monomials() {
            for b in slices[2].monomials() {
                let p = times(a, &b.modes().collect::<Vec<_>>());
                assert!(action.is_invariant(&p));
                assert!(big.contains(&p), "{a} * {b}");
            }
        }
        for a in slices[0].monomials() {
            for b in slices[1].monomials() {
                let p = times(a, &b.modes().collect::<Vec<_>>());
                assert_eq!(p.weight(), 1);
                assert!(action.is_invariant(&p));
            }
        }
    }
}

#[test]
fn block_model_is_multiplicatively_closed() {
    let n = 3;
    let mut oracle = SpanOracle::new(GAction::new(n));
    let one = enumerate_slice(&mut oracle, SpanModel::BlockBasis, 1, 4);
    let two = enumerate_slice(&mut oracle, SpanModel::BlockBasis, 2, 4);
    for a in one.monomials() {
        for b in two.monomials() {
            let p = times(a, &b.modes().collect::<Vec<_>>());
            assert!(oracle.contains(SpanModel::BlockBasis, &p), "{a} * {b}");
        }
    }
}
