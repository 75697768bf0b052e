use cdr_core::modes::{
    canonical_bracket, random_creation_mode, random_mode, random_state, supercommutator, Mode,
    ModeKind, StateVector,
};
use cdr_core::series::Rational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

/// Sign of the permutation restricted to the odd entries, computed by
/// counting inversions of odd pairs.
fn koszul_sign(original: &[Mode], order: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let (a, b) = (order[i], order[j]);
            if a > b && original[a].is_odd() && original[b].is_odd() {
                sign = -sign;
            }
        }
    }
    sign
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_relations(seed in any::<u64>(), rank in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mode(&mut rng, rank, 8);
        let b = random_mode(&mut rng, rank, 8);
        let v = random_state(&mut rng, rank, 3, 5, 4);
        let want = v.scale(&int(canonical_bracket(a, b)));
        prop_assert_eq!(supercommutator(a, b, &v), want, "[{}, {}}} on {}", a, b, v);
    }

    #[test]
    fn creation_order_only_costs_a_sign(seed in any::<u64>(), rank in 1u32..=3, len in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<Mode> = (0..len).map(|_| random_creation_mode(&mut rng, rank, 4)).collect();
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut rng);
        let permuted: Vec<Mode> = order.iter().map(|&i| modes[i]).collect();
        let base = StateVector::vacuum().apply_modes(&modes);
        let other = StateVector::vacuum().apply_modes(&permuted);
        prop_assert_eq!(other, base.scale(&int(koszul_sign(&modes, &order))));
    }

    #[test]
    fn mixed_words_agree_in_any_order(seed in any::<u64>(), rank in 1u32..=2) {
        // a word whose letters pairwise (anti)commute can be applied in any order
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut modes: Vec<Mode> = Vec::new();
        while modes.len() < 4 {
            let m = random_mode(&mut rng, rank, 4);
            if modes.iter().all(|&x| canonical_bracket(x, m) == 0) {
                modes.push(m);
            }
        }
        let v = random_state(&mut rng, rank, 3, 4, 4);
        let mut order: Vec<usize> = (0..modes.len()).collect();
        order.shuffle(&mut rng);
        let permuted: Vec<Mode> = order.iter().map(|&i| modes[i]).collect();
        let base = v.apply_modes(&modes);
        prop_assert_eq!(v.apply_modes(&permuted), base.scale(&int(koszul_sign(&modes, &order))));
    }

    #[test]
    fn gradings_shift_additively(seed in any::<u64>(), rank in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mode(&mut rng, rank, 6);
        let v = random_state(&mut rng, rank, 1, 5, 4);
        let Some((m, _)) = v.terms().next() else {
            return Ok(());
        };
        for (out, _) in v.apply_mode_unbounded(a).terms() {
            prop_assert_eq!(out.weight(), m.weight() + a.weight());
            prop_assert_eq!(out.fermion_charge(), m.fermion_charge() + a.fermion_charge());
            prop_assert_eq!(out.gamma_number(), m.gamma_number() + a.gamma_number());
            prop_assert_eq!(out.g_weight(), m.g_weight() + a.g_weight());
            prop_assert_eq!(out.is_odd(), m.is_odd() ^ a.is_odd());
        }
    }

    #[test]
    fn odd_modes_square_to_zero(seed in any::<u64>(), rank in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = loop {
            let m = random_mode(&mut rng, rank, 6);
            if m.is_odd() {
                break m;
            }
        };
        let v = random_state(&mut rng, rank, 3, 5, 4);
        prop_assert!(v.apply_modes(&[a, a]).is_zero());
    }
}

#[test]
fn annihilators_kill_the_vacuum() {
    for kind in ModeKind::ALL {
        for index in -4..=4 {
            let m = Mode::new(kind, 1, index);
            let out = StateVector::vacuum().apply_mode_unbounded(m);
            assert_eq!(out.is_zero(), m.is_annihilator(), "{m}");
        }
    }
}

#[test]
fn bosonic_powers_count_contractions() {
    // beta_0 gamma_0^k |0> = k gamma_0^(k-1) |0>
    for k in 1..6 {
        let v = StateVector::from_modes(&vec![Mode::gamma(1, 0); k]);
        let lowered = StateVector::from_modes(&vec![Mode::gamma(1, 0); k - 1]);
        assert_eq!(
            v.apply_mode_unbounded(Mode::beta(1, 0)),
            lowered.scale(&int(k as i64))
        );
    }
}
