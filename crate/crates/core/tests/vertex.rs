use cdr_core::modes::{random_state, Mode, ModeKind, StateVector};
use cdr_core::series::Rational;
use cdr_core::vertex::{
    apply_bracket, chiral_differential_apply, lie_bracket, nth_product_exact, translate,
};
use num::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

/// Generalised binomial `C(x, k)` for any integer `x`.
fn binom(x: i64, k: i64) -> Rational {
    let mut out = Rational::one();
    for i in 0..k {
        out = out * int(x - i) / int(i + 1);
    }
    out
}

/// A generating field differentiated `j` times: the state `x_(-1-j)|0>`.
#[derive(Clone, Copy, Debug)]
struct Gen {
    kind: ModeKind,
    species: u32,
    j: i64,
}

impl Gen {
    fn state(self) -> StateVector {
        StateVector::from_modes(&[Mode::from_product_index(
            self.kind,
            self.species,
            -1 - self.j,
        )])
    }

    /// `Y(x_(-1-j)|0>, z) = d^j x(z) / j!`, so its `n`-th mode is
    /// `C(j-n-1, j) x_(n-j)`.
    fn field_mode(self, n: i64, v: &StateVector) -> StateVector {
        let mode = Mode::from_product_index(self.kind, self.species, n - self.j);
        v.apply_mode_unbounded(mode)
            .scale(&binom(self.j - n - 1, self.j))
    }
}

fn gen(rng: &mut impl Rng, rank: u32) -> Gen {
    Gen {
        kind: ModeKind::ALL[rng.gen_range(0..4)],
        species: rng.gen_range(1..=rank),
        j: rng.gen_range(0..=2),
    }
}

/// `(X_(-1) Y)_(n) v` from the normally ordered product expansion:
/// `sum_k X_(-1-k) Y_(n+k) v + eps sum_k Y_(n-1-k) X_(k) v`.
fn normal_product_mode(x: Gen, y: Gen, n: i64, v: &StateVector) -> StateVector {
    let eps = if x.kind.is_odd() && y.kind.is_odd() {
        -1
    } else {
        1
    };
    let bound = v.max_weight() + n.abs() + x.j + y.j + 4;
    let mut out = StateVector::zero();
    for k in 0..=bound {
        out = out.add(&x.field_mode(-1 - k, &y.field_mode(n + k, v)));
        out = out.add(
            &y.field_mode(n - 1 - k, &x.field_mode(k, v))
                .scale(&int(eps)),
        );
    }
    out
}

fn parity(v: &StateVector) -> Option<bool> {
    let mut it = v.terms().map(|(m, _)| m.is_odd());
    let first = it.next()?;
    it.all(|p| p == first).then_some(first)
}

/// A random single-monomial state (nonzero, homogeneous parity).
fn monomial_state(rng: &mut impl Rng, rank: u32) -> StateVector {
    loop {
        let v = random_state(rng, rank, 1, 3, 3);
        if !v.is_zero() {
            return v;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn generator_products_match_mode_expansion(seed in any::<u64>(), n in -3i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = gen(&mut rng, 2);
        let v = random_state(&mut rng, 2, 3, 4, 3);
        prop_assert_eq!(nth_product_exact(&x.state(), n, &v), x.field_mode(n, &v));
    }

    #[test]
    fn quadratic_products_match_wick(seed in any::<u64>(), n in -3i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = gen(&mut rng, 2);
        let y = gen(&mut rng, 2);
        let a = StateVector::vacuum().apply_modes(&[
            Mode::from_product_index(x.kind, x.species, -1 - x.j),
            Mode::from_product_index(y.kind, y.species, -1 - y.j),
        ]);
        let v = random_state(&mut rng, 2, 3, 4, 3);
        let want = normal_product_mode(x, y, n, &v);
        prop_assert_eq!(nth_product_exact(&a, n, &v), want, "A = {}", a);
    }

    #[test]
    fn translation_differentiates_fields(seed in any::<u64>(), n in -3i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(&mut rng, 2, 2, 3, 3);
        let b = random_state(&mut rng, 2, 2, 3, 3);
        let lhs = nth_product_exact(&translate(&a), n, &b);
        let rhs = nth_product_exact(&a, n - 1, &b).scale(&int(-n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn skew_symmetry(seed in any::<u64>(), n in -2i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = monomial_state(&mut rng, 2);
        let b = monomial_state(&mut rng, 2);
        let odd = parity(&a).unwrap() && parity(&b).unwrap();
        let eps = if odd { -1 } else { 1 };
        // B_(n) A = eps sum_j (-1)^(n+j+1) T^j/j! (A_(n+j) B)
        let mut want = StateVector::zero();
        let bound = a.max_weight() + b.max_weight() + n.abs() + 2;
        for j in 0..=bound {
            let mut t = nth_product_exact(&a, n + j, &b);
            let mut fact = Rational::one();
            for i in 1..=j {
                t = translate(&t);
                fact *= int(i);
            }
            let sign = if (n + j + 1).rem_euclid(2) == 0 { eps } else { -eps };
            want = want.add(&t.scale(&(int(sign) / fact)));
        }
        prop_assert_eq!(nth_product_exact(&b, n, &a), want);
    }

    #[test]
    fn bracket_matches_commutator(seed in any::<u64>(), m in -2i64..=2, k in -2i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = monomial_state(&mut rng, 2);
        let b = monomial_state(&mut rng, 2);
        let v = random_state(&mut rng, 2, 2, 3, 2);
        let odd = parity(&a).unwrap() && parity(&b).unwrap();
        let ab = nth_product_exact(&a, m, &nth_product_exact(&b, k, &v));
        let ba = nth_product_exact(&b, k, &nth_product_exact(&a, m, &v));
        let direct = if odd { ab.add(&ba) } else { ab.sub(&ba) };
        prop_assert_eq!(apply_bracket(&lie_bracket(&a, m, &b, k), &v), direct);
    }

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_state(&mut rng, 2, 3, 4, 3);
        prop_assert!(chiral_differential_apply(&chiral_differential_apply(&v)).is_zero());
    }

    #[test]
    fn differential_is_a_derivation(seed in any::<u64>(), n in -2i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = monomial_state(&mut rng, 2);
        let b = monomial_state(&mut rng, 2);
        let d = chiral_differential_apply;
        let sign = if parity(&a).unwrap() { -1 } else { 1 };
        let lhs = d(&nth_product_exact(&a, n, &b));
        let rhs = nth_product_exact(&d(&a), n, &b)
            .add(&nth_product_exact(&a, n, &d(&b)).scale(&int(sign)));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn vacuum_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let a = random_state(&mut rng, 3, 3, 4, 4);
        for n in -4..=4 {
            let want = if n == -1 {
                a.clone()
            } else {
                StateVector::zero()
            };
            assert_eq!(nth_product_exact(&StateVector::vacuum(), n, &a), want);
        }
        assert_eq!(nth_product_exact(&a, -1, &StateVector::vacuum()), a);
        assert_eq!(
            nth_product_exact(&a, -2, &StateVector::vacuum()),
            translate(&a)
        );
        for n in 0..=3 {
            assert!(nth_product_exact(&a, n, &StateVector::vacuum()).is_zero());
        }
    }
}

#[test]
fn translation_of_vacuum_and_generators() {
    assert!(translate(&StateVector::vacuum()).is_zero());
    // T gamma_0|0> = gamma_-1|0>
    let g = StateVector::from_modes(&[Mode::gamma(1, 0)]);
    assert_eq!(
        translate(&g),
        StateVector::from_modes(&[Mode::gamma(1, -1)])
    );
}
