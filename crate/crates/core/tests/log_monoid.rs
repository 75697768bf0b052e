use cdr_core::log_monoid::snf::{mat_mul, smith, IntMatrix};
use cdr_core::log_monoid::{
    etale_from, lattice_map, log_differentials, CliffordGenerators, FinGenMonoid, MonoidHom,
};
use proptest::prelude::*;

const CHARS: [u64; 5] = [0, 2, 3, 5, 7];

/// Cofactor expansion, fine for the small sizes used here.
fn det(m: &IntMatrix) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: IntMatrix = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn etale_by_det(d: i64, p: u64) -> bool {
    d != 0 && (p == 0 || d % p as i64 != 0)
}

fn matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn smith_certificate(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=4)) {
        let s = smith(&m, 3);
        let uav = mat_mul(&mat_mul(&s.u, &m, m.len()), &s.v, 3);
        for (i, row) in uav.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { s.diagonal.get(i).copied().unwrap_or(0) } else { 0 };
                prop_assert_eq!(x, want);
            }
        }
        for w in s.diagonal.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        prop_assert!(s.diagonal.iter().all(|&d| d >= 0));
    }

    #[test]
    fn lattice_map_matches_determinant(n in 1usize..=3, seed in any::<u64>()) {
        let a: IntMatrix = (0..n)
            .map(|i| (0..n).map(|j| ((seed >> ((i * n + j) * 4)) & 0xf) as i64 - 7).collect())
            .collect();
        let d = det(&a);
        let data = lattice_map(&a, n);
        prop_assert_eq!(data.kernel.rank == 0, d != 0);
        if d != 0 {
            prop_assert!(data.cokernel.is_finite());
            prop_assert_eq!(data.cokernel.torsion_order(), d.abs());
        }
        for p in CHARS {
            prop_assert_eq!(etale_from(&data, p).etale, etale_by_det(d, p));
        }
    }

    #[test]
    fn etale_maps_compose(a in matrix(3), b in matrix(3)) {
        let ab = mat_mul(&a, &b, 3);
        for p in CHARS {
            let ea = etale_from(&lattice_map(&a, 3), p).etale;
            let eb = etale_from(&lattice_map(&b, 3), p).etale;
            let eab = etale_from(&lattice_map(&ab, 3), p).etale;
            prop_assert_eq!(eab, ea && eb, "p = {}", p);
        }
    }
}

#[test]
fn chart_membership_closed_form() {
    for n in 2..=8i64 {
        let q = FinGenMonoid::cyclic_chart(n);
        for a in 0..=4 * n {
            for b in 0..=4 * n {
                let m = q.membership(&[a, b]).unwrap();
                assert_eq!(m.member, (a - b) % n == 0, "N={n} ({a},{b})");
                if let Some(w) = m.witness {
                    let w: Vec<i64> = w.iter().map(|&x| x as i64).collect();
                    assert_eq!([n * w[0] + w[2], n * w[1] + w[2]], [a, b]);
                }
            }
        }
        assert!(!q.membership(&[-1, n - 1]).unwrap().member);
    }
}

#[test]
fn chart_inclusion_cokernel_and_etaleness() {
    for n in 2..=12i64 {
        let q = FinGenMonoid::cyclic_chart(n);
        assert_eq!(q.index_in_ambient(), Some(n));
        let g = q.groupify();
        assert_eq!(g.group.rank, 2);
        let coker = g.cokernel_in_ambient.unwrap();
        assert_eq!((coker.rank, coker.torsion.clone()), (0, vec![n]));
        let hom = MonoidHom::inclusion_into_free(q.clone()).unwrap();
        for p in CHARS {
            let v = hom.etale(p).unwrap();
            assert_eq!(v.etale, p == 0 || n % p as i64 != 0, "N={n} p={p}");
            assert_eq!(v.cokernel.torsion, vec![n]);
        }
        assert!(hom.etale(4).is_err());
        assert!(q.saturation().unwrap().saturated);
    }
}

#[test]
fn chart_inclusions_compose() {
    // Q_{N M} -> Q_N -> N^2 when N divides the larger order
    for (small, big) in [(2i64, 4i64), (2, 6), (3, 6), (3, 9)] {
        let qs = FinGenMonoid::cyclic_chart(small);
        let qb = FinGenMonoid::cyclic_chart(big);
        let inner = MonoidHom::new(qb, qs.clone(), vec![vec![1, 0], vec![0, 1]]).unwrap();
        let outer = MonoidHom::inclusion_into_free(qs).unwrap();
        let both = inner.compose(&outer).unwrap();
        assert_eq!(both.lattice_map().cokernel.torsion_order(), big);
        assert_eq!(inner.lattice_map().cokernel.torsion_order(), big / small);
        for p in CHARS {
            assert_eq!(
                both.etale(p).unwrap().etale,
                inner.etale(p).unwrap().etale && outer.etale(p).unwrap().etale
            );
        }
    }
}

#[test]
fn non_homomorphisms_are_rejected() {
    let q2 = FinGenMonoid::cyclic_chart(2);
    let q3 = FinGenMonoid::cyclic_chart(3);
    assert!(MonoidHom::new(q2, q3, vec![vec![1, 0], vec![0, 1]]).is_err());
}

#[test]
fn saturation_examples() {
    let numerical = FinGenMonoid::new(vec![vec![2], vec![3]]).unwrap();
    let rep = numerical.saturation().unwrap();
    assert!(!rep.saturated);
    assert!(rep.counterexample.is_some());
    let square = FinGenMonoid::new(vec![vec![1, 0], vec![1, 2], vec![0, 1]]).unwrap();
    assert!(square.saturation().unwrap().saturated);
    // misses (1,1) although 2*(1,1) is in it
    let gappy = FinGenMonoid::new(vec![vec![2, 0], vec![0, 2], vec![1, 3], vec![3, 1]]).unwrap();
    assert!(!gappy.saturation().unwrap().saturated);
}

#[test]
fn log_differential_pullbacks() {
    for n in 2..=6i64 {
        let pres = log_differentials(&FinGenMonoid::cyclic_chart(n)).unwrap();
        // d(N,0) = N dγ¹/γ¹ and so on: pullbacks are the generator vectors
        for (gen, pull) in &pres.pullback {
            assert_eq!(gen, pull);
        }
        let pq = pres.pq_check.unwrap();
        // (-1,1) lies in Q^gp only when N divides 2
        assert_eq!(pq.pq_inside_group, n == 2, "N={n}");
        assert_eq!(pq.pq_generates_group, n == 2, "N={n}");
    }
}

#[test]
fn clifford_pairing() {
    let c = CliffordGenerators::new();
    assert!(c.is_clifford());
}
