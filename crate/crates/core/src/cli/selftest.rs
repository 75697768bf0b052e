use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coordinate::{
    random_transform1, random_transform2, verify_tilde_ope, verify_virasoro_invariance,
    CoordTransform1, FieldRule,
};
use crate::invariant_character::{formula_length, minimal_generators, SpanModel};
use crate::log_monoid::{CliffordGenerators, FinGenMonoid, MonoidHom};
use crate::modes::{
    canonical_bracket, fermionic_charge_apply, random_state, supercommutator, Gamma0Cutoff, Mode,
    ModeKind, StateVector,
};
use crate::series::rational::int;
use crate::series::{random_admissible, Series1};
use crate::vertex::{
    chiral_differential_apply, g_state, nth_product_exact, q_state, translate, virasoro_state,
    ProductCache,
};

pub const DEFAULT_SEED: u64 = 1729;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    pub rule: FieldRule,
    /// Replaces `[beta_m, gamma_-m] = 1` by `2` in the relations check.
    pub corrupt_relation: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            rule: FieldRule::LogSecondDerivative,
            corrupt_relation: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub rule: FieldRule,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl SelftestReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("seed {}, field rule {}\n", self.seed, self.rule.name());
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} ({} cases){}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.cases,
                c.failure
                    .as_ref()
                    .map(|f| format!(": {f}"))
                    .unwrap_or_default()
            ));
        }
        out.push_str(if self.pass {
            "all checks passed\n"
        } else {
            "some checks failed\n"
        });
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("#format=selftest-report/v1\ncheck,cases,passed\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{}\n", c.name, c.cases, c.passed));
        }
        out
    }
}

/// Counts cases and keeps the first failure.
struct Check {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failure: None,
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            cases: self.cases,
            passed: self.failure.is_none(),
            failure: self.failure,
        }
    }
}

fn series_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut inv = Check::new("series.inverse-roundtrip");
    let mut unit = Check::new("series.unit-inverse");
    let mut deriv = Check::new("series.derivation");
    let d = 8;
    for _ in 0..20 {
        let f = random_admissible(d, rng);
        let g = f.comp_invert().expect("admissible");
        let t = Series1::variable(d);
        inv.case(
            f.compose(&g).ok() == Some(t.clone())
                && g.compose(&f).ok() == Some(t)
                && g.comp_invert().ok() == Some(f.clone()),
            || format!("f = {f}"),
        );
        let a = f.shift_down().expect("divisible by t");
        let one = Series1::one(d - 1);
        unit.case(
            a.unit_invert().and_then(|b| a.mul(&b)).ok() == Some(one),
            || format!("a = {a}"),
        );
        let b = random_admissible(d, rng);
        let lhs = f.mul(&b).expect("same order").derive();
        let rhs = f
            .derive()
            .mul(&b.truncate(d - 1))
            .and_then(|x| x.add(&f.truncate(d - 1).mul(&b.derive())?))
            .expect("same order");
        deriv.case(lhs == rhs, || format!("a = {f}, b = {b}"));
    }
    vec![inv.finish(), unit.finish(), deriv.finish()]
}

fn mode_checks(rng: &mut ChaCha8Rng, corrupt: bool) -> Vec<CheckResult> {
    let mut rel = Check::new("modes.relations");
    let mut square = Check::new("modes.odd-square-zero");
    let states: Vec<StateVector> = (0..4).map(|_| random_state(rng, 2, 3, 4, 3)).collect();
    for v in &states {
        for ka in ModeKind::ALL {
            for kb in ModeKind::ALL {
                for sa in 1..=2 {
                    for sb in 1..=2 {
                        for m in -2..=2 {
                            for n in -2..=2 {
                                let a = Mode {
                                    kind: ka,
                                    species: sa,
                                    index: m,
                                };
                                let b = Mode {
                                    kind: kb,
                                    species: sb,
                                    index: n,
                                };
                                let mut k = canonical_bracket(a, b);
                                if corrupt && ka == ModeKind::Beta && kb == ModeKind::Gamma {
                                    k *= 2;
                                }
                                let got = supercommutator(a, b, v);
                                rel.case(got == v.scale(&int(k)), || format!("[{a}, {b}}} on {v}"));
                            }
                        }
                    }
                }
            }
        }
        for kind in [ModeKind::B, ModeKind::C] {
            for index in -2..=2 {
                let a = Mode {
                    kind,
                    species: 1,
                    index,
                };
                let twice = v.apply_mode_unbounded(a).apply_mode_unbounded(a);
                square.case(twice.is_zero(), || format!("{a}{a} on {v}"));
            }
        }
    }
    vec![rel.finish(), square.finish()]
}

fn vertex_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut vac = Check::new("vertex.vacuum");
    let mut trans = Check::new("vertex.translation");
    let mut vir = Check::new("vertex.virasoro");
    let mut diff = Check::new("vertex.differential");
    let mut cache = ProductCache::new();
    let vacuum = StateVector::vacuum();
    for _ in 0..10 {
        let a = random_state(rng, 2, 2, 3, 2);
        let b = random_state(rng, 2, 2, 2, 2);
        for n in 0..3 {
            vac.case(cache.product(&a, n, &vacuum).is_zero(), || {
                format!("A_({n})|0>, A = {a}")
            });
        }
        vac.case(cache.product(&a, -1, &vacuum) == a, || {
            format!("A_(-1)|0>, A = {a}")
        });
        trans.case(translate(&vacuum).is_zero(), || "T|0>".into());
        let ta = translate(&a);
        for n in -2..=3 {
            let lhs = cache.product(&ta, n, &b);
            let rhs = cache.product(&a, n - 1, &b).scale(&int(-n));
            trans.case(lhs == rhs, || format!("(TA)_({n})B, A = {a}, B = {b}"));
        }
        let da = chiral_differential_apply(&a);
        diff.case(chiral_differential_apply(&da).is_zero(), || {
            format!("d d on {a}")
        });
        // F d = d F + d
        let charge = fermionic_charge_apply(&da)
            .sub(&chiral_differential_apply(&fermionic_charge_apply(&a)).add(&da));
        diff.case(charge.is_zero(), || format!("charge of d on {a}"));
    }
    let l = virasoro_state(2);
    vir.case(nth_product_exact(&l, 1, &l) == l.scale(&int(2)), || {
        "L_(1)L".into()
    });
    vir.case(nth_product_exact(&l, 3, &l).is_zero(), || "L_(3)L".into());
    vir.case(nth_product_exact(&l, 0, &l) == translate(&l), || {
        "L_(0)L".into()
    });
    vir.case(nth_product_exact(&q_state(2), 0, &g_state(2)) == l, || {
        "Q_(0)G".into()
    });
    for _ in 0..10 {
        let m = random_state(rng, 2, 1, 3, 2);
        let Some((mono, _)) = m.terms().next() else {
            continue;
        };
        let w = mono.weight();
        vir.case(nth_product_exact(&l, 1, &m) == m.scale(&int(w)), || {
            format!("L_0 on {m}")
        });
    }
    vec![vac.finish(), trans.finish(), vir.finish(), diff.finish()]
}

fn coordinate_checks(rng: &mut ChaCha8Rng, rule: FieldRule) -> Vec<CheckResult> {
    let mut group = Check::new("coordinate.group");
    for _ in 0..5 {
        let a = random_transform2(5, rng);
        let b = random_transform2(5, rng);
        let c = random_transform2(5, rng);
        let closed = a.compose(&b).and_then(|ab| ab.compose(&c));
        let assoc = b.compose(&c).and_then(|bc| a.compose(&bc));
        group.case(
            matches!((&closed, &assoc), (Ok(x), Ok(y)) if x == y),
            || "associativity".into(),
        );
        let round = a.inverse().and_then(|inv| a.compose(&inv));
        group.case(round.is_ok_and(|t| t.is_identity()), || "inverse".into());
    }
    let mut cov = Check::new("coordinate.covariance");
    let mut transforms = vec![
        CoordTransform1::identity(6),
        CoordTransform1::scaling(6, int(2)).expect("nonzero"),
    ];
    transforms.extend((0..2).map(|_| random_transform1(6, rng)));
    for t in &transforms {
        let cut = Gamma0Cutoff::at(6);
        let ope = verify_tilde_ope(t, rule, cut).expect("order 6");
        let first_bad = ope.pairs.iter().find(|p| !p.pass);
        cov.case(ope.pass, || {
            let p = first_bad.expect("a failing pair");
            format!("f = {}: {}~ {}~ OPE", t.f(), p.left, p.right)
        });
        let vir = verify_virasoro_invariance(t, rule, cut).expect("order 6");
        cov.case(vir.pass, || {
            format!(
                "f = {}: L~ = L ({})",
                t.f(),
                vir.check.mismatch.clone().unwrap_or_default()
            )
        });
    }
    vec![group.finish(), cov.finish()]
}

fn monoid_checks() -> Vec<CheckResult> {
    let mut chart = Check::new("log_monoid.cyclic-chart");
    for n in 2..=6i64 {
        let q = FinGenMonoid::cyclic_chart(n);
        let coker = q.groupify().cokernel_in_ambient;
        chart.case(
            coker
                .as_ref()
                .is_some_and(|c| c.rank == 0 && c.torsion == vec![n]),
            || format!("cokernel for N = {n}"),
        );
        let etale = MonoidHom::inclusion_into_free(q.clone()).and_then(|h| h.etale(0));
        chart.case(etale.is_ok_and(|v| v.etale), || {
            format!("etale for N = {n}")
        });
        for x in 0..=2 * n {
            for y in 0..=2 * n {
                let member = q.membership(&[x, y]).map(|m| m.member);
                chart.case(member == Ok((x - y) % n == 0), || {
                    format!("({x},{y}) for N = {n}")
                });
            }
        }
    }
    let mut cliff = Check::new("log_monoid.clifford");
    cliff.case(CliffordGenerators::new().is_clifford(), || "pairing".into());
    vec![chart.finish(), cliff.finish()]
}

fn character_checks() -> Vec<CheckResult> {
    let mut anchor = Check::new("character.anchor");
    for n in 2..=4 {
        let g = minimal_generators(n, 1, n + 3, SpanModel::BlockBasis);
        anchor.case(g.count == 6 && g.stable, || {
            format!("oracle for N = {n}: {}", g.count)
        });
        anchor.case(formula_length(n, 1) == 6u32.into(), || {
            format!("formula for N = {n}")
        });
    }
    vec![anchor.finish()]
}

pub fn run_selftest(config: &SelftestConfig) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = series_checks(&mut rng);
    checks.extend(mode_checks(&mut rng, config.corrupt_relation));
    checks.extend(vertex_checks(&mut rng));
    checks.extend(coordinate_checks(&mut rng, config.rule));
    checks.extend(monoid_checks());
    checks.extend(character_checks());
    let pass = checks.iter().all(|c| c.passed);
    SelftestReport {
        seed: config.seed,
        rule: config.rule,
        checks,
        pass,
    }
}
