use serde::Serialize;

use super::disc::CoordTransform1;
use super::fields::{transform_fields_species, FieldRule, TransformedFields};
use super::tracked::TrackedState;
use super::TransformError;
use crate::modes::{Gamma0Cutoff, Mode, StateVector};
use crate::series::rational;
use crate::vertex::ProductCache;

/// Outcome of comparing one computed product against its expected value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleCheck {
    /// `n` in `A_(n) B`; the pole order is `n + 1`.
    pub n: i64,
    pub computed: StateVector,
    pub expected: StateVector,
    /// Monomials with gamma number below this bound were compared.
    pub exact_below_gamma_number: Option<i64>,
    pub mismatch: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub left: &'static str,
    pub right: &'static str,
    pub checks: Vec<PoleCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpeReport {
    pub rule: FieldRule,
    pub pairs: Vec<PairReport>,
    pub truncated: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VirasoroReport {
    pub rule: FieldRule,
    pub check: PoleCheck,
    pub truncated: bool,
    pub pass: bool,
}

/// The ten unordered pairs, with the two contracting pairs written in the
/// order whose simple pole is `+|0>`.
const PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (3, 0),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

fn compare(
    n: i64,
    computed: &TrackedState,
    expected: StateVector,
    cutoff: Gamma0Cutoff,
) -> (PoleCheck, bool) {
    let cut = computed.known().truncate_gamma0(cutoff);
    let in_window = |s: &StateVector| {
        s.filter(|m| {
            computed.floor().is_none_or(|f| m.gamma_number() < f)
                && cutoff.admits(m.gamma0_degree())
        })
    };
    let got = in_window(&cut.value);
    let want = in_window(&expected);
    let diff = got.sub(&want);
    let mismatch = diff.terms().next().map(|(m, _)| {
        format!(
            "coefficient of {m}: computed {}, expected {}",
            rational::to_display(&got.coeff(m)),
            rational::to_display(&want.coeff(m))
        )
    });
    (
        PoleCheck {
            n,
            computed: got,
            expected: want,
            exact_below_gamma_number: computed.floor(),
            mismatch,
        },
        cut.truncated,
    )
}

/// Computes every singular product among the transformed fields and checks
/// that only `beta gamma` and `c b` have a (simple, unit) pole.
pub fn verify_tilde_ope(
    t: &CoordTransform1,
    rule: FieldRule,
    cutoff: Gamma0Cutoff,
) -> Result<OpeReport, TransformError> {
    let fields = transform_fields_species(t, rule, 1)?;
    Ok(ope_report(&fields, rule, cutoff))
}

pub fn ope_report(fields: &TransformedFields, rule: FieldRule, cutoff: Gamma0Cutoff) -> OpeReport {
    let names = TransformedFields::names();
    let states = fields.as_array();
    let weights = [0i64, 0, 1, 1];
    let mut cache = ProductCache::new();
    let mut pairs = Vec::new();
    let mut truncated = false;
    for &(i, j) in &PAIRS {
        let contracting = (i, j) == (3, 0) || (i, j) == (1, 2);
        let mut checks = Vec::new();
        for n in 0..=(weights[i] + weights[j]) {
            let prod = TrackedState::product(&mut cache, states[i], n, states[j]);
            let expected = if contracting && n == 0 {
                StateVector::vacuum()
            } else {
                StateVector::zero()
            };
            let (check, cut) = compare(n, &prod, expected, cutoff);
            truncated |= cut;
            checks.push(check);
        }
        let pass = checks.iter().all(|c| c.mismatch.is_none());
        pairs.push(PairReport {
            left: names[i],
            right: names[j],
            checks,
            pass,
        });
    }
    let pass = pairs.iter().all(|p| p.pass);
    OpeReport {
        rule,
        pairs,
        truncated,
        pass,
    }
}

/// `L = gamma_-1 beta_-1 + c_-1 b_-1` for one species.
pub fn species_virasoro(species: u32) -> StateVector {
    StateVector::from_modes(&[Mode::gamma(species, -1), Mode::beta(species, -1)]).add(
        &StateVector::from_modes(&[Mode::c(species, -1), Mode::b(species, -1)]),
    )
}

/// Rebuilds `L = :d gamma beta: + :d c b:` from the transformed fields and
/// compares it with the original Virasoro state.
pub fn verify_virasoro_invariance(
    t: &CoordTransform1,
    rule: FieldRule,
    cutoff: Gamma0Cutoff,
) -> Result<VirasoroReport, TransformError> {
    let fields = transform_fields_species(t, rule, 1)?;
    Ok(virasoro_report(&fields, rule, cutoff))
}

pub fn transformed_virasoro(cache: &mut ProductCache, fields: &TransformedFields) -> TrackedState {
    let bos = TrackedState::product(cache, &fields.gamma, -2, &fields.beta);
    let fer = TrackedState::product(cache, &fields.c, -2, &fields.b);
    bos.add(&fer)
}

pub fn virasoro_report(
    fields: &TransformedFields,
    rule: FieldRule,
    cutoff: Gamma0Cutoff,
) -> VirasoroReport {
    let mut cache = ProductCache::new();
    let l_new = transformed_virasoro(&mut cache, fields);
    let (check, truncated) = compare(-1, &l_new, species_virasoro(fields.species), cutoff);
    let pass = check.mismatch.is_none();
    VirasoroReport {
        rule,
        check,
        truncated,
        pass,
    }
}
