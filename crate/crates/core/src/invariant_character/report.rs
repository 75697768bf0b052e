use rayon::prelude::*;
use serde::Serialize;

use super::formula::{formula_table, ProductCount};
use super::nakayama::{minimal_generators, GeneratorCount};
use super::slice::SpanModel;

pub const CSV_FORMAT_TAG: &str = "#format=character-report/v1";
pub const CSV_HEADER: &str = "N,r,formula,formula_multichoose_variant,oracle,stable,witness_count";

/// Default `gamma_0` cutoff: generators of weight `r` need at most
/// `N + r` factors of `gamma_0`, with margin.
pub fn default_cutoff(n: u32, r_max: u32) -> u32 {
    n + r_max + 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterRow {
    pub r: u32,
    pub formula: String,
    pub formula_multichoose_variant: String,
    pub oracle: usize,
    pub formula_matches_oracle: bool,
    pub stable: bool,
    pub cutoff: u32,
    pub counts_at: [usize; 3],
    pub witnesses: Vec<String>,
    /// Generator count when every G-invariant monomial is admitted.
    pub invariant_oracle: usize,
    pub invariant_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterReport {
    pub n: u32,
    pub r_max: u32,
    pub cutoff: u32,
    pub rows: Vec<CharacterRow>,
}

impl CharacterReport {
    pub fn all_stable(&self) -> bool {
        self.rows.iter().all(|r| r.stable)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_FORMAT_TAG}\n{CSV_HEADER}\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.n,
                row.r,
                row.formula,
                row.formula_multichoose_variant,
                row.oracle,
                if row.stable { "stable" } else { "unstable" },
                row.witnesses.len()
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("N = {}, gamma_0 cutoff {}\n", self.n, self.cutoff);
        out.push_str("  r  formula  multichoose  oracle  stable  invariant-oracle\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:>3}  {:>7}  {:>11}  {:>6}  {:>6}  {:>16}\n",
                row.r,
                row.formula,
                row.formula_multichoose_variant,
                row.oracle,
                if row.stable { "yes" } else { "no" },
                row.invariant_oracle
            ));
        }
        out
    }
}

/// Formula against oracle for `r = 1..=r_max`; the weights run in parallel.
pub fn compare(n: u32, r_max: u32, cutoff: Option<u32>) -> CharacterReport {
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(n, r_max));
    let binom = formula_table(n, r_max, ProductCount::Binomial);
    let multi = formula_table(n, r_max, ProductCount::Multichoose);
    let rows = (1..=r_max)
        .into_par_iter()
        .map(|r| {
            let block: GeneratorCount = minimal_generators(n, r, cutoff, SpanModel::BlockBasis);
            let inv = minimal_generators(n, r, cutoff, SpanModel::Invariant);
            let formula = binom[r as usize - 1].to_string();
            CharacterRow {
                r,
                formula_matches_oracle: formula == block.count.to_string(),
                formula,
                formula_multichoose_variant: multi[r as usize - 1].to_string(),
                oracle: block.count,
                stable: block.stable,
                cutoff,
                counts_at: block.counts_at,
                witnesses: block.witnesses.iter().map(|m| m.to_string()).collect(),
                invariant_oracle: inv.count,
                invariant_stable: inv.stable,
            }
        })
        .collect();
    CharacterReport {
        n,
        r_max,
        cutoff,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_row_agrees() {
        let rep = compare(2, 1, None);
        let row = &rep.rows[0];
        assert_eq!(
            (row.formula.as_str(), row.oracle, row.stable),
            ("6", 6, true)
        );
        assert!(rep
            .to_csv()
            .ends_with("N,r,formula,formula_multichoose_variant,oracle,stable,witness_count\n2,1,6,6,6,stable,6\n"));
    }
}
