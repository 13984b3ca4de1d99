//! Chi-square tests over multiple-response data.
//!
//! Per-concept tests use the 2xG table of cases mentioning vs not mentioning
//! the concept. The overall test cross-classifies cases by response pattern
//! (the set of concepts a case mentions) against groups; its p-value comes
//! either from the chi-square distribution with (P-1)(G-1) degrees of freedom
//! or from permuting group labels.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chisq::{chi2_sf, pearson, Adjustment, Method, TestResult};
use super::tabulate::{assign_groups, tabulate, Grouping, MultiResponseTable};
use crate::error::{Error, Result};
use crate::matcher::MatchMatrix;

pub const DEFAULT_MC_ITERATIONS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum OverallMode {
    #[default]
    PatternDf,
    MonteCarlo {
        iterations: u64,
        seed: u64,
    },
}

/// One test per concept of the table, in table order.
pub fn per_item_tests(table: &MultiResponseTable, adjustment: Adjustment) -> Result<Vec<TestResult>> {
    let live: Vec<usize> = (0..table.groups.len()).filter(|&g| table.cases[g] > 0).collect();
    if live.len() < 2 {
        return Err(Error::UndefinedTest(format!(
            "per-concept tests need at least two groups with cases, found {}",
            live.len()
        )));
    }
    let df = live.len() as u64 - 1;
    let tests = table.concepts.len();
    Ok(table
        .concepts
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let yes: Vec<f64> = live.iter().map(|&g| table.counts[c][g] as f64).collect();
            let no: Vec<f64> = live.iter().map(|&g| (table.cases[g] - table.counts[c][g]) as f64).collect();
            let fit = pearson(&[yes, no]);
            let p_raw = chi2_sf(fit.statistic, df);
            TestResult {
                concept: Some(name.clone()),
                statistic: fit.statistic,
                df,
                p_raw,
                p_adjusted: adjustment.apply(p_raw, tests),
                method: Method::PerItemPearson,
                warnings: fit.warnings(),
            }
        })
        .collect())
}

pub fn per_item_chi2(matrix: &MatchMatrix, grouping: &Grouping, adjustment: Adjustment) -> Result<Vec<TestResult>> {
    per_item_tests(&tabulate(matrix, grouping)?, adjustment)
}

/// Case-level pattern and group indices, compacted to observed values.
struct PatternData {
    patterns: Vec<usize>,
    groups: Vec<usize>,
    n_patterns: usize,
    n_groups: usize,
}

fn pattern_data(matrix: &MatchMatrix, grouping: &Grouping) -> Result<PatternData> {
    let (_, group_idx) = assign_groups(matrix, grouping)?;
    let mut pattern_ids: BTreeMap<&[bool], usize> = BTreeMap::new();
    let mut group_ids: BTreeMap<usize, usize> = BTreeMap::new();
    for (row, &g) in matrix.rows.iter().zip(&group_idx) {
        if row.any_mention() {
            pattern_ids.entry(&row.mentioned).or_insert(0);
            group_ids.entry(g).or_insert(0);
        }
    }
    for (i, v) in pattern_ids.values_mut().enumerate() {
        *v = i;
    }
    for (i, v) in group_ids.values_mut().enumerate() {
        *v = i;
    }
    let mut patterns = Vec::new();
    let mut groups = Vec::new();
    for (row, g) in matrix.rows.iter().zip(&group_idx) {
        if row.any_mention() {
            patterns.push(pattern_ids[row.mentioned.as_slice()]);
            groups.push(group_ids[g]);
        }
    }
    if pattern_ids.len() < 2 || group_ids.len() < 2 {
        return Err(Error::UndefinedTest(format!(
            "overall test needs at least two response patterns and two groups, found {} and {}",
            pattern_ids.len(),
            group_ids.len()
        )));
    }
    Ok(PatternData { patterns, groups, n_patterns: pattern_ids.len(), n_groups: group_ids.len() })
}

/// Pearson statistic with fixed margins: N * sum(O^2 / (r c)) - N.
struct FixedMargins {
    inv_rc: Vec<f64>,
    n: f64,
    n_groups: usize,
}

impl FixedMargins {
    fn new(data: &PatternData) -> Self {
        let mut rows = vec![0u64; data.n_patterns];
        let mut cols = vec![0u64; data.n_groups];
        for (&p, &g) in data.patterns.iter().zip(&data.groups) {
            rows[p] += 1;
            cols[g] += 1;
        }
        let mut inv_rc = Vec::with_capacity(data.n_patterns * data.n_groups);
        for &r in &rows {
            for &c in &cols {
                inv_rc.push(1.0 / (r as f64 * c as f64));
            }
        }
        Self { inv_rc, n: data.patterns.len() as f64, n_groups: data.n_groups }
    }

    fn statistic(&self, patterns: &[usize], groups: &[usize], counts: &mut [u64]) -> f64 {
        counts.iter_mut().for_each(|c| *c = 0);
        for (&p, &g) in patterns.iter().zip(groups) {
            counts[p * self.n_groups + g] += 1;
        }
        let s: f64 = counts.iter().zip(&self.inv_rc).filter(|(&o, _)| o > 0).map(|(&o, &w)| (o * o) as f64 * w).sum();
        (self.n * s - self.n).max(0.0)
    }
}

/// Random stream for one permutation, independent of evaluation order.
fn iteration_rng(seed: u64, iteration: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

/// `(1 + #{permuted >= observed}) / (1 + iterations)`.
fn permutation_p(
    patterns: &[usize],
    groups: &[usize],
    margins: &FixedMargins,
    observed: f64,
    iterations: u64,
    seed: u64,
) -> f64 {
    let tol = 1e-9 * observed.abs().max(1.0);
    let hits: u64 = (0..iterations)
        .into_par_iter()
        .map_init(
            || (groups.to_vec(), vec![0u64; margins.inv_rc.len()]),
            |(labels, counts), i| {
                labels.copy_from_slice(groups);
                labels.shuffle(&mut iteration_rng(seed, i));
                u64::from(margins.statistic(patterns, labels, counts) >= observed - tol)
            },
        )
        .sum();
    (1 + hits) as f64 / (1 + iterations) as f64
}

pub fn overall_chi2(matrix: &MatchMatrix, grouping: &Grouping, mode: OverallMode) -> Result<TestResult> {
    let data = pattern_data(matrix, grouping)?;
    let df = (data.n_patterns as u64 - 1) * (data.n_groups as u64 - 1);
    let mut table = vec![vec![0.0; data.n_groups]; data.n_patterns];
    for (&p, &g) in data.patterns.iter().zip(&data.groups) {
        table[p][g] += 1.0;
    }
    let fit = pearson(&table);
    let (p_raw, method) = match mode {
        OverallMode::PatternDf => (chi2_sf(fit.statistic, df), Method::PatternOverall),
        OverallMode::MonteCarlo { iterations, seed } => {
            let margins = FixedMargins::new(&data);
            let mut counts = vec![0u64; margins.inv_rc.len()];
            let observed = margins.statistic(&data.patterns, &data.groups, &mut counts);
            (permutation_p(&data.patterns, &data.groups, &margins, observed, iterations, seed), Method::MonteCarlo)
        }
    };
    Ok(TestResult {
        concept: None,
        statistic: fit.statistic,
        df,
        p_raw,
        p_adjusted: None,
        method,
        warnings: fit.warnings(),
    })
}
