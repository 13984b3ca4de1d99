use serde::{Deserialize, Serialize};

use super::chisq::{chi2_sf, pearson, Method, TestResult};
use super::percent::Percent;
use super::tabulate::{assign_groups, order_by_total, Grouping};
use crate::error::Result;
use crate::matcher::MatchMatrix;

/// Minimum concept mentions for a group to get its own columns.
pub const DEFAULT_MIN_TOTAL: u64 = 300;

/// Hedged share of concept mentions per concept and group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncertaintyTable {
    pub work_id: String,
    pub work_label: String,
    pub grouping: String,
    /// Sorted by total mentions, descending.
    pub concepts: Vec<String>,
    pub groups: Vec<String>,
    /// `mentions[c][g]`
    pub mentions: Vec<Vec<u64>>,
    /// `hedged[c][g]`, never above the matching mention count.
    pub hedged: Vec<Vec<u64>>,
    /// Groups with at least `min_total` mentions in all.
    pub retained: Vec<bool>,
    pub min_total: u64,
}

impl UncertaintyTable {
    /// `None` where the concept has no mentions in the group.
    pub fn rate(&self, c: usize, g: usize) -> Option<Percent> {
        Percent::of(self.hedged[c][g], self.mentions[c][g])
    }

    pub fn concept_mentions(&self, c: usize) -> u64 {
        self.mentions[c].iter().sum()
    }

    pub fn concept_hedged(&self, c: usize) -> u64 {
        self.hedged[c].iter().sum()
    }

    pub fn concept_rate(&self, c: usize) -> Option<Percent> {
        Percent::of(self.concept_hedged(c), self.concept_mentions(c))
    }

    pub fn group_mentions(&self, g: usize) -> u64 {
        self.mentions.iter().map(|r| r[g]).sum()
    }

    pub fn group_hedged(&self, g: usize) -> u64 {
        self.hedged.iter().map(|r| r[g]).sum()
    }

    pub fn group_rate(&self, g: usize) -> Option<Percent> {
        Percent::of(self.group_hedged(g), self.group_mentions(g))
    }

    pub fn total_mentions(&self) -> u64 {
        self.mentions.iter().flatten().sum()
    }

    pub fn total_hedged(&self) -> u64 {
        self.hedged.iter().flatten().sum()
    }

    pub fn total_rate(&self) -> Option<Percent> {
        Percent::of(self.total_hedged(), self.total_mentions())
    }

    pub fn retained_groups(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.groups.len()).filter(|&g| self.retained[g])
    }

    pub fn concept_index(&self, name: &str) -> Option<usize> {
        self.concepts.iter().position(|c| c == name)
    }

    pub fn group_index(&self, name: &str) -> Option<usize> {
        self.groups.iter().position(|g| g == name)
    }
}

/// Builds the hedged-rate table. The accompanying test is a Pearson
/// statistic on the hedged counts of the retained groups; it is `None` when
/// fewer than two concepts or groups carry hedged mentions.
pub fn uncertainty_rates(
    matrix: &MatchMatrix,
    grouping: &Grouping,
    min_total: u64,
) -> Result<(UncertaintyTable, Option<TestResult>)> {
    let (groups, idx) = assign_groups(matrix, grouping)?;
    let nc = matrix.concepts.len();
    let mut mentions = vec![vec![0u64; groups.len()]; nc];
    let mut hedged = vec![vec![0u64; groups.len()]; nc];
    for (row, &g) in matrix.rows.iter().zip(&idx) {
        for c in 0..nc {
            if row.mentioned[c] {
                mentions[c][g] += 1;
                hedged[c][g] += u64::from(row.hedged[c]);
            }
        }
    }
    let totals: Vec<u64> = mentions.iter().map(|r| r.iter().sum()).collect();
    let order = order_by_total(&totals);
    let mentions: Vec<Vec<u64>> = order.iter().map(|&c| mentions[c].clone()).collect();
    let hedged: Vec<Vec<u64>> = order.iter().map(|&c| hedged[c].clone()).collect();
    let retained = (0..groups.len()).map(|g| mentions.iter().map(|r| r[g]).sum::<u64>() >= min_total).collect();
    let table = UncertaintyTable {
        work_id: matrix.work_id.clone(),
        work_label: matrix.work_id.clone(),
        grouping: grouping.kind().to_owned(),
        concepts: order.iter().map(|&c| matrix.concepts[c].clone()).collect(),
        groups,
        mentions,
        hedged,
        retained,
        min_total,
    };
    let test = hedged_count_test(&table);
    Ok((table, test))
}

fn hedged_count_test(table: &UncertaintyTable) -> Option<TestResult> {
    let kept: Vec<usize> = table.retained_groups().collect();
    let counts: Vec<Vec<f64>> = table.hedged.iter().map(|row| kept.iter().map(|&g| row[g] as f64).collect()).collect();
    let fit = pearson(&counts);
    if fit.rows < 2 || fit.cols < 2 {
        return None;
    }
    let df = (fit.rows as u64 - 1) * (fit.cols as u64 - 1);
    let mut warnings = fit.warnings();
    warnings.push("diagnostic: Pearson statistic on hedged counts by concept and group".into());
    Some(TestResult {
        concept: None,
        statistic: fit.statistic,
        df,
        p_raw: chi2_sf(fit.statistic, df),
        p_adjusted: None,
        method: Method::HedgedCountPearson,
        warnings,
    })
}
