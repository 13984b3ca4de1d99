use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::percent::Percent;
use super::periods::PeriodBinning;
use crate::error::Result;
use crate::matcher::MatchMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "by", content = "edges")]
pub enum Grouping {
    Fos,
    Period(Vec<i32>),
    None,
}

impl Grouping {
    pub fn kind(&self) -> &'static str {
        match self {
            Grouping::Fos => "fos",
            Grouping::Period(_) => "period",
            Grouping::None => "none",
        }
    }
}

/// Label of the single group used when results are not grouped.
pub const ALL_GROUPS: &str = "all";

/// Group labels in display order and each matrix row's group index.
pub(crate) fn assign_groups(matrix: &MatchMatrix, grouping: &Grouping) -> Result<(Vec<String>, Vec<usize>)> {
    match grouping {
        Grouping::Fos => {
            let labels: Vec<String> =
                matrix.rows.iter().map(|r| r.fos.clone()).collect::<BTreeSet<_>>().into_iter().collect();
            let idx =
                matrix.rows.iter().map(|r| labels.binary_search(&r.fos).expect("label collected above")).collect();
            Ok((labels, idx))
        }
        Grouping::Period(edges) => {
            let binning = PeriodBinning::new(edges, matrix.rows.iter().map(|r| r.year).max())?;
            let idx = matrix.rows.iter().map(|r| binning.bin(r.year)).collect();
            Ok((binning.labels, idx))
        }
        Grouping::None => Ok((vec![ALL_GROUPS.to_owned()], vec![0; matrix.rows.len()])),
    }
}

/// Concepts by groups mention counts over cases with at least one mention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiResponseTable {
    pub work_id: String,
    pub work_label: String,
    pub grouping: String,
    /// Sorted by total mentions, descending.
    pub concepts: Vec<String>,
    pub groups: Vec<String>,
    /// `counts[c][g]`: cases in group `g` mentioning concept `c`.
    pub counts: Vec<Vec<u64>>,
    /// Cases in each group mentioning at least one concept.
    pub cases: Vec<u64>,
}

impl MultiResponseTable {
    pub fn is_empty(&self) -> bool {
        self.total_cases() == 0
    }

    pub fn concept_total(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }

    /// Mentions of all concepts in group `g`.
    pub fn group_total(&self, g: usize) -> u64 {
        self.counts.iter().map(|row| row[g]).sum()
    }

    pub fn total_mentions(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn total_cases(&self) -> u64 {
        self.cases.iter().sum()
    }

    pub fn pct(&self, c: usize, g: usize) -> Option<Percent> {
        Percent::of(self.counts[c][g], self.cases[g])
    }

    pub fn concept_pct(&self, c: usize) -> Option<Percent> {
        Percent::of(self.concept_total(c), self.total_cases())
    }

    pub fn group_total_pct(&self, g: usize) -> Option<Percent> {
        Percent::of(self.group_total(g), self.cases[g])
    }

    pub fn total_pct(&self) -> Option<Percent> {
        Percent::of(self.total_mentions(), self.total_cases())
    }

    pub fn concept_index(&self, name: &str) -> Option<usize> {
        self.concepts.iter().position(|c| c == name)
    }

    pub fn group_index(&self, name: &str) -> Option<usize> {
        self.groups.iter().position(|g| g == name)
    }
}

/// Sorts concept indices by descending total, keeping lexicon order on ties.
pub(crate) fn order_by_total(totals: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..totals.len()).collect();
    order.sort_by(|&a, &b| totals[b].cmp(&totals[a]));
    order
}

pub fn tabulate(matrix: &MatchMatrix, grouping: &Grouping) -> Result<MultiResponseTable> {
    let (groups, idx) = assign_groups(matrix, grouping)?;
    let nc = matrix.concepts.len();
    let mut counts = vec![vec![0u64; groups.len()]; nc];
    let mut cases = vec![0u64; groups.len()];
    for (row, &g) in matrix.rows.iter().zip(&idx) {
        if !row.any_mention() {
            continue;
        }
        cases[g] += 1;
        for (c, &m) in row.mentioned.iter().enumerate() {
            counts[c][g] += u64::from(m);
        }
    }
    let totals: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
    let order = order_by_total(&totals);
    Ok(MultiResponseTable {
        work_id: matrix.work_id.clone(),
        work_label: matrix.work_id.clone(),
        grouping: grouping.kind().to_owned(),
        concepts: order.iter().map(|&c| matrix.concepts[c].clone()).collect(),
        groups,
        counts: order.iter().map(|&c| counts[c].clone()).collect(),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::MatchRow;
    use proptest::prelude::*;

    fn row(fos: &str, year: i32, mentioned: &[bool]) -> MatchRow {
        MatchRow {
            record_id: format!("{fos}{year}"),
            fos: fos.into(),
            year,
            mentioned: mentioned.to_vec(),
            hedged: vec![false; mentioned.len()],
        }
    }

    fn matrix(rows: Vec<MatchRow>, nc: usize) -> MatchMatrix {
        MatchMatrix { work_id: "w".into(), concepts: (0..nc).map(|i| format!("c{i}")).collect(), rows }
    }

    #[test]
    fn single_case() {
        let t = tabulate(&matrix(vec![row("art", 2000, &[true])], 1), &Grouping::Fos).unwrap();
        assert_eq!(t.counts, [[1]]);
        assert_eq!(t.cases, [1]);
        assert_eq!(t.pct(0, 0).unwrap().fixed2(), "100.00");
    }

    #[test]
    fn drops_unmatched_cases_and_sorts_concepts() {
        let m = matrix(
            vec![
                row("art", 1990, &[false, true]),
                row("art", 2001, &[true, true]),
                row("bio", 2012, &[false, true]),
                row("bio", 2013, &[false, false]),
            ],
            2,
        );
        let t = tabulate(&m, &Grouping::Fos).unwrap();
        assert_eq!(t.concepts, ["c1", "c0"]);
        assert_eq!(t.counts, [[2, 1], [1, 0]]);
        assert_eq!(t.cases, [2, 1]);
        assert_eq!(t.group_total_pct(0).unwrap().fixed2(), "150.00");

        let p = tabulate(&m, &Grouping::Period(vec![2000, 2006, 2011])).unwrap();
        assert_eq!(p.groups, ["<2000", "2000-2005", "2006-2010", "2011-2013"]);
        assert_eq!(p.cases, [1, 1, 0, 1]);
        assert_eq!(p.total_mentions(), t.total_mentions());
    }

    #[test]
    fn empty_after_filtering() {
        let t = tabulate(&matrix(vec![row("art", 2000, &[false])], 1), &Grouping::Fos).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.groups, ["art"]);
    }

    fn rows_strategy() -> impl Strategy<Value = Vec<(u8, i32, Vec<bool>)>> {
        proptest::collection::vec((0u8..5, 1990i32..2020, proptest::collection::vec(any::<bool>(), 4)), 0..300)
    }

    proptest! {
        #[test]
        fn equals_double_loop(spec in rows_strategy()) {
            let fos = ["a", "b", "c", "d", "e"];
            let rows: Vec<MatchRow> =
                spec.iter().map(|(f, y, m)| row(fos[*f as usize], *y, m)).collect();
            let m = matrix(rows, 4);
            let t = tabulate(&m, &Grouping::Fos).unwrap();
            for (gi, g) in t.groups.iter().enumerate() {
                let in_group: Vec<&MatchRow> =
                    m.rows.iter().filter(|r| &r.fos == g && r.mentioned.iter().any(|&x| x)).collect();
                prop_assert_eq!(t.cases[gi], in_group.len() as u64);
                for (ci, c) in t.concepts.iter().enumerate() {
                    let k: usize = c[1..].parse().unwrap();
                    let n = in_group.iter().filter(|r| r.mentioned[k]).count() as u64;
                    prop_assert_eq!(t.counts[ci][gi], n);
                }
                if t.cases[gi] > 0 {
                    prop_assert!(t.group_total(gi) >= t.cases[gi]);
                }
            }
            let p = tabulate(&m, &Grouping::Period(vec![2000, 2010])).unwrap();
            prop_assert_eq!(p.total_cases(), t.total_cases());
            for c in &t.concepts {
                let (a, b) = (t.concept_index(c).unwrap(), p.concept_index(c).unwrap());
                prop_assert_eq!(t.concept_total(a), p.concept_total(b));
            }
        }
    }
}
