use serde::{Deserialize, Serialize};

use super::chisq::{chi2_sf, pearson, Method, TestResult};
use super::percent::Percent;
use super::tabulate::MultiResponseTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub group: String,
    pub left_n: u64,
    pub right_n: u64,
    /// Tag of the side with the larger share; `None` on a tie.
    pub tag: Option<String>,
}

/// Two works' distributions of concept mentions over a shared group axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub left_label: String,
    pub right_label: String,
    pub left_tag: String,
    pub right_tag: String,
    /// Sorted by absolute percentage difference, descending.
    pub rows: Vec<ComparisonRow>,
    pub left_total: u64,
    pub right_total: u64,
}

impl ComparisonTable {
    pub fn left_pct(&self, row: &ComparisonRow) -> Percent {
        Percent::of(row.left_n, self.left_total).unwrap_or_else(Percent::zero)
    }

    pub fn right_pct(&self, row: &ComparisonRow) -> Percent {
        Percent::of(row.right_n, self.right_total).unwrap_or_else(Percent::zero)
    }

    pub fn diff(&self, row: &ComparisonRow) -> Percent {
        self.left_pct(row).abs_diff(self.right_pct(row))
    }

    pub fn row(&self, group: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.group == group)
    }
}

/// First letter of a work label, upper-cased (`Kuhn (1962)` -> `K`).
pub fn tag_for(label: &str) -> String {
    label.chars().find(|c| c.is_alphanumeric()).map(|c| c.to_uppercase().collect()).unwrap_or_else(|| "?".to_owned())
}

pub fn compare_books(left: &MultiResponseTable, right: &MultiResponseTable) -> Result<(ComparisonTable, TestResult)> {
    let left_total = left.total_mentions();
    let right_total = right.total_mentions();
    if left_total == 0 || right_total == 0 {
        return Err(Error::UndefinedComparison("a table has no concept mentions".into()));
    }
    let mut groups: Vec<&str> = left.groups.iter().map(String::as_str).collect();
    for g in &right.groups {
        if !groups.contains(&g.as_str()) {
            groups.push(g);
        }
    }
    let col = |t: &MultiResponseTable, g: &str| t.group_index(g).map_or(0, |i| t.group_total(i));

    let (mut left_tag, mut right_tag) = (tag_for(&left.work_label), tag_for(&right.work_label));
    if left_tag == right_tag {
        left_tag = left.work_label.clone();
        right_tag = right.work_label.clone();
    }

    let mut table = ComparisonTable {
        left_label: left.work_label.clone(),
        right_label: right.work_label.clone(),
        left_tag,
        right_tag,
        rows: Vec::with_capacity(groups.len()),
        left_total,
        right_total,
    };
    for g in &groups {
        let mut row = ComparisonRow { group: (*g).to_owned(), left_n: col(left, g), right_n: col(right, g), tag: None };
        let (lp, rp) = (table.left_pct(&row), table.right_pct(&row));
        row.tag = match lp.cmp(&rp) {
            std::cmp::Ordering::Greater => Some(table.left_tag.clone()),
            std::cmp::Ordering::Less => Some(table.right_tag.clone()),
            std::cmp::Ordering::Equal => None,
        };
        table.rows.push(row);
    }
    let diffs: Vec<Percent> = table.rows.iter().map(|r| table.diff(r)).collect();
    let mut order: Vec<usize> = (0..table.rows.len()).collect();
    order.sort_by(|&a, &b| diffs[b].cmp(&diffs[a]).then_with(|| table.rows[a].group.cmp(&table.rows[b].group)));
    table.rows = order.into_iter().map(|i| table.rows[i].clone()).collect();

    let counts = [
        table.rows.iter().map(|r| r.left_n as f64).collect::<Vec<_>>(),
        table.rows.iter().map(|r| r.right_n as f64).collect::<Vec<_>>(),
    ];
    let fit = pearson(&counts);
    let df = fit.cols.saturating_sub(1) as u64;
    let test = TestResult {
        concept: None,
        statistic: fit.statistic,
        df,
        p_raw: chi2_sf(fit.statistic, df),
        p_adjusted: None,
        method: Method::Pearson2xG,
        warnings: fit.warnings(),
    };
    Ok((table, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(label: &str, groups: &[&str], totals: &[u64]) -> MultiResponseTable {
        MultiResponseTable {
            work_id: label.to_lowercase(),
            work_label: label.into(),
            grouping: "fos".into(),
            concepts: vec!["c".into()],
            groups: groups.iter().map(|g| (*g).to_owned()).collect(),
            counts: vec![totals.to_vec()],
            cases: totals.to_vec(),
        }
    }

    #[test]
    fn self_comparison_is_flat() {
        let t = table("Kuhn", &["a", "b", "c"], &[5, 10, 20]);
        let (cmp, test) = compare_books(&t, &t).unwrap();
        assert!(cmp.rows.iter().all(|r| cmp.diff(r) == Percent::zero() && r.tag.is_none()));
        assert!(test.statistic.abs() < 1e-12);
        assert_eq!(test.p_raw, 1.0);
        assert_eq!(test.df, 2);
    }

    #[test]
    fn union_of_groups_and_tags() {
        let k = table("Kuhn (1962)", &["a", "b"], &[30, 10]);
        let p = table("Popper", &["b", "c"], &[10, 10]);
        let (cmp, test) = compare_books(&k, &p).unwrap();
        let groups: Vec<&str> = cmp.rows.iter().map(|r| r.group.as_str()).collect();
        assert_eq!(groups, ["a", "c", "b"]);
        assert_eq!(cmp.rows[0].tag.as_deref(), Some("K"));
        assert_eq!(cmp.rows[1].tag.as_deref(), Some("P"));
        assert_eq!(cmp.diff(&cmp.rows[0]).fixed2(), "75.00");
        assert_eq!(test.df, 2);
    }

    #[test]
    fn empty_side_is_an_error() {
        let k = table("Kuhn", &["a"], &[3]);
        let z = table("Zero", &["a"], &[0]);
        assert!(matches!(compare_books(&k, &z), Err(Error::UndefinedComparison(_))));
    }
}
