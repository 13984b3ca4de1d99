use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PERIOD_EDGES: [i32; 3] = [2000, 2006, 2011];

/// Half-open year intervals: `<e1`, `[e1, e2)`, ..., `>=ek`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodBinning {
    pub edges: Vec<i32>,
    pub labels: Vec<String>,
}

impl PeriodBinning {
    /// Labels the final open bin up to `max_year` when that year reaches it.
    pub fn new(edges: &[i32], max_year: Option<i32>) -> Result<Self> {
        if let Some(w) = edges.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::PeriodEdges(format!("edges must be strictly ascending ({} >= {})", w[0], w[1])));
        }
        if edges.is_empty() {
            return Ok(Self { edges: vec![], labels: vec!["all years".into()] });
        }
        let mut labels = vec![format!("<{}", edges[0])];
        for w in edges.windows(2) {
            labels.push(format!("{}-{}", w[0], w[1] - 1));
        }
        let last = *edges.last().expect("non-empty");
        labels.push(match max_year {
            Some(max) if max >= last => format!("{last}-{max}"),
            _ => format!(">={last}"),
        });
        Ok(Self { edges: edges.to_vec(), labels })
    }

    pub fn bin(&self, year: i32) -> usize {
        self.edges.partition_point(|&e| e <= year)
    }

    pub fn label(&self, year: i32) -> &str {
        &self.labels[self.bin(year)]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Bins `years` and returns the binning with each year's bin index.
pub fn bin_periods(years: &[i32], edges: &[i32]) -> Result<(PeriodBinning, Vec<usize>)> {
    let binning = PeriodBinning::new(edges, years.iter().copied().max())?;
    let assignment = years.iter().map(|&y| binning.bin(y)).collect();
    Ok((binning, assignment))
}
