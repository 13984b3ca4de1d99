use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Expected cell counts below this trigger a warning; results are unchanged.
pub const SMALL_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "per-item-pearson")]
    PerItemPearson,
    #[serde(rename = "pattern-overall")]
    PatternOverall,
    #[serde(rename = "pearson-2xG")]
    Pearson2xG,
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
    #[serde(rename = "hedged-count-pearson")]
    HedgedCountPearson,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::PerItemPearson => "per-item-pearson",
            Method::PatternOverall => "pattern-overall",
            Method::Pearson2xG => "pearson-2xG",
            Method::MonteCarlo => "monte-carlo",
            Method::HedgedCountPearson => "hedged-count-pearson",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Adjustment {
    #[default]
    Bonferroni,
    None,
}

impl Adjustment {
    pub fn apply(self, p_raw: f64, tests: usize) -> Option<f64> {
        match self {
            Adjustment::Bonferroni => Some((p_raw * tests as f64).min(1.0)),
            Adjustment::None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
    pub statistic: f64,
    pub df: u64,
    pub p_raw: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_adjusted: Option<f64>,
    pub method: Method,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl TestResult {
    /// The adjusted p-value when present, otherwise the raw one.
    pub fn p(&self) -> f64 {
        self.p_adjusted.unwrap_or(self.p_raw)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pearson {
    pub statistic: f64,
    /// Rows and columns with a non-zero margin.
    pub rows: usize,
    pub cols: usize,
    pub small_expected: usize,
}

impl Pearson {
    pub fn warnings(&self) -> Vec<String> {
        if self.small_expected == 0 {
            return vec![];
        }
        vec![format!(
            "{} of {} expected cell counts below {}",
            self.small_expected,
            self.rows * self.cols,
            SMALL_EXPECTED
        )]
    }
}

/// Pearson statistic of a two-way table of counts. All-zero rows and columns
/// carry no expected mass and are skipped.
pub fn pearson(table: &[Vec<f64>]) -> Pearson {
    let ncols = table.iter().map(Vec::len).max().unwrap_or(0);
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<f64> = (0..ncols).map(|j| table.iter().map(|r| r.get(j).copied().unwrap_or(0.0)).sum()).collect();
    let total: f64 = row_sums.iter().sum();
    let mut statistic = 0.0;
    let mut small = 0;
    if total > 0.0 {
        for (i, row) in table.iter().enumerate() {
            if row_sums[i] == 0.0 {
                continue;
            }
            for (j, &cs) in col_sums.iter().enumerate() {
                if cs == 0.0 {
                    continue;
                }
                let expected = row_sums[i] * cs / total;
                let observed = row.get(j).copied().unwrap_or(0.0);
                statistic += (observed - expected).powi(2) / expected;
                if expected < SMALL_EXPECTED {
                    small += 1;
                }
            }
        }
    }
    Pearson {
        statistic,
        rows: row_sums.iter().filter(|&&s| s > 0.0).count(),
        cols: col_sums.iter().filter(|&&s| s > 0.0).count(),
        small_expected: small,
    }
}

/// Upper tail of the chi-square distribution.
pub fn chi2_sf(statistic: f64, df: u64) -> f64 {
    if df == 0 || statistic <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
    dist.sf(statistic).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Simpson-rule integral of the chi-square density, independent of statrs.
    fn sf_quadrature(x: f64, df: u64) -> f64 {
        let k = df as f64 / 2.0;
        let ln_gamma_k = statrs::function::gamma::ln_gamma(k);
        let dens = |t: f64| {
            if t <= 0.0 {
                return if df == 2 { 0.5 } else { 0.0 };
            }
            ((k - 1.0) * t.ln() - t / 2.0 - k * 2f64.ln() - ln_gamma_k).exp()
        };
        let upper = x + 400.0;
        let n = 400_000;
        let h = (upper - x) / n as f64;
        let mut sum = dens(x) + dens(upper);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * dens(x + i as f64 * h);
        }
        sum * h / 3.0
    }

    #[test]
    fn survival_matches_quadrature() {
        for (x, df) in [(38.26, 18), (15.45, 3), (3.84, 1), (225.72, 18), (10.0, 24)] {
            let a = chi2_sf(x, df);
            let b = sf_quadrature(x, df);
            assert!((a - b).abs() < 1e-9 + 1e-6 * b, "x={x} df={df}: {a} vs {b}");
        }
        assert_eq!(chi2_sf(0.0, 5), 1.0);
    }

    #[test]
    fn pearson_two_by_two() {
        // (10*20 - 30*40)^2 * 100 / (40*60*50*50) = 16.6667
        let p = pearson(&[vec![10.0, 30.0], vec![40.0, 20.0]]);
        assert!((p.statistic - 100.0 / 6.0).abs() < 1e-12);
        assert_eq!((p.rows, p.cols), (2, 2));
    }

    #[test]
    fn zero_margins_are_skipped() {
        let p = pearson(&[vec![3.0, 0.0, 5.0], vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 1.0]]);
        let q = pearson(&[vec![3.0, 5.0], vec![2.0, 1.0]]);
        assert!((p.statistic - q.statistic).abs() < 1e-12);
        assert_eq!((p.rows, p.cols), (2, 2));
        assert_eq!(p.small_expected, 4);
    }

    #[test]
    fn bonferroni_caps_at_one() {
        assert_eq!(Adjustment::Bonferroni.apply(0.2, 7), Some(1.0));
        assert!((Adjustment::Bonferroni.apply(0.0036, 7).unwrap() - 0.0252).abs() < 1e-12);
        assert_eq!(Adjustment::None.apply(0.2, 7), None);
    }
}
