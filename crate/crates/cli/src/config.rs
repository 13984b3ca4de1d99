//! Resolved settings for `run`: config file over flags over defaults.

use std::path::{Path, PathBuf};

use cca_core::stats::{Adjustment, OverallMode, DEFAULT_MC_ITERATIONS, DEFAULT_MIN_TOTAL, DEFAULT_PERIOD_EDGES};
use serde::{Deserialize, Serialize};

use crate::fail::{read_file, CliResult, Fail, FileRole};
use crate::output::warn;
use crate::pipeline::GroupBy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OverallArg {
    Pattern,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AdjustArg {
    Bonferroni,
    None,
}

impl From<AdjustArg> for Adjustment {
    fn from(a: AdjustArg) -> Self {
        match a {
            AdjustArg::Bonferroni => Adjustment::Bonferroni,
            AdjustArg::None => Adjustment::None,
        }
    }
}

pub fn overall_mode(arg: OverallArg, iterations: u64, seed: u64) -> OverallMode {
    match arg {
        OverallArg::Pattern => OverallMode::PatternDf,
        OverallArg::Mc => OverallMode::MonteCarlo { iterations, seed },
    }
}

/// Every setting `run` needs, fully resolved. Echoed into the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub works: Option<PathBuf>,
    pub lexicon: String,
    pub all_concepts: bool,
    pub hedges: String,
    pub group_by: GroupBy,
    pub periods: Vec<i32>,
    pub min_total: u64,
    pub adjust: AdjustArg,
    pub overall: OverallArg,
    pub mc_iterations: u64,
    pub seed: u64,
    pub format: String,
    pub out: PathBuf,
}

/// Settings from the config file or from flags; unset fields fall through.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub corpus: Option<PathBuf>,
    pub works: Option<PathBuf>,
    pub lexicon: Option<String>,
    pub all_concepts: Option<bool>,
    pub hedges: Option<String>,
    pub group_by: Option<GroupBy>,
    pub periods: Option<Vec<i32>>,
    pub min_total: Option<u64>,
    pub adjust: Option<AdjustArg>,
    pub overall: Option<OverallArg>,
    pub mc_iterations: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = read_file(path, "config file", FileRole::Config)?;
        let mut cfg: Self = toml::from_str(&text)
            .map_err(|e| Fail::usage(anyhow::anyhow!("invalid config '{}': {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(inner) = p.as_mut() {
                if inner.is_relative() {
                    *inner = base.join(&*inner);
                }
            }
        };
        rebase(&mut cfg.corpus);
        rebase(&mut cfg.works);
        rebase(&mut cfg.out);
        for spec in [&mut cfg.lexicon, &mut cfg.hedges].into_iter().flatten() {
            if is_file_spec(spec) && Path::new(spec.as_str()).is_relative() {
                *spec = base.join(&*spec).to_string_lossy().into_owned();
            }
        }
        Ok(cfg)
    }

    /// Fields set in `self` win over `other`.
    pub fn over(self, other: Self) -> Self {
        Self {
            corpus: self.corpus.or(other.corpus),
            works: self.works.or(other.works),
            lexicon: self.lexicon.or(other.lexicon),
            all_concepts: self.all_concepts.or(other.all_concepts),
            hedges: self.hedges.or(other.hedges),
            group_by: self.group_by.or(other.group_by),
            periods: self.periods.or(other.periods),
            min_total: self.min_total.or(other.min_total),
            adjust: self.adjust.or(other.adjust),
            overall: self.overall.or(other.overall),
            mc_iterations: self.mc_iterations.or(other.mc_iterations),
            seed: self.seed.or(other.seed),
            format: self.format.or(other.format),
            out: self.out.or(other.out),
        }
    }

    pub fn resolve(self) -> CliResult<RunConfig> {
        let missing = |k: &str| Fail::usage(anyhow::anyhow!("'{k}' must be set in the config file or by flag"));
        let group_by = self.group_by.unwrap_or(GroupBy::Fos);
        let mut periods = self.periods.unwrap_or_else(|| DEFAULT_PERIOD_EDGES.to_vec());
        if group_by == GroupBy::Period && periods.is_empty() {
            warn(format!("period grouping without edges; using {DEFAULT_PERIOD_EDGES:?}"));
            periods = DEFAULT_PERIOD_EDGES.to_vec();
        }
        Ok(RunConfig {
            corpus: self.corpus.ok_or_else(|| missing("corpus"))?,
            works: self.works,
            lexicon: self.lexicon.ok_or_else(|| missing("lexicon"))?,
            all_concepts: self.all_concepts.unwrap_or(false),
            hedges: self.hedges.unwrap_or_else(|| "default".into()),
            group_by,
            periods,
            min_total: self.min_total.unwrap_or(DEFAULT_MIN_TOTAL),
            adjust: self.adjust.unwrap_or(AdjustArg::Bonferroni),
            overall: self.overall.unwrap_or(OverallArg::Pattern),
            mc_iterations: self.mc_iterations.unwrap_or(DEFAULT_MC_ITERATIONS),
            seed: self.seed.unwrap_or(0),
            format: self.format.unwrap_or_else(|| "csv".into()),
            out: self.out.ok_or_else(|| missing("out"))?,
        })
    }
}

/// Builtin names and keywords are not paths.
fn is_file_spec(spec: &str) -> bool {
    !matches!(spec, "kuhn" | "popper" | "default" | "none")
}
