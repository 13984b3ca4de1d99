//! Loading inputs and running the analysis steps shared by the subcommands.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::anyhow;
use cca_core::corpus::{derive_cases, ingest_corpus, CaseSet, Corpus, IngestReport, WorkRegistry};
use cca_core::matcher::{build_match_matrix, ConceptLexicon, HedgeLexicon, MatchMatrix};
use cca_core::stats::{
    overall_chi2, per_item_tests, tabulate, uncertainty_rates, Adjustment, Grouping, MultiResponseTable, OverallMode,
    TestResult, UncertaintyTable, DEFAULT_PERIOD_EDGES,
};
use cca_core::Error;

use crate::fail::{read_file, CliResult, Fail, FileRole};
use crate::output::warn;

pub fn load_registry(works: Option<&Path>) -> CliResult<WorkRegistry> {
    match works {
        None => Ok(WorkRegistry::builtin()),
        Some(path) => {
            let text = read_file(path, "work registry", FileRole::Config)?;
            WorkRegistry::from_toml_str(&text).map_err(|e| Fail::from(e).context(format!("in '{}'", path.display())))
        }
    }
}

pub fn load_corpus(path: &Path, registry: &WorkRegistry) -> CliResult<(Corpus, IngestReport)> {
    let file = File::open(path).map_err(|e| Fail::data(anyhow!("cannot read corpus '{}': {e}", path.display())))?;
    let (corpus, report) = ingest_corpus(BufReader::new(file), registry)
        .map_err(|e| Fail::from(e).context(format!("while reading corpus '{}'", path.display())))?;
    if !report.errors.is_empty() {
        warn(format!("{} corpus line(s) skipped; see the ingest report", report.errors.len()));
    }
    Ok((corpus, report))
}

/// A builtin name (`kuhn`, `popper`) or a lexicon file.
pub fn load_lexicon(spec: &str, all_concepts: bool) -> CliResult<ConceptLexicon> {
    let builtin = if all_concepts { ConceptLexicon::builtin(spec) } else { ConceptLexicon::builtin_preset(spec) };
    if let Some(lex) = builtin {
        return Ok(lex);
    }
    let path = Path::new(spec);
    let text = read_file(path, "lexicon", FileRole::Config)?;
    ConceptLexicon::from_toml_str(&text, spec).map_err(|e| Fail::from(e).context(format!("in '{spec}'")))
}

/// `default`, `none`, or a file with one hedge term per line.
pub fn load_hedges(spec: &str, lexicon: &ConceptLexicon) -> CliResult<HedgeLexicon> {
    match spec {
        "default" => Ok(HedgeLexicon::default()),
        "none" => Ok(HedgeLexicon::empty()),
        path => {
            let text = read_file(Path::new(path), "hedge list", FileRole::Config)?;
            HedgeLexicon::from_text(&text, &lexicon.separators)
                .map_err(|e| Fail::from(e).context(format!("in '{path}'")))
        }
    }
}

pub fn cases_for(corpus: &Corpus, lexicon: &ConceptLexicon) -> CliResult<CaseSet> {
    let cases = derive_cases(corpus, &lexicon.work_id)?;
    if !cases.dropped_no_fos.is_empty() {
        warn(format!(
            "{} record(s) citing '{}' have no field of study and were dropped",
            cases.dropped_no_fos.len(),
            cases.work_id
        ));
    }
    Ok(cases)
}

pub fn match_cases(cases: &CaseSet, lexicon: &ConceptLexicon, hedges: &HedgeLexicon) -> CliResult<MatchMatrix> {
    Ok(build_match_matrix(cases, lexicon, hedges)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupBy {
    Fos,
    Period,
    None,
}

pub fn grouping(by: GroupBy, periods: Option<&[i32]>) -> Grouping {
    match by {
        GroupBy::Fos => Grouping::Fos,
        GroupBy::None => Grouping::None,
        GroupBy::Period => match periods {
            Some(edges) if !edges.is_empty() => Grouping::Period(edges.to_vec()),
            _ => {
                warn(format!("period grouping without edges; using {DEFAULT_PERIOD_EDGES:?}"));
                Grouping::Period(DEFAULT_PERIOD_EDGES.to_vec())
            }
        },
    }
}

pub fn work_label(registry: &WorkRegistry, work_id: &str) -> String {
    registry.get(work_id).map_or_else(|| work_id.to_owned(), |w| w.label.clone())
}

fn soft<T>(what: &str, r: cca_core::Result<T>) -> CliResult<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedTest(msg)) => {
            warn(format!("{what} skipped: {msg}"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

/// Concept table with per-concept tests followed by the overall test.
/// Tests that are undefined for the data are skipped with a warning.
pub fn analyze(
    matrix: &MatchMatrix,
    grouping: &Grouping,
    adjustment: Adjustment,
    overall: OverallMode,
    label: &str,
) -> CliResult<(MultiResponseTable, Vec<TestResult>)> {
    let mut table = tabulate(matrix, grouping)?;
    table.work_label = label.to_owned();
    let mut tests = soft("per-concept tests", per_item_tests(&table, adjustment))?.unwrap_or_default();
    if let Some(t) = soft("overall test", overall_chi2(matrix, grouping, overall))? {
        tests.push(t);
    }
    Ok((table, tests))
}

pub fn uncertainty(
    matrix: &MatchMatrix,
    grouping: &Grouping,
    min_total: u64,
    label: &str,
) -> CliResult<(UncertaintyTable, Vec<TestResult>)> {
    let (mut table, test) = uncertainty_rates(matrix, grouping, min_total)?;
    table.work_label = label.to_owned();
    Ok((table, test.into_iter().collect()))
}

fn scope(grouping: &str) -> String {
    match grouping {
        "fos" | "period" => format!("by {}", cca_core::report::axis_title(grouping)),
        _ => "over all cases".to_owned(),
    }
}

pub fn concepts_title(label: &str, grouping: &str) -> String {
    format!("Concept mentions in citances of {label} {}", scope(grouping))
}

pub fn uncertainty_title(label: &str, grouping: &str) -> String {
    format!("Hedged concept mentions in citances of {label} {}", scope(grouping))
}
