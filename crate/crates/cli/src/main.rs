//! `cca`: citation concept analysis from the command line.

mod config;
mod fail;
mod output;
mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::anyhow;
use cca_core::fixture::published::{KUHN, POPPER};
use cca_core::fixture::{published_fixture, FixtureOptions};
use cca_core::report::{self, structured, Format};
use cca_core::stats::compare_books;
use cca_core::textnorm::{normalize, word_frequency};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{overall_mode, AdjustArg, OverallArg, PartialConfig, RunConfig};
use fail::{read_file, CliResult, Fail, FileRole, EXIT_USAGE};
use output::{emit, write_atomic};
use pipeline::GroupBy;

#[derive(Parser)]
#[command(name = "cca", version, about = "Citation concept analysis of highly cited works")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus and print record accounting as JSON.
    Ingest(IngestArgs),
    /// Word frequencies over citances, as `token,count` CSV.
    Freq(FreqArgs),
    /// Per-case concept and hedge indicators, as CSV.
    Match(MatchArgs),
    /// Concept table with chi-square tests.
    Analyze(AnalyzeArgs),
    /// Hedged share of concept mentions.
    Uncertainty(UncertaintyArgs),
    /// Compare two works' concept mentions across groups.
    Compare(CompareArgs),
    /// Full pipeline from a config file, with a run manifest.
    Run(RunArgs),
    /// Write a synthetic corpus matching a bundled case study.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Corpus file, one JSON record per line.
    #[arg(long)]
    corpus: PathBuf,
    /// Work registry (TOML); the builtin registry when omitted.
    #[arg(long)]
    works: Option<PathBuf>,
}

#[derive(Args)]
struct LexiconArgs {
    /// Builtin lexicon (`kuhn`, `popper`) or a lexicon file.
    #[arg(long)]
    lexicon: String,
    /// Keep builtin concepts that the report preset leaves out.
    #[arg(long)]
    all_concepts: bool,
    /// `default`, `none`, or a file with one hedge term per line.
    #[arg(long, default_value = "default")]
    hedges: String,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long, value_enum, default_value = "fos")]
    group_by: GroupBy,
    /// Period edges, e.g. `2000,2006,2011`.
    #[arg(long, value_delimiter = ',')]
    periods: Option<Vec<i32>>,
}

#[derive(Args)]
struct OutArgs {
    /// `csv`, `markdown` or `structured`.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: cca_core::Error| e.to_string())
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FreqArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Only citances toward this work.
    #[arg(long)]
    work: Option<String>,
    /// Keep the N most frequent tokens.
    #[arg(long)]
    top: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum, default_value = "bonferroni")]
    adjust: AdjustArg,
    #[arg(long, value_enum, default_value = "pattern")]
    overall: OverallArg,
    #[arg(long, default_value_t = cca_core::stats::DEFAULT_MC_ITERATIONS)]
    mc_iterations: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutArgs,
}

#[derive(Args)]
struct UncertaintyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    group: GroupArgs,
    /// Minimum concept mentions for a group to get its own columns.
    #[arg(long, default_value_t = cca_core::stats::DEFAULT_MIN_TOTAL)]
    min_total: u64,
    #[command(flatten)]
    output: OutArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Structured concept table written by `analyze --format structured`.
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    #[command(flatten)]
    output: OutArgs,
}

#[derive(Args)]
struct RunArgs {
    /// TOML file; its settings override the flags below.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    works: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<String>,
    #[arg(long)]
    all_concepts: bool,
    #[arg(long)]
    hedges: Option<String>,
    #[arg(long, value_enum)]
    group_by: Option<GroupBy>,
    #[arg(long, value_delimiter = ',')]
    periods: Option<Vec<i32>>,
    #[arg(long)]
    min_total: Option<u64>,
    #[arg(long, value_enum)]
    adjust: Option<AdjustArg>,
    #[arg(long, value_enum)]
    overall: Option<OverallArg>,
    #[arg(long)]
    mc_iterations: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = |s: &str| parse_format(s).map(|_| s.to_owned()))]
    format: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixtureArgs {
    /// `kuhn` or `popper`.
    #[arg(long)]
    work: String,
    #[arg(long, default_value_t = FixtureOptions::default().seed)]
    seed: u64,
    /// Leave out records without citation context.
    #[arg(long)]
    no_bare: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(fail) => {
            eprintln!("error: {:#}", fail.error);
            ExitCode::from(fail.code)
        }
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Ingest(a) => ingest(a),
        Command::Freq(a) => freq(a),
        Command::Match(a) => match_cmd(a),
        Command::Analyze(a) => analyze(a),
        Command::Uncertainty(a) => uncertainty(a),
        Command::Compare(a) => compare(a),
        Command::Run(a) => run(a),
        Command::Fixture(a) => fixture(a),
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(Fail::data)?;
    s.push('\n');
    Ok(s)
}

fn ingest(a: IngestArgs) -> CliResult<()> {
    let registry = pipeline::load_registry(a.input.works.as_deref())?;
    let (_, report) = pipeline::load_corpus(&a.input.corpus, &registry)?;
    emit(a.out.as_deref(), &json(&report)?)
}

fn freq(a: FreqArgs) -> CliResult<()> {
    let registry = pipeline::load_registry(a.input.works.as_deref())?;
    let work = match &a.work {
        Some(w) => Some(registry.resolve(w).ok_or_else(|| Fail::usage(anyhow!("unknown work '{w}'")))?.to_owned()),
        None => None,
    };
    let (corpus, _) = pipeline::load_corpus(&a.input.corpus, &registry)?;
    let seps = Default::default();
    let tokens: Vec<_> = corpus
        .records()
        .iter()
        .flat_map(|r| r.citances.iter())
        .filter(|c| work.as_deref().is_none_or(|w| c.work_id == w))
        .map(|c| normalize(&c.text, &seps))
        .collect();
    let mut buf = Vec::new();
    word_frequency(tokens.iter()).write_csv(&mut buf, a.top)?;
    emit(a.out.as_deref(), &String::from_utf8_lossy(&buf))
}

fn match_cmd(a: MatchArgs) -> CliResult<()> {
    let registry = pipeline::load_registry(a.input.works.as_deref())?;
    let lexicon = pipeline::load_lexicon(&a.lexicon.lexicon, a.lexicon.all_concepts)?;
    let hedges = pipeline::load_hedges(&a.lexicon.hedges, &lexicon)?;
    let (corpus, _) = pipeline::load_corpus(&a.input.corpus, &registry)?;
    let cases = pipeline::cases_for(&corpus, &lexicon)?;
    let matrix = pipeline::match_cases(&cases, &lexicon, &hedges)?;
    let mut buf = Vec::new();
    matrix.write_csv(&mut buf)?;
    emit(a.out.as_deref(), &String::from_utf8_lossy(&buf))
}

fn analyze(a: AnalyzeArgs) -> CliResult<()> {
    let registry = pipeline::load_registry(a.input.works.as_deref())?;
    let lexicon = pipeline::load_lexicon(&a.lexicon.lexicon, a.lexicon.all_concepts)?;
    let hedges = pipeline::load_hedges(&a.lexicon.hedges, &lexicon)?;
    let grouping = pipeline::grouping(a.group.group_by, a.group.periods.as_deref());
    let (corpus, _) = pipeline::load_corpus(&a.input.corpus, &registry)?;
    let cases = pipeline::cases_for(&corpus, &lexicon)?;
    let matrix = pipeline::match_cases(&cases, &lexicon, &hedges)?;
    let label = pipeline::work_label(&registry, &lexicon.work_id);
    let mode = overall_mode(a.overall, a.mc_iterations, a.seed);
    let (table, tests) = pipeline::analyze(&matrix, &grouping, a.adjust.into(), mode, &label)?;
    let title = pipeline::concepts_title(&label, grouping.kind());
    emit(a.output.out.as_deref(), &report::render_concepts(&table, &title, &tests, a.output.format)?)
}

fn uncertainty(a: UncertaintyArgs) -> CliResult<()> {
    let registry = pipeline::load_registry(a.input.works.as_deref())?;
    let lexicon = pipeline::load_lexicon(&a.lexicon.lexicon, a.lexicon.all_concepts)?;
    let hedges = pipeline::load_hedges(&a.lexicon.hedges, &lexicon)?;
    let grouping = pipeline::grouping(a.group.group_by, a.group.periods.as_deref());
    let (corpus, _) = pipeline::load_corpus(&a.input.corpus, &registry)?;
    let cases = pipeline::cases_for(&corpus, &lexicon)?;
    let matrix = pipeline::match_cases(&cases, &lexicon, &hedges)?;
    let label = pipeline::work_label(&registry, &lexicon.work_id);
    let (table, tests) = pipeline::uncertainty(&matrix, &grouping, a.min_total, &label)?;
    let title = pipeline::uncertainty_title(&label, grouping.kind());
    emit(a.output.out.as_deref(), &report::render_uncertainty(&table, &title, &tests, a.output.format)?)
}

fn compare(a: CompareArgs) -> CliResult<()> {
    let load = |p: &Path| -> CliResult<_> {
        let text = read_file(p, "table", FileRole::Data)?;
        let (table, _) = structured::parse_concept_table(&text)
            .map_err(|e| Fail::from(e).context(format!("in '{}'", p.display())))?;
        Ok(table)
    };
    let (left, right) = (load(&a.left)?, load(&a.right)?);
    let (table, test) = compare_books(&left, &right)?;
    let title = format!("Concept mentions by group: {} and {}", table.left_label, table.right_label);
    emit(a.output.out.as_deref(), &report::render_comparison(&table, &title, &[test], a.output.format)?)
}

fn fixture(a: FixtureArgs) -> CliResult<()> {
    let tables = match a.work.as_str() {
        "kuhn" => &KUHN,
        "popper" => &POPPER,
        other => return Err(Fail::usage(anyhow!("no bundled case study for '{other}'"))),
    };
    let opts = FixtureOptions { seed: a.seed, include_bare: !a.no_bare, ..FixtureOptions::default() };
    let fx = published_fixture(tables, &opts)?;
    emit(a.out.as_deref(), &fx.to_jsonl()?)
}

#[derive(Serialize)]
struct Accounting {
    total_records: u64,
    records_with_context: u64,
    records_with_fos: u64,
    work: String,
    citing: u64,
    with_context: u64,
    with_fos: u64,
    with_concept: u64,
    cases: usize,
    cases_with_concept: u64,
}

#[derive(Serialize)]
struct Drops<'a> {
    malformed_lines: &'a [cca_core::corpus::LineError],
    no_fos: &'a [String],
}

#[derive(Serialize)]
struct LexiconEcho<'a> {
    work: &'a str,
    source: &'a str,
    concepts: Vec<&'a str>,
    hedges: Vec<&'a str>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    lexicon: LexiconEcho<'a>,
    accounting: Accounting,
    drops: Drops<'a>,
    artifacts: Vec<String>,
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Markdown => "md",
        Format::Structured => "json",
    }
}

fn run(a: RunArgs) -> CliResult<()> {
    let from_file = PartialConfig::from_file(&a.config)?;
    let flags = PartialConfig {
        corpus: a.corpus,
        works: a.works,
        lexicon: a.lexicon,
        all_concepts: a.all_concepts.then_some(true),
        hedges: a.hedges,
        group_by: a.group_by,
        periods: a.periods,
        min_total: a.min_total,
        adjust: a.adjust,
        overall: a.overall,
        mc_iterations: a.mc_iterations,
        seed: a.seed,
        format: a.format,
        out: a.out,
    };
    let cfg = from_file.over(flags).resolve()?;
    let format: Format = cfg.format.parse()?;

    let registry = pipeline::load_registry(cfg.works.as_deref())?;
    let lexicon = pipeline::load_lexicon(&cfg.lexicon, cfg.all_concepts)?;
    let hedges = pipeline::load_hedges(&cfg.hedges, &lexicon)?;
    let grouping = pipeline::grouping(cfg.group_by, Some(&cfg.periods));
    let (corpus, report) = pipeline::load_corpus(&cfg.corpus, &registry)?;
    let cases = pipeline::cases_for(&corpus, &lexicon)?;
    let matrix = pipeline::match_cases(&cases, &lexicon, &hedges)?;
    let label = pipeline::work_label(&registry, &lexicon.work_id);
    let mode = overall_mode(cfg.overall, cfg.mc_iterations, cfg.seed);
    let (table, tests) = pipeline::analyze(&matrix, &grouping, cfg.adjust.into(), mode, &label)?;
    let (utable, utests) = pipeline::uncertainty(&matrix, &grouping, cfg.min_total, &label)?;

    std::fs::create_dir_all(&cfg.out)
        .map_err(|e| Fail::data(anyhow!("cannot create output directory '{}': {e}", cfg.out.display())))?;
    let ext = extension(format);
    let mut artifacts = Vec::new();
    let mut put = |name: String, text: &str| -> CliResult<()> {
        write_atomic(&cfg.out.join(&name), text.as_bytes())?;
        artifacts.push(name);
        Ok(())
    };
    let mut matches = Vec::new();
    matrix.write_csv(&mut matches)?;
    put("matches.csv".into(), &String::from_utf8_lossy(&matches))?;
    let title = pipeline::concepts_title(&label, grouping.kind());
    put(format!("concepts.{ext}"), &report::render_concepts(&table, &title, &tests, format)?)?;
    let title = pipeline::uncertainty_title(&label, grouping.kind());
    put(format!("uncertainty.{ext}"), &report::render_uncertainty(&utable, &title, &utests, format)?)?;

    let acct = report.works.get(&lexicon.work_id).cloned().unwrap_or_default();
    let manifest = Manifest {
        tool: "cca",
        version: env!("CARGO_PKG_VERSION"),
        config: &cfg,
        lexicon: LexiconEcho {
            work: &lexicon.work_id,
            source: &lexicon.source,
            concepts: lexicon.names(),
            hedges: hedges.terms.iter().map(String::as_str).collect(),
        },
        accounting: Accounting {
            total_records: report.total_records,
            records_with_context: report.records_with_context,
            records_with_fos: report.records_with_fos,
            work: lexicon.work_id.clone(),
            citing: acct.citing,
            with_context: acct.with_context,
            with_fos: acct.with_fos,
            with_concept: matrix.records_with_mention() as u64,
            cases: cases.len(),
            cases_with_concept: table.total_cases(),
        },
        drops: Drops { malformed_lines: &report.errors, no_fos: &cases.dropped_no_fos },
        artifacts: {
            let mut all = artifacts.clone();
            all.push("manifest.json".into());
            all
        },
    };
    write_atomic(&cfg.out.join("manifest.json"), json(&manifest)?.as_bytes())
}
