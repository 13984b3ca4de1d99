//! Citing-record data model, line-delimited ingestion and case derivation.
//!
//! A case is one (citing record, field of study) pair. A record carrying k
//! field labels and at least one citance toward the analyzed work yields k
//! cases; records with no field label yield none and are logged as dropped.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::BufRead;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textnorm::{normalize, SeparatorSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitedWork {
    pub work_id: String,
    pub label: String,
    /// Normalized title phrases, one per edition or translation.
    pub title_variants: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct RegistryFile {
    works: IndexMap<String, RegistryEntry>,
}

#[derive(Debug, Deserialize)]
struct RegistryEntry {
    label: String,
    #[serde(default)]
    titles: Vec<String>,
    /// Alternative identifiers (edition records) that collapse onto this work.
    #[serde(default)]
    aliases: Vec<String>,
}

/// Registered works plus edition aliases.
#[derive(Debug, Clone, Default)]
pub struct WorkRegistry {
    works: IndexMap<String, CitedWork>,
    aliases: HashMap<String, String>,
}

impl WorkRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, work: CitedWork, aliases: &[&str]) -> Result<()> {
        if self.resolve(&work.work_id).is_some() {
            return Err(Error::Registry(format!("work id '{}' registered twice", work.work_id)));
        }
        let seps = SeparatorSet::default();
        let mut titles = Vec::with_capacity(work.title_variants.len());
        for title in &work.title_variants {
            let norm = normalize(title, &seps).tokens.join(" ");
            if norm.is_empty() {
                return Err(Error::Registry(format!("work '{}' has an empty title variant", work.work_id)));
            }
            titles.push(norm);
        }
        for alias in aliases {
            if self.resolve(alias).is_some() || *alias == work.work_id {
                return Err(Error::Registry(format!("alias '{alias}' is already in use")));
            }
            self.aliases.insert((*alias).to_owned(), work.work_id.clone());
        }
        let work = CitedWork { title_variants: titles, ..work };
        self.works.insert(work.work_id.clone(), work);
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: RegistryFile = toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
        let mut registry = Self::new();
        for (id, entry) in file.works {
            let aliases: Vec<&str> = entry.aliases.iter().map(String::as_str).collect();
            registry.register(CitedWork { work_id: id, label: entry.label, title_variants: entry.titles }, &aliases)?;
        }
        if registry.is_empty() {
            return Err(Error::Registry("registry lists no works".into()));
        }
        Ok(registry)
    }

    /// The two case-study works with their edition titles.
    pub fn builtin() -> Self {
        let mut registry = Self::new();
        registry
            .register(
                CitedWork {
                    work_id: "kuhn".into(),
                    label: "Kuhn (1962)".into(),
                    title_variants: vec!["The structure of scientific revolutions".into()],
                },
                &["kuhn1962", "kuhn1970", "kuhn1996", "kuhn2012"],
            )
            .expect("builtin registry");
        registry
            .register(
                CitedWork {
                    work_id: "popper".into(),
                    label: "Popper (1934, 1959, 1962)".into(),
                    title_variants: vec![
                        "Logik der Forschung: Zur Erkenntnistheorie der modernen Naturwissenschaft".into(),
                        "The logic of scientific discovery".into(),
                        "Conjectures and refutations: the growth of scientific knowledge".into(),
                    ],
                },
                &["popper1934", "popper1959", "popper1962"],
            )
            .expect("builtin registry");
        registry
    }

    /// Maps a work id or edition alias to the registered work id.
    pub fn resolve(&self, id: &str) -> Option<&str> {
        if let Some((key, _)) = self.works.get_key_value(id) {
            return Some(key.as_str());
        }
        self.aliases.get(id).map(String::as_str)
    }

    pub fn get(&self, id: &str) -> Option<&CitedWork> {
        self.resolve(id).and_then(|w| self.works.get(w))
    }

    pub fn works(&self) -> impl Iterator<Item = &CitedWork> {
        self.works.values()
    }

    pub fn len(&self) -> usize {
        self.works.len()
    }

    pub fn is_empty(&self) -> bool {
        self.works.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Citance {
    pub work_id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitingRecord {
    pub record_id: String,
    pub year: i32,
    /// Normalized, deduplicated and sorted level-0 field labels.
    pub fos: Vec<String>,
    pub citances: Vec<Citance>,
    /// Works this record cites without any citation context.
    pub bare_citations: Vec<String>,
}

impl CitingRecord {
    pub fn citances_toward<'a>(&'a self, work_id: &'a str) -> impl Iterator<Item = &'a Citance> {
        self.citances.iter().filter(move |c| c.work_id == work_id)
    }

    pub fn cites(&self, work_id: &str) -> bool {
        self.citances_toward(work_id).next().is_some() || self.bare_citations.iter().any(|w| w == work_id)
    }
}

pub fn normalize_field_label(label: &str) -> String {
    caseless::default_case_fold_str(label).split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: String,
    year: i64,
    #[serde(default)]
    fos: Vec<String>,
    citations: Vec<RawCitation>,
}

#[derive(Debug, Deserialize)]
struct RawCitation {
    work: String,
    #[serde(default)]
    citance: Option<String>,
}

/// An immutable set of validated citing records.
#[derive(Debug, Clone)]
pub struct Corpus {
    registry: WorkRegistry,
    records: Vec<CitingRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkAccounting {
    /// Records citing the work at all.
    pub citing: u64,
    /// Records with at least one citance toward the work.
    pub with_context: u64,
    /// Records with context and at least one field label.
    pub with_fos: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub total_records: u64,
    pub records_with_context: u64,
    /// Records with citation context and at least one FOS.
    pub records_with_fos: u64,
    pub works: IndexMap<String, WorkAccounting>,
    pub errors: Vec<LineError>,
}

impl Corpus {
    pub fn from_records(registry: WorkRegistry, records: Vec<CitingRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &records {
            if !seen.insert(r.record_id.as_str()) {
                return Err(Error::DuplicateRecord(r.record_id.clone()));
            }
        }
        Ok(Self { registry, records })
    }

    pub fn records(&self) -> &[CitingRecord] {
        &self.records
    }

    pub fn registry(&self) -> &WorkRegistry {
        &self.registry
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn report(&self) -> IngestReport {
        let mut report = IngestReport { total_records: self.records.len() as u64, ..Default::default() };
        for work in self.registry.works() {
            report.works.insert(work.work_id.clone(), WorkAccounting::default());
        }
        for record in &self.records {
            let has_fos = !record.fos.is_empty();
            if !record.citances.is_empty() {
                report.records_with_context += 1;
                if has_fos {
                    report.records_with_fos += 1;
                }
            }
            for (work_id, acct) in report.works.iter_mut() {
                if !record.cites(work_id) {
                    continue;
                }
                acct.citing += 1;
                if record.citances_toward(work_id).next().is_some() {
                    acct.with_context += 1;
                    if has_fos {
                        acct.with_fos += 1;
                    }
                }
            }
        }
        report
    }
}

fn parse_line(line: &str, registry: &WorkRegistry) -> std::result::Result<CitingRecord, String> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    if raw.id.trim().is_empty() {
        return Err("empty record id".into());
    }
    if raw.year <= 0 || raw.year > i32::MAX as i64 {
        return Err(format!("invalid year {}", raw.year));
    }
    if raw.citations.is_empty() {
        return Err("record lists no citations".into());
    }
    let fos: BTreeSet<String> = raw.fos.iter().map(|f| normalize_field_label(f)).filter(|f| !f.is_empty()).collect();
    let mut citances = Vec::new();
    let mut bare = Vec::new();
    for cit in raw.citations {
        let work_id = registry.resolve(&cit.work).ok_or_else(|| format!("unknown work '{}'", cit.work))?.to_owned();
        match cit.citance {
            Some(text) if !text.trim().is_empty() => citances.push(Citance { work_id, text }),
            _ => {
                if !bare.contains(&work_id) {
                    bare.push(work_id);
                }
            }
        }
    }
    Ok(CitingRecord {
        record_id: raw.id,
        year: raw.year as i32,
        fos: fos.into_iter().collect(),
        citances,
        bare_citations: bare,
    })
}

/// Reads one JSON object per line. Malformed lines are reported and skipped;
/// a repeated record id aborts ingestion.
pub fn ingest_corpus(input: impl BufRead, registry: &WorkRegistry) -> Result<(Corpus, IngestReport)> {
    if registry.is_empty() {
        return Err(Error::Registry("registry lists no works".into()));
    }
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line, registry) {
            Ok(record) => {
                if !seen.insert(record.record_id.clone()) {
                    return Err(Error::DuplicateRecord(record.record_id));
                }
                records.push(record);
            }
            Err(message) => errors.push(LineError { line: line_no, message }),
        }
    }
    let corpus = Corpus { registry: registry.clone(), records };
    let mut report = corpus.report();
    report.errors = errors;
    Ok((corpus, report))
}

/// One (citing record, field label) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisCase {
    pub record_id: String,
    pub fos: String,
    pub year: i32,
    /// The record's citance texts toward the analyzed work, shared by all of
    /// the record's cases.
    pub citances: Arc<[String]>,
}

#[derive(Debug, Clone)]
pub struct CaseSet {
    pub work_id: String,
    pub cases: Vec<AnalysisCase>,
    /// Records with context toward the work but no field label.
    pub dropped_no_fos: Vec<String>,
}

impl CaseSet {
    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Distinct records contributing at least one case.
    pub fn record_count(&self) -> usize {
        let ids: HashSet<&str> = self.cases.iter().map(|c| c.record_id.as_str()).collect();
        ids.len()
    }
}

pub fn derive_cases(corpus: &Corpus, work_id: &str) -> Result<CaseSet> {
    let work = corpus.registry.resolve(work_id).ok_or_else(|| Error::UnknownWork(work_id.to_owned()))?.to_owned();
    let mut by_key: BTreeMap<(&str, &str), AnalysisCase> = BTreeMap::new();
    let mut dropped = Vec::new();
    for record in &corpus.records {
        let texts: Vec<String> = record.citances_toward(&work).map(|c| c.text.clone()).collect();
        if texts.is_empty() {
            continue;
        }
        if record.fos.is_empty() {
            dropped.push(record.record_id.clone());
            continue;
        }
        let shared: Arc<[String]> = texts.into();
        for fos in &record.fos {
            by_key.insert(
                (record.record_id.as_str(), fos.as_str()),
                AnalysisCase {
                    record_id: record.record_id.clone(),
                    fos: fos.clone(),
                    year: record.year,
                    citances: Arc::clone(&shared),
                },
            );
        }
    }
    dropped.sort();
    Ok(CaseSet { work_id: work, cases: by_key.into_values().collect(), dropped_no_fos: dropped })
}
