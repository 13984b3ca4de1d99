use std::collections::BTreeSet;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::pattern::{compile_pattern, Pattern};
use crate::error::{Error, Result};
use crate::textnorm::{normalize, SeparatorSet, TokenizedCitance};

/// Title phrase excluded for the Kuhn concepts that repeat the book title.
pub const KUHN_TITLE: &str = "the structure of scientific revolutions";

/// Bumped whenever a builtin lexicon changes.
pub const BUILTIN_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Concept {
    pub name: String,
    /// Source strings, kept for display and config echo.
    pub sources: Vec<String>,
    pub patterns: Vec<Pattern>,
    /// Normalized phrases; a citance containing one never matches.
    pub exclusions: Vec<Vec<String>>,
}

impl Concept {
    pub fn new(name: &str, sources: &[&str], exclusions: &[&str], separators: &SeparatorSet) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::Lexicon(format!("concept '{name}' has no patterns")));
        }
        let patterns = sources.iter().map(|s| compile_pattern(s, separators)).collect::<Result<Vec<_>>>()?;
        let mut excl = Vec::new();
        for phrase in exclusions {
            let toks = normalize(phrase, separators).tokens;
            if toks.is_empty() {
                return Err(Error::Lexicon(format!("concept '{name}' has an empty exclusion")));
            }
            excl.push(toks);
        }
        Ok(Self {
            name: name.to_owned(),
            sources: sources.iter().map(|s| (*s).to_owned()).collect(),
            patterns,
            exclusions: excl,
        })
    }

    pub fn matches(&self, citance: &TokenizedCitance) -> bool {
        self.patterns.iter().any(|p| p.matches(citance)) && !self.exclusions.iter().any(|e| citance.contains_run(e))
    }
}

pub fn match_citance(citance: &TokenizedCitance, concept: &Concept) -> bool {
    concept.matches(citance)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptLexicon {
    pub work_id: String,
    /// Builtin name and version, or the file it was read from.
    pub source: String,
    pub concepts: Vec<Concept>,
    pub separators: SeparatorSet,
}

#[derive(Debug, Deserialize)]
struct LexiconFile {
    work: String,
    #[serde(default)]
    separators: Option<String>,
    concepts: IndexMap<String, ConceptEntry>,
}

#[derive(Debug, Deserialize)]
struct ConceptEntry {
    patterns: Vec<String>,
    #[serde(default)]
    exclude: Vec<String>,
}

type ConceptSpec<'a> = (&'a str, &'a [&'a str], &'a [&'a str]);

const KUHN: &[ConceptSpec] = &[
    ("scientific revolution", &["scientific revolution*"], &[KUHN_TITLE]),
    ("paradigm", &["paradigm*"], &[]),
    ("normal science", &["normal science"], &[]),
    ("structure", &["structure"], &[KUHN_TITLE]),
    ("anomaly", &["anomalies", "anomaly", "anomaliety"], &[]),
    ("incommensurability", &["incommensurability", "incommensurable"], &[]),
    ("crisis", &["crisis", "crises"], &[]),
];

const POPPER: &[ConceptSpec] = &[
    ("induction", &["induction", "induktion"], &[]),
    ("falsification", &["falsif*"], &[]),
    ("demarcation", &["demarcation", "abgrenzung"], &[]),
    (
        "corroboration",
        &[
            "corroborate",
            "bestätigen",
            "bestatigen",
            "bestaetigen",
            "corroboration",
            "bestätigung",
            "bestatigung",
            "bestaetigung",
        ],
        &[],
    ),
    ("probability", &["probability", "wahrscheinlichkeit"], &[]),
];

/// Concepts left out of the bundled Popper report preset.
pub const POPPER_REPORT_OMITS: &[&str] = &["probability"];

impl ConceptLexicon {
    pub fn new(work_id: &str, source: &str, concepts: Vec<Concept>, separators: SeparatorSet) -> Result<Self> {
        let mut names = BTreeSet::new();
        for c in &concepts {
            if !names.insert(c.name.as_str()) {
                return Err(Error::Lexicon(format!("concept '{}' defined twice", c.name)));
            }
        }
        if concepts.is_empty() {
            return Err(Error::Lexicon("lexicon defines no concepts".into()));
        }
        Ok(Self { work_id: work_id.to_owned(), source: source.to_owned(), concepts, separators })
    }

    fn from_specs(work_id: &str, name: &str, specs: &[ConceptSpec]) -> Self {
        let seps = SeparatorSet::default();
        let concepts =
            specs.iter().map(|(n, pats, excl)| Concept::new(n, pats, excl, &seps).expect("builtin concept")).collect();
        Self::new(work_id, &format!("builtin:{name}@{BUILTIN_VERSION}"), concepts, seps).expect("builtin lexicon")
    }

    /// `kuhn` or `popper`; the Popper lexicon here carries all five concepts.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "kuhn" => Some(Self::from_specs("kuhn", "kuhn", KUHN)),
            "popper" => Some(Self::from_specs("popper", "popper", POPPER)),
            _ => None,
        }
    }

    /// The lexicon as used by the bundled report presets.
    pub fn builtin_preset(name: &str) -> Option<Self> {
        let lex = Self::builtin(name)?;
        Some(match name {
            "popper" => lex.without(POPPER_REPORT_OMITS),
            _ => lex,
        })
    }

    pub fn from_toml_str(text: &str, source: &str) -> Result<Self> {
        let file: LexiconFile = toml::from_str(text).map_err(|e| Error::Lexicon(e.to_string()))?;
        let seps = match &file.separators {
            Some(s) => SeparatorSet::new(s.chars()),
            None => SeparatorSet::default(),
        };
        let mut concepts = Vec::with_capacity(file.concepts.len());
        for (name, entry) in &file.concepts {
            let pats: Vec<&str> = entry.patterns.iter().map(String::as_str).collect();
            let excl: Vec<&str> = entry.exclude.iter().map(String::as_str).collect();
            concepts.push(Concept::new(name, &pats, &excl, &seps)?);
        }
        Self::new(&file.work, source, concepts, seps)
    }

    pub fn without(mut self, names: &[&str]) -> Self {
        self.concepts.retain(|c| !names.contains(&c.name.as_str()));
        if !names.is_empty() {
            self.source = format!("{} -{}", self.source, names.join(" -"));
        }
        self
    }

    pub fn names(&self) -> Vec<&str> {
        self.concepts.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }
}

pub const DEFAULT_HEDGES: [&str; 10] =
    ["like", "may", "could", "questions", "might", "potential", "seems", "perhaps", "likely", "sometimes"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HedgeLexicon {
    pub terms: BTreeSet<String>,
}

impl Default for HedgeLexicon {
    fn default() -> Self {
        Self { terms: DEFAULT_HEDGES.iter().map(|s| (*s).to_owned()).collect() }
    }
}

impl HedgeLexicon {
    pub fn empty() -> Self {
        Self { terms: BTreeSet::new() }
    }

    /// One token per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str, separators: &SeparatorSet) -> Result<Self> {
        let mut terms = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = normalize(line, separators).tokens;
            if toks.len() != 1 {
                return Err(Error::Lexicon(format!(
                    "hedge list line {}: expected a single token, got '{line}'",
                    i + 1
                )));
            }
            terms.insert(toks.remove(0));
        }
        Ok(Self { terms })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.terms.contains(token)
    }
}

pub fn detect_hedges(citance: &TokenizedCitance, hedges: &HedgeLexicon) -> bool {
    citance.iter().any(|t| hedges.contains(t))
}
