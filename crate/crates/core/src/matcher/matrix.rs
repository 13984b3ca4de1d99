use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::lexicon::{detect_hedges, ConceptLexicon, HedgeLexicon};
use crate::corpus::{AnalysisCase, CaseSet};
use crate::error::{Error, Result};
use crate::textnorm::normalize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchRow {
    pub record_id: String,
    pub fos: String,
    pub year: i32,
    pub mentioned: Vec<bool>,
    /// Set only where a hedge token shares a citance with the mention.
    pub hedged: Vec<bool>,
}

impl MatchRow {
    pub fn any_mention(&self) -> bool {
        self.mentioned.iter().any(|&m| m)
    }
}

/// Per-case concept indicators for one lexicon run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchMatrix {
    pub work_id: String,
    pub concepts: Vec<String>,
    pub rows: Vec<MatchRow>,
}

impl MatchMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct records with at least one mentioned concept.
    pub fn records_with_mention(&self) -> usize {
        self.rows.iter().filter(|r| r.any_mention()).map(|r| r.record_id.as_str()).collect::<HashSet<_>>().len()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header = vec!["record_id".to_owned(), "fos".to_owned(), "year".to_owned()];
        for c in &self.concepts {
            let col = c.replace(' ', "_");
            header.push(format!("{col}_mention"));
            header.push(format!("{col}_hedge"));
        }
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec = vec![row.record_id.clone(), row.fos.clone(), row.year.to_string()];
            for (m, h) in row.mentioned.iter().zip(&row.hedged) {
                rec.push(u8::from(*m).to_string());
                rec.push(u8::from(*h).to_string());
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn match_case(case: &AnalysisCase, lexicon: &ConceptLexicon, hedges: &HedgeLexicon) -> MatchRow {
    let n = lexicon.concepts.len();
    let mut mentioned = vec![false; n];
    let mut hedged = vec![false; n];
    for text in case.citances.iter() {
        let toks = normalize(text, &lexicon.separators);
        let has_hedge = detect_hedges(&toks, hedges);
        for (i, concept) in lexicon.concepts.iter().enumerate() {
            if concept.matches(&toks) {
                mentioned[i] = true;
                hedged[i] |= has_hedge;
            }
        }
    }
    MatchRow { record_id: case.record_id.clone(), fos: case.fos.clone(), year: case.year, mentioned, hedged }
}

pub fn build_match_matrix(cases: &CaseSet, lexicon: &ConceptLexicon, hedges: &HedgeLexicon) -> Result<MatchMatrix> {
    if cases.work_id != lexicon.work_id {
        return Err(Error::Lexicon(format!(
            "lexicon is for work '{}' but cases were derived for '{}'",
            lexicon.work_id, cases.work_id
        )));
    }
    let rows = cases.cases.par_iter().map(|c| match_case(c, lexicon, hedges)).collect();
    Ok(MatchMatrix {
        work_id: lexicon.work_id.clone(),
        concepts: lexicon.concepts.iter().map(|c| c.name.clone()).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn case_set(citance_lists: &[&[&str]]) -> CaseSet {
        let cases = citance_lists
            .iter()
            .enumerate()
            .map(|(i, texts)| AnalysisCase {
                record_id: format!("r{i}"),
                fos: "art".into(),
                year: 2000,
                citances: texts.iter().map(|s| (*s).to_owned()).collect::<Vec<_>>().into(),
            })
            .collect();
        CaseSet { work_id: "kuhn".into(), cases, dropped_no_fos: vec![] }
    }

    fn flags(m: &MatchMatrix, row: usize, concept: &str) -> (bool, bool) {
        let i = m.concepts.iter().position(|c| c == concept).unwrap();
        (m.rows[row].mentioned[i], m.rows[row].hedged[i])
    }

    #[test]
    fn hedge_must_share_the_citance() {
        let lex = ConceptLexicon::builtin("kuhn").unwrap();
        let set =
            case_set(&[&["the paradigm", "no match"], &["the paradigm may shift"], &["paradigm.", "crisis may loom"]]);
        let m = build_match_matrix(&set, &lex, &HedgeLexicon::default()).unwrap();
        assert_eq!(flags(&m, 0, "paradigm"), (true, false));
        assert_eq!(flags(&m, 1, "paradigm"), (true, true));
        assert_eq!(flags(&m, 2, "paradigm"), (true, false));
        assert_eq!(flags(&m, 2, "crisis"), (true, true));
        assert_eq!(flags(&m, 0, "crisis"), (false, false));
    }

    #[test]
    fn title_exclusion_is_per_citance() {
        let lex = ConceptLexicon::builtin("kuhn").unwrap();
        let set = case_set(&[
            &["The Structure of Scientific Revolutions (1962)"],
            &["The Structure of Scientific Revolutions", "a new structure emerges"],
        ]);
        let m = build_match_matrix(&set, &lex, &HedgeLexicon::default()).unwrap();
        assert!(!flags(&m, 0, "structure").0);
        assert!(!flags(&m, 0, "scientific revolution").0);
        assert!(flags(&m, 1, "structure").0);
    }

    #[test]
    fn wrong_work_is_rejected() {
        let lex = ConceptLexicon::builtin("popper").unwrap();
        assert!(build_match_matrix(&case_set(&[]), &lex, &HedgeLexicon::default()).is_err());
    }

    #[test]
    fn csv_layout() {
        let lex = ConceptLexicon::builtin("kuhn").unwrap().without(&[
            "paradigm",
            "normal science",
            "structure",
            "anomaly",
            "incommensurability",
            "crisis",
        ]);
        let mut set = case_set(&[&["Scientific revolutions may come"]]);
        set.cases[0].citances = Arc::from(vec!["Scientific revolutions may come".to_owned()]);
        let m = build_match_matrix(&set, &lex, &HedgeLexicon::default()).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "record_id,fos,year,scientific_revolution_mention,scientific_revolution_hedge\nr0,art,2000,1,1\n"
        );
    }
}
