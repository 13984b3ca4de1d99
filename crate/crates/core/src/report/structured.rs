//! Machine-readable table documents with `meta`, `rows` and `tests` sections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{ComparisonTable, MultiResponseTable, Percent, TestResult, UncertaintyTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Concepts,
    Uncertainty,
    Comparison,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Concept,
    Total,
    Cases,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub kind: DocKind,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub work_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub work_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grouping: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_total: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub retained: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonMeta>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonMeta {
    pub left_label: String,
    pub right_label: String,
    pub left_tag: String,
    pub right_tag: String,
    pub left_total: u64,
    pub right_total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptRow {
    pub label: String,
    pub kind: RowKind,
    pub n: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pct: Vec<Option<f64>>,
    pub total_n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyRow {
    pub label: String,
    pub kind: RowKind,
    pub n: Vec<u64>,
    pub hedged: Vec<u64>,
    pub rate: Vec<Option<f64>>,
    pub total_n: u64,
    pub total_hedged: u64,
    pub total_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDocRow {
    pub group: String,
    pub left_n: u64,
    pub left_pct: f64,
    pub right_n: u64,
    pub right_pct: f64,
    pub diff: f64,
    pub tag: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuredDoc<R> {
    pub meta: Meta,
    pub rows: Vec<R>,
    pub tests: Vec<TestResult>,
}

fn r2(p: Option<Percent>) -> Option<f64> {
    p.map(Percent::rounded)
}

pub fn concept_doc(t: &MultiResponseTable, title: &str, tests: &[TestResult]) -> StructuredDoc<ConceptRow> {
    let ng = t.groups.len();
    let mut rows: Vec<ConceptRow> = (0..t.concepts.len())
        .map(|c| ConceptRow {
            label: t.concepts[c].clone(),
            kind: RowKind::Concept,
            n: t.counts[c].clone(),
            pct: (0..ng).map(|g| r2(t.pct(c, g))).collect(),
            total_n: t.concept_total(c),
            total_pct: r2(t.concept_pct(c)),
        })
        .collect();
    rows.push(ConceptRow {
        label: "total".into(),
        kind: RowKind::Total,
        n: (0..ng).map(|g| t.group_total(g)).collect(),
        pct: (0..ng).map(|g| r2(t.group_total_pct(g))).collect(),
        total_n: t.total_mentions(),
        total_pct: r2(t.total_pct()),
    });
    rows.push(ConceptRow {
        label: "cases".into(),
        kind: RowKind::Cases,
        n: t.cases.clone(),
        pct: vec![],
        total_n: t.total_cases(),
        total_pct: None,
    });
    StructuredDoc {
        meta: Meta {
            kind: DocKind::Concepts,
            title: title.to_owned(),
            work_id: Some(t.work_id.clone()),
            work_label: Some(t.work_label.clone()),
            grouping: Some(t.grouping.clone()),
            groups: t.groups.clone(),
            min_total: None,
            retained: vec![],
            comparison: None,
        },
        rows,
        tests: tests.to_vec(),
    }
}

pub fn uncertainty_doc(t: &UncertaintyTable, title: &str, tests: &[TestResult]) -> StructuredDoc<UncertaintyRow> {
    let ng = t.groups.len();
    let mut rows: Vec<UncertaintyRow> = (0..t.concepts.len())
        .map(|c| UncertaintyRow {
            label: t.concepts[c].clone(),
            kind: RowKind::Concept,
            n: t.mentions[c].clone(),
            hedged: t.hedged[c].clone(),
            rate: (0..ng).map(|g| r2(t.rate(c, g))).collect(),
            total_n: t.concept_mentions(c),
            total_hedged: t.concept_hedged(c),
            total_rate: r2(t.concept_rate(c)),
        })
        .collect();
    rows.push(UncertaintyRow {
        label: "total".into(),
        kind: RowKind::Total,
        n: (0..ng).map(|g| t.group_mentions(g)).collect(),
        hedged: (0..ng).map(|g| t.group_hedged(g)).collect(),
        rate: (0..ng).map(|g| r2(t.group_rate(g))).collect(),
        total_n: t.total_mentions(),
        total_hedged: t.total_hedged(),
        total_rate: r2(t.total_rate()),
    });
    StructuredDoc {
        meta: Meta {
            kind: DocKind::Uncertainty,
            title: title.to_owned(),
            work_id: Some(t.work_id.clone()),
            work_label: Some(t.work_label.clone()),
            grouping: Some(t.grouping.clone()),
            groups: t.groups.clone(),
            min_total: Some(t.min_total),
            retained: t.retained.clone(),
            comparison: None,
        },
        rows,
        tests: tests.to_vec(),
    }
}

pub fn comparison_doc(t: &ComparisonTable, title: &str, tests: &[TestResult]) -> StructuredDoc<ComparisonDocRow> {
    let rows = t
        .rows
        .iter()
        .map(|r| ComparisonDocRow {
            group: r.group.clone(),
            left_n: r.left_n,
            left_pct: t.left_pct(r).rounded(),
            right_n: r.right_n,
            right_pct: t.right_pct(r).rounded(),
            diff: t.diff(r).rounded(),
            tag: r.tag.clone(),
        })
        .collect();
    StructuredDoc {
        meta: Meta {
            kind: DocKind::Comparison,
            title: title.to_owned(),
            work_id: None,
            work_label: None,
            grouping: None,
            groups: vec![],
            min_total: None,
            retained: vec![],
            comparison: Some(ComparisonMeta {
                left_label: t.left_label.clone(),
                right_label: t.right_label.clone(),
                left_tag: t.left_tag.clone(),
                right_tag: t.right_tag.clone(),
                left_total: t.left_total,
                right_total: t.right_total,
            }),
        },
        rows,
        tests: tests.to_vec(),
    }
}

pub fn to_json<R: Serialize>(doc: &StructuredDoc<R>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Structured(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Rebuilds a concept table (and its tests) from a structured document.
pub fn parse_concept_table(text: &str) -> Result<(MultiResponseTable, Vec<TestResult>)> {
    let doc: StructuredDoc<ConceptRow> = serde_json::from_str(text).map_err(|e| Error::Structured(e.to_string()))?;
    if doc.meta.kind != DocKind::Concepts {
        return Err(Error::Structured(format!("expected a concepts table, found {:?}", doc.meta.kind)));
    }
    let ng = doc.meta.groups.len();
    let mut concepts = Vec::new();
    let mut counts = Vec::new();
    let mut cases = None;
    for row in doc.rows {
        if row.n.len() != ng {
            return Err(Error::Structured(format!("row '{}' has {} cells for {ng} groups", row.label, row.n.len())));
        }
        match row.kind {
            RowKind::Concept => {
                concepts.push(row.label);
                counts.push(row.n);
            }
            RowKind::Cases => cases = Some(row.n),
            RowKind::Total => {}
        }
    }
    let cases = cases.ok_or_else(|| Error::Structured("missing cases row".into()))?;
    let work_id = doc.meta.work_id.unwrap_or_default();
    let table = MultiResponseTable {
        work_label: doc.meta.work_label.unwrap_or_else(|| work_id.clone()),
        work_id,
        grouping: doc.meta.grouping.unwrap_or_default(),
        concepts,
        groups: doc.meta.groups,
        counts,
        cases,
    };
    Ok((table, doc.tests))
}
