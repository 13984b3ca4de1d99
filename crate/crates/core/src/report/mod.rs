//! Rendering of concept, uncertainty and comparison tables.
//!
//! Every table is first laid out as a [`RenderedTable`] grid of display
//! strings, then written as CSV or Markdown. The structured format bypasses
//! the grid and serializes counts and tests directly (see [`structured`]).

pub mod structured;

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matcher::csv_err;
use crate::stats::{ComparisonTable, Method, MultiResponseTable, Percent, TestResult, UncertaintyTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Markdown,
    Structured,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            "structured" | "json" => Ok(Format::Structured),
            _ => Err(Error::UnknownFormat(s.to_owned())),
        }
    }
}

/// How percentages are printed in grid output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PctStyle {
    /// Always two decimals (`75.00`).
    #[default]
    Fixed,
    /// Trailing zeros dropped (`75`, `12.7`).
    Trimmed,
}

impl PctStyle {
    fn show(self, p: Option<Percent>) -> String {
        match (self, p) {
            (_, None) => String::new(),
            (PctStyle::Fixed, Some(p)) => p.fixed2(),
            (PctStyle::Trimmed, Some(p)) => p.trimmed(),
        }
    }
}

/// A table as display strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedTable {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl RenderedTable {
    /// Header, rows, then one `note,<text>` line per note.
    pub fn to_csv(&self) -> Result<String> {
        let mut w =
            csv::WriterBuilder::new().flexible(true).terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.headers).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        for note in &self.notes {
            w.write_record(["note", note.as_str()]).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Structured(e.to_string()))
    }

    pub fn to_markdown(&self) -> String {
        let cell = |s: &str| s.replace('|', "\\|");
        let line = |cells: &[String]| {
            let inner: Vec<String> = cells.iter().map(|c| cell(c)).collect();
            format!("| {} |\n", inner.join(" | "))
        };
        let mut out = format!("### {}\n\n", self.title);
        out.push_str(&line(&self.headers));
        let rule: Vec<String> =
            (0..self.headers.len()).map(|i| if i == 0 { "---".into() } else { "---:".into() }).collect();
        out.push_str(&format!("| {} |\n", rule.join(" | ")));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        if !self.notes.is_empty() {
            out.push('\n');
            for note in &self.notes {
                out.push_str(&format!("{note}\n\n"));
            }
            out.pop();
        }
        out
    }
}

/// Upper-cases the first character (`political science` -> `Political science`).
pub fn display_name(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn fmt_p(name: &str, p: f64) -> String {
    if p < 0.0005 {
        format!("{name} < 0.001")
    } else {
        format!("{name} = {p:.3}")
    }
}

/// One-line summary of a test result.
pub fn describe_test(t: &TestResult) -> String {
    let mut s = format!("chi2 = {:.2}, df = {}, {}", t.statistic, t.df, fmt_p("p", t.p_raw));
    if let Some(adj) = t.p_adjusted {
        s.push_str(&format!(", {}", fmt_p("adjusted p", adj)));
    }
    s
}

/// Group columns are left out when everything sits in one `none` group.
fn shown_groups(grouping: &str, n: usize) -> Vec<usize> {
    if grouping == "none" {
        vec![]
    } else {
        (0..n).collect()
    }
}

fn test_notes(tests: &[TestResult]) -> Vec<String> {
    let (items, overall): (Vec<&TestResult>, Vec<&TestResult>) =
        tests.iter().partition(|t| t.method == Method::PerItemPearson);
    let mut notes = Vec::new();
    if !items.is_empty() {
        let parts: Vec<String> =
            items.iter().map(|t| format!("{}: {}", t.concept.as_deref().unwrap_or("?"), describe_test(t))).collect();
        notes.push(format!("Per-concept tests across groups. {}.", parts.join("; ")));
    }
    for t in overall {
        notes.push(format!("Overall test ({}): {}.", t.method.label(), describe_test(t)));
    }
    for t in tests {
        for w in &t.warnings {
            let who = t.concept.as_deref().unwrap_or(t.method.label());
            notes.push(format!("Warning ({who}): {w}."));
        }
    }
    notes
}

/// Column axis name for a grouping kind.
pub fn axis_title(grouping: &str) -> &'static str {
    match grouping {
        "fos" => "FOS",
        "period" => "Period",
        _ => "Group",
    }
}

pub fn layout_concepts(t: &MultiResponseTable, title: &str, tests: &[TestResult], style: PctStyle) -> RenderedTable {
    let shown = shown_groups(&t.grouping, t.groups.len());
    let mut headers = vec!["Concept".to_owned(), String::new()];
    headers.extend(shown.iter().map(|&g| display_name(&t.groups[g])));
    headers.push("Total".into());
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    if t.is_empty() {
        notes.push("No rows: no case mentions any concept.".into());
    } else {
        for c in 0..t.concepts.len() {
            let mut n = vec![display_name(&t.concepts[c]), "n".into()];
            n.extend(shown.iter().map(|&g| t.counts[c][g].to_string()));
            n.push(t.concept_total(c).to_string());
            let mut p = vec![String::new(), "%".into()];
            p.extend(shown.iter().map(|&g| style.show(t.pct(c, g))));
            p.push(style.show(t.concept_pct(c)));
            rows.push(n);
            rows.push(p);
        }
        let mut tn = vec!["Total".to_owned(), "N".into()];
        tn.extend(shown.iter().map(|&g| t.group_total(g).to_string()));
        tn.push(t.total_mentions().to_string());
        let mut tp = vec![String::new(), "%".into()];
        tp.extend(shown.iter().map(|&g| style.show(t.group_total_pct(g))));
        tp.push(style.show(t.total_pct()));
        let mut cases = vec!["Cases".to_owned(), "N".into()];
        cases.extend(shown.iter().map(|&g| t.cases[g].to_string()));
        cases.push(t.total_cases().to_string());
        rows.extend([tn, tp, cases]);
    }
    notes.extend(test_notes(tests));
    RenderedTable { title: title.to_owned(), headers, rows, notes }
}

pub fn layout_uncertainty(t: &UncertaintyTable, title: &str, tests: &[TestResult], style: PctStyle) -> RenderedTable {
    let shown = shown_groups(&t.grouping, t.groups.len());
    let kept: Vec<usize> = t.retained_groups().filter(|g| shown.contains(g)).collect();
    let mut headers = vec!["Concept".to_owned()];
    for &g in &kept {
        let name = display_name(&t.groups[g]);
        headers.push(format!("{name} n"));
        headers.push(format!("{name} %"));
    }
    headers.extend(["Total n".to_owned(), "Total %".to_owned()]);
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    if t.concepts.is_empty() || t.total_mentions() == 0 {
        notes.push("No rows: no case mentions any concept.".into());
    } else {
        for c in 0..t.concepts.len() {
            let mut r = vec![display_name(&t.concepts[c])];
            for &g in &kept {
                r.push(t.mentions[c][g].to_string());
                r.push(style.show(t.rate(c, g)));
            }
            r.push(t.concept_mentions(c).to_string());
            r.push(style.show(t.concept_rate(c)));
            rows.push(r);
        }
        let mut r = vec!["Total".to_owned()];
        for &g in &kept {
            r.push(t.group_mentions(g).to_string());
            r.push(style.show(t.group_rate(g)));
        }
        r.push(t.total_mentions().to_string());
        r.push(style.show(t.total_rate()));
        rows.push(r);
    }
    notes.push("Percentages are the hedged share of concept mentions.".into());
    let omitted: Vec<String> =
        (0..t.groups.len()).filter(|&g| !t.retained[g]).map(|g| display_name(&t.groups[g])).collect();
    if !omitted.is_empty() {
        notes.push(format!(
            "Columns omitted for groups with fewer than {} mentions (still in totals): {}.",
            t.min_total,
            omitted.join(", ")
        ));
    }
    notes.extend(test_notes(tests));
    RenderedTable { title: title.to_owned(), headers, rows, notes }
}

pub fn layout_comparison(t: &ComparisonTable, title: &str, tests: &[TestResult], style: PctStyle) -> RenderedTable {
    let headers = vec![
        "Group".to_owned(),
        format!("{} N", t.left_label),
        format!("{} %", t.left_label),
        format!("{} N", t.right_label),
        format!("{} %", t.right_label),
        "Absolute difference".to_owned(),
    ];
    let mut rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            let diff = style.show(Some(t.diff(r)));
            vec![
                display_name(&r.group),
                r.left_n.to_string(),
                style.show(Some(t.left_pct(r))),
                r.right_n.to_string(),
                style.show(Some(t.right_pct(r))),
                match &r.tag {
                    Some(tag) => format!("{diff} ({tag})"),
                    None => diff,
                },
            ]
        })
        .collect();
    let full = Percent::of(1, 1);
    rows.push(vec![
        "Total".into(),
        t.left_total.to_string(),
        style.show(full),
        t.right_total.to_string(),
        style.show(full),
        String::new(),
    ]);
    let mut notes = vec![format!(
        "Tags mark the work with the larger share: {} = {}, {} = {}.",
        t.left_tag, t.left_label, t.right_tag, t.right_label
    )];
    notes.extend(test_notes(tests));
    RenderedTable { title: title.to_owned(), headers, rows, notes }
}

fn grid(rendered: RenderedTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => rendered.to_csv(),
        Format::Markdown => Ok(rendered.to_markdown()),
        Format::Structured => unreachable!("structured output does not use the grid"),
    }
}

pub fn render_concepts(t: &MultiResponseTable, title: &str, tests: &[TestResult], format: Format) -> Result<String> {
    match format {
        Format::Structured => structured::to_json(&structured::concept_doc(t, title, tests)),
        _ => grid(layout_concepts(t, title, tests, PctStyle::Fixed), format),
    }
}

pub fn render_uncertainty(t: &UncertaintyTable, title: &str, tests: &[TestResult], format: Format) -> Result<String> {
    match format {
        Format::Structured => structured::to_json(&structured::uncertainty_doc(t, title, tests)),
        _ => grid(layout_uncertainty(t, title, tests, PctStyle::Fixed), format),
    }
}

pub fn render_comparison(t: &ComparisonTable, title: &str, tests: &[TestResult], format: Format) -> Result<String> {
    match format {
        Format::Structured => structured::to_json(&structured::comparison_doc(t, title, tests)),
        _ => grid(layout_comparison(t, title, tests, PctStyle::Fixed), format),
    }
}
