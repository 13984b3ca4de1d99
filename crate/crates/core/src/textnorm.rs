//! Citance normalization and word-frequency counting.
//!
//! Normalization replaces every separator character with a space, case-folds
//! the whole string and splits on runs of whitespace. Nothing else is
//! stripped: quotes, hyphens, apostrophes, digits and diacritics stay inside
//! tokens, and no stemming or stop-word removal happens.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

/// The four punctuation characters replaced by whitespace by default.
pub const DEFAULT_SEPARATORS: [char; 4] = [',', '.', ';', ':'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeparatorSet(BTreeSet<char>);

impl SeparatorSet {
    pub fn new(chars: impl IntoIterator<Item = char>) -> Self {
        Self(chars.into_iter().collect())
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    pub fn chars(&self) -> impl Iterator<Item = char> + '_ {
        self.0.iter().copied()
    }

    /// Adds extra separator characters on top of the current set.
    pub fn extended(mut self, extra: impl IntoIterator<Item = char>) -> Self {
        self.0.extend(extra);
        self
    }
}

impl Default for SeparatorSet {
    fn default() -> Self {
        Self::new(DEFAULT_SEPARATORS)
    }
}

/// Lowercase tokens of one citance, in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedCitance {
    pub tokens: Vec<String>,
}

impl TokenizedCitance {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    /// True when `phrase` occurs as a run of consecutive tokens.
    pub fn contains_run(&self, phrase: &[String]) -> bool {
        !phrase.is_empty()
            && phrase.len() <= self.tokens.len()
            && self.tokens.windows(phrase.len()).any(|w| w == phrase)
    }
}

pub fn normalize(text: &str, separators: &SeparatorSet) -> TokenizedCitance {
    let replaced: String = text.chars().map(|c| if separators.contains(c) { ' ' } else { c }).collect();
    let folded = caseless::default_case_fold_str(&replaced);
    TokenizedCitance { tokens: folded.split_whitespace().map(str::to_owned).collect() }
}

/// Exact token occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    entries: HashMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, citance: &TokenizedCitance) {
        for token in &citance.tokens {
            *self.entries.entry(token.clone()).or_insert(0) += 1;
        }
        self.total_tokens += citance.tokens.len() as u64;
    }

    pub fn merge(&mut self, other: &FrequencyTable) {
        for (token, count) in &other.entries {
            *self.entries.entry(token.clone()).or_insert(0) += count;
        }
        self.total_tokens += other.total_tokens;
    }

    pub fn count(&self, token: &str) -> u64 {
        self.entries.get(token).copied().unwrap_or(0)
    }

    /// Sum of counts over all tokens starting with `prefix`.
    pub fn prefix_count(&self, prefix: &str) -> u64 {
        self.entries.iter().filter(|(t, _)| t.starts_with(prefix)).map(|(_, c)| c).sum()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by count descending, then token ascending.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut rows: Vec<(&str, u64)> = self.entries.iter().map(|(t, c)| (t.as_str(), *c)).collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }

    /// `token,count` rows in ranked order, optionally cut after `top` rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W, top: Option<usize>) -> crate::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["token", "count"]).map_err(crate::matcher::csv_err)?;
        for (token, count) in self.ranked().into_iter().take(top.unwrap_or(usize::MAX)) {
            w.write_record([token, &count.to_string()]).map_err(crate::matcher::csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn word_frequency<'a>(citances: impl IntoIterator<Item = &'a TokenizedCitance>) -> FrequencyTable {
    let mut table = FrequencyTable::new();
    for citance in citances {
        table.add(citance);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(text: &str) -> Vec<String> {
        normalize(text, &SeparatorSet::default()).tokens
    }

    #[test]
    fn frequency_csv_is_ranked() {
        let t = word_frequency([normalize("b a, b", &SeparatorSet::default())].iter());
        let mut out = Vec::new();
        t.write_csv(&mut out, None).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "token,count\nb,2\na,1\n");
        let mut out = Vec::new();
        t.write_csv(&mut out, Some(1)).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "token,count\nb,2\n");
    }

    #[test]
    fn strips_the_four_separators_and_lowercases() {
        assert_eq!(toks("Kuhn's paradigm, as noted: shifts."), ["kuhn's", "paradigm", "as", "noted", "shifts"]);
        assert_eq!(toks("Falsification; INDUKTION"), ["falsification", "induktion"]);
        assert!(toks("").is_empty());
        assert!(toks(" ,.;: ").is_empty());
    }

    #[test]
    fn keeps_other_punctuation_and_digits() {
        assert_eq!(toks("(Kuhn, 1962) \"normal-science\" [p.5]"), ["(kuhn", "1962)", "\"normal-science\"", "[p", "5]"]);
    }

    #[test]
    fn folds_unicode_case_and_keeps_diacritics() {
        assert_eq!(toks("BESTÄTIGUNG Bestätigen"), ["bestätigung", "bestätigen"]);
        assert_eq!(toks("ÜBER"), ["über"]);
    }

    #[test]
    fn extended_separators_are_opt_in() {
        let seps = SeparatorSet::default().extended(['(', ')']);
        assert_eq!(normalize("(Kuhn)", &seps).tokens, ["kuhn"]);
        assert_eq!(toks("(Kuhn)"), ["(kuhn)"]);
    }

    #[test]
    fn frequency_counts() {
        let a = TokenizedCitance { tokens: vec!["a".into(), "b".into()] };
        let b = TokenizedCitance { tokens: vec!["b".into()] };
        let table = word_frequency([&a, &b]);
        assert_eq!(table.count("a"), 1);
        assert_eq!(table.count("b"), 2);
        assert_eq!(table.total_tokens(), 3);
        assert_eq!(table.ranked(), vec![("b", 2), ("a", 1)]);

        let empty = word_frequency(std::iter::empty());
        assert!(empty.is_empty());
        assert_eq!(empty.total_tokens(), 0);
    }

    /// Character-walk tokenizer used as an oracle for order preservation.
    fn walk(text: &str, seps: &SeparatorSet) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = String::new();
        for c in text.chars() {
            if c.is_whitespace() || seps.contains(c) {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            } else {
                cur.push_str(&caseless::default_case_fold_str(&c.to_string()));
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        out
    }

    fn text_strategy() -> impl Strategy<Value = String> {
        proptest::string::string_regex("[a-zA-ZäöüÄÖÜß0-9 ,.;:'()\\-\t\n]{0,60}").unwrap()
    }

    proptest! {
        #[test]
        fn idempotent(text in text_strategy()) {
            let seps = SeparatorSet::default();
            let first = normalize(&text, &seps);
            let again = normalize(&first.tokens.join(" "), &seps);
            prop_assert_eq!(first, again);
        }

        #[test]
        fn agrees_with_character_walk(text in text_strategy()) {
            let seps = SeparatorSet::default();
            prop_assert_eq!(normalize(&text, &seps).tokens, walk(&text, &seps));
        }

        #[test]
        fn tokens_carry_no_separator_or_whitespace(text in text_strategy()) {
            let seps = SeparatorSet::default();
            for t in normalize(&text, &seps).tokens {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(|c| c.is_whitespace() || seps.contains(c)));
            }
        }

        #[test]
        fn frequency_is_additive(a in text_strategy(), b in text_strategy()) {
            let seps = SeparatorSet::default();
            let ta = normalize(&a, &seps);
            let tb = normalize(&b, &seps);
            let joint = word_frequency([&ta, &tb]);
            let mut merged = word_frequency([&ta]);
            merged.merge(&word_frequency([&tb]));
            prop_assert_eq!(&joint, &merged);
            let sum: u64 = joint.ranked().iter().map(|(_, c)| c).sum();
            prop_assert_eq!(sum, joint.total_tokens());
        }
    }
}
