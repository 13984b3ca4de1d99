use serde::Serialize;

use crate::error::{Error, Result};
use crate::textnorm::{normalize, SeparatorSet, TokenizedCitance};

pub const TRUNCATION: char = '*';

/// One token-level test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "token", rename_all = "kebab-case")]
pub enum Term {
    Exact(String),
    Prefix(String),
}

impl Term {
    pub fn matches(&self, token: &str) -> bool {
        match self {
            Term::Exact(t) => token == t,
            Term::Prefix(p) => token.starts_with(p.as_str()),
        }
    }

    fn compile(word: &str, source: &str) -> Result<Self> {
        match word.find(TRUNCATION) {
            None => Ok(Term::Exact(word.to_owned())),
            Some(pos) if pos + TRUNCATION.len_utf8() == word.len() => {
                if pos == 0 {
                    Err(Error::Lexicon(format!("pattern '{source}' truncates an empty word")))
                } else {
                    Ok(Term::Prefix(word[..pos].to_owned()))
                }
            }
            Some(_) => Err(Error::Lexicon(format!(
                "pattern '{source}': truncation symbol is only allowed at the end of a word"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    ExactToken,
    PrefixToken,
    Phrase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Pattern {
    Token(Term),
    /// At least two terms matched against consecutive tokens.
    Phrase(Vec<Term>),
}

impl Pattern {
    pub fn kind(&self) -> PatternKind {
        match self {
            Pattern::Token(Term::Exact(_)) => PatternKind::ExactToken,
            Pattern::Token(Term::Prefix(_)) => PatternKind::PrefixToken,
            Pattern::Phrase(_) => PatternKind::Phrase,
        }
    }

    pub fn matches(&self, citance: &TokenizedCitance) -> bool {
        match self {
            Pattern::Token(term) => citance.iter().any(|t| term.matches(t)),
            Pattern::Phrase(terms) => {
                terms.len() <= citance.len()
                    && citance
                        .tokens
                        .windows(terms.len())
                        .any(|w| w.iter().zip(terms).all(|(tok, term)| term.matches(tok)))
            }
        }
    }
}

/// Compiles a search term. A trailing `*` on a word makes that word a
/// prefix test; several words form a phrase.
pub fn compile_pattern(source: &str, separators: &SeparatorSet) -> Result<Pattern> {
    let words = normalize(source, separators).tokens;
    let mut terms = words.iter().map(|w| Term::compile(w, source)).collect::<Result<Vec<_>>>()?;
    match terms.len() {
        0 => Err(Error::Lexicon("empty pattern".into())),
        1 => Ok(Pattern::Token(terms.remove(0))),
        _ => Ok(Pattern::Phrase(terms)),
    }
}
