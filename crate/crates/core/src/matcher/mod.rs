//! Concept and hedge lexicons compiled to token patterns, and the per-case
//! match matrix built from them.
//!
//! Matching is always token based: an exact term equals a token, a truncated
//! term (`paradigm*`) is a prefix of a token, and a phrase matches a run of
//! consecutive tokens. There is no substring matching, so `structure` never
//! fires on `infrastructure`.

mod lexicon;
mod matrix;
mod pattern;

pub use lexicon::{
    detect_hedges, match_citance, Concept, ConceptLexicon, HedgeLexicon, BUILTIN_VERSION, DEFAULT_HEDGES, KUHN_TITLE,
    POPPER_REPORT_OMITS,
};
pub(crate) use matrix::csv_err;
pub use matrix::{build_match_matrix, MatchMatrix, MatchRow};
pub use pattern::{compile_pattern, Pattern, PatternKind, Term, TRUNCATION};
