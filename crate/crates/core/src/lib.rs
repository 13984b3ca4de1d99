//! Citation concept analysis.
//!
//! Pipeline: ingest citing records ([`corpus`]), normalize citances
//! ([`textnorm`]), detect concept and hedge mentions ([`matcher`]), tabulate
//! and test them across fields of study or periods ([`stats`]) and render the
//! results ([`report`]). [`fixture`] synthesizes corpora that reproduce given
//! table marginals.

pub mod corpus;
pub mod error;
pub mod fixture;
pub mod matcher;
pub mod report;
pub mod stats;
pub mod textnorm;

pub use error::{Error, Result};
