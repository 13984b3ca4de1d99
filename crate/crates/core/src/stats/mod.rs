//! Multiple-response tabulation and the chi-square test suite.
//!
//! The statistical unit is the case. Each case contributes one binary
//! indicator per concept, so column percentages over cases may exceed 100.

mod chisq;
mod compare;
mod inference;
mod percent;
mod periods;
mod tabulate;
mod uncertainty;

pub use chisq::{chi2_sf, pearson, Adjustment, Method, Pearson, TestResult, SMALL_EXPECTED};
pub use compare::{compare_books, tag_for, ComparisonRow, ComparisonTable};
pub use inference::{overall_chi2, per_item_chi2, per_item_tests, OverallMode, DEFAULT_MC_ITERATIONS};
pub use percent::Percent;
pub use periods::{bin_periods, PeriodBinning, DEFAULT_PERIOD_EDGES};
pub use tabulate::{tabulate, Grouping, MultiResponseTable, ALL_GROUPS};
pub use uncertainty::{uncertainty_rates, UncertaintyTable, DEFAULT_MIN_TOTAL};
