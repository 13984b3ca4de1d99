//! Published marginals for the two case studies.
//!
//! Mention and case counts are given as integers. Hedge rates are given as
//! printed (percent, two decimals) and turned into counts with
//! [`recover_count`](super::recover_count).

use super::Funnel;

#[derive(Debug, Clone, Copy)]
pub struct PublishedTables {
    pub work_id: &'static str,
    pub concepts: &'static [&'static str],
    pub fos: &'static [&'static str],
    pub fos_cases: &'static [u64],
    /// `[concept][fos]`
    pub fos_counts: &'static [&'static [u64]],
    pub period_edges: &'static [i32],
    /// Inclusive year range used for synthetic records in each period.
    pub period_years: &'static [(i32, i32)],
    pub period_cases: &'static [u64],
    /// `[concept][period]`
    pub period_counts: &'static [&'static [u64]],
    /// Groups with a per-concept hedge column in the FOS hedge table.
    pub hedge_fos: &'static [&'static str],
    /// `[concept][listed fos]`
    pub hedge_fos_pct: &'static [&'static [&'static str]],
    /// Per-concept hedge rate over all groups.
    pub hedge_concept_pct: &'static [&'static str],
    /// `[concept][period]`, when published per concept.
    pub hedge_period_pct: Option<&'static [&'static [&'static str]]>,
    /// Hedge rate over all concepts, per period.
    pub hedge_period_total_pct: &'static [&'static str],
    pub funnel: Funnel,
}

const PERIOD_EDGES: &[i32] = &[2000, 2006, 2011];
const PERIOD_YEARS: &[(i32, i32)] = &[(1990, 1999), (2000, 2005), (2006, 2010), (2011, 2018)];

pub const KUHN: PublishedTables = PublishedTables {
    work_id: "kuhn",
    concepts: &[
        "paradigm",
        "scientific revolution",
        "normal science",
        "structure",
        "anomaly",
        "incommensurability",
        "crisis",
    ],
    fos: &[
        "art",
        "biology",
        "business",
        "chemistry",
        "computer science",
        "economics",
        "engineering",
        "environment",
        "geography",
        "geology",
        "history",
        "material science",
        "mathematics",
        "medicine",
        "philosophy",
        "physics",
        "political science",
        "psychology",
        "sociology",
    ],
    fos_cases: &[12, 114, 84, 11, 395, 289, 159, 12, 38, 10, 1, 7, 104, 116, 54, 59, 252, 598, 481],
    fos_counts: &[
        &[10, 95, 72, 8, 308, 221, 142, 9, 35, 7, 1, 6, 77, 101, 42, 44, 210, 503, 403],
        &[1, 18, 4, 2, 70, 35, 14, 4, 4, 1, 0, 2, 17, 12, 6, 14, 32, 75, 48],
        &[0, 7, 8, 1, 44, 39, 9, 3, 3, 2, 0, 0, 16, 5, 4, 2, 27, 36, 48],
        &[0, 11, 4, 1, 24, 12, 7, 0, 4, 0, 0, 2, 5, 6, 4, 2, 19, 33, 26],
        &[0, 2, 2, 0, 14, 21, 2, 1, 0, 1, 0, 0, 7, 3, 1, 1, 11, 30, 17],
        &[0, 1, 1, 1, 14, 9, 4, 0, 1, 0, 0, 0, 9, 2, 4, 4, 6, 18, 25],
        &[1, 6, 1, 0, 6, 6, 5, 0, 0, 1, 0, 0, 1, 5, 1, 1, 6, 11, 8],
    ],
    period_edges: PERIOD_EDGES,
    period_years: PERIOD_YEARS,
    period_cases: &[476, 531, 934, 855],
    period_counts: &[
        &[391, 422, 771, 710],
        &[58, 66, 121, 114],
        &[37, 46, 103, 68],
        &[23, 34, 54, 49],
        &[24, 27, 30, 32],
        &[14, 23, 31, 31],
        &[6, 12, 18, 23],
    ],
    hedge_fos: &["computer science", "economics", "political science", "psychology", "sociology"],
    hedge_fos_pct: &[
        &["14.29", "11.31", "14.76", "16.50", "12.66"],
        &["14.29", "8.57", "6.25", "12.00", "6.25"],
        &["11.36", "15.38", "3.70", "19.44", "14.58"],
        &["8.33", "0.00", "5.26", "9.09", "3.85"],
        &["28.57", "4.76", "36.36", "16.67", "23.53"],
        &["14.29", "11.11", "33.33", "11.11", "20.00"],
        &["16.67", "0.00", "0.00", "45.45", "25.00"],
    ],
    hedge_concept_pct: &["14.47", "10.31", "12.99", "8.13", "18.58", "16.16", "22.03"],
    hedge_period_pct: Some(&[
        &["15.60", "15.40", "14.01", "13.80"],
        &["17.24", "9.09", "9.09", "8.77"],
        &["13.51", "10.87", "13.59", "13.24"],
        &["8.70", "11.76", "7.41", "6.12"],
        &["25.00", "25.93", "13.33", "12.50"],
        &["0.00", "30.43", "16.13", "12.90"],
        &["16.67", "16.67", "16.67", "30.43"],
    ]),
    hedge_period_total_pct: &["15.37", "15.24", "13.21", "13.15"],
    funnel: Funnel { citing: 38474, with_context: 4710, with_fos: 4688, with_mention: 2441 },
};

pub const POPPER: PublishedTables = PublishedTables {
    work_id: "popper",
    concepts: &["falsification", "induction", "corroboration", "demarcation"],
    fos: &[
        "art",
        "biology",
        "business",
        "chemistry",
        "computer science",
        "economics",
        "engineering",
        "environment",
        "geography",
        "geology",
        "history",
        "mathematics",
        "medicine",
        "philosophy",
        "physics",
        "political science",
        "psychology",
        "sociology",
    ],
    fos_cases: &[1, 48, 12, 5, 131, 30, 25, 7, 6, 3, 2, 82, 23, 21, 19, 18, 191, 51],
    fos_counts: &[
        &[1, 39, 11, 5, 117, 28, 25, 6, 6, 2, 2, 77, 22, 19, 15, 17, 182, 47],
        &[0, 4, 1, 0, 13, 2, 1, 0, 0, 0, 0, 4, 2, 1, 3, 1, 6, 2],
        &[0, 9, 0, 0, 5, 0, 0, 0, 0, 0, 0, 3, 1, 1, 0, 1, 5, 0],
        &[0, 3, 0, 0, 4, 1, 0, 1, 0, 1, 0, 2, 0, 0, 1, 0, 5, 3],
    ],
    period_edges: PERIOD_EDGES,
    period_years: PERIOD_YEARS,
    period_cases: &[119, 133, 220, 203],
    period_counts: &[&[101, 118, 209, 193], &[12, 10, 8, 10], &[7, 10, 6, 2], &[5, 2, 7, 7]],
    hedge_fos: &[],
    hedge_fos_pct: &[&[], &[], &[], &[]],
    hedge_concept_pct: &["12.24", "2.50", "16.00", "4.76"],
    hedge_period_pct: None,
    hedge_period_total_pct: &["10.40", "12.86", "12.17", "10.85"],
    funnel: Funnel { citing: 14829, with_context: 2129, with_fos: 2122, with_mention: 663 },
};
