//! Synthetic corpora that reproduce given table marginals.
//!
//! A [`FixtureSpec`] fixes, per work, the mention and case counts by field of
//! study and by period, the hedged-mention counts, and the record funnel.
//! [`build_fixture`] lays out cases that meet the FOS marginals by
//! construction, searches a period assignment that meets the period and
//! hedge marginals, merges suitable cases into two-FOS records, and writes
//! citance text that the lexicon matches exactly as planned.

pub mod published;

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcher::{detect_hedges, ConceptLexicon, HedgeLexicon, Pattern, Term};
use crate::stats::Percent;
use crate::textnorm::normalize;
use published::PublishedTables;

/// Record counts at each ingestion stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Funnel {
    pub citing: u64,
    pub with_context: u64,
    pub with_fos: u64,
    /// Records whose citances mention at least one concept.
    pub with_mention: u64,
}

/// Parses a printed percentage (`"12.7"`, `"0.00"`, `"100"`) into hundredths.
pub fn parse_hundredths(pct: &str) -> Result<i128> {
    let bad = || Error::Fixture(format!("not a two-decimal percentage: '{pct}'"));
    let (int, frac) = pct.split_once('.').unwrap_or((pct, ""));
    if int.is_empty() || frac.len() > 2 || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let whole: i128 = int.parse().map_err(|_| bad())?;
    let frac: i128 = format!("{frac:0<2}").parse().map_err(|_| bad())?;
    Ok(whole * 100 + frac)
}

/// The unique count `h <= n` whose share of `n`, rounded to two decimals,
/// prints as `pct`.
pub fn recover_count(pct: &str, n: u64) -> Result<u64> {
    let target = parse_hundredths(pct)?;
    let hits: Vec<u64> = (0..=n).filter(|&h| Percent::of(h, n).is_some_and(|p| p.hundredths() == target)).collect();
    match hits.as_slice() {
        [h] => Ok(*h),
        [] => Err(Error::Fixture(format!("no count out of {n} rounds to {pct}%"))),
        _ => Err(Error::Fixture(format!("{pct}% of {n} is ambiguous: {hits:?}"))),
    }
}

/// Integer targets for one work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureSpec {
    pub work_id: String,
    pub concepts: Vec<String>,
    pub fos: Vec<String>,
    pub fos_cases: Vec<u64>,
    /// `[concept][fos]`
    pub fos_counts: Vec<Vec<u64>>,
    /// `[concept][fos]`
    pub fos_hedged: Vec<Vec<u64>>,
    pub period_years: Vec<(i32, i32)>,
    pub period_cases: Vec<u64>,
    /// `[concept][period]`
    pub period_counts: Vec<Vec<u64>>,
    /// `[concept][period]`, if constrained.
    pub period_hedged: Option<Vec<Vec<u64>>>,
    /// Hedged mentions per period over all concepts, if constrained.
    pub period_hedged_total: Option<Vec<u64>>,
    pub funnel: Funnel,
}

fn owned(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| (*s).to_owned()).collect()
}

fn nested(xs: &[&[u64]]) -> Vec<Vec<u64>> {
    xs.iter().map(|r| r.to_vec()).collect()
}

/// Splits `total` over `weights` by largest remainder; ties go to the
/// earlier slot.
fn apportion(total: u64, weights: &[u64]) -> Vec<u64> {
    let sum: u64 = weights.iter().sum();
    if sum == 0 {
        return vec![0; weights.len()];
    }
    let mut out: Vec<u64> = weights.iter().map(|&w| total * w / sum).collect();
    let mut rest: Vec<(u64, usize)> = weights.iter().enumerate().map(|(i, &w)| ((total * w) % sum, i)).collect();
    rest.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let short = total - out.iter().sum::<u64>();
    for &(_, i) in rest.iter().take(short as usize) {
        out[i] += 1;
    }
    out
}

impl FixtureSpec {
    /// Resolves printed hedge rates into counts. Concept hedges outside the
    /// listed FOS columns are spread over the remaining FOS in proportion to
    /// their mentions.
    pub fn from_published(p: &PublishedTables) -> Result<Self> {
        let fos_counts = nested(p.fos_counts);
        let period_counts = nested(p.period_counts);
        let listed: Vec<usize> = p
            .hedge_fos
            .iter()
            .map(|name| {
                p.fos.iter().position(|f| f == name).ok_or_else(|| Error::Fixture(format!("unknown FOS '{name}'")))
            })
            .collect::<Result<_>>()?;
        let mut fos_hedged = Vec::with_capacity(p.concepts.len());
        for (c, row) in fos_counts.iter().enumerate() {
            let total = recover_count(p.hedge_concept_pct[c], row.iter().sum())?;
            let mut h = vec![0u64; row.len()];
            for (k, &f) in listed.iter().enumerate() {
                h[f] = recover_count(p.hedge_fos_pct[c][k], row[f])?;
            }
            let placed: u64 = h.iter().sum();
            let rest = total.checked_sub(placed).ok_or_else(|| {
                Error::Fixture(format!("'{}': listed hedges exceed the concept total", p.concepts[c]))
            })?;
            let weights: Vec<u64> = (0..row.len()).map(|f| if listed.contains(&f) { 0 } else { row[f] }).collect();
            for (f, extra) in apportion(rest, &weights).into_iter().enumerate() {
                h[f] += extra;
            }
            fos_hedged.push(h);
        }
        let period_hedged = p
            .hedge_period_pct
            .map(|rows| {
                rows.iter()
                    .zip(&period_counts)
                    .map(|(pcts, ns)| pcts.iter().zip(ns).map(|(pct, &n)| recover_count(pct, n)).collect())
                    .collect::<Result<Vec<Vec<u64>>>>()
            })
            .transpose()?;
        let period_hedged_total = (0..p.period_cases.len())
            .map(|g| recover_count(p.hedge_period_total_pct[g], period_counts.iter().map(|r| r[g]).sum()))
            .collect::<Result<Vec<u64>>>()?;
        let spec = Self {
            work_id: p.work_id.to_owned(),
            concepts: owned(p.concepts),
            fos: owned(p.fos),
            fos_cases: p.fos_cases.to_vec(),
            fos_counts,
            fos_hedged,
            period_years: p.period_years.to_vec(),
            period_cases: p.period_cases.to_vec(),
            period_counts,
            period_hedged,
            period_hedged_total: Some(period_hedged_total),
            funnel: p.funnel,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn total_cases(&self) -> u64 {
        self.fos_cases.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Fixture(m));
        let (nc, nf, np) = (self.concepts.len(), self.fos.len(), self.period_cases.len());
        let shaped = |m: &Vec<Vec<u64>>, cols: usize| m.len() == nc && m.iter().all(|r| r.len() == cols);
        if self.fos_cases.len() != nf || !shaped(&self.fos_counts, nf) || !shaped(&self.fos_hedged, nf) {
            return fail("FOS tables do not match the concept and FOS lists".into());
        }
        if self.period_years.len() != np || !shaped(&self.period_counts, np) {
            return fail("period tables do not match the period list".into());
        }
        if self.period_hedged.as_ref().is_some_and(|m| !shaped(m, np))
            || self.period_hedged_total.as_ref().is_some_and(|v| v.len() != np)
        {
            return fail("period hedge targets do not match the period list".into());
        }
        for f in 0..nf {
            let m = self.fos_cases[f];
            let sum: u64 = self.fos_counts.iter().map(|r| r[f]).sum();
            if self.fos_counts.iter().any(|r| r[f] > m) || sum < m {
                return fail(format!("FOS '{}': mentions cannot cover {m} cases", self.fos[f]));
            }
        }
        if self.total_cases() != self.period_cases.iter().sum::<u64>() {
            return fail("FOS and period case totals differ".into());
        }
        for c in 0..nc {
            let by_fos: u64 = self.fos_counts[c].iter().sum();
            if by_fos != self.period_counts[c].iter().sum::<u64>() {
                return fail(format!("'{}': FOS and period mention totals differ", self.concepts[c]));
            }
            if (0..nf).any(|f| self.fos_hedged[c][f] > self.fos_counts[c][f]) {
                return fail(format!("'{}': more hedges than mentions", self.concepts[c]));
            }
            if let Some(ph) = &self.period_hedged {
                if ph[c].iter().sum::<u64>() != self.fos_hedged[c].iter().sum::<u64>() {
                    return fail(format!("'{}': FOS and period hedge totals differ", self.concepts[c]));
                }
            }
        }
        if let Some(t) = &self.period_hedged_total {
            if t.iter().sum::<u64>() != self.fos_hedged.iter().flatten().sum::<u64>() {
                return fail("period hedge totals disagree with the FOS hedges".into());
            }
        }
        let f = self.funnel;
        let cases = self.total_cases();
        if !(f.with_mention <= f.with_fos && f.with_fos <= f.with_context && f.with_context <= f.citing) {
            return fail("funnel counts must not increase".into());
        }
        if f.with_mention > cases || cases > 2 * f.with_mention {
            return fail(format!("{cases} cases cannot fill {} records with one or two FOS", f.with_mention));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureOptions {
    pub seed: u64,
    /// Emit the citing records without citation context.
    pub include_bare: bool,
    /// Upper bound on period swaps tried by the search.
    pub max_steps: u64,
}

impl Default for FixtureOptions {
    fn default() -> Self {
        Self { seed: 1962, include_bare: true, max_steps: 20_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureCitation {
    pub work: String,
    pub citance: Option<String>,
}

/// One line of the corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub id: String,
    pub year: i32,
    pub fos: Vec<String>,
    pub citations: Vec<FixtureCitation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub work_id: String,
    pub records: Vec<FixtureRecord>,
    /// Steps the period search needed.
    pub search_steps: u64,
}

impl Fixture {
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r).map_err(|e| Error::Fixture(e.to_string()))?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Fixture(e.to_string()))
    }
}

/// Builds a published case study with the builtin lexicon and hedge list.
pub fn published_fixture(p: &PublishedTables, opts: &FixtureOptions) -> Result<Fixture> {
    let spec = FixtureSpec::from_published(p)?;
    let lexicon = ConceptLexicon::builtin(p.work_id)
        .ok_or_else(|| Error::Fixture(format!("no builtin lexicon for '{}'", p.work_id)))?;
    build_fixture(&spec, &lexicon, &HedgeLexicon::default(), opts)
}

#[derive(Debug, Clone)]
struct Case {
    fos: usize,
    mentions: Vec<bool>,
    hedged: Vec<bool>,
    period: usize,
}

pub fn build_fixture(
    spec: &FixtureSpec,
    lexicon: &ConceptLexicon,
    hedges: &HedgeLexicon,
    opts: &FixtureOptions,
) -> Result<Fixture> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = lay_out_cases(spec);
    let search_steps = assign_periods(spec, &mut cases, &mut rng, opts.max_steps)?;
    let groups = merge_records(spec, &cases)?;
    let writer = TextWriter::new(spec, lexicon, hedges)?;
    let records = writer.records(spec, &cases, &groups, &mut rng, opts.include_bare)?;
    Ok(Fixture { work_id: spec.work_id.clone(), records, search_steps })
}

/// Deals the mentions of each FOS round-robin over its cases, so every case
/// gets at least one mention and no case gets a concept twice.
fn lay_out_cases(spec: &FixtureSpec) -> Vec<Case> {
    let nc = spec.concepts.len();
    let mut cases = Vec::with_capacity(spec.total_cases() as usize);
    for f in 0..spec.fos.len() {
        let m = spec.fos_cases[f] as usize;
        let base = cases.len();
        cases.extend((0..m).map(|_| Case { fos: f, mentions: vec![false; nc], hedged: vec![false; nc], period: 0 }));
        let mut slot = 0usize;
        for c in 0..nc {
            for k in 0..spec.fos_counts[c][f] {
                let case = &mut cases[base + slot % m];
                case.mentions[c] = true;
                case.hedged[c] = k < spec.fos_hedged[c][f];
                slot += 1;
            }
        }
    }
    cases
}

fn shift_cost(cur: i64, target: i64, delta: i64) -> i64 {
    (cur + delta - target).abs() - (cur - target).abs()
}

/// Local search over period labels. Swapping the periods of two cases keeps
/// the period case counts; a swap is kept unless it moves the mention and
/// hedge counts further from their targets.
fn assign_periods(spec: &FixtureSpec, cases: &mut [Case], rng: &mut ChaCha8Rng, max_steps: u64) -> Result<u64> {
    let (nc, np) = (spec.concepts.len(), spec.period_cases.len());
    let mut labels: Vec<usize> =
        spec.period_cases.iter().enumerate().flat_map(|(p, &n)| std::iter::repeat_n(p, n as usize)).collect();
    labels.shuffle(rng);
    for (case, p) in cases.iter_mut().zip(labels) {
        case.period = p;
    }
    let to_i =
        |m: &Vec<Vec<u64>>| -> Vec<Vec<i64>> { m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect() };
    let t_n = to_i(&spec.period_counts);
    let t_h = spec.period_hedged.as_ref().map(to_i);
    let t_total: Option<Vec<i64>> = spec.period_hedged_total.as_ref().map(|v| v.iter().map(|&x| x as i64).collect());

    let mut n_p = vec![vec![0i64; np]; nc];
    let mut h_p = vec![vec![0i64; np]; nc];
    let mut total_p = vec![0i64; np];
    for case in cases.iter() {
        for c in 0..nc {
            n_p[c][case.period] += i64::from(case.mentions[c]);
            h_p[c][case.period] += i64::from(case.hedged[c]);
            total_p[case.period] += i64::from(case.hedged[c]);
        }
    }
    let mut cost: i64 = (0..nc)
        .flat_map(|c| (0..np).map(move |p| (c, p)))
        .map(|(c, p)| (n_p[c][p] - t_n[c][p]).abs() + t_h.as_ref().map_or(0, |t| (h_p[c][p] - t[c][p]).abs()))
        .sum::<i64>()
        + t_total.as_ref().map_or(0, |t| (0..np).map(|p| (total_p[p] - t[p]).abs()).sum());

    let mut steps = 0u64;
    while cost > 0 {
        if steps >= max_steps {
            return Err(Error::Fixture(format!("period search stalled at distance {cost} after {steps} steps")));
        }
        steps += 1;
        let i = rng.random_range(0..cases.len());
        let j = rng.random_range(0..cases.len());
        let (pi, pj) = (cases[i].period, cases[j].period);
        if pi == pj {
            continue;
        }
        let mut delta = 0i64;
        let mut dh_total = 0i64;
        for c in 0..nc {
            let dn = i64::from(cases[i].mentions[c]) - i64::from(cases[j].mentions[c]);
            if dn != 0 {
                delta += shift_cost(n_p[c][pi], t_n[c][pi], -dn) + shift_cost(n_p[c][pj], t_n[c][pj], dn);
            }
            let dh = i64::from(cases[i].hedged[c]) - i64::from(cases[j].hedged[c]);
            dh_total += dh;
            if let (Some(t), true) = (&t_h, dh != 0) {
                delta += shift_cost(h_p[c][pi], t[c][pi], -dh) + shift_cost(h_p[c][pj], t[c][pj], dh);
            }
        }
        if let (Some(t), true) = (&t_total, dh_total != 0) {
            delta += shift_cost(total_p[pi], t[pi], -dh_total) + shift_cost(total_p[pj], t[pj], dh_total);
        }
        if delta > 0 {
            continue;
        }
        for c in 0..nc {
            let dn = i64::from(cases[i].mentions[c]) - i64::from(cases[j].mentions[c]);
            let dh = i64::from(cases[i].hedged[c]) - i64::from(cases[j].hedged[c]);
            n_p[c][pi] -= dn;
            n_p[c][pj] += dn;
            h_p[c][pi] -= dh;
            h_p[c][pj] += dh;
        }
        total_p[pi] -= dh_total;
        total_p[pj] += dh_total;
        cases[i].period = pj;
        cases[j].period = pi;
        cost += delta;
    }
    Ok(steps)
}

/// Mentions, hedges and period of a case; cases merge only within one key.
type MergeKey<'a> = (&'a [bool], &'a [bool], usize);

/// Groups cases into records. A record listing two FOS yields two cases
/// with the same citances and year, so only cases with equal mention sets,
/// hedge sets and periods are merged.
fn merge_records(spec: &FixtureSpec, cases: &[Case]) -> Result<Vec<Vec<usize>>> {
    let mut needed = (spec.total_cases() - spec.funnel.with_mention) as usize;
    let mut buckets: BTreeMap<MergeKey, BTreeMap<usize, Vec<usize>>> = BTreeMap::new();
    for (i, case) in cases.iter().enumerate() {
        buckets.entry((&case.mentions, &case.hedged, case.period)).or_default().entry(case.fos).or_default().push(i);
    }
    let mut merged = vec![false; cases.len()];
    let mut groups = Vec::with_capacity(spec.funnel.with_mention as usize);
    let mut progress = true;
    while needed > 0 && progress {
        progress = false;
        for by_fos in buckets.values_mut() {
            if needed == 0 {
                break;
            }
            let mut order: Vec<usize> = by_fos.iter().filter(|(_, v)| !v.is_empty()).map(|(&f, _)| f).collect();
            if order.len() < 2 {
                continue;
            }
            order.sort_by_key(|f| std::cmp::Reverse(by_fos[f].len()));
            let a = by_fos.get_mut(&order[0]).and_then(Vec::pop).expect("non-empty");
            let b = by_fos.get_mut(&order[1]).and_then(Vec::pop).expect("non-empty");
            merged[a] = true;
            merged[b] = true;
            groups.push(vec![a.min(b), a.max(b)]);
            needed -= 1;
            progress = true;
        }
    }
    if needed > 0 {
        return Err(Error::Fixture(format!("{needed} more two-FOS records needed than cases allow")));
    }
    groups.extend((0..cases.len()).filter(|&i| !merged[i]).map(|i| vec![i]));
    groups.sort();
    Ok(groups)
}

const LEADS: &[&str] = &[
    "As discussed by the author,",
    "Following this account, the",
    "In our analysis the",
    "The authors describe the",
    "We build on the",
    "This study draws on the",
    "Earlier work frames the",
    "Our reading of the",
];

const TAILS: &[&str] = &[
    "in the history of science.",
    "as a lens for our study.",
    "within the field.",
    "for understanding change.",
    "in empirical research.",
    "over several decades.",
];

const NEUTRAL: &[&str] = &["framework", "argument", "book", "account", "view", "work"];

/// Realistic completions for common truncated stems.
const STEM_FORMS: &[(&str, &[&str])] = &[
    ("falsif", &["falsification", "falsifiability", "falsified", "falsifiable"]),
    ("paradigm", &["paradigm", "paradigms", "paradigmatic", "paradigm"]),
    ("revolution", &["revolution", "revolutions"]),
];

fn term_forms(term: &Term) -> Vec<String> {
    match term {
        Term::Exact(s) => vec![s.clone()],
        Term::Prefix(p) => STEM_FORMS
            .iter()
            .find(|(stem, _)| stem == p)
            .map(|(_, forms)| forms.iter().map(|s| (*s).to_owned()).collect())
            .unwrap_or_else(|| vec![p.clone(), format!("{p}s")]),
    }
}

fn pattern_forms(pattern: &Pattern) -> Vec<String> {
    match pattern {
        Pattern::Token(t) => term_forms(t),
        Pattern::Phrase(terms) => {
            let (last, init) = terms.split_last().expect("phrase has terms");
            let head: Vec<String> = init.iter().map(|t| term_forms(t)[0].clone()).collect();
            term_forms(last).into_iter().map(|f| format!("{} {f}", head.join(" "))).collect()
        }
    }
}

fn title_case(phrase: &str) -> String {
    phrase.split(' ').map(crate::report::display_name).collect::<Vec<_>>().join(" ")
}

struct TextWriter<'a> {
    lexicon: &'a ConceptLexicon,
    hedges: &'a HedgeLexicon,
    /// Spec concept -> lexicon concept.
    index: Vec<usize>,
    forms: Vec<Vec<String>>,
    hedge_words: Vec<String>,
    decoys: Vec<String>,
}

impl<'a> TextWriter<'a> {
    fn new(spec: &FixtureSpec, lexicon: &'a ConceptLexicon, hedges: &'a HedgeLexicon) -> Result<Self> {
        let index: Vec<usize> = spec
            .concepts
            .iter()
            .map(|name| {
                lexicon
                    .concepts
                    .iter()
                    .position(|c| &c.name == name)
                    .ok_or_else(|| Error::Fixture(format!("concept '{name}' is not in the lexicon")))
            })
            .collect::<Result<_>>()?;
        let forms =
            index.iter().map(|&k| lexicon.concepts[k].patterns.iter().flat_map(pattern_forms).collect()).collect();
        let hedge_words: Vec<String> = hedges.terms.iter().cloned().collect();
        let mut decoys: Vec<String> =
            lexicon.concepts.iter().flat_map(|c| c.exclusions.iter().map(|e| title_case(&e.join(" ")))).collect();
        decoys.sort();
        decoys.dedup();
        Ok(Self { lexicon, hedges, index, forms, hedge_words, decoys })
    }

    fn frame(rng: &mut ChaCha8Rng, core: &str) -> String {
        let lead = LEADS[rng.random_range(0..LEADS.len())];
        let tail = TAILS[rng.random_range(0..TAILS.len())];
        format!("{lead} {core} {tail}")
    }

    /// Checks that `text` matches exactly `expect` (lexicon indices) and the
    /// given hedge status.
    fn check(&self, text: &str, expect: Option<usize>, hedged: bool) -> Result<()> {
        let tokens = normalize(text, &self.lexicon.separators);
        let hits: Vec<usize> =
            (0..self.lexicon.concepts.len()).filter(|&k| self.lexicon.concepts[k].matches(&tokens)).collect();
        let ok_hits = match expect {
            Some(k) => hits == [k],
            None => hits.is_empty(),
        };
        if !ok_hits || detect_hedges(&tokens, self.hedges) != hedged {
            return Err(Error::Fixture(format!("generated citance does not match as planned: '{text}'")));
        }
        Ok(())
    }

    fn mention(&self, rng: &mut ChaCha8Rng, c: usize, hedged: bool) -> Result<String> {
        let forms = &self.forms[c];
        let form = &forms[rng.random_range(0..forms.len())];
        let text = if hedged && !self.hedge_words.is_empty() {
            let hedge = &self.hedge_words[rng.random_range(0..self.hedge_words.len())];
            Self::frame(rng, &format!("{form}, and this {hedge} matter"))
        } else {
            Self::frame(rng, form)
        };
        self.check(&text, Some(self.index[c]), hedged && !self.hedge_words.is_empty())?;
        Ok(text)
    }

    fn filler(&self, rng: &mut ChaCha8Rng, k: usize) -> Result<String> {
        let text = if !self.decoys.is_empty() && k.is_multiple_of(5) {
            let title = &self.decoys[(k / 5) % self.decoys.len()];
            Self::frame(rng, &format!("argument of {title}"))
        } else {
            let word = NEUTRAL[rng.random_range(0..NEUTRAL.len())];
            Self::frame(rng, word)
        };
        self.check(&text, None, false)?;
        Ok(text)
    }

    fn records(
        &self,
        spec: &FixtureSpec,
        cases: &[Case],
        groups: &[Vec<usize>],
        rng: &mut ChaCha8Rng,
        include_bare: bool,
    ) -> Result<Vec<FixtureRecord>> {
        let work = spec.work_id.clone();
        let f = spec.funnel;
        let mut records = Vec::with_capacity(f.citing as usize);
        let mut period_seen = vec![0i32; spec.period_cases.len()];
        for group in groups {
            let first = &cases[group[0]];
            let (lo, hi) = spec.period_years[first.period];
            let year = lo + period_seen[first.period] % (hi - lo + 1);
            period_seen[first.period] += 1;
            let mut citations = Vec::new();
            // one citance per concept and case, so raw token counts follow case counts
            for _ in group {
                for c in 0..spec.concepts.len() {
                    if first.mentions[c] {
                        let text = self.mention(rng, c, first.hedged[c])?;
                        citations.push(FixtureCitation { work: work.clone(), citance: Some(text) });
                    }
                }
            }
            let fos = group.iter().map(|&i| spec.fos[cases[i].fos].clone()).collect();
            records.push((year, fos, citations));
        }
        let (min_year, max_year) = (
            spec.period_years.iter().map(|r| r.0).min().unwrap_or(1990),
            spec.period_years.iter().map(|r| r.1).max().unwrap_or(2018),
        );
        let nf = spec.fos.len().max(1);
        let extra = [
            (f.with_fos - f.with_mention, true, true),
            (f.with_context - f.with_fos, true, false),
            (if include_bare { f.citing - f.with_context } else { 0 }, false, true),
        ];
        let mut k = 0usize;
        for (count, context, with_fos) in extra {
            for _ in 0..count {
                let year = rng.random_range(min_year..=max_year);
                let fos = match (with_fos, spec.fos.get(k % nf)) {
                    (true, Some(name)) => vec![name.clone()],
                    _ => vec![],
                };
                let citance = if context { Some(self.filler(rng, k)?) } else { None };
                records.push((year, fos, vec![FixtureCitation { work: work.clone(), citance }]));
                k += 1;
            }
        }
        records.shuffle(rng);
        Ok(records
            .into_iter()
            .enumerate()
            .map(|(i, (year, fos, citations))| FixtureRecord { id: format!("{work}-{i:05}"), year, fos, citations })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hundredths_parsing() {
        assert_eq!(parse_hundredths("12.24").unwrap(), 1224);
        assert_eq!(parse_hundredths("12.7").unwrap(), 1270);
        assert_eq!(parse_hundredths("100").unwrap(), 10000);
        assert!(parse_hundredths("1.234").is_err());
        assert!(parse_hundredths("-1").is_err());
        assert!(parse_hundredths(".5").is_err());
    }

    #[test]
    fn recovers_forced_counts() {
        assert_eq!(recover_count("2.50", 40).unwrap(), 1);
        assert_eq!(recover_count("22.03", 59).unwrap(), 13);
        assert_eq!(recover_count("12.24", 621).unwrap(), 76);
        assert!(recover_count("33.00", 3).is_err());
    }

    #[test]
    fn apportion_by_largest_remainder() {
        assert_eq!(apportion(5, &[1, 1, 1]), [2, 2, 1]);
        assert_eq!(apportion(0, &[3, 4]), [0, 0]);
        assert_eq!(apportion(3, &[0, 0]), [0, 0]);
        assert_eq!(apportion(7, &[10, 0, 4]), [5, 0, 2]);
    }

    fn small_spec() -> FixtureSpec {
        FixtureSpec {
            work_id: "kuhn".into(),
            concepts: vec!["paradigm".into(), "crisis".into()],
            fos: vec!["biology".into(), "sociology".into()],
            fos_cases: vec![4, 3],
            fos_counts: vec![vec![4, 3], vec![1, 2]],
            fos_hedged: vec![vec![1, 1], vec![0, 1]],
            period_years: vec![(1990, 1999), (2000, 2018)],
            period_cases: vec![3, 4],
            period_counts: vec![vec![3, 4], vec![1, 2]],
            period_hedged: None,
            period_hedged_total: Some(vec![1, 2]),
            funnel: Funnel { citing: 12, with_context: 10, with_fos: 9, with_mention: 6 },
        }
    }

    #[test]
    fn small_fixture_meets_funnel() {
        let spec = small_spec();
        let lex = ConceptLexicon::builtin("kuhn").unwrap();
        let fx = build_fixture(&spec, &lex, &HedgeLexicon::default(), &FixtureOptions::default()).unwrap();
        assert_eq!(fx.records.len(), 12);
        let with_context = fx.records.iter().filter(|r| r.citations.iter().any(|c| c.citance.is_some())).count();
        assert_eq!(with_context, 10);
        assert_eq!(fx.records.iter().filter(|r| r.fos.len() == 2).count(), 1);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let spec = small_spec();
        let lex = ConceptLexicon::builtin("kuhn").unwrap();
        let h = HedgeLexicon::default();
        let a = build_fixture(&spec, &lex, &h, &FixtureOptions::default()).unwrap();
        let b = build_fixture(&spec, &lex, &h, &FixtureOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_inconsistent_specs() {
        let mut spec = small_spec();
        spec.period_cases = vec![3, 5];
        assert!(matches!(spec.validate(), Err(Error::Fixture(_))));
        let mut spec = small_spec();
        spec.fos_counts[0][0] = 5;
        assert!(spec.validate().is_err());
        let mut spec = small_spec();
        spec.funnel.with_mention = 3;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn unknown_concept_is_an_error() {
        let mut spec = small_spec();
        spec.concepts[1] = "verifiability".into();
        let lex = ConceptLexicon::builtin("kuhn").unwrap();
        let err = build_fixture(&spec, &lex, &HedgeLexicon::default(), &FixtureOptions::default()).unwrap_err();
        assert!(err.to_string().contains("verifiability"));
    }

    #[test]
    fn published_hedge_counts() {
        let k = FixtureSpec::from_published(&published::KUHN).unwrap();
        let crisis: u64 = k.fos_hedged[6].iter().sum();
        assert_eq!(crisis, 13);
        let p = FixtureSpec::from_published(&published::POPPER).unwrap();
        let per_concept: Vec<u64> = p.fos_hedged.iter().map(|r| r.iter().sum()).collect();
        assert_eq!(per_concept, [76, 1, 4, 1]);
        assert_eq!(p.period_hedged_total.as_deref(), Some(&[13, 18, 28, 23][..]));
    }

    proptest! {
        #[test]
        fn recovered_count_reprints(n in 1u64..2000, h_frac in 0.0f64..=1.0) {
            let h = (h_frac * n as f64).floor() as u64;
            let printed = Percent::of(h, n).unwrap().fixed2();
            if let Ok(back) = recover_count(&printed, n) {
                prop_assert_eq!(Percent::of(back, n).unwrap().fixed2(), printed);
                prop_assert_eq!(back, h);
            }
        }

        #[test]
        fn apportion_sums(total in 0u64..500, weights in prop::collection::vec(0u64..100, 1..8)) {
            let out = apportion(total, &weights);
            let sum: u64 = weights.iter().sum();
            prop_assert_eq!(out.iter().sum::<u64>(), if sum == 0 { 0 } else { total });
        }
    }
}
