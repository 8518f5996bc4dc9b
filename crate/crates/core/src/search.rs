//! Deterministic enumeration / sampling harness over square matrices.
//!
//! Candidates are addressed by a 64-bit index. In enumerate mode index `k`
//! is read as `n²` base-`|alphabet|` digits, most significant first, filled
//! into the matrix in row-major order (index 0 is the all-`alphabet[0]`
//! matrix). In sample mode candidate `k` consumes outputs `k·n² .. (k+1)·n²`
//! of a SplitMix64 stream seeded with `seed`, each reduced modulo
//! `|alphabet|`. Either way a candidate depends only on its index, so the
//! index space is cut into fixed chunks, evaluated in parallel and merged in
//! chunk order; the report does not depend on the worker count.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::druzkowski::expand_map;
use crate::druzkowski::{gram_and_condition, rank_bound_certificate, trace_poly, RankBoundCertificate};
use crate::error::{InputError, SearchError};
use crate::inversion::{default_degree_bound, invert_cubic_linear, keller_check_with, KellerCheck};
use crate::linalg::ScalarMatrix;
use crate::pairing::{corollary_pipeline, CorollaryOutcome, COROLLARY_MAX_DIM};
use crate::scalar::GaussianRational;

pub const DEFAULT_CEILING: u64 = 10_000_000;
pub const CEILING_ENV: &str = "CUBELIN_CEILING";

/// Chunks per worker; more chunks than workers keeps threads busy when
/// candidate costs are uneven.
const CHUNKS_PER_WORKER: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Enumerate,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    KellerOnly,
    TraceZeroOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Rank-bound certificate.
    RankBound,
    /// `trace_poly ≡ 0` against `AᵗDA = 0`.
    TraceEquivalence,
    /// Nilpotency of `JH` against `det JF ≡ 1` (n ≤ 6).
    KellerEquivalence,
    Invert,
    Corollary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub alphabet: Vec<GaussianRational>,
    pub mode: SearchMode,
    #[serde(default)]
    pub filters: BTreeSet<Filter>,
    #[serde(default)]
    pub checks: BTreeSet<Check>,
    /// Not echoed: reports must not depend on it.
    #[serde(default = "default_workers", skip_serializing)]
    pub workers: usize,
    /// Overrides `CUBELIN_CEILING` and the built-in default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ceiling: Option<u64>,
}

fn default_workers() -> usize {
    1
}

impl SearchConfig {
    pub fn from_json(text: &str) -> Result<Self, SearchError> {
        let config: SearchConfig = serde_json::from_str(text).map_err(|e| InputError::from_json(&e))?;
        config.validate()?;
        Ok(config)
    }

    pub fn enumerate(n: usize, alphabet: Vec<GaussianRational>) -> Self {
        SearchConfig {
            n,
            alphabet,
            mode: SearchMode::Enumerate,
            filters: BTreeSet::new(),
            checks: BTreeSet::new(),
            workers: 1,
            ceiling: None,
        }
    }

    pub fn sample(n: usize, alphabet: Vec<GaussianRational>, count: u64, seed: u64) -> Self {
        SearchConfig { mode: SearchMode::Sample { count, seed }, ..SearchConfig::enumerate(n, alphabet) }
    }

    pub fn with_filters(mut self, filters: impl IntoIterator<Item = Filter>) -> Self {
        self.filters.extend(filters);
        self
    }

    pub fn with_checks(mut self, checks: impl IntoIterator<Item = Check>) -> Self {
        self.checks.extend(checks);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.alphabet.is_empty() {
            return Err(SearchError::InvalidConfig("alphabet is empty".into()));
        }
        if self.workers == 0 {
            return Err(SearchError::InvalidConfig("workers must be positive".into()));
        }
        if self.n == 0 {
            return Err(SearchError::InvalidConfig("dimension must be positive".into()));
        }
        let distinct: BTreeSet<&GaussianRational> = self.alphabet.iter().collect();
        if distinct.len() != self.alphabet.len() {
            return Err(SearchError::InvalidConfig("alphabet has repeated values".into()));
        }
        Ok(())
    }

    /// `|alphabet|^(n²)`, saturating.
    pub fn enumeration_size(&self) -> u128 {
        let cells = u32::try_from(self.n * self.n).unwrap_or(u32::MAX);
        (self.alphabet.len() as u128).checked_pow(cells).unwrap_or(u128::MAX)
    }

    pub fn effective_ceiling(&self) -> u64 {
        self.ceiling
            .or_else(|| std::env::var(CEILING_ENV).ok().and_then(|v| v.trim().parse().ok()))
            .unwrap_or(DEFAULT_CEILING)
    }

    pub fn candidate_count(&self) -> Result<u64, SearchError> {
        match self.mode {
            SearchMode::Sample { count, .. } => Ok(count),
            SearchMode::Enumerate => {
                let count = self.enumeration_size();
                let ceiling = self.effective_ceiling();
                if count > u128::from(ceiling) {
                    return Err(SearchError::CeilingExceeded { count, ceiling: u128::from(ceiling) });
                }
                Ok(count as u64)
            }
        }
    }

    /// Matrix for candidate `index`.
    pub fn candidate(&self, index: u64) -> ScalarMatrix {
        let cells = self.n * self.n;
        let base = self.alphabet.len() as u64;
        let mut digits = vec![0usize; cells];
        match self.mode {
            SearchMode::Enumerate => {
                let mut k = index;
                for d in digits.iter_mut().rev() {
                    *d = (k % base) as usize;
                    k /= base;
                }
            }
            SearchMode::Sample { seed, .. } => {
                let start = index.wrapping_mul(cells as u64);
                for (offset, d) in digits.iter_mut().enumerate() {
                    *d = (splitmix64_at(seed, start.wrapping_add(offset as u64)) % base) as usize;
                }
            }
        }
        let entries = digits.into_iter().map(|d| self.alphabet[d].clone()).collect();
        ScalarMatrix::from_vec(self.n, self.n, entries).expect("n×n entries")
    }

    fn needs_keller(&self) -> bool {
        self.filters.contains(&Filter::KellerOnly)
            || self.checks.contains(&Check::KellerEquivalence)
            || self.checks.contains(&Check::Invert)
    }
}

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Output number `position` (0-based) of SplitMix64 started from state
/// `seed`: the state advances by the golden-ratio gamma before each output,
/// which is then finalized with the standard two multiply-xorshift rounds.
pub fn splitmix64_at(seed: u64, position: u64) -> u64 {
    let mut z = seed.wrapping_add(position.wrapping_add(1).wrapping_mul(SPLITMIX_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnomalyKind {
    /// Trace condition holds but `2·rank > n + δ`.
    RankBoundViolation,
    /// A Keller map whose formal inverse failed at the degree bound.
    KellerInversionFailure,
    TraceEquivalenceMismatch,
    KellerEquivalenceMismatch,
    /// Nilpotent `JH` with a nonzero trace polynomial.
    KellerTraceNonzero,
    CorollaryFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateRecord {
    pub index: u64,
    pub matrix: ScalarMatrix,
    pub certificate: RankBoundCertificate,
    /// `None` when no filter or check needed the Keller test.
    pub keller: Option<bool>,
    pub inverse_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<CorollaryOutcome>,
    pub anomaly: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub anomaly_kinds: Vec<AnomalyKind>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub candidates: u64,
    pub trace_zero: u64,
    pub keller_evaluated: u64,
    pub keller: u64,
    pub passed_filters: u64,
    pub rank_bound_checked: u64,
    pub rank_bound_tight: u64,
    pub trace_equivalence_checked: u64,
    pub keller_equivalence_checked: u64,
    pub invert_attempted: u64,
    pub invertible: u64,
    pub not_invertible: u64,
    pub corollary_attempted: u64,
    pub corollary_verified: u64,
    pub corollary_diagonal_has_zero: u64,
    pub corollary_not_keller: u64,
    pub corollary_anomaly: u64,
    pub anomalies: u64,
}

impl Totals {
    fn merge(&mut self, o: &Totals) {
        self.candidates += o.candidates;
        self.trace_zero += o.trace_zero;
        self.keller_evaluated += o.keller_evaluated;
        self.keller += o.keller;
        self.passed_filters += o.passed_filters;
        self.rank_bound_checked += o.rank_bound_checked;
        self.rank_bound_tight += o.rank_bound_tight;
        self.trace_equivalence_checked += o.trace_equivalence_checked;
        self.keller_equivalence_checked += o.keller_equivalence_checked;
        self.invert_attempted += o.invert_attempted;
        self.invertible += o.invertible;
        self.not_invertible += o.not_invertible;
        self.corollary_attempted += o.corollary_attempted;
        self.corollary_verified += o.corollary_verified;
        self.corollary_diagonal_has_zero += o.corollary_diagonal_has_zero;
        self.corollary_not_keller += o.corollary_not_keller;
        self.corollary_anomaly += o.corollary_anomaly;
        self.anomalies += o.anomalies;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub totals: Totals,
    pub anomalies: Vec<CandidateRecord>,
    /// Records of every candidate that passed the filters, only when
    /// requested; rendered as JSON Lines rather than inside the summary.
    #[serde(skip)]
    pub records: Vec<CandidateRecord>,
    pub duration_ms: u64,
}

impl SearchReport {
    pub fn has_anomalies(&self) -> bool {
        !self.anomalies.is_empty()
    }

    /// One-line summary object.
    pub fn summary_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Summary with the duration zeroed, for byte comparisons.
    pub fn summary_json_without_duration(&self) -> String {
        let mut copy = SearchReport { records: Vec::new(), ..self.clone() };
        copy.duration_ms = 0;
        copy.summary_json()
    }

    /// Candidate records as JSON Lines, in index order.
    pub fn records_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Default)]
struct ChunkResult {
    totals: Totals,
    anomalies: Vec<CandidateRecord>,
    records: Vec<CandidateRecord>,
}

pub fn run_search(config: &SearchConfig) -> Result<SearchReport, SearchError> {
    run_search_with_records(config, false)
}

pub fn run_search_with_records(config: &SearchConfig, keep_records: bool) -> Result<SearchReport, SearchError> {
    config.validate()?;
    let total = config.candidate_count()?;
    let started = Instant::now();

    let chunk_count = (config.workers as u64 * CHUNKS_PER_WORKER).clamp(1, total.max(1));
    let chunk_len = total.div_ceil(chunk_count).max(1);
    let ranges: Vec<(u64, u64)> =
        (0..chunk_count).map(|c| (c * chunk_len, ((c + 1) * chunk_len).min(total))).filter(|(s, e)| s < e).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| SearchError::InvalidConfig(format!("thread pool: {e}")))?;
    let chunks: Vec<ChunkResult> = pool
        .install(|| ranges.par_iter().map(|&(start, end)| process_chunk(config, start, end, keep_records)).collect());

    let mut totals = Totals::default();
    let mut anomalies = Vec::new();
    let mut records = Vec::new();
    for chunk in chunks {
        totals.merge(&chunk.totals);
        anomalies.extend(chunk.anomalies);
        records.extend(chunk.records);
    }
    Ok(SearchReport {
        config: config.clone(),
        totals,
        anomalies,
        records,
        duration_ms: u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX),
    })
}

fn process_chunk(config: &SearchConfig, start: u64, end: u64, keep_records: bool) -> ChunkResult {
    let mut out = ChunkResult::default();
    for index in start..end {
        let matrix = config.candidate(index);
        if let Some(record) = evaluate_candidate(config, index, matrix, &mut out.totals) {
            if record.anomaly {
                out.totals.anomalies += 1;
                out.anomalies.push(record.clone());
            }
            if keep_records {
                out.records.push(record);
            }
        }
    }
    out
}

/// Runs filters and checks on one candidate; `None` if filtered out.
fn evaluate_candidate(
    config: &SearchConfig,
    index: u64,
    matrix: ScalarMatrix,
    totals: &mut Totals,
) -> Option<CandidateRecord> {
    totals.candidates += 1;
    let (_, trace_zero) = gram_and_condition(&matrix).expect("square candidate");
    if trace_zero {
        totals.trace_zero += 1;
    }
    let with_det = config.checks.contains(&Check::KellerEquivalence);
    let keller: Option<KellerCheck> = config.needs_keller().then(|| keller_check_with(&matrix, with_det));
    if let Some(k) = &keller {
        totals.keller_evaluated += 1;
        if k.is_keller() {
            totals.keller += 1;
        }
    }

    if config.filters.contains(&Filter::TraceZeroOnly) && !trace_zero {
        return None;
    }
    if config.filters.contains(&Filter::KellerOnly) && !keller.as_ref().is_some_and(KellerCheck::is_keller) {
        return None;
    }
    totals.passed_filters += 1;

    let mut kinds = Vec::new();
    let certificate = rank_bound_certificate(&matrix).expect("square candidate");
    if config.checks.contains(&Check::RankBound) {
        totals.rank_bound_checked += 1;
        if certificate.is_tight() {
            totals.rank_bound_tight += 1;
        }
        if !certificate.theorem_satisfied {
            kinds.push(AnomalyKind::RankBoundViolation);
        }
    }
    if config.checks.contains(&Check::TraceEquivalence) {
        totals.trace_equivalence_checked += 1;
        if trace_poly(&matrix).expect("square candidate").is_zero() != trace_zero {
            kinds.push(AnomalyKind::TraceEquivalenceMismatch);
        }
    }
    if let Some(k) = &keller {
        if config.checks.contains(&Check::KellerEquivalence) {
            totals.keller_equivalence_checked += 1;
            if !k.consistent() {
                kinds.push(AnomalyKind::KellerEquivalenceMismatch);
            }
        }
        if k.is_keller() && !trace_zero {
            kinds.push(AnomalyKind::KellerTraceNonzero);
        }
    }

    let mut inverse_degree = None;
    if config.checks.contains(&Check::Invert) {
        totals.invert_attempted += 1;
        // A non-Keller map has a non-constant Jacobian determinant.
        let inverse = if keller.as_ref().is_some_and(KellerCheck::is_keller) {
            let f = expand_map(&matrix).expect("square candidate");
            let inverse = invert_cubic_linear(&matrix, &f, default_degree_bound(config.n));
            if inverse.is_none() {
                kinds.push(AnomalyKind::KellerInversionFailure);
            }
            inverse
        } else {
            None
        };
        match inverse {
            Some(g) => {
                totals.invertible += 1;
                inverse_degree = Some(g.degree().unwrap_or(0));
            }
            None => totals.not_invertible += 1,
        }
    }

    let mut corollary = None;
    if config.checks.contains(&Check::Corollary) && config.n <= COROLLARY_MAX_DIM {
        totals.corollary_attempted += 1;
        let report = corollary_pipeline(&matrix).expect("square candidate within range");
        match report.outcome {
            CorollaryOutcome::Verified => totals.corollary_verified += 1,
            CorollaryOutcome::DiagonalHasZero => totals.corollary_diagonal_has_zero += 1,
            CorollaryOutcome::NotKeller => totals.corollary_not_keller += 1,
            CorollaryOutcome::Anomaly => {
                totals.corollary_anomaly += 1;
                kinds.push(AnomalyKind::CorollaryFailure);
            }
        }
        if inverse_degree.is_none() {
            inverse_degree = report.f_inverse_degree;
        }
        corollary = Some(report.outcome);
    }

    kinds.sort();
    kinds.dedup();
    Some(CandidateRecord {
        index,
        matrix,
        certificate,
        keller: keller.map(|k| k.is_keller()),
        inverse_degree,
        corollary,
        anomaly: !kinds.is_empty(),
        anomaly_kinds: kinds,
    })
}
