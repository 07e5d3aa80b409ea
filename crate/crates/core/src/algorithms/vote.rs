use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{exact_normalized_wmc, validate_query, PartialAssignment, WeightedFormula};
use crate::histogram::Histogram;
use crate::rng::stream;

use super::wcs::WcsEngine;

/// Where the vote takes the normalized WMC from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WmcSource {
    /// Exact enumeration.
    Exact,
    /// A value supplied by the caller.
    Given(f64),
    /// One QWMC run up front; `t = None` means the default.
    Estimate { t: Option<usize>, shots: u64 },
}

/// Outcome of a repeat-and-vote run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoteResult {
    pub query: Vec<usize>,
    /// Modal successful outcome (`query[i]` in bit `i`), `None` if no draw
    /// succeeded.
    pub winner: Option<u64>,
    /// Successful draws only.
    pub histogram: Histogram,
    /// Every draw, failures included.
    pub raw_histogram: Histogram,
    pub shots: u64,
    pub successes: u64,
    pub wmc_used: f64,
    pub iterations: u64,
    pub oracle_queries: u64,
}

impl VoteResult {
    pub fn winner_assignment(&self) -> Option<PartialAssignment> {
        let vars = &self.query;
        self.winner.map(|w| {
            let world = vars
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &v)| acc | (((w >> i) & 1) << v));
            PartialAssignment::from_index(world, vars)
        })
    }
}

/// Run `shots` known-WMC draws on `engine`, each on its own RNG stream
/// derived from `seed`, and keep the modal successful outcome. Ties go to
/// the smaller bit string as displayed.
pub fn vote_with_engine(
    engine: &WcsEngine,
    query: &[usize],
    shots: u64,
    source: WmcSource,
    seed: u64,
) -> Result<VoteResult> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    validate_query(query, engine.num_vars())?;
    let mut queries = 0;
    let wmc = match source {
        WmcSource::Exact => exact_normalized_wmc(engine.weighted_formula())?,
        WmcSource::Given(w) => w,
        WmcSource::Estimate { t, shots } => {
            let est = engine.qwmc(t, shots, &mut stream(seed, u64::MAX))?;
            queries += est.oracle_queries * shots;
            est.normalized_estimate.min(1.0)
        }
    };
    let draws: Vec<_> = (0..shots)
        .into_par_iter()
        .map(|i| engine.known_wmc(query, wmc, &mut stream(seed, i)))
        .collect::<Result<_>>()?;

    let width = query.len();
    let mut histogram = Histogram::new(width);
    let mut raw_histogram = Histogram::new(width);
    let mut successes = 0;
    let mut iterations = 0;
    for d in &draws {
        raw_histogram.record(d.outcome);
        queries += d.oracle_queries;
        iterations = d.iterations_used;
        if d.succeeded {
            successes += 1;
            histogram.record(d.outcome);
        }
    }
    Ok(VoteResult {
        query: query.to_vec(),
        winner: histogram.mode_by_label(),
        histogram,
        raw_histogram,
        shots,
        successes,
        wmc_used: wmc,
        iterations,
        oracle_queries: queries,
    })
}

/// Most probable explanation by majority vote over all variables.
pub fn vote_mpe<R: Rng + ?Sized>(
    wf: &WeightedFormula,
    shots: u64,
    source: WmcSource,
    rng: &mut R,
) -> Result<VoteResult> {
    let query: Vec<usize> = (0..wf.num_vars()).collect();
    vote_map(wf, &query, shots, source, rng)
}

/// Maximum a posteriori assignment of `query` by majority vote.
pub fn vote_map<R: Rng + ?Sized>(
    wf: &WeightedFormula,
    query: &[usize],
    shots: u64,
    source: WmcSource,
    rng: &mut R,
) -> Result<VoteResult> {
    if query.is_empty() {
        return Err(Error::InvalidArgument("query must not be empty".into()));
    }
    let engine = WcsEngine::new(wf)?;
    vote_with_engine(&engine, query, shots, source, rng.next_u64())
}
