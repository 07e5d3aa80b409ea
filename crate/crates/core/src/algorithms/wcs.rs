use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use rand::Rng;
use rayon::prelude::*;

use crate::circuits::{build_rot, phase_distribution, GroverOperator};
use crate::error::{Error, Result};
use crate::formula::{validate_query, WeightedFormula};
use crate::histogram;
use crate::rng::stream;
use crate::statevector::{extract_bits, StateVector};
use crate::weights::NormalizedWeights;

use super::counting::{estimate_from_distribution, WmcEstimate};
use super::Amplifier;

/// One weighted sample over the query variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult {
    pub query: Vec<usize>,
    /// Query bits, `query[i]` in bit `i`.
    pub outcome: u64,
    /// Whether the measured world satisfies `φ'`, so that `outcome` extends
    /// to a model.
    pub succeeded: bool,
    /// Full measured register, variables in bits `0..n`, extra qubit in bit `n`.
    pub world: u64,
    pub iterations_used: u64,
    /// Applications of the weighted Grover operator, QWMC included.
    pub oracle_queries: u64,
    /// The normalized WMC the iteration count was derived from, if estimated.
    pub wmc_used: Option<f64>,
}

impl SampleResult {
    /// Outcome as a bit string, `query[0]` leftmost.
    pub fn label(&self) -> String {
        histogram::label(self.outcome, self.query.len())
    }
}

/// `(θ, R)` with `sin²θ = ŴMC/2` and `R = ⌊π/(4θ)⌋`.
pub fn weighted_iterations(wmc_normalized: f64) -> Result<(f64, u64)> {
    if !(wmc_normalized > 0.0) {
        return Err(Error::Unsatisfiable);
    }
    if wmc_normalized > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "normalized WMC {wmc_normalized} exceeds 1"
        )));
    }
    let theta = (wmc_normalized / 2.0).sqrt().asin();
    Ok((theta, (PI / (4.0 * theta)).floor() as u64))
}

/// `m = ⌊1/√W_min⌋ + 1`, the exclusive bound on iterations when ŴMC is unknown.
pub fn unknown_wmc_range(weights: &NormalizedWeights) -> Result<u64> {
    let w_min = weights.w_min();
    if !(w_min > 0.0) {
        return Err(Error::DegenerateMinWeight);
    }
    Ok((1.0 / w_min.sqrt()).floor() as u64 + 1)
}

/// Weighted Grover machinery for one weighted formula.
#[derive(Debug)]
pub struct WcsEngine {
    wf: WeightedFormula,
    weights: NormalizedWeights,
    amp: Amplifier,
    phases: Mutex<HashMap<usize, Arc<Vec<f64>>>>,
}

impl WcsEngine {
    pub fn new(wf: &WeightedFormula) -> Result<Self> {
        Ok(Self {
            wf: wf.clone(),
            weights: wf.normalized(),
            amp: Amplifier::new(GroverOperator::weighted(wf)?),
            phases: Mutex::new(HashMap::new()),
        })
    }

    pub fn weighted_formula(&self) -> &WeightedFormula {
        &self.wf
    }

    pub fn weights(&self) -> &NormalizedWeights {
        &self.weights
    }

    pub fn num_vars(&self) -> usize {
        self.wf.num_vars()
    }

    /// `WG^R · Rot|0⟩` over the variables and the extra qubit.
    pub fn state_after(&self, iterations: u64) -> Result<StateVector> {
        self.amp.state_after(iterations)
    }

    pub fn is_solution(&self, world: u64) -> bool {
        self.amp.op().is_marked(world)
    }

    /// Probability mass on `φ'` after `iterations` steps.
    pub fn success_probability(&self, iterations: u64) -> Result<f64> {
        let s = self.state_after(iterations)?;
        Ok(s
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(x, _)| self.is_solution(*x as u64))
            .map(|(_, p)| p)
            .sum())
    }

    fn draw<R: Rng + ?Sized>(
        &self,
        query: &[usize],
        iterations: u64,
        rng: &mut R,
    ) -> Result<SampleResult> {
        let world = self.amp.draw(iterations, rng)?;
        Ok(SampleResult {
            query: query.to_vec(),
            outcome: extract_bits(world, query),
            succeeded: self.is_solution(world),
            world,
            iterations_used: iterations,
            oracle_queries: iterations,
            wmc_used: None,
        })
    }

    fn check_query(&self, query: &[usize]) -> Result<()> {
        if query.is_empty() {
            return Err(Error::InvalidArgument("query must not be empty".into()));
        }
        validate_query(query, self.num_vars())
    }

    /// Sample with the normalized WMC known.
    pub fn known_wmc<R: Rng + ?Sized>(
        &self,
        query: &[usize],
        wmc_normalized: f64,
        rng: &mut R,
    ) -> Result<SampleResult> {
        self.check_query(query)?;
        let (_, r) = weighted_iterations(wmc_normalized)?;
        self.draw(query, r, rng)
    }

    /// Sample with a random iteration count below `⌊1/√W_min⌋ + 1`.
    pub fn unknown_wmc<R: Rng + ?Sized>(&self, query: &[usize], rng: &mut R) -> Result<SampleResult> {
        self.check_query(query)?;
        let m = unknown_wmc_range(&self.weights)?;
        let r = rng.random_range(0..m);
        self.draw(query, r, rng)
    }

    /// Exact counting-register distribution of QWMC with `t` bits.
    pub fn phase_distribution(&self, t: usize) -> Result<Arc<Vec<f64>>> {
        if let Some(d) = self.phases.lock().expect("cache lock").get(&t) {
            return Ok(Arc::clone(d));
        }
        let prep = build_rot(&self.weights, true);
        let d = Arc::new(phase_distribution(self.amp.op(), &prep, t)?);
        self.phases
            .lock()
            .expect("cache lock")
            .insert(t, Arc::clone(&d));
        Ok(d)
    }

    /// QWMC with `t` counting bits (default `⌈n/2⌉ + 5`) and `shots` reads.
    pub fn qwmc<R: Rng + ?Sized>(
        &self,
        t: Option<usize>,
        shots: u64,
        rng: &mut R,
    ) -> Result<WmcEstimate> {
        let t = t.unwrap_or_else(|| super::default_t(self.num_vars()));
        let dist = self.phase_distribution(t)?;
        estimate_from_distribution(&dist, t, self.num_vars(), self.weights.v_product(), shots, rng)
    }

    /// QWMC (`qwmc_shots` reads), then one known-WMC draw with the estimate.
    /// Estimates above 1 are clamped to 1.
    pub fn full<R: Rng + ?Sized>(
        &self,
        query: &[usize],
        t: Option<usize>,
        qwmc_shots: u64,
        rng: &mut R,
    ) -> Result<SampleResult> {
        self.check_query(query)?;
        let est = self.qwmc(t, qwmc_shots, rng)?;
        let w = est.normalized_estimate.min(1.0);
        let (_, r) = weighted_iterations(w)?;
        let mut res = self.draw(query, r, rng)?;
        res.oracle_queries += est.oracle_queries;
        res.wmc_used = Some(w);
        Ok(res)
    }
}

impl WcsEngine {
    /// `shots` independent QWCS draws, draw `i` on RNG stream `(seed, i)`.
    /// Draws whose QWMC step estimates a zero count come back as
    /// `Err(Unsatisfiable)`.
    pub fn full_batch(
        &self,
        query: &[usize],
        t: Option<usize>,
        qwmc_shots: u64,
        shots: u64,
        seed: u64,
    ) -> Result<Vec<Result<SampleResult>>> {
        self.check_query(query)?;
        if shots == 0 || qwmc_shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        Ok((0..shots)
            .into_par_iter()
            .map(|i| self.full(query, t, qwmc_shots, &mut stream(seed, i)))
            .collect())
    }
}

pub fn qwcs_known_wmc<R: Rng + ?Sized>(
    wf: &WeightedFormula,
    query: &[usize],
    wmc_normalized: f64,
    rng: &mut R,
) -> Result<SampleResult> {
    WcsEngine::new(wf)?.known_wmc(query, wmc_normalized, rng)
}

pub fn qwcs_unknown_wmc<R: Rng + ?Sized>(
    wf: &WeightedFormula,
    query: &[usize],
    rng: &mut R,
) -> Result<SampleResult> {
    WcsEngine::new(wf)?.unknown_wmc(query, rng)
}

/// QWMC with one shot at the default `t`, then known-WMC sampling.
pub fn qwcs_full<R: Rng + ?Sized>(
    wf: &WeightedFormula,
    query: &[usize],
    rng: &mut R,
) -> Result<SampleResult> {
    WcsEngine::new(wf)?.full(query, None, 1, rng)
}
