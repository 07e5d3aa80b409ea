use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, WeightedFormula};
use crate::histogram::Histogram;
use crate::statevector::Sampler;

use super::wcs::WcsEngine;

/// Phase-estimation success target behind the default `t`.
const EPSILON_BITS: usize = 3;

/// `⌈n/2⌉ + 5` counting bits.
pub fn default_t(num_vars: usize) -> usize {
    num_vars.div_ceil(2) + 5
}

/// `2^{−n/2−1/2}`, the accuracy guaranteed at the default `t`.
pub fn error_bound(num_vars: usize) -> f64 {
    (-(num_vars as f64) / 2.0 - 0.5).exp2()
}

/// A QWMC run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WmcEstimate {
    /// `2·sin²(π·y/2^t)` for the modal phase integer `y`.
    pub normalized_estimate: f64,
    pub raw_estimate: f64,
    pub t: usize,
    /// Accuracy bits, `t − 3`.
    pub m: usize,
    pub error_bound: f64,
    pub measured_phase_integer: u64,
    pub shots: u64,
    /// Weighted Grover applications in one circuit, `2^t − 1`.
    pub oracle_queries: u64,
    pub histogram: Histogram,
}

pub(crate) fn estimate_from_distribution<R: Rng + ?Sized>(
    dist: &[f64],
    t: usize,
    num_vars: usize,
    v_product: f64,
    shots: u64,
    rng: &mut R,
) -> Result<WmcEstimate> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let histogram = Sampler::new(dist, t).histogram(rng, shots);
    let y = histogram.mode().expect("at least one shot");
    let normalized_estimate = 2.0 * (PI * y as f64 / (1u64 << t) as f64).sin().powi(2);
    Ok(WmcEstimate {
        normalized_estimate,
        raw_estimate: normalized_estimate * v_product,
        t,
        m: t.saturating_sub(EPSILON_BITS),
        error_bound: error_bound(num_vars),
        measured_phase_integer: y,
        shots,
        oracle_queries: (1u64 << t) - 1,
        histogram,
    })
}

/// Quantum weighted model counting by phase estimation on `WG`.
pub fn qwmc<R: Rng + ?Sized>(
    wf: &WeightedFormula,
    t: Option<usize>,
    shots: u64,
    rng: &mut R,
) -> Result<WmcEstimate> {
    WcsEngine::new(wf)?.qwmc(t, shots, rng)
}

/// Quantum counting result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountEstimate {
    /// `round(2^n · ŴMC)` under uniform weights.
    pub estimate: u64,
    pub wmc: WmcEstimate,
}

impl CountEstimate {
    pub fn from_wmc(num_vars: usize, wmc: WmcEstimate) -> Self {
        let estimate = ((1u64 << num_vars) as f64 * wmc.normalized_estimate).round() as u64;
        Self { estimate, wmc }
    }
}

/// Model counting: QWMC with every weight at ½.
pub fn quantum_count<R: Rng + ?Sized>(
    formula: &CnfFormula,
    t: Option<usize>,
    shots: u64,
    rng: &mut R,
) -> Result<CountEstimate> {
    let wf = WeightedFormula::uniform(formula.clone());
    let wmc = qwmc(&wf, t, shots, rng)?;
    Ok(CountEstimate::from_wmc(formula.num_vars(), wmc))
}
