//! Search, weighted sampling, counting and the vote wrappers.
//!
//! Every procedure measures once at the end of its circuit. The distribution
//! of the full register after `R` Grover steps is computed once per `R` and
//! cached, so repeated shots only pay for a draw. A shot reads the complete
//! register and projects onto the query bits afterwards, which gives the same
//! query marginal as measuring the query bits alone and also tells whether
//! the draw landed on a model.

mod counting;
mod search;
mod vote;
mod wcs;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::circuits::{GroverOperator, RegisterUnitary};
use crate::error::Result;
use crate::statevector::{Sampler, StateVector};

pub use counting::{default_t, error_bound, qwmc, quantum_count, CountEstimate, WmcEstimate};
pub use search::{
    grover_iterations, grover_search_extra_qubit, grover_search_known_m,
    grover_search_unknown_m, SearchEngine, SearchResult,
};
pub use vote::{vote_map, vote_mpe, vote_with_engine, VoteResult, WmcSource};
pub use wcs::{
    qwcs_full, qwcs_known_wmc, qwcs_unknown_wmc, unknown_wmc_range, weighted_iterations,
    SampleResult, WcsEngine,
};

/// A Grover-type operator plus cached post-iteration distributions.
#[derive(Debug)]
pub(crate) struct Amplifier {
    op: GroverOperator,
    cache: Mutex<HashMap<u64, Arc<Sampler>>>,
}

impl Amplifier {
    pub(crate) fn new(op: GroverOperator) -> Self {
        Self {
            op,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub(crate) fn op(&self) -> &GroverOperator {
        &self.op
    }

    pub(crate) fn num_qubits(&self) -> usize {
        self.op.num_qubits()
    }

    /// `G^R` applied to the prepared state.
    pub(crate) fn state_after(&self, iterations: u64) -> Result<StateVector> {
        let mut s = self.op.prepared_state();
        for _ in 0..iterations {
            self.op.apply_to(&mut s)?;
        }
        Ok(s)
    }

    pub(crate) fn sampler(&self, iterations: u64) -> Result<Arc<Sampler>> {
        if let Some(s) = self.cache.lock().expect("cache lock").get(&iterations) {
            return Ok(Arc::clone(s));
        }
        let state = self.state_after(iterations)?;
        let sampler = Arc::new(Sampler::new(&state.probabilities(), self.num_qubits()));
        self.cache
            .lock()
            .expect("cache lock")
            .insert(iterations, Arc::clone(&sampler));
        Ok(sampler)
    }

    /// One full-register measurement after `iterations` steps.
    pub(crate) fn draw<R: Rng + ?Sized>(&self, iterations: u64, rng: &mut R) -> Result<u64> {
        Ok(self.sampler(iterations)?.draw(rng))
    }
}
