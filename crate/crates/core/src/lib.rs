//! Weighted model counting and weighted sampling with simulated quantum
//! circuits.
//!
//! The crate bundles a CNF / weight model with an exact enumerator, a dense
//! state-vector simulator, gadget builders (marking oracle, weighted Grover
//! iteration, QFT, phase estimation), the quantum algorithms built on them,
//! and classical sampling baselines.
//!
//! ```
//! use qwmc::{exact_normalized_wmc, instances};
//!
//! let wf = instances::sprinkler();
//! assert!((exact_normalized_wmc(&wf).unwrap() - 0.679).abs() < 1e-12);
//! ```

pub mod algorithms;
pub mod baselines;
pub mod circuits;
pub mod error;
pub mod formula;
pub mod histogram;
pub mod instances;
pub mod matrix;
pub mod rng;
pub mod statevector;
pub mod weights;

pub use error::{Error, Result};
pub use formula::{
    exact_map, exact_mpe, exact_normalized_wmc, exact_query_distribution, exact_wmc,
    parse_weighted_dimacs, solve_exact, to_weighted_dimacs, Assignment, Clause, CnfFormula,
    ExactSolution, Lit, PartialAssignment, WeightedFormula,
};
pub use histogram::Histogram;
pub use statevector::{MarginalDistribution, StateVector};
pub use weights::{NormalizedWeights, WeightTable};
pub use algorithms::{
    qwcs_full, qwcs_known_wmc, qwcs_unknown_wmc, qwmc, quantum_count, vote_map, vote_mpe,
    CountEstimate, SampleResult, SearchResult, VoteResult, WcsEngine, WmcEstimate, WmcSource,
};
