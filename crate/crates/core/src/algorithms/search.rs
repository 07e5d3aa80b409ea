use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;

use crate::circuits::{build_hadamard_layer, GroverOperator, OracleSpec};
use crate::error::{Error, Result};
use crate::formula::{Assignment, CnfFormula};

use super::Amplifier;

/// One run of a search procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub assignment: Assignment,
    /// Value of the extra qubit, for the variant that uses one.
    pub extra_bit: Option<bool>,
    /// Whether the returned world is a model (of `φ'` when the extra qubit
    /// is in play). Checked after the fact; not counted as a query.
    pub satisfied: bool,
    pub iterations: u64,
    /// Grover iterations plus classical evaluations of `φ` made by the
    /// procedure itself.
    pub oracle_queries: u64,
}

/// `R = ⌊(π/4)·√(N/M)⌋`, or `None` when the procedure guesses uniformly
/// instead (`M = 0` or `M > 3N/4`).
pub fn grover_iterations(num_vars: usize, models: u64) -> Option<u64> {
    let n_worlds = 1u64 << num_vars;
    if models == 0 || 4 * models > 3 * n_worlds {
        return None;
    }
    Some((PI / 4.0 * (n_worlds as f64 / models as f64).sqrt()).floor() as u64)
}

/// Unweighted search over one formula, with cached distributions.
#[derive(Debug)]
pub struct SearchEngine {
    formula: CnfFormula,
    plain: Amplifier,
    extra: OnceLock<Amplifier>,
}

impl SearchEngine {
    pub fn new(formula: &CnfFormula) -> Result<Self> {
        Ok(Self {
            formula: formula.clone(),
            plain: Amplifier::new(GroverOperator::unweighted(formula)?),
            extra: OnceLock::new(),
        })
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    fn n(&self) -> usize {
        self.formula.num_vars()
    }

    fn extra(&self) -> Result<&Amplifier> {
        if let Some(a) = self.extra.get() {
            return Ok(a);
        }
        let spec = OracleSpec::new(self.formula.clone(), true);
        let op = GroverOperator::from_parts(&spec, &build_hadamard_layer(self.n() + 1))?;
        Ok(self.extra.get_or_init(|| Amplifier::new(op)))
    }

    fn result(&self, x: u64, iterations: u64, oracle_queries: u64) -> SearchResult {
        SearchResult {
            assignment: Assignment::from_index(x, self.n()),
            extra_bit: None,
            satisfied: self.formula.eval_index(x),
            iterations,
            oracle_queries,
        }
    }

    /// Probability that `iterations` plain Grover steps end on a model.
    pub fn success_probability(&self, iterations: u64) -> Result<f64> {
        let s = self.plain.state_after(iterations)?;
        Ok(s
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(x, _)| self.formula.eval_index(*x as u64))
            .map(|(_, p)| p)
            .sum())
    }

    /// Search with the model count `models` known in advance.
    pub fn known_m<R: Rng + ?Sized>(&self, models: u64, rng: &mut R) -> Result<SearchResult> {
        let n_worlds = self.formula.num_worlds();
        if models > n_worlds {
            return Err(Error::InvalidArgument(format!(
                "model count {models} exceeds {n_worlds} worlds"
            )));
        }
        match grover_iterations(self.n(), models) {
            None => Ok(self.result(rng.random_range(0..n_worlds), 0, 0)),
            Some(r) => {
                let x = self.plain.draw(r, rng)?;
                Ok(self.result(x, r, r))
            }
        }
    }

    /// Classical guess first, then a uniformly random number of iterations
    /// below `⌊√N⌋ + 1`.
    pub fn unknown_m<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SearchResult> {
        let n_worlds = self.formula.num_worlds();
        let guess = rng.random_range(0..n_worlds);
        if self.formula.eval_index(guess) {
            return Ok(self.result(guess, 0, 1));
        }
        let m = (n_worlds as f64).sqrt().floor() as u64 + 1;
        let r = rng.random_range(0..m);
        let x = self.plain.draw(r, rng)?;
        Ok(self.result(x, r, r + 1))
    }

    /// Search over `φ ∧ X_{n+1}` with iterations drawn below `⌊√(N/2)⌋ + 1`.
    pub fn extra_qubit<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SearchResult> {
        let n = self.n();
        let amp = self.extra()?;
        let m = ((self.formula.num_worlds() as f64) / 2.0).sqrt().floor() as u64 + 1;
        let r = rng.random_range(0..m);
        let x = amp.draw(r, rng)?;
        let low = x & ((1u64 << n) - 1);
        Ok(SearchResult {
            assignment: Assignment::from_index(low, n),
            extra_bit: Some((x >> n) & 1 == 1),
            satisfied: amp.op().is_marked(x),
            iterations: r,
            oracle_queries: r,
        })
    }
}

pub fn grover_search_known_m<R: Rng + ?Sized>(
    formula: &CnfFormula,
    models: u64,
    rng: &mut R,
) -> Result<SearchResult> {
    SearchEngine::new(formula)?.known_m(models, rng)
}

pub fn grover_search_unknown_m<R: Rng + ?Sized>(
    formula: &CnfFormula,
    rng: &mut R,
) -> Result<SearchResult> {
    SearchEngine::new(formula)?.unknown_m(rng)
}

pub fn grover_search_extra_qubit<R: Rng + ?Sized>(
    formula: &CnfFormula,
    rng: &mut R,
) -> Result<SearchResult> {
    SearchEngine::new(formula)?.extra_qubit(rng)
}
