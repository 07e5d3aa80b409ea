//! Classical estimators with exact query accounting, the multinomial vote
//! study, and the quantum-vs-classical cost report.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::WcsEngine;
use crate::error::{Error, Result};
use crate::formula::{exact_normalized_wmc, Assignment, CnfFormula, WeightedFormula};
use crate::rng::stream;

/// Counts oracle evaluations. Safe to share across threads.
#[derive(Debug, Default)]
pub struct QueryLedger {
    count: AtomicU64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Evaluate `formula` on world `x`, recording one query.
    pub fn query(&self, formula: &CnfFormula, x: u64) -> bool {
        self.count.fetch_add(1, Ordering::Relaxed);
        formula.eval_index(x)
    }

    pub fn record(&self, n: u64) {
        self.count.fetch_add(n, Ordering::Relaxed);
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

/// An estimate and the number of oracle queries it cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalEstimate {
    pub estimate: f64,
    pub queries: u64,
}

fn check_samples(s: u64) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    Ok(())
}

/// `S = (N/s)·Σ F_i` over `s` uniform worlds.
pub fn classical_count_estimate<R: Rng + ?Sized>(
    formula: &CnfFormula,
    s: u64,
    rng: &mut R,
) -> Result<ClassicalEstimate> {
    check_samples(s)?;
    let ledger = QueryLedger::new();
    let n_worlds = formula.num_worlds();
    let hits = (0..s)
        .filter(|_| ledger.query(formula, rng.random_range(0..n_worlds)))
        .count();
    Ok(ClassicalEstimate {
        estimate: n_worlds as f64 * hits as f64 / s as f64,
        queries: ledger.count(),
    })
}

/// Fraction of `s` weighted draws (bit `i` set with probability `p_i`) that
/// satisfy the formula: an unbiased estimate of the normalized WMC.
pub fn classical_wmc_estimate<R: Rng + ?Sized>(
    wf: &WeightedFormula,
    s: u64,
    rng: &mut R,
) -> Result<ClassicalEstimate> {
    check_samples(s)?;
    let ledger = QueryLedger::new();
    let nw = wf.normalized();
    let p = nw.probabilities();
    let mut hits = 0u64;
    for _ in 0..s {
        let x = p
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &pi)| acc | (u64::from(rng.random::<f64>() < pi) << i));
        hits += u64::from(ledger.query(&wf.formula, x));
    }
    Ok(ClassicalEstimate {
        estimate: hits as f64 / s as f64,
        queries: ledger.count(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSearch {
    pub model: Option<Assignment>,
    pub queries: u64,
}

/// Up to `budget` uniform draws; stops at the first model.
pub fn classical_search<R: Rng + ?Sized>(
    formula: &CnfFormula,
    budget: u64,
    rng: &mut R,
) -> Result<ClassicalSearch> {
    check_samples(budget)?;
    let ledger = QueryLedger::new();
    let n_worlds = formula.num_worlds();
    let model = (0..budget).find_map(|_| {
        let x = rng.random_range(0..n_worlds);
        ledger
            .query(formula, x)
            .then(|| Assignment::from_index(x, formula.num_vars()))
    });
    Ok(ClassicalSearch {
        model,
        queries: ledger.count(),
    })
}

/// Monte-Carlo estimate of the probability that, in `o` draws from a
/// categorical distribution over `k` outcomes with probabilities
/// `p, …, p, A·p` (`p = 1/(k−1+A)`), the last outcome is strictly the most
/// frequent.
pub fn vote_event_probability<R: Rng + ?Sized>(
    k: usize,
    o: u64,
    a: f64,
    trials: u64,
    rng: &mut R,
) -> Result<f64> {
    if k < 2 || !(a >= 1.0) || trials == 0 {
        return Err(Error::InvalidArgument(
            "need k >= 2, A >= 1 and at least one trial".into(),
        ));
    }
    let p = 1.0 / (k as f64 - 1.0 + a);
    let mut probs = vec![p; k];
    probs[k - 1] = a * p;
    let seed = rng.next_u64();
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let counts = multinomial(o, &probs, &mut stream(seed, i));
            let last = counts[k - 1];
            u64::from(counts[..k - 1].iter().all(|&c| c < last))
        })
        .sum();
    Ok(hits as f64 / trials as f64)
}

/// Multinomial draw by conditional binomials.
fn multinomial<R: Rng + ?Sized>(trials: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut left = trials;
    let mut mass = 1.0;
    let mut out = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        if i + 1 == probs.len() {
            out.push(left);
            break;
        }
        let c = if left == 0 || mass <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).expect("valid binomial").sample(rng)
        };
        out.push(c);
        left -= c;
        mass -= p;
    }
    out
}

/// One line of the comparison CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub method: String,
    pub instance: String,
    pub param: String,
    pub estimate: f64,
    pub queries: u64,
    pub seed: u64,
}

impl CsvRow {
    pub const HEADER: &'static str = "method,instance,param,estimate,queries,seed";
}

impl fmt::Display for CsvRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{:?},{},{}",
            self.method, self.instance, self.param, self.estimate, self.queries, self.seed
        )
    }
}

pub fn to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CsvRow::HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// Query cost against accuracy for both estimators of the normalized WMC.
///
/// Emits the exact value, one QWMC row per `t` (queries `2^t − 1`), one
/// classical row per sample count `s`, and for each target error `e` the
/// classical sample count `⌈9·ŴMC(1−ŴMC)/e²⌉` that puts `e` at three
/// standard deviations.
pub fn complexity_curve(
    wf: &WeightedFormula,
    instance: &str,
    t_values: &[usize],
    sample_counts: &[u64],
    target_errors: &[f64],
    seed: u64,
) -> Result<Vec<CsvRow>> {
    let exact = exact_normalized_wmc(wf)?;
    let row = |method: &str, param: String, estimate: f64, queries: u64| CsvRow {
        method: method.into(),
        instance: instance.into(),
        param,
        estimate,
        queries,
        seed,
    };
    let mut rows = vec![row("exact", "-".into(), exact, 0)];
    let engine = WcsEngine::new(wf)?;
    for (i, &t) in t_values.iter().enumerate() {
        let est = engine.qwmc(Some(t), 1, &mut stream(seed, i as u64))?;
        rows.push(row("qwmc", format!("t={t}"), est.normalized_estimate, est.oracle_queries));
    }
    for (i, &s) in sample_counts.iter().enumerate() {
        let est = classical_wmc_estimate(wf, s, &mut stream(seed, 1 << 32 | i as u64))?;
        rows.push(row("classical", format!("s={s}"), est.estimate, est.queries));
    }
    for &e in target_errors {
        let need = (9.0 * exact * (1.0 - exact) / (e * e)).ceil() as u64;
        rows.push(row("classical_required", format!("err={e}"), exact, need));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sprinkler;
    use crate::rng::seeded;

    #[test]
    fn tautology_and_contradiction() {
        let mut r = seeded(1);
        let top = CnfFormula::tautology(3);
        let bot = CnfFormula::contradiction(3);
        let c = classical_count_estimate(&top, 17, &mut r).unwrap();
        assert_eq!((c.estimate, c.queries), (8.0, 17));
        assert_eq!(classical_count_estimate(&bot, 5, &mut r).unwrap().estimate, 0.0);
        let s = classical_search(&bot, 9, &mut r).unwrap();
        assert_eq!((s.model, s.queries), (None, 9));
        assert_eq!(classical_search(&top, 9, &mut r).unwrap().queries, 1);
        assert!(classical_count_estimate(&top, 0, &mut r).is_err());
    }

    #[test]
    fn multinomial_sums_to_trials() {
        let mut r = seeded(2);
        for _ in 0..100 {
            let c = multinomial(1000, &[0.2, 0.3, 0.5], &mut r);
            assert_eq!(c.iter().sum::<u64>(), 1000);
        }
    }

    #[test]
    fn csv_format() {
        let rows = complexity_curve(&sprinkler(), "sprinkler", &[5], &[100], &[0.05], 3).unwrap();
        let csv = to_csv(&rows);
        assert!(csv.starts_with("method,instance,param,estimate,queries,seed\nexact,sprinkler,-,"));
        assert!((rows[0].estimate - 0.679).abs() < 1e-12);
        assert!(csv.contains("qwmc,sprinkler,t=5,"));
        assert!(csv.contains(",31,3\n"));
        assert!(csv.contains("classical,sprinkler,s=100,"));
    }
}
