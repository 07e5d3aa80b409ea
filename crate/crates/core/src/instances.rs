//! Built-in instances and random instance generators.

use rand::Rng;

use crate::formula::{parse_weighted_dimacs, CnfFormula, Lit, WeightedFormula};
use crate::weights::WeightTable;

pub const SPRINKLER_WCNF: &str = include_str!("../data/sprinkler.wcnf");

/// `(¬S ∨ W) ∧ (¬R ∨ W) ∧ (¬S ∨ ¬R)` with `w(S)=0.55`, `w(R)=0.3`, `w(W)=0.7`.
pub fn sprinkler() -> WeightedFormula {
    parse_weighted_dimacs(SPRINKLER_WCNF).expect("bundled instance parses")
}

/// Random CNF with `num_clauses` clauses of 1..=3 distinct literals.
pub fn random_cnf<R: Rng + ?Sized>(rng: &mut R, num_vars: usize, num_clauses: usize) -> CnfFormula {
    let clauses = (0..num_clauses)
        .map(|_| {
            let width = rng.random_range(1..=num_vars.min(3));
            let mut vars: Vec<usize> = Vec::with_capacity(width);
            while vars.len() < width {
                let v = rng.random_range(0..num_vars);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|var| Lit {
                    var,
                    negated: rng.random_bool(0.5),
                })
                .collect()
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("generated clauses are in range")
}

/// Random formula with probabilities drawn from `[0.05, 0.95]`.
pub fn random_weighted<R: Rng + ?Sized>(
    rng: &mut R,
    num_vars: usize,
    num_clauses: usize,
) -> WeightedFormula {
    let formula = random_cnf(rng, num_vars, num_clauses);
    let pos: Vec<f64> = (0..num_vars).map(|_| rng.random_range(0.05..0.95)).collect();
    let neg = pos.iter().map(|p| 1.0 - p).collect();
    WeightedFormula::new(formula, WeightTable::new(pos, neg).expect("valid")).expect("sizes match")
}
