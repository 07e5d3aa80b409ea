//! Brute-force reference computations shared by the integration tests.
//! They deliberately avoid the library's own enumeration code.

#![allow(dead_code)]

use qwmc::{CnfFormula, WeightedFormula};

pub fn eval(f: &CnfFormula, x: u64) -> bool {
    f.clauses()
        .iter()
        .all(|c| c.iter().any(|l| ((x >> l.var) & 1 == 1) != l.negated))
}

pub fn probabilities(wf: &WeightedFormula) -> Vec<f64> {
    (0..wf.num_vars())
        .map(|i| {
            let (a, b) = (wf.weights.pos(i), wf.weights.neg(i));
            a / (a + b)
        })
        .collect()
}

pub fn world_weight(p: &[f64], x: u64) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, &pi)| if (x >> i) & 1 == 1 { pi } else { 1.0 - pi })
        .product()
}

pub fn normalized_wmc(wf: &WeightedFormula) -> f64 {
    let p = probabilities(wf);
    (0..1u64 << wf.num_vars())
        .filter(|&x| eval(&wf.formula, x))
        .map(|x| world_weight(&p, x))
        .sum()
}

pub fn model_count(f: &CnfFormula) -> u64 {
    (0..1u64 << f.num_vars()).filter(|&x| eval(f, x)).count() as u64
}

pub fn bits(x: u64, query: &[usize]) -> u64 {
    query
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &v)| acc | (((x >> v) & 1) << i))
}

/// `P(q) ∝ Σ_{y: φ(q y)} W_{q y}`, normalized.
pub fn conditional_distribution(wf: &WeightedFormula, query: &[usize]) -> Vec<f64> {
    let p = probabilities(wf);
    let mut out = vec![0.0; 1 << query.len()];
    for x in 0..1u64 << wf.num_vars() {
        if eval(&wf.formula, x) {
            out[bits(x, query) as usize] += world_weight(&p, x);
        }
    }
    let z: f64 = out.iter().sum();
    out.iter().map(|v| v / z).collect()
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
