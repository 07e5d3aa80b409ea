//! CNF formulas, weighted formulas, and the brute-force oracle that every
//! quantum result is checked against.
//!
//! Variables are 0-based internally and 1-based in the file format. When a
//! world is treated as a number (enumeration order, tie-breaking, display)
//! `X_1` is the most significant bit, matching how worlds are written
//! (`S R W = 101`). When a world is a simulator basis index, `X_1` is bit 0.

mod dimacs;

use std::fmt;

use serde::Serialize;

pub use dimacs::{parse_weighted_dimacs, to_weighted_dimacs};

use crate::error::{Error, Result};
use crate::weights::{NormalizedWeights, WeightTable};

/// Largest formula the brute-force oracle will enumerate.
pub const ENUMERATION_LIMIT: usize = 24;

/// A literal over a 0-based variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// From a signed 1-based DIMACS literal.
    pub fn from_dimacs(lit: i64) -> Self {
        debug_assert!(lit != 0);
        Self {
            var: (lit.unsigned_abs() - 1) as usize,
            negated: lit < 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }
}

pub type Clause = Vec<Lit>;

/// A conjunction of non-empty clauses over `num_vars` variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
    #[serde(skip)]
    masks: Vec<ClauseMask>,
}

// A clause is satisfied by basis index `j` iff `j & pos != 0 || !j & neg != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ClauseMask {
    pos: u64,
    neg: u64,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidArgument(
                "a formula needs at least one variable".into(),
            ));
        }
        for clause in &clauses {
            if clause.is_empty() {
                return Err(Error::EmptyClause);
            }
            if let Some(l) = clause.iter().find(|l| l.var >= num_vars) {
                return Err(Error::VariableOutOfRange {
                    var: l.var as i64 + 1,
                    num_vars,
                });
            }
        }
        let masks = if num_vars <= 64 {
            clauses
                .iter()
                .map(|c| {
                    c.iter().fold(ClauseMask { pos: 0, neg: 0 }, |mut m, l| {
                        if l.negated {
                            m.neg |= 1 << l.var;
                        } else {
                            m.pos |= 1 << l.var;
                        }
                        m
                    })
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            num_vars,
            clauses,
            masks,
        })
    }

    /// Build from signed 1-based literals, e.g. `&[&[-1, 3], &[-2, 3]]`.
    pub fn from_dimacs(num_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        let mut out = Vec::with_capacity(clauses.len());
        for c in clauses {
            if let Some(&bad) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::VariableOutOfRange {
                    var: bad.abs(),
                    num_vars,
                });
            }
            out.push(c.iter().map(|&l| Lit::from_dimacs(l)).collect());
        }
        Self::new(num_vars, out)
    }

    /// The formula with no clauses, true everywhere.
    pub fn tautology(num_vars: usize) -> Self {
        Self::new(num_vars, Vec::new()).expect("valid")
    }

    /// `X_1 ∧ ¬X_1`.
    pub fn contradiction(num_vars: usize) -> Self {
        Self::new(num_vars, vec![vec![Lit::pos(0)], vec![Lit::neg(0)]]).expect("valid")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_worlds(&self) -> u64 {
        1u64 << self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        if x.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        Ok(self
            .clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(x.bits[l.var]))))
    }

    /// Evaluate on a basis index whose bit `i` holds `x_i`. Bits above
    /// `num_vars` are ignored.
    #[inline]
    pub fn eval_index(&self, index: u64) -> bool {
        assert!(self.num_vars <= 64, "basis-index evaluation needs n <= 64");
        self.masks
            .iter()
            .all(|m| index & m.pos != 0 || !index & m.neg != 0)
    }

    /// All models in ascending order (`X_1` most significant).
    pub fn enumerate_models(&self) -> Result<Vec<Assignment>> {
        self.check_enumerable()?;
        Ok(self
            .worlds()
            .filter(|&idx| self.eval_index(idx))
            .map(|idx| Assignment::from_index(idx, self.num_vars))
            .collect())
    }

    pub fn model_count(&self) -> Result<u64> {
        self.check_enumerable()?;
        Ok(self.worlds().filter(|&idx| self.eval_index(idx)).count() as u64)
    }

    pub(crate) fn check_enumerable(&self) -> Result<()> {
        if self.num_vars > ENUMERATION_LIMIT {
            return Err(Error::EnumerationLimit {
                num_vars: self.num_vars,
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(())
    }

    // Basis indices in ascending display order.
    fn worlds(&self) -> impl Iterator<Item = u64> + '_ {
        let n = self.num_vars;
        (0..1u64 << n).map(move |v| display_to_index(v, n))
    }
}

#[inline]
fn display_to_index(value: u64, n: usize) -> u64 {
    // Reverses the low n bits.
    if n == 0 {
        0
    } else {
        value.reverse_bits() >> (64 - n)
    }
}

/// A complete world `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }

    /// From a basis index (bit `i` is `x_i`).
    pub fn from_index(index: u64, n: usize) -> Self {
        Self {
            bits: (0..n).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    /// Parse a display string such as `"101"` (`X_1` leftmost).
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|bits| Self { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    /// The world as an unsigned number with `X_1` most significant.
    pub fn binary_value(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Values for a subset of the variables, listed in query order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartialAssignment {
    pub vars: Vec<usize>,
    pub values: Assignment,
}

impl PartialAssignment {
    /// Restrict a basis index to `vars`.
    pub fn from_index(index: u64, vars: &[usize]) -> Self {
        Self {
            vars: vars.to_vec(),
            values: Assignment::from_bits(vars.iter().map(|&v| (index >> v) & 1 == 1)),
        }
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.values.fmt(f)
    }
}

/// A CNF formula paired with its literal weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedFormula {
    pub formula: CnfFormula,
    pub weights: WeightTable,
}

impl WeightedFormula {
    pub fn new(formula: CnfFormula, weights: WeightTable) -> Result<Self> {
        if weights.num_vars() != formula.num_vars() {
            return Err(Error::LengthMismatch {
                expected: formula.num_vars(),
                got: weights.num_vars(),
            });
        }
        Ok(Self { formula, weights })
    }

    pub fn uniform(formula: CnfFormula) -> Self {
        let weights = WeightTable::uniform(formula.num_vars());
        Self { formula, weights }
    }

    pub fn num_vars(&self) -> usize {
        self.formula.num_vars()
    }

    pub fn normalized(&self) -> NormalizedWeights {
        // WeightTable construction already rejected zero sums.
        self.weights.normalize().expect("validated weight table")
    }
}

/// Exact answers for every query the library estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactSolution {
    pub wmc: f64,
    pub normalized_wmc: f64,
    pub model_count: u64,
    pub mpe: Option<(Assignment, f64)>,
    pub map: Option<(PartialAssignment, f64)>,
}

/// Raw weighted model count `Σ_{x ⊨ φ} ∏ w(l)`.
pub fn exact_wmc(wf: &WeightedFormula) -> Result<f64> {
    wf.formula.check_enumerable()?;
    let n = wf.num_vars();
    let mut sum = 0.0;
    for idx in wf.formula.worlds().filter(|&i| wf.formula.eval_index(i)) {
        sum += wf.weights.raw_world_weight(&Assignment::from_index(idx, n))?;
    }
    Ok(sum)
}

/// Model count under the normalized weights, `ŴMC`.
pub fn exact_normalized_wmc(wf: &WeightedFormula) -> Result<f64> {
    wf.formula.check_enumerable()?;
    let nw = wf.normalized();
    let mut sum = 0.0;
    for x in wf.formula.enumerate_models()? {
        sum += nw.world_weight(&x)?;
    }
    Ok(sum)
}

/// Heaviest model; ties go to the smallest binary value.
pub fn exact_mpe(wf: &WeightedFormula) -> Result<(Assignment, f64)> {
    wf.formula.check_enumerable()?;
    let n = wf.num_vars();
    let mut best: Option<(Assignment, f64)> = None;
    for idx in wf.formula.worlds().filter(|&i| wf.formula.eval_index(i)) {
        let x = Assignment::from_index(idx, n);
        let w = wf.weights.raw_world_weight(&x)?;
        // Strict comparison keeps the earliest (smallest) world on ties.
        if best.as_ref().map_or(true, |(_, bw)| w > *bw) {
            best = Some((x, w));
        }
    }
    best.ok_or(Error::Unsatisfiable)
}

/// Most probable configuration of `query`, summing over extensions.
pub fn exact_map(wf: &WeightedFormula, query: &[usize]) -> Result<(PartialAssignment, f64)> {
    let scores = query_scores(wf, query)?;
    let mut best: Option<(u64, f64)> = None;
    for (value, &(score, extendable)) in scores.iter().enumerate() {
        if extendable && best.map_or(true, |(_, b)| score > b) {
            best = Some((value as u64, score));
        }
    }
    let (value, score) = best.ok_or(Error::Unsatisfiable)?;
    let l = query.len();
    let values = Assignment::from_bits((0..l).map(|i| (value >> (l - 1 - i)) & 1 == 1));
    Ok((
        PartialAssignment {
            vars: query.to_vec(),
            values,
        },
        score,
    ))
}

/// Exact conditional distribution of `query` given the formula, indexed by
/// query value with `query[0]` as bit 0. Zero everywhere when unsatisfiable.
pub fn exact_query_distribution(wf: &WeightedFormula, query: &[usize]) -> Result<Vec<f64>> {
    validate_query(query, wf.num_vars())?;
    wf.formula.check_enumerable()?;
    let nw = wf.normalized();
    let mut probs = vec![0.0; 1 << query.len()];
    let mut total = 0.0;
    for idx in (0..wf.formula.num_worlds()).filter(|&i| wf.formula.eval_index(i)) {
        let w = nw.world_weight_index(idx);
        let q = query
            .iter()
            .enumerate()
            .fold(0usize, |acc, (bit, &v)| acc | ((((idx >> v) & 1) as usize) << bit));
        probs[q] += w;
        total += w;
    }
    if total > 0.0 {
        probs.iter_mut().for_each(|p| *p /= total);
    }
    Ok(probs)
}

// Summed raw weight per query value (display order) and whether any
// extension is a model.
fn query_scores(wf: &WeightedFormula, query: &[usize]) -> Result<Vec<(f64, bool)>> {
    validate_query(query, wf.num_vars())?;
    wf.formula.check_enumerable()?;
    let n = wf.num_vars();
    let l = query.len();
    let mut scores = vec![(0.0, false); 1 << l];
    for idx in wf.formula.worlds().filter(|&i| wf.formula.eval_index(i)) {
        let x = Assignment::from_index(idx, n);
        let w = wf.weights.raw_world_weight(&x)?;
        let q = query
            .iter()
            .fold(0usize, |acc, &v| (acc << 1) | usize::from(x.bits[v]));
        scores[q].0 += w;
        scores[q].1 = true;
    }
    Ok(scores)
}

pub(crate) fn validate_query(query: &[usize], num_vars: usize) -> Result<()> {
    for (i, &v) in query.iter().enumerate() {
        if v >= num_vars {
            return Err(Error::VariableOutOfRange {
                var: v as i64 + 1,
                num_vars,
            });
        }
        if query[..i].contains(&v) {
            return Err(Error::InvalidArgument(format!(
                "variable {} repeated in query",
                v + 1
            )));
        }
    }
    Ok(())
}

/// Everything the oracle knows about `wf`, with MAP over `query`.
pub fn solve_exact(wf: &WeightedFormula, query: &[usize]) -> Result<ExactSolution> {
    let model_count = wf.formula.model_count()?;
    let (mpe, map) = if model_count == 0 {
        (None, None)
    } else {
        (Some(exact_mpe(wf)?), Some(exact_map(wf, query)?))
    };
    Ok(ExactSolution {
        wmc: exact_wmc(wf)?,
        normalized_wmc: exact_normalized_wmc(wf)?,
        model_count,
        mpe,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::sprinkler;

    fn bits(s: &str) -> Assignment {
        Assignment::parse(s).unwrap()
    }

    #[test]
    fn evaluate_sprinkler_rows() {
        let wf = sprinkler();
        assert!(!wf.formula.evaluate(&bits("010")).unwrap());
        assert!(wf.formula.evaluate(&bits("101")).unwrap());
        assert!(wf.formula.evaluate(&bits("1")).is_err());
        assert!(CnfFormula::tautology(4).evaluate(&bits("1010")).unwrap());
    }

    #[test]
    fn eval_index_matches_evaluate() {
        let f = sprinkler().formula;
        for idx in 0..8 {
            let x = Assignment::from_index(idx, 3);
            assert_eq!(f.eval_index(idx), f.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn models_in_order() {
        let models: Vec<String> = sprinkler()
            .formula
            .enumerate_models()
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(models, ["000", "001", "011", "101"]);
        assert!(CnfFormula::contradiction(1).enumerate_models().unwrap().is_empty());
        assert_eq!(CnfFormula::tautology(2).enumerate_models().unwrap().len(), 4);
        assert!(matches!(
            CnfFormula::tautology(25).enumerate_models(),
            Err(Error::EnumerationLimit { .. })
        ));
    }

    #[test]
    fn exact_values_for_sprinkler() {
        let wf = sprinkler();
        assert!((exact_wmc(&wf).unwrap() - 0.679).abs() < 1e-12);
        let (x, w) = exact_mpe(&wf).unwrap();
        assert_eq!(x.to_string(), "101");
        assert!((w - 0.2695).abs() < 1e-12);
        let (q, w) = exact_map(&wf, &[0, 2]).unwrap();
        assert_eq!(q.to_string(), "01");
        assert!((w - 0.315).abs() < 1e-12);
    }

    #[test]
    fn map_special_cases() {
        let wf = sprinkler();
        let (q, w) = exact_map(&wf, &[]).unwrap();
        assert!(q.values.is_empty());
        assert!((w - exact_wmc(&wf).unwrap()).abs() < 1e-15);
        let (q, w) = exact_map(&wf, &[0, 1, 2]).unwrap();
        assert_eq!((q.values, w), exact_mpe(&wf).unwrap());
        assert!(exact_map(&wf, &[0, 0]).is_err());
        assert!(exact_map(&wf, &[3]).is_err());
    }

    #[test]
    fn unsatisfiable_and_trivial() {
        let unsat = WeightedFormula::uniform(CnfFormula::contradiction(2));
        assert_eq!(exact_wmc(&unsat).unwrap(), 0.0);
        assert_eq!(exact_mpe(&unsat), Err(Error::Unsatisfiable));
        assert_eq!(exact_map(&unsat, &[0]), Err(Error::Unsatisfiable));
        let sol = solve_exact(&unsat, &[0]).unwrap();
        assert!(sol.mpe.is_none() && sol.map.is_none());

        let taut = WeightedFormula::new(
            CnfFormula::tautology(2),
            WeightTable::new(vec![0.2, 0.9], vec![0.8, 0.1]).unwrap(),
        )
        .unwrap();
        assert!((exact_wmc(&taut).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mpe_tie_prefers_smaller_world() {
        // X1 ∨ X2 with uniform weights: 01, 10, 11 all weigh 0.25.
        let wf = WeightedFormula::uniform(CnfFormula::from_dimacs(2, &[&[1, 2]]).unwrap());
        assert_eq!(exact_mpe(&wf).unwrap().0.to_string(), "01");
        let single = WeightedFormula::uniform(CnfFormula::from_dimacs(2, &[&[1], &[-2]]).unwrap());
        assert_eq!(exact_mpe(&single).unwrap(), (bits("10"), 0.25));
    }

    #[test]
    fn query_distribution_matches_eq2() {
        let d = exact_query_distribution(&sprinkler(), &[0, 2]).unwrap();
        // Index bit 0 is S, bit 1 is W.
        let expected = [0.0945 / 0.679, 0.0, 0.315 / 0.679, 0.2695 / 0.679];
        for (a, b) in d.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_clauses() {
        assert_eq!(CnfFormula::new(2, vec![vec![]]), Err(Error::EmptyClause));
        assert!(matches!(
            CnfFormula::from_dimacs(2, &[&[1, -3]]),
            Err(Error::VariableOutOfRange { var: 3, .. })
        ));
    }
}
