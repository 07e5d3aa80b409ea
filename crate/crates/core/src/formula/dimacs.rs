//! Weighted DIMACS: plain `p cnf` files plus `w <var> <pos> [<neg>]` lines.
//!
//! ```text
//! c sprinkler
//! p cnf 3 3
//! -1 3 0
//! -2 3 0
//! -1 -2 0
//! w 1 0.55
//! w 2 0.3
//! w 3 0.7
//! ```
//!
//! A weight line without `<neg>` sets `w(¬X) = 1 − <pos>`. Variables with no
//! weight line get 0.5 / 0.5.

use std::fmt::Write as _;

use super::{CnfFormula, Lit, WeightedFormula};
use crate::error::{Error, Result};
use crate::weights::WeightTable;

pub fn parse_weighted_dimacs(text: &str) -> Result<WeightedFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_start = 0;
    let mut weights: Vec<Option<(f64, f64)>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let mut tokens = line.split_whitespace();
        let first = tokens.next().expect("non-empty line");
        match first {
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if tokens.next() != Some("cnf") {
                    return Err(err("expected `p cnf <vars> <clauses>`".into()));
                }
                let n = parse_count(tokens.next(), "variable count").map_err(err)?;
                let m = parse_count(tokens.next(), "clause count").map_err(err)?;
                if tokens.next().is_some() {
                    return Err(err("trailing tokens after header".into()));
                }
                if n == 0 {
                    return Err(err("formula must have at least one variable".into()));
                }
                header = Some((n, m));
                weights = vec![None; n];
            }
            _ if header.is_none() => {
                return Err(err("expected `p cnf` header before content".into()));
            }
            "w" => {
                if !current.is_empty() {
                    return Err(err("weight line inside an unterminated clause".into()));
                }
                let (n, _) = header.expect("checked above");
                let var_tok = tokens.next().ok_or_else(|| err("missing variable".into()))?;
                let var: i64 = var_tok
                    .parse()
                    .map_err(|_| err(format!("invalid variable `{var_tok}`")))?;
                if var < 1 || var as usize > n {
                    return Err(Error::VariableOutOfRange { var, num_vars: n });
                }
                let idx = var as usize - 1;
                let pos = parse_weight(tokens.next(), var).map_err(err)?;
                let neg = match tokens.next() {
                    Some(tok) => parse_weight(Some(tok), var).map_err(err)?,
                    None if pos <= 1.0 => 1.0 - pos,
                    None => {
                        return Err(err(format!(
                            "variable {var}: positive weight {pos} > 1 needs an explicit negative weight"
                        )))
                    }
                };
                if tokens.next().is_some() {
                    return Err(err("trailing tokens after weight line".into()));
                }
                if weights[idx].is_some() {
                    return Err(err(format!("duplicate weight line for variable {var}")));
                }
                weights[idx] = Some((pos, neg));
            }
            _ => {
                let (n, _) = header.expect("checked above");
                for tok in std::iter::once(first).chain(tokens) {
                    let lit: i64 = tok
                        .parse()
                        .map_err(|_| err(format!("invalid literal `{tok}`")))?;
                    if lit == 0 {
                        if current.is_empty() {
                            return Err(err("empty clause".into()));
                        }
                        clauses.push(std::mem::take(&mut current));
                    } else {
                        if lit.unsigned_abs() as usize > n {
                            return Err(Error::VariableOutOfRange {
                                var: lit.abs(),
                                num_vars: n,
                            });
                        }
                        if current.is_empty() {
                            current_start = lineno;
                        }
                        current.push(Lit::from_dimacs(lit));
                    }
                }
            }
        }
    }

    let (n, m) = header.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `p cnf` header".into(),
    })?;
    if !current.is_empty() {
        return Err(Error::Parse {
            line: current_start,
            message: "clause not terminated by 0".into(),
        });
    }
    if clauses.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("header declares {m} clauses, found {}", clauses.len()),
        });
    }
    let (pos, neg): (Vec<f64>, Vec<f64>) = weights
        .into_iter()
        .map(|w| w.unwrap_or((0.5, 0.5)))
        .unzip();
    let table = WeightTable::new(pos, neg)?;
    let formula = CnfFormula::new(n, clauses)?;
    WeightedFormula::new(formula, table)
}

/// Serialize with an explicit weight line for every variable. Parsing the
/// result gives back an identical [`WeightedFormula`].
pub fn to_weighted_dimacs(wf: &WeightedFormula) -> String {
    let f = &wf.formula;
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", f.num_vars(), f.clauses().len()).unwrap();
    for clause in f.clauses() {
        for lit in clause {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    for var in 0..f.num_vars() {
        writeln!(
            out,
            "w {} {:?} {:?}",
            var + 1,
            wf.weights.pos(var),
            wf.weights.neg(var)
        )
        .unwrap();
    }
    out
}

fn parse_count(tok: Option<&str>, what: &str) -> std::result::Result<usize, String> {
    let tok = tok.ok_or_else(|| format!("missing {what}"))?;
    tok.parse().map_err(|_| format!("invalid {what} `{tok}`"))
}

fn parse_weight(tok: Option<&str>, var: i64) -> std::result::Result<f64, String> {
    let tok = tok.ok_or_else(|| format!("variable {var}: missing weight"))?;
    let w: f64 = tok
        .parse()
        .map_err(|_| format!("variable {var}: invalid weight `{tok}`"))?;
    if !w.is_finite() {
        return Err(format!("variable {var}: weight must be finite"));
    }
    if w < 0.0 {
        return Err(format!("variable {var}: negative weight {w}"));
    }
    Ok(w)
}
