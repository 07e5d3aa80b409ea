//! Literal weights, their normalization to probabilities, and the derived
//! per-world quantities used by the rotation layer.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::Assignment;

/// Raw literal weights `w(X_i)` and `w(¬X_i)`, indexed by 0-based variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightTable {
    pos: Vec<f64>,
    neg: Vec<f64>,
}

impl WeightTable {
    pub fn new(pos: Vec<f64>, neg: Vec<f64>) -> Result<Self> {
        if pos.len() != neg.len() {
            return Err(Error::LengthMismatch {
                expected: pos.len(),
                got: neg.len(),
            });
        }
        for (var, (&wp, &wn)) in pos.iter().zip(&neg).enumerate() {
            if !(wp.is_finite() && wn.is_finite()) {
                return Err(Error::InvalidWeight {
                    var,
                    message: "weights must be finite".into(),
                });
            }
            if wp < 0.0 || wn < 0.0 {
                return Err(Error::InvalidWeight {
                    var,
                    message: "weights must be non-negative".into(),
                });
            }
            if wp + wn <= 0.0 {
                return Err(Error::ZeroWeightSum { var });
            }
        }
        Ok(Self { pos, neg })
    }

    /// Every literal weighted 0.5.
    pub fn uniform(num_vars: usize) -> Self {
        Self {
            pos: vec![0.5; num_vars],
            neg: vec![0.5; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.pos.len()
    }

    pub fn pos(&self, var: usize) -> f64 {
        self.pos[var]
    }

    pub fn neg(&self, var: usize) -> f64 {
        self.neg[var]
    }

    /// Product of raw literal weights over the world `x`.
    pub fn raw_world_weight(&self, x: &Assignment) -> Result<f64> {
        check_len(self.num_vars(), x)?;
        Ok(x
            .bits()
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { self.pos[i] } else { self.neg[i] })
            .product())
    }

    pub fn normalize(&self) -> Result<NormalizedWeights> {
        NormalizedWeights::from_table(self)
    }
}

/// Weights rescaled so that `w(X_i) + w(¬X_i) = 1`, together with the
/// discarded scale `∏ V_i` and the `R_y` angle of every variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedWeights {
    p: Vec<f64>,
    v_product: f64,
    theta: Vec<f64>,
}

impl NormalizedWeights {
    pub fn from_table(table: &WeightTable) -> Result<Self> {
        let n = table.num_vars();
        let mut p = Vec::with_capacity(n);
        let mut v_product = 1.0;
        for var in 0..n {
            let v = table.pos[var] + table.neg[var];
            if v <= 0.0 {
                return Err(Error::ZeroWeightSum { var });
            }
            p.push((table.pos[var] / v).clamp(0.0, 1.0));
            v_product *= v;
        }
        let theta = p.iter().map(|&pi| rotation_angle(pi)).collect();
        Ok(Self {
            p,
            v_product,
            theta,
        })
    }

    /// Build directly from probabilities of the positive literal.
    pub fn from_probabilities(p: Vec<f64>) -> Result<Self> {
        for (var, &pi) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&pi) {
                return Err(Error::InvalidWeight {
                    var,
                    message: format!("probability {pi} outside [0, 1]"),
                });
            }
        }
        let theta = p.iter().map(|&pi| rotation_angle(pi)).collect();
        Ok(Self {
            p,
            v_product: 1.0,
            theta,
        })
    }

    pub fn uniform(num_vars: usize) -> Self {
        Self::from_table(&WeightTable::uniform(num_vars)).expect("uniform weights are valid")
    }

    pub fn num_vars(&self) -> usize {
        self.p.len()
    }

    /// `ŵ(X_i)` for every variable.
    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn v_product(&self) -> f64 {
        self.v_product
    }

    /// `R_y` angles, `θ_i = 2·arcsin(√p_i)`.
    pub fn angles(&self) -> &[f64] {
        &self.theta
    }

    /// Normalized world weight `Ŵ_x`.
    pub fn world_weight(&self, x: &Assignment) -> Result<f64> {
        check_len(self.num_vars(), x)?;
        Ok(x
            .bits()
            .iter()
            .zip(&self.p)
            .map(|(&b, &p)| if b { p } else { 1.0 - p })
            .product())
    }

    /// `Ŵ_x` for a world given as a basis index (bit `i` is `x_i`).
    pub fn world_weight_index(&self, index: u64) -> f64 {
        self.p
            .iter()
            .enumerate()
            .map(|(i, &p)| if (index >> i) & 1 == 1 { p } else { 1.0 - p })
            .product()
    }

    /// Minimum world weight over `φ' = φ ∧ X_{n+1}`, extra qubit's ½ included.
    pub fn w_min(&self) -> f64 {
        0.5 * self.p.iter().map(|&p| p.min(1.0 - p)).product::<f64>()
    }
}

/// `2·arccos(√(1−p))`, equal to `2·arcsin(√p)` on `[0, 1]`.
pub fn rotation_angle(p: f64) -> f64 {
    if p >= 1.0 {
        return PI;
    }
    2.0 * p.max(0.0).sqrt().asin()
}

fn check_len(expected: usize, x: &Assignment) -> Result<()> {
    if x.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: x.len(),
        });
    }
    Ok(())
}
