use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::{CircuitGadget, Gate};

pub const MAX_QFT_QUBITS: usize = 20;

/// `|j⟩ ↦ 2^{-t/2} Σ_k e^{2πi jk / 2^t} |k⟩` on `t` qubits.
pub fn build_qft(t: usize) -> Result<CircuitGadget> {
    if !(1..=MAX_QFT_QUBITS).contains(&t) {
        return Err(Error::QubitCount {
            requested: t,
            min: 1,
            max: MAX_QFT_QUBITS,
        });
    }
    let mut g = CircuitGadget::new(t, t);
    for top in (0..t).rev() {
        g.push(Gate::H, top);
        for q in (0..top).rev() {
            let angle = PI / (1u64 << (top - q)) as f64;
            g.push_controlled(Gate::Phase(angle), vec![q], top);
        }
    }
    for q in 0..t / 2 {
        swap(&mut g, q, t - 1 - q);
    }
    Ok(g)
}

pub fn build_inverse_qft(t: usize) -> Result<CircuitGadget> {
    Ok(build_qft(t)?.adjoint())
}

fn swap(g: &mut CircuitGadget, a: usize, b: usize) {
    g.push_controlled(Gate::X, vec![a], b);
    g.push_controlled(Gate::X, vec![b], a);
    g.push_controlled(Gate::X, vec![a], b);
}
