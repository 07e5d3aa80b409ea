use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, WeightedFormula};
use crate::statevector::{StateVector, MAX_QUBITS, PAR_THRESHOLD};
use crate::weights::NormalizedWeights;

use super::oracle::{build_marking_oracle, marking_to_phase};
use super::{CircuitGadget, Gate, OracleSpec, RegisterUnitary};

const REDUCE_CHUNK: usize = 1 << 12;

/// `Ry(θ_i)` on each variable qubit, plus `H` on the extra qubit when asked.
pub fn build_rot(weights: &NormalizedWeights, with_extra: bool) -> CircuitGadget {
    let n = weights.num_vars();
    let s = n + usize::from(with_extra);
    let mut g = CircuitGadget::new(s, s);
    for (q, &theta) in weights.angles().iter().enumerate() {
        g.push(Gate::Ry(theta), q);
    }
    if with_extra {
        g.push(Gate::H, n);
    }
    g
}

/// `H` on every qubit.
pub fn build_hadamard_layer(n: usize) -> CircuitGadget {
    let mut g = CircuitGadget::new(n, n);
    for q in 0..n {
        g.push(Gate::H, q);
    }
    g
}

/// `Prep · (2|0⟩⟨0| − I) · Prep† · O` as gates, sized to the oracle.
fn grover_from(phase_oracle: &CircuitGadget, prep: &CircuitGadget) -> CircuitGadget {
    let s = prep.num_qubits();
    let total = phase_oracle.num_qubits();
    let mut g = CircuitGadget::new(total, s);
    g.append(phase_oracle);
    g.append(&prep.adjoint());
    for q in 0..s {
        g.push(Gate::X, q);
    }
    g.push_controlled(Gate::Z, (0..s - 1).collect(), s - 1);
    for q in 0..s {
        g.push(Gate::X, q);
    }
    // ZXZX = −I, turning I − 2|0⟩⟨0| into 2|0⟩⟨0| − I.
    g.push(Gate::X, 0);
    g.push(Gate::Z, 0);
    g.push(Gate::X, 0);
    g.push(Gate::Z, 0);
    g.append(prep);
    g
}

/// Weighted Grover iteration over `φ' = φ ∧ X_{n+1}` with the weight
/// encoding `Rot` as state preparation.
pub fn build_weighted_grover(wf: &WeightedFormula, ancilla_budget: usize) -> Result<CircuitGadget> {
    let spec = OracleSpec::new(wf.formula.clone(), true);
    let phase = marking_to_phase(&build_marking_oracle(&spec, ancilla_budget)?)?;
    Ok(grover_from(&phase, &build_rot(&wf.normalized(), true)))
}

/// Standard Grover iteration over `φ` with a Hadamard layer.
pub fn build_grover(formula: &CnfFormula, ancilla_budget: usize) -> Result<CircuitGadget> {
    let spec = OracleSpec::new(formula.clone(), false);
    let phase = marking_to_phase(&build_marking_oracle(&spec, ancilla_budget)?)?;
    Ok(grover_from(&phase, &build_hadamard_layer(formula.num_vars())))
}

/// The same Grover operators acting directly on the searched register:
/// a phase flip on marked states, then `ψ ↦ 2⟨φ|ψ⟩φ − ψ` for the prepared
/// state `φ`. No ancillas are needed.
#[derive(Debug, Clone)]
pub struct GroverOperator {
    num_qubits: usize,
    prepared: Vec<Complex64>,
    marked: Vec<bool>,
}

impl GroverOperator {
    pub fn from_parts(spec: &OracleSpec, prep: &CircuitGadget) -> Result<Self> {
        let s = spec.search_qubits();
        if prep.num_qubits() != s {
            return Err(Error::RegisterMismatch {
                expected: s,
                got: prep.num_qubits(),
            });
        }
        if s > MAX_QUBITS {
            return Err(Error::QubitCount {
                requested: s,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        let mut state = StateVector::zero_state(s)?;
        prep.apply(&mut state)?;
        let marked = (0..1u64 << s).map(|x| spec.marks(x)).collect();
        Ok(Self {
            num_qubits: s,
            prepared: state.amplitudes().to_vec(),
            marked,
        })
    }

    /// `WG` for a weighted formula (extra qubit included).
    pub fn weighted(wf: &WeightedFormula) -> Result<Self> {
        let spec = OracleSpec::new(wf.formula.clone(), true);
        Self::from_parts(&spec, &build_rot(&wf.normalized(), true))
    }

    /// `G` for an unweighted formula.
    pub fn unweighted(formula: &CnfFormula) -> Result<Self> {
        let spec = OracleSpec::new(formula.clone(), false);
        Self::from_parts(&spec, &build_hadamard_layer(formula.num_vars()))
    }

    pub fn prepared_state(&self) -> StateVector {
        StateVector::from_amplitudes(self.prepared.clone()).expect("prepared state is valid")
    }

    pub fn is_marked(&self, x: u64) -> bool {
        self.marked[x as usize]
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::RegisterMismatch {
                expected: self.num_qubits,
                got: state.num_qubits(),
            });
        }
        Ok(())
    }

    pub fn apply_oracle(&self, state: &mut StateVector) -> Result<()> {
        self.check(state)?;
        let flip = |(a, &m): (&mut Complex64, &bool)| {
            if m {
                *a = -*a;
            }
        };
        let amps = state.amplitudes_mut();
        if amps.len() >= PAR_THRESHOLD {
            amps.par_iter_mut().zip(self.marked.par_iter()).for_each(flip);
        } else {
            amps.iter_mut().zip(self.marked.iter()).for_each(flip);
        }
        Ok(())
    }

    /// Reflection about the prepared state.
    pub fn apply_diffusion(&self, state: &mut StateVector) -> Result<()> {
        self.check(state)?;
        let amps = state.amplitudes_mut();
        // Fixed chunks summed in order keep the result independent of the
        // thread count.
        let partial = |(p, a): (&[Complex64], &[Complex64])| -> Complex64 {
            p.iter().zip(a).map(|(p, a)| p.conj() * a).sum()
        };
        let partials: Vec<Complex64> = if amps.len() >= PAR_THRESHOLD {
            self.prepared
                .par_chunks(REDUCE_CHUNK)
                .zip(amps.par_chunks(REDUCE_CHUNK))
                .map(partial)
                .collect()
        } else {
            self.prepared
                .chunks(REDUCE_CHUNK)
                .zip(amps.chunks(REDUCE_CHUNK))
                .map(partial)
                .collect()
        };
        let overlap: Complex64 = partials.iter().sum();
        let two = 2.0 * overlap;
        let body = |(a, p): (&mut Complex64, &Complex64)| *a = two * p - *a;
        if amps.len() >= PAR_THRESHOLD {
            amps.par_iter_mut().zip(self.prepared.par_iter()).for_each(body);
        } else {
            amps.iter_mut().zip(self.prepared.iter()).for_each(body);
        }
        Ok(())
    }
}

impl RegisterUnitary for GroverOperator {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        self.apply_oracle(state)?;
        self.apply_diffusion(state)
    }
}
