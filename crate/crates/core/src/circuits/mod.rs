//! Reusable gate sequences: the CNF marking oracle, its phase form, the
//! weight-encoding rotation layer, (weighted) Grover iterations, QFT, and
//! phase estimation.
//!
//! Gadgets can be dumped as a plain-text gate list, one gate per line:
//!
//! ```text
//! H <q>            X <q>            Z <q>
//! RY <theta> <q>   P <phi> <q>
//! MCX <c1> ... <ck> <t>      (likewise MCZ, MCH,
//! MCRY <theta> <c1> ... <t>   MCP <phi> <c1> ... <t>)
//! ```
//!
//! Angles are radians printed in shortest round-trip form.

mod grover;
mod oracle;
mod phase_estimation;
mod qft;

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::CnfFormula;
use crate::matrix::DenseMatrix;
use crate::statevector::{Gate1Q, StateVector};

pub use grover::{
    build_grover, build_hadamard_layer, build_rot, build_weighted_grover, GroverOperator,
};
pub use oracle::{build_marking_oracle, marking_to_phase, DEFAULT_ANCILLA_BUDGET};
pub use phase_estimation::{
    phase_distribution, phase_distribution_gate_level, phase_distribution_matrix, phase_estimation,
    PhaseEstimation,
};
pub use qft::{build_inverse_qft, build_qft, MAX_QFT_QUBITS};

/// The named single-qubit gates gadgets are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    X,
    Z,
    Ry(f64),
    Phase(f64),
}

impl Gate {
    pub fn matrix(self) -> Gate1Q {
        match self {
            Gate::H => Gate1Q::h(),
            Gate::X => Gate1Q::x(),
            Gate::Z => Gate1Q::z(),
            Gate::Ry(t) => Gate1Q::ry(t),
            Gate::Phase(p) => Gate1Q::phase(p),
        }
    }

    pub fn adjoint(self) -> Gate {
        match self {
            Gate::Ry(t) => Gate::Ry(-t),
            Gate::Phase(p) => Gate::Phase(-p),
            g => g,
        }
    }
}

/// One gate application, controlled on every qubit in `controls`.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub gate: Gate,
    pub controls: Vec<usize>,
    pub target: usize,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.controls.is_empty() { "" } else { "MC" };
        match self.gate {
            Gate::H => write!(f, "{prefix}H")?,
            Gate::X => write!(f, "{prefix}X")?,
            Gate::Z => write!(f, "{prefix}Z")?,
            Gate::Ry(t) => write!(f, "{prefix}RY {t:?}")?,
            Gate::Phase(p) => write!(f, "{prefix}P {p:?}")?,
        }
        for c in &self.controls {
            write!(f, " {c}")?;
        }
        write!(f, " {}", self.target)
    }
}

/// Which formula an oracle marks: `φ`, or `φ' = φ ∧ X_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    pub formula: CnfFormula,
    pub extra_qubit: bool,
}

impl OracleSpec {
    pub fn new(formula: CnfFormula, extra_qubit: bool) -> Self {
        Self {
            formula,
            extra_qubit,
        }
    }

    /// Qubits in the searched register.
    pub fn search_qubits(&self) -> usize {
        self.formula.num_vars() + usize::from(self.extra_qubit)
    }

    /// Whether basis index `x` of the searched register is marked.
    pub fn marks(&self, x: u64) -> bool {
        let n = self.formula.num_vars();
        (!self.extra_qubit || (x >> n) & 1 == 1) && self.formula.eval_index(x)
    }
}

/// An ordered gate list over `num_qubits` qubits. The first `search_qubits`
/// form the working register; any further qubits are ancillas that start in
/// `|0⟩` and, for the gadgets built here, end there too.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitGadget {
    num_qubits: usize,
    search_qubits: usize,
    ops: Vec<Op>,
    marking_target: Option<usize>,
}

impl CircuitGadget {
    pub fn new(num_qubits: usize, search_qubits: usize) -> Self {
        assert!(search_qubits <= num_qubits);
        Self {
            num_qubits,
            search_qubits,
            ops: Vec::new(),
            marking_target: None,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn search_qubits(&self) -> usize {
        self.search_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    /// The qubit a marking oracle flips.
    pub fn marking_target(&self) -> Option<usize> {
        self.marking_target
    }

    pub(crate) fn set_marking_target(&mut self, target: Option<usize>) {
        self.marking_target = target;
    }

    pub fn push(&mut self, gate: Gate, target: usize) {
        self.push_controlled(gate, Vec::new(), target);
    }

    pub fn push_controlled(&mut self, gate: Gate, controls: Vec<usize>, target: usize) {
        debug_assert!(target < self.num_qubits);
        debug_assert!(controls.iter().all(|&c| c < self.num_qubits && c != target));
        self.ops.push(Op {
            gate,
            controls,
            target,
        });
    }

    /// Append `other`, whose qubit `i` maps to qubit `i` here.
    pub fn append(&mut self, other: &CircuitGadget) {
        assert!(other.num_qubits <= self.num_qubits);
        self.ops.extend(other.ops.iter().cloned());
    }

    /// Reversed list of adjoint gates.
    pub fn adjoint(&self) -> CircuitGadget {
        CircuitGadget {
            num_qubits: self.num_qubits,
            search_qubits: self.search_qubits,
            ops: self
                .ops
                .iter()
                .rev()
                .map(|op| Op {
                    gate: op.gate.adjoint(),
                    controls: op.controls.clone(),
                    target: op.target,
                })
                .collect(),
            marking_target: self.marking_target,
        }
    }

    /// Relabel qubit `q` as `q + offset` in a register of `num_qubits`.
    pub fn shifted(&self, offset: usize, num_qubits: usize) -> CircuitGadget {
        assert!(self.num_qubits + offset <= num_qubits);
        CircuitGadget {
            num_qubits,
            search_qubits: self.search_qubits,
            ops: self
                .ops
                .iter()
                .map(|op| Op {
                    gate: op.gate,
                    controls: op.controls.iter().map(|c| c + offset).collect(),
                    target: op.target + offset,
                })
                .collect(),
            marking_target: self.marking_target.map(|t| t + offset),
        }
    }

    /// Every gate additionally controlled on `control`, which must lie
    /// outside the gadget's qubits. Global phases become relative phases
    /// on the control, which is what controlled use needs.
    pub fn controlled(&self, control: usize, num_qubits: usize) -> CircuitGadget {
        assert!(control >= self.num_qubits && control < num_qubits);
        CircuitGadget {
            num_qubits,
            search_qubits: self.search_qubits,
            ops: self
                .ops
                .iter()
                .map(|op| {
                    let mut controls = op.controls.clone();
                    controls.push(control);
                    Op {
                        gate: op.gate,
                        controls,
                        target: op.target,
                    }
                })
                .collect(),
            marking_target: self.marking_target,
        }
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() < self.num_qubits {
            return Err(Error::RegisterMismatch {
                expected: self.num_qubits,
                got: state.num_qubits(),
            });
        }
        for op in &self.ops {
            state.apply_controlled_1q(&op.gate.matrix(), &op.controls, op.target)?;
        }
        Ok(())
    }

    /// Full unitary over all `num_qubits` qubits.
    pub fn to_matrix(&self) -> Result<DenseMatrix> {
        let dim = 1u64 << self.num_qubits;
        let mut columns = Vec::with_capacity(dim as usize);
        for j in 0..dim {
            let mut s = StateVector::basis_state(self.num_qubits, j)?;
            self.apply(&mut s)?;
            columns.push(s.amplitudes().to_vec());
        }
        Ok(DenseMatrix::from_columns(&columns))
    }

    /// The action on the working register with every ancilla held at `|0⟩`.
    /// Fails if some basis input leaves amplitude on a dirty ancilla.
    pub fn search_matrix(&self, tol: f64) -> Result<DenseMatrix> {
        let dim = 1u64 << self.search_qubits;
        let mut columns = Vec::with_capacity(dim as usize);
        for j in 0..dim {
            let mut s = StateVector::basis_state(self.num_qubits, j)?;
            self.apply(&mut s)?;
            let amps = s.amplitudes();
            let leaked: f64 = amps[dim as usize..].iter().map(|a| a.norm_sqr()).sum();
            if leaked > tol {
                return Err(Error::InvalidArgument(format!(
                    "ancillas not restored for input {j} (leaked {leaked:e})"
                )));
            }
            columns.push(amps[..dim as usize].to_vec());
        }
        Ok(DenseMatrix::from_columns(&columns))
    }

    /// Plain-text gate list, one gate per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            out.push_str(&op.to_string());
            out.push('\n');
        }
        out
    }
}

/// An operator on a fixed-width register that phase estimation can
/// exponentiate.
pub trait RegisterUnitary {
    fn num_qubits(&self) -> usize;

    /// Apply once to a state of exactly `num_qubits` qubits.
    fn apply_to(&self, state: &mut StateVector) -> Result<()>;

    fn matrix(&self) -> Result<DenseMatrix> {
        let dim = 1u64 << self.num_qubits();
        let mut columns = Vec::with_capacity(dim as usize);
        for j in 0..dim {
            let mut s = StateVector::basis_state(self.num_qubits(), j)?;
            self.apply_to(&mut s)?;
            columns.push(s.amplitudes().to_vec());
        }
        Ok(DenseMatrix::from_columns(&columns))
    }
}

impl RegisterUnitary for DenseMatrix {
    fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        state.apply_register_unitary(self, 0, None)
    }

    fn matrix(&self) -> Result<DenseMatrix> {
        Ok(self.clone())
    }
}

impl RegisterUnitary for CircuitGadget {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        self.apply(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_format() {
        let mut g = CircuitGadget::new(3, 3);
        g.push(Gate::H, 0);
        g.push(Gate::Ry(0.5), 1);
        g.push_controlled(Gate::X, vec![0, 1], 2);
        g.push_controlled(Gate::Phase(-0.25), vec![2], 0);
        assert_eq!(g.dump(), "H 0\nRY 0.5 1\nMCX 0 1 2\nMCP -0.25 2 0\n");
    }

    #[test]
    fn adjoint_undoes_gadget() {
        let mut g = CircuitGadget::new(3, 3);
        g.push(Gate::H, 0);
        g.push(Gate::Ry(1.1), 2);
        g.push_controlled(Gate::Phase(0.7), vec![0], 1);
        g.push_controlled(Gate::X, vec![1, 2], 0);
        let mut both = g.clone();
        both.append(&g.adjoint());
        let m = both.to_matrix().unwrap();
        assert!(m.max_abs_diff(&DenseMatrix::identity(8)) < 1e-12);
    }
}
