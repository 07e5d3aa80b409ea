use rand::Rng;

use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::statevector::{Sampler, StateVector, MAX_QUBITS};

use super::qft::{build_inverse_qft, MAX_QFT_QUBITS};
use super::{CircuitGadget, Gate, RegisterUnitary};

/// Outcome of phase estimation with `t` counting qubits.
#[derive(Debug, Clone)]
pub struct PhaseEstimation {
    pub t: usize,
    /// `distribution[y]` is the probability of reading `y` from the counting
    /// register (counting qubit `j` is bit `j` of `y`).
    pub distribution: Vec<f64>,
    pub histogram: Histogram,
    /// Applications of the unitary in the controlled ladder, `2^t − 1`.
    pub unitary_applications: u64,
}

fn check_sizes(register: usize, t: usize) -> Result<()> {
    if !(1..=MAX_QFT_QUBITS).contains(&t) {
        return Err(Error::QubitCount {
            requested: t,
            min: 1,
            max: MAX_QFT_QUBITS,
        });
    }
    if register + t > MAX_QUBITS {
        return Err(Error::QubitCount {
            requested: register + t,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Exact counting-register distribution.
///
/// The register sits on qubits `[0, k)` and counting qubit `j` on `k + j`,
/// controlling `U^{2^j}`. After the Hadamard layer and the controlled ladder
/// the joint state is `2^{-t/2} Σ_c |c⟩ U^c|ψ⟩`; since the register is the
/// low block, each `c` owns a contiguous slice and the slices are filled by
/// applying `U` once per step. The inverse QFT then acts on the high qubits.
pub fn phase_distribution<U: RegisterUnitary + ?Sized>(
    unitary: &U,
    prepare: &CircuitGadget,
    t: usize,
) -> Result<Vec<f64>> {
    let k = unitary.num_qubits();
    if prepare.num_qubits() != k {
        return Err(Error::RegisterMismatch {
            expected: k,
            got: prepare.num_qubits(),
        });
    }
    check_sizes(k, t)?;
    let mut psi = StateVector::zero_state(k)?;
    prepare.apply(&mut psi)?;

    let block = 1usize << k;
    let scale = 1.0 / ((1u64 << t) as f64).sqrt();
    let mut joint = Vec::with_capacity(block << t);
    for c in 0..1usize << t {
        if c > 0 {
            unitary.apply_to(&mut psi)?;
        }
        joint.extend(psi.amplitudes().iter().map(|a| a * scale));
    }
    let mut joint = StateVector::from_amplitudes(joint)?;
    build_inverse_qft(t)?.shifted(k, k + t).apply(&mut joint)?;
    let counting: Vec<usize> = (k..k + t).collect();
    Ok(joint.marginal_probabilities(&counting)?.probabilities().to_vec())
}

/// The same distribution with explicit controlled `U^{2^j}` blocks taken
/// from repeated squaring of the dense matrix.
pub fn phase_distribution_matrix<U: RegisterUnitary + ?Sized>(
    unitary: &U,
    prepare: &CircuitGadget,
    t: usize,
) -> Result<Vec<f64>> {
    let k = unitary.num_qubits();
    check_sizes(k, t)?;
    let mut state = StateVector::zero_state(k + t)?;
    prepare.apply(&mut state)?;
    for j in 0..t {
        state.apply_1q(&Gate::H.matrix(), k + j)?;
    }
    let mut power = unitary.matrix()?;
    for j in 0..t {
        if j > 0 {
            power = power.mul(&power);
        }
        state.apply_register_unitary(&power, 0, Some(k + j))?;
    }
    build_inverse_qft(t)?.shifted(k, k + t).apply(&mut state)?;
    let counting: Vec<usize> = (k..k + t).collect();
    Ok(state.marginal_probabilities(&counting)?.probabilities().to_vec())
}

/// Fully gate-level phase estimation: each controlled power is the gadget
/// with an extra control, applied `2^j` times. Ancillas of the gadget sit
/// between the searched register and the counting qubits.
pub fn phase_distribution_gate_level(
    gadget: &CircuitGadget,
    prepare: &CircuitGadget,
    t: usize,
) -> Result<Vec<f64>> {
    if prepare.num_qubits() != gadget.search_qubits() {
        return Err(Error::RegisterMismatch {
            expected: gadget.search_qubits(),
            got: prepare.num_qubits(),
        });
    }
    let w = gadget.num_qubits();
    check_sizes(w, t)?;
    let total = w + t;
    let mut state = StateVector::zero_state(total)?;
    prepare.apply(&mut state)?;
    for j in 0..t {
        state.apply_1q(&Gate::H.matrix(), w + j)?;
    }
    for j in 0..t {
        let cu = gadget.controlled(w + j, total);
        for _ in 0..1u64 << j {
            cu.apply(&mut state)?;
        }
    }
    build_inverse_qft(t)?.shifted(w, total).apply(&mut state)?;
    let counting: Vec<usize> = (w..total).collect();
    Ok(state.marginal_probabilities(&counting)?.probabilities().to_vec())
}

/// Phase estimation followed by `shots` reads of the counting register.
pub fn phase_estimation<U, R>(
    unitary: &U,
    prepare: &CircuitGadget,
    t: usize,
    shots: u64,
    rng: &mut R,
) -> Result<PhaseEstimation>
where
    U: RegisterUnitary + ?Sized,
    R: Rng + ?Sized,
{
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let distribution = phase_distribution(unitary, prepare, t)?;
    let histogram = Sampler::new(&distribution, t).histogram(rng, shots);
    Ok(PhaseEstimation {
        t,
        distribution,
        histogram,
        unitary_applications: (1u64 << t) - 1,
    })
}
