//! Dense state-vector simulation.
//!
//! Qubit `q` is bit `q` of the basis index (qubit 0 is least significant).
//! Measurement never collapses the state: every algorithm here measures once
//! at the end, so shots are independent draws from the final distribution.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::matrix::DenseMatrix;

pub const MAX_QUBITS: usize = 26;

// Below this many amplitudes the kernels stay on the calling thread.
pub(crate) const PAR_THRESHOLD: usize = 1 << 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix `[[m00, m01], [m10, m11]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate1Q(pub [[Complex64; 2]; 2]);

impl Gate1Q {
    pub fn h() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self([[s, s], [s, -s]])
    }

    pub fn x() -> Self {
        Self([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn z() -> Self {
        Self([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let (s, c) = (Complex64::new(s, 0.0), Complex64::new(c, 0.0));
        Self([[c, -s], [s, c]])
    }

    /// `diag(1, e^{iφ})`.
    pub fn phase(phi: f64) -> Self {
        Self([[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, phi)]])
    }

    pub fn adjoint(&self) -> Self {
        let m = self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, other: &Gate1Q) -> Self {
        let (a, b) = (self.0, other.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.adjoint().mul(self).0;
        (p[0][0] - ONE).norm() < tol
            && (p[1][1] - ONE).norm() < tol
            && p[0][1].norm() < tol
            && p[1][0].norm() < tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    pub fn basis_state(num_qubits: usize, index: u64) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let len = 1usize << num_qubits;
        if index as usize >= len {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; len];
        amps[index as usize] = ONE;
        Ok(Self { num_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(
                "amplitude count must be a power of two".into(),
            ));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    /// `Σ |a_j|²`, summed in index order.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() < tol
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn apply_1q(&mut self, gate: &Gate1Q, target: usize) -> Result<()> {
        self.apply_controlled_1q(gate, &[], target)
    }

    /// Apply `gate` to `target` on the amplitudes whose `controls` are all 1.
    pub fn apply_controlled_1q(
        &mut self,
        gate: &Gate1Q,
        controls: &[usize],
        target: usize,
    ) -> Result<()> {
        self.check_qubit(target)?;
        let mut cmask = 0usize;
        for &c in controls {
            self.check_qubit(c)?;
            if c == target || cmask & (1 << c) != 0 {
                return Err(Error::DuplicateQubit(c));
            }
            cmask |= 1 << c;
        }
        let stride = 1usize << target;
        let [[m00, m01], [m10, m11]] = gate.0;
        let kernel = |(chunk, pair): (usize, &mut [Complex64])| {
            let base = chunk * 2 * stride;
            let (lo, hi) = pair.split_at_mut(stride);
            for (i, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + i) & cmask == cmask {
                    let (x, y) = (*a, *b);
                    *a = m00 * x + m01 * y;
                    *b = m10 * x + m11 * y;
                }
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(2 * stride).enumerate().for_each(kernel);
        } else {
            self.amps.chunks_mut(2 * stride).enumerate().for_each(kernel);
        }
        Ok(())
    }

    /// Negate every amplitude whose basis index satisfies `predicate`.
    pub fn apply_phase_flip_where<F>(&mut self, predicate: F)
    where
        F: Fn(u64) -> bool + Sync,
    {
        let body = |(j, a): (usize, &mut Complex64)| {
            if predicate(j as u64) {
                *a = -*a;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(body);
        } else {
            self.amps.iter_mut().enumerate().for_each(body);
        }
    }

    /// Apply `unitary` to the contiguous register `offset..offset+w`, where
    /// `2^w` is the matrix dimension, optionally controlled by one qubit.
    pub fn apply_register_unitary(
        &mut self,
        unitary: &DenseMatrix,
        offset: usize,
        control: Option<usize>,
    ) -> Result<()> {
        let dim = unitary.dim();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidArgument("matrix dimension must be 2^w".into()));
        }
        let width = dim.trailing_zeros() as usize;
        if offset + width > self.num_qubits {
            return Err(Error::RegisterMismatch {
                expected: offset + width,
                got: self.num_qubits,
            });
        }
        if let Some(c) = control {
            self.check_qubit(c)?;
            if (offset..offset + width).contains(&c) {
                return Err(Error::DuplicateQubit(c));
            }
        }
        let reg_mask = (dim - 1) << offset;
        let mut input = vec![ZERO; dim];
        let mut output = vec![ZERO; dim];
        for base in 0..self.amps.len() {
            if base & reg_mask != 0 {
                continue;
            }
            if let Some(c) = control {
                if (base >> c) & 1 == 0 {
                    continue;
                }
            }
            for (r, v) in input.iter_mut().enumerate() {
                *v = self.amps[base | (r << offset)];
            }
            unitary.mul_vec(&input, &mut output);
            for (r, &v) in output.iter().enumerate() {
                self.amps[base | (r << offset)] = v;
            }
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    /// Outcome distribution of measuring only `query`.
    ///
    /// This is the diagonal of the reduced density operator obtained by
    /// tracing out every other qubit.
    pub fn marginal_probabilities(&self, query: &[usize]) -> Result<MarginalDistribution> {
        for (i, &q) in query.iter().enumerate() {
            self.check_qubit(q)?;
            if query[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        let mut probs = vec![0.0; 1 << query.len()];
        for (j, a) in self.amps.iter().enumerate() {
            let outcome = extract_bits(j as u64, query);
            probs[outcome as usize] += a.norm_sqr();
        }
        Ok(MarginalDistribution {
            query: query.to_vec(),
            probs,
        })
    }

    /// `shots` independent measurements of `query`. The state is untouched.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        query: &[usize],
        rng: &mut R,
        shots: u64,
    ) -> Result<Histogram> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        let dist = self.marginal_probabilities(query)?;
        Ok(dist.sampler().histogram(rng, shots))
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

fn check_qubit_count(k: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&k) {
        return Err(Error::QubitCount {
            requested: k,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Gather the bits of `index` at `positions`; bit `i` of the result is the
/// bit at `positions[i]`.
#[inline]
pub fn extract_bits(index: u64, positions: &[usize]) -> u64 {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | (((index >> p) & 1) << i))
}

/// Probabilities over the `2^|Q|` outcomes of measuring `query`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalDistribution {
    query: Vec<usize>,
    probs: Vec<f64>,
}

impl MarginalDistribution {
    pub fn new(query: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1 << query.len() || probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidArgument("malformed distribution".into()));
        }
        Ok(Self { query, probs })
    }

    pub fn query(&self) -> &[usize] {
        &self.query
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, outcome: u64) -> f64 {
        self.probs[outcome as usize]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(&self.probs, self.query.len())
    }
}

/// Inverse-CDF sampler over a fixed probability vector.
#[derive(Debug, Clone)]
pub struct Sampler {
    cdf: Vec<f64>,
    width: usize,
}

impl Sampler {
    pub fn new(probs: &[f64], width: usize) -> Self {
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect();
        Self { cdf, width }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cdf.last().expect("non-empty distribution");
        let u = rng.random::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        if idx < self.cdf.len() {
            return idx as u64;
        }
        // Rounding put u at the very top; take the last outcome with mass.
        let mut last = self.cdf.len() - 1;
        while last > 0 && self.cdf[last] == self.cdf[last - 1] {
            last -= 1;
        }
        last as u64
    }

    pub fn histogram<R: Rng + ?Sized>(&self, rng: &mut R, shots: u64) -> Histogram {
        let mut h = Histogram::new(self.width);
        for _ in 0..shots {
            h.record(self.draw(rng));
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn zero_state_bounds() {
        assert_eq!(StateVector::zero_state(1).unwrap().amplitudes(), &[ONE, ZERO]);
        assert_eq!(StateVector::zero_state(2).unwrap().amplitudes()[0], ONE);
        assert!(StateVector::zero_state(27).is_err());
        assert!(StateVector::zero_state(0).is_err());
    }

    #[test]
    fn single_qubit_gates() {
        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(&Gate1Q::h(), 0).unwrap();
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitude(0), r) && close(s.amplitude(1), r));

        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(&Gate1Q::x(), 0).unwrap();
        assert_eq!(s.amplitudes(), &[ZERO, ONE]);

        let w: f64 = 0.3;
        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(&Gate1Q::ry(crate::weights::rotation_angle(w)), 0).unwrap();
        assert!((s.amplitude(0).re - (1.0 - w).sqrt()).abs() < 1e-12);
        assert!((s.amplitude(1).re - w.sqrt()).abs() < 1e-12);

        assert!(s.apply_1q(&Gate1Q::x(), 1).is_err());
    }

    #[test]
    fn controlled_gates() {
        let mut s = StateVector::basis_state(2, 0b01).unwrap();
        s.apply_controlled_1q(&Gate1Q::x(), &[0], 1).unwrap();
        assert_eq!(s.amplitude(0b11), ONE);

        let mut s = StateVector::basis_state(3, 0b011).unwrap();
        s.apply_controlled_1q(&Gate1Q::x(), &[0, 1], 2).unwrap();
        assert_eq!(s.amplitude(0b111), ONE);

        let mut s = StateVector::basis_state(3, 0b001).unwrap();
        s.apply_controlled_1q(&Gate1Q::x(), &[0, 1], 2).unwrap();
        assert_eq!(s.amplitude(0b001), ONE);

        assert_eq!(
            s.apply_controlled_1q(&Gate1Q::x(), &[1], 1),
            Err(Error::DuplicateQubit(1))
        );
        assert_eq!(
            s.apply_controlled_1q(&Gate1Q::x(), &[0, 0], 1),
            Err(Error::DuplicateQubit(0))
        );
    }

    #[test]
    fn phase_flip() {
        let mut s = StateVector::zero_state(2).unwrap();
        s.apply_1q(&Gate1Q::h(), 0).unwrap();
        s.apply_1q(&Gate1Q::h(), 1).unwrap();
        let before = s.clone();
        s.apply_phase_flip_where(|_| false);
        assert_eq!(s, before);
        s.apply_phase_flip_where(|j| j == 3);
        assert!(close(s.amplitude(3), -before.amplitude(3)));
        assert!(close(s.amplitude(2), before.amplitude(2)));
    }

    #[test]
    fn bell_marginal() {
        let mut s = StateVector::zero_state(2).unwrap();
        s.apply_1q(&Gate1Q::h(), 0).unwrap();
        s.apply_controlled_1q(&Gate1Q::x(), &[0], 1).unwrap();
        let m = s.marginal_probabilities(&[0]).unwrap();
        assert!((m.probability(0) - 0.5).abs() < 1e-12);
        assert!((m.probability(1) - 0.5).abs() < 1e-12);
        assert!(s.marginal_probabilities(&[2]).is_err());
        let full = s.marginal_probabilities(&[0, 1]).unwrap();
        assert_eq!(full.probabilities(), s.probabilities().as_slice());
    }

    #[test]
    fn product_state_marginal() {
        let mut s = StateVector::zero_state(3).unwrap();
        s.apply_1q(&Gate1Q::ry(0.8), 0).unwrap();
        s.apply_1q(&Gate1Q::h(), 1).unwrap();
        s.apply_1q(&Gate1Q::ry(2.1), 2).unwrap();
        let m = s.marginal_probabilities(&[0]).unwrap();
        let (sn, cs) = 0.4f64.sin_cos();
        assert!((m.probability(0) - cs * cs).abs() < 1e-12);
        assert!((m.probability(1) - sn * sn).abs() < 1e-12);
    }

    #[test]
    fn register_unitary_matches_gate() {
        let mut a = StateVector::zero_state(3).unwrap();
        a.apply_1q(&Gate1Q::h(), 2).unwrap();
        let mut b = a.clone();
        let g = Gate1Q::ry(0.7);
        let m = DenseMatrix::from_columns(&[
            vec![g.0[0][0], g.0[1][0]],
            vec![g.0[0][1], g.0[1][1]],
        ]);
        a.apply_controlled_1q(&g, &[2], 1).unwrap();
        b.apply_register_unitary(&m, 1, Some(2)).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!(close(*x, *y));
        }
    }

    #[test]
    fn sampling() {
        let s = StateVector::basis_state(3, 0b101).unwrap();
        let h = s.sample(&[0, 1, 2], &mut rng::seeded(1), 50).unwrap();
        assert_eq!(h.count(0b101), 50);
        assert_eq!(h.label(0b101), "101");

        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(&Gate1Q::h(), 0).unwrap();
        let h = s.sample(&[0], &mut rng::seeded(2), 100_000).unwrap();
        assert!((h.frequency(0) - 0.5).abs() < 0.01);
        // No collapse.
        assert!(close(s.amplitude(1), Complex64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(s.sample(&[0], &mut rng::seeded(2), 0).is_err());
    }

    #[test]
    fn sampler_skips_zero_mass() {
        let sampler = Sampler::new(&[0.0, 0.5, 0.0, 0.5, 0.0], 3);
        let mut r = rng::seeded(3);
        for _ in 0..1000 {
            let o = sampler.draw(&mut r);
            assert!(o == 1 || o == 3);
        }
    }

    #[derive(Debug, Clone)]
    enum Op {
        Ry(usize, f64),
        H(usize),
        Ph(usize, f64),
        Cx(Vec<usize>, usize),
        Flip(u64),
    }

    fn op_strategy(k: usize) -> impl Strategy<Value = Op> {
        prop_oneof![
            (0..k, -6.3f64..6.3).prop_map(|(q, t)| Op::Ry(q, t)),
            (0..k).prop_map(Op::H),
            (0..k, -6.3f64..6.3).prop_map(|(q, t)| Op::Ph(q, t)),
            (proptest::sample::subsequence((0..k).collect::<Vec<_>>(), 0..k), 0..k)
                .prop_filter_map("target in controls", |(c, t)| {
                    (!c.contains(&t)).then_some(Op::Cx(c, t))
                }),
            (0u64..1 << k).prop_map(Op::Flip),
        ]
    }

    fn apply(s: &mut StateVector, op: &Op, adjoint: bool) {
        let adj = |g: Gate1Q| if adjoint { g.adjoint() } else { g };
        match op {
            Op::Ry(q, t) => s.apply_1q(&adj(Gate1Q::ry(*t)), *q).unwrap(),
            Op::H(q) => s.apply_1q(&Gate1Q::h(), *q).unwrap(),
            Op::Ph(q, t) => s.apply_1q(&adj(Gate1Q::phase(*t)), *q).unwrap(),
            Op::Cx(c, t) => s.apply_controlled_1q(&Gate1Q::x(), c, *t).unwrap(),
            Op::Flip(m) => s.apply_phase_flip_where(|j| j & m == *m),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn norm_preserved_and_reversible(ops in proptest::collection::vec(op_strategy(6), 1..200)) {
            let mut s = StateVector::zero_state(6).unwrap();
            s.apply_1q(&Gate1Q::h(), 0).unwrap();
            let start = s.clone();
            for op in &ops {
                apply(&mut s, op, false);
            }
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
            let m = s.marginal_probabilities(&[0, 1, 2, 3, 4, 5]).unwrap();
            prop_assert!((m.total() - 1.0).abs() < 1e-9);
            for op in ops.iter().rev() {
                apply(&mut s, op, true);
            }
            for (a, b) in s.amplitudes().iter().zip(start.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-9);
            }
        }

        #[test]
        fn marginals_are_consistent(ops in proptest::collection::vec(op_strategy(5), 1..60)) {
            let mut s = StateVector::zero_state(5).unwrap();
            for op in &ops {
                apply(&mut s, op, false);
            }
            let joint = s.marginal_probabilities(&[3, 0, 4]).unwrap();
            let part = s.marginal_probabilities(&[0]).unwrap();
            // Sum the joint over qubits 3 and 4 (outcome bits 0 and 2).
            let mut summed = [0.0; 2];
            for (o, &p) in joint.probabilities().iter().enumerate() {
                summed[(o >> 1) & 1] += p;
            }
            prop_assert!((summed[0] - part.probability(0)).abs() < 1e-12);
            prop_assert!((summed[1] - part.probability(1)).abs() < 1e-12);
        }

        #[test]
        fn uncontrolled_equals_plain(theta in -6.3f64..6.3, target in 0usize..4) {
            let mut a = StateVector::zero_state(4).unwrap();
            for q in 0..4 { a.apply_1q(&Gate1Q::h(), q).unwrap(); }
            a.apply_1q(&Gate1Q::phase(0.4), 2).unwrap();
            let mut b = a.clone();
            a.apply_1q(&Gate1Q::ry(theta), target).unwrap();
            b.apply_controlled_1q(&Gate1Q::ry(theta), &[], target).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
