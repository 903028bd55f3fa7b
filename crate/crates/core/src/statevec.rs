//! Dense state-vector core.
//!
//! Basis indices are big-endian: qubit 0 is the most significant bit, i.e.
//! the top wire of a circuit diagram.

use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{Axis, Matrix, PauliString, UNITARY_TOL};
use crate::error::{invalid, Error, Result};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 16;
/// Norm tolerance maintained by every public operation.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance for state and matrix comparisons.
pub const STATE_TOL: f64 = 1e-10;
/// Branches below this probability are never sampled.
pub const ZERO_BRANCH: f64 = 1e-14;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A Hermitian involution: a signed tensor product of single-qubit axes on
/// distinct qubits. Covers every Hermitian Pauli word plus the rotated axes
/// `G` and `T⁻¹XT`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Observable {
    pub sign: i8,
    pub factors: Vec<(usize, Axis)>,
}

impl Observable {
    pub fn new(sign: i8, factors: Vec<(usize, Axis)>) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return invalid("observable sign must be ±1");
        }
        if factors.is_empty() {
            return invalid("observable needs at least one factor");
        }
        let mut qs: Vec<usize> = factors.iter().map(|f| f.0).collect();
        qs.sort_unstable();
        qs.dedup();
        if qs.len() != factors.len() {
            return invalid("observable factors must act on distinct qubits");
        }
        Ok(Observable { sign, factors })
    }

    pub fn single(q: usize, axis: Axis) -> Self {
        Observable { sign: 1, factors: vec![(q, axis)] }
    }

    pub fn pair(a: (usize, Axis), b: (usize, Axis)) -> Result<Self> {
        Observable::new(1, vec![a, b])
    }

    /// Hermitian Pauli word as an observable. Imaginary phases and the bare
    /// identity are rejected.
    pub fn from_pauli(p: &PauliString) -> Result<Self> {
        if !p.is_hermitian() {
            return invalid(format!("observable {p} is not Hermitian"));
        }
        let factors: Vec<(usize, Axis)> = p
            .letters
            .iter()
            .enumerate()
            .filter(|&(_, l)| *l != crate::algebra::Letter::I).map(|(q, l)| (q, Axis::from(*l)))
            .collect();
        let sign = if p.phase.power() == 0 { 1 } else { -1 };
        Observable::new(sign, factors)
    }

    pub fn max_qubit(&self) -> usize {
        self.factors.iter().map(|f| f.0).max().unwrap_or(0)
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.0).collect()
    }

    /// `O|ψ⟩` on raw amplitudes of an `n`-qubit register.
    fn apply(&self, n: usize, amps: &[C64]) -> Vec<C64> {
        let mut out = amps.to_vec();
        for &(q, axis) in &self.factors {
            apply_single(&mut out, n, q, &axis.matrix());
        }
        if self.sign < 0 {
            out.iter_mut().for_each(|a| *a = -*a);
        }
        out
    }

    /// Dense matrix on `n` qubits.
    pub fn matrix(&self, n: usize) -> Matrix {
        let mut m = Matrix::identity(1);
        for q in 0..n {
            let f = self
                .factors
                .iter()
                .find(|f| f.0 == q)
                .map(|f| f.1.matrix())
                .unwrap_or_else(|| Matrix::identity(2));
            m = m.kron(&f);
        }
        m.scale(C64::new(f64::from(self.sign), 0.0))
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        for (i, (q, a)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("⊗")?;
            }
            write!(f, "{a}[{q}]")?;
        }
        Ok(())
    }
}

/// Result of one projective measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    /// +1 or −1
    pub eigenvalue: i8,
    pub probability: f64,
    pub observable: Observable,
}

impl MeasurementOutcome {
    /// Classical bit `(1 − o)/2`.
    pub fn bit(&self) -> u8 {
        outcome_bit(self.eigenvalue)
    }
}

/// `b(o) = (1 − o)/2`: 0 for +1, 1 for −1.
pub fn outcome_bit(o: i8) -> u8 {
    u8::from(o < 0)
}

/// Normalised amplitudes over `n` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return invalid(format!("qubit count {n} outside 1..={MAX_QUBITS}"));
    }
    Ok(())
}

#[inline]
fn bit_of(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn apply_single(amps: &mut [C64], n: usize, q: usize, m: &Matrix) {
    let mask = bit_of(n, q);
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    for i in 0..amps.len() {
        if i & mask == 0 {
            let (x, y) = (amps[i], amps[i | mask]);
            amps[i] = a * x + b * y;
            amps[i | mask] = c * x + d * y;
        }
    }
}

impl StateVector {
    /// `|bits⟩`, with `bits` a string of `0`/`1` characters, qubit 0 first.
    pub fn new_basis_state(n_qubits: usize, bits: &str) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if bits.chars().count() != n_qubits {
            return invalid(format!("bitstring {bits:?} does not have length {n_qubits}"));
        }
        let mut index = 0usize;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                other => return invalid(format!("invalid bit {other:?}")),
            }
        }
        Ok(Self::basis_index(n_qubits, index))
    }

    /// `|0…0⟩`
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        Ok(Self::basis_index(n_qubits, 0))
    }

    fn basis_index(n: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector { n_qubits: n, amplitudes }
    }

    /// Build from raw amplitudes, normalising them. Zero vectors are rejected.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return invalid(format!("amplitude count {len} is not 2^n with n ≥ 1"));
        }
        let n = len.trailing_zeros() as usize;
        check_qubit_count(n)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return invalid("amplitudes have zero or non-finite norm");
        }
        Ok(StateVector { n_qubits: n, amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    /// Haar-random pure state (normalised complex Gaussian vector).
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let amps = (0..1usize << n_qubits)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_amplitudes(amps)
    }

    /// Product state with one single-qubit state per qubit.
    pub fn product(qubits: &[[C64; 2]]) -> Result<Self> {
        check_qubit_count(qubits.len())?;
        let mut amps = vec![C64::new(1.0, 0.0)];
        for q in qubits {
            amps = amps.iter().flat_map(|&a| [a * q[0], a * q[1]]).collect();
        }
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return invalid(format!(
                "dimension mismatch: {} vs {} qubits",
                self.n_qubits, other.n_qubits
            ));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn renormalize(&mut self) {
        let n = self.norm();
        self.amplitudes.iter_mut().for_each(|a| *a /= n);
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.n_qubits {
                return invalid(format!("qubit {t} out of range for {} qubits", self.n_qubits));
            }
            if targets[..i].contains(&t) {
                return invalid(format!("duplicate target qubit {t}"));
            }
        }
        Ok(())
    }

    /// Apply `gate` to `targets` (first target is the gate's most significant
    /// qubit) and return the new state.
    pub fn apply_gate(&self, gate: &Matrix, targets: &[usize]) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_gate_mut(gate, targets)?;
        Ok(out)
    }

    pub fn apply_gate_mut(&mut self, gate: &Matrix, targets: &[usize]) -> Result<()> {
        let k = targets.len();
        if k == 0 || gate.dim() != 1 << k {
            return invalid(format!(
                "gate of dimension {} does not match {} targets",
                gate.dim(),
                k
            ));
        }
        self.check_targets(targets)?;
        if !gate.is_unitary(UNITARY_TOL) {
            return invalid("gate is not unitary");
        }
        let n = self.n_qubits;
        if k == 1 {
            apply_single(&mut self.amplitudes, n, targets[0], gate);
            return Ok(());
        }
        let masks: Vec<usize> = targets.iter().map(|&t| bit_of(n, t)).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|sub| {
                (0..k)
                    .filter(|j| sub & (1 << (k - 1 - j)) != 0)
                    .map(|j| masks[j])
                    .sum()
            })
            .collect();
        let d = 1 << k;
        let mut buf = vec![ZERO; d];
        for base in 0..self.amplitudes.len() {
            if base & all != 0 {
                continue;
            }
            for (s, &off) in offsets.iter().enumerate() {
                buf[s] = self.amplitudes[base | off];
            }
            for (r, &off) in offsets.iter().enumerate() {
                self.amplitudes[base | off] = (0..d).map(|c| gate.get(r, c) * buf[c]).sum();
            }
        }
        Ok(())
    }

    /// Apply a Pauli word (with its phase).
    pub fn apply_pauli(&self, p: &PauliString) -> Result<StateVector> {
        if p.len() != self.n_qubits {
            return invalid(format!("Pauli length {} vs {} qubits", p.len(), self.n_qubits));
        }
        let mut out = self.clone();
        for (q, &l) in p.letters.iter().enumerate() {
            if l != crate::algebra::Letter::I {
                apply_single(&mut out.amplitudes, self.n_qubits, q, &l.matrix());
            }
        }
        let ph = p.phase.to_complex();
        out.amplitudes.iter_mut().for_each(|a| *a *= ph);
        Ok(out)
    }

    fn check_observable(&self, obs: &Observable) -> Result<()> {
        if obs.max_qubit() >= self.n_qubits {
            return invalid(format!(
                "observable {obs} acts outside {} qubits",
                self.n_qubits
            ));
        }
        Ok(())
    }

    /// `P_o|ψ⟩` (unnormalised) with `P_o = (I + o·O)/2`.
    fn project(&self, obs: &Observable, outcome: i8) -> Vec<C64> {
        let o_psi = obs.apply(self.n_qubits, &self.amplitudes);
        let s = f64::from(outcome);
        self.amplitudes
            .iter()
            .zip(o_psi)
            .map(|(a, b)| (a + b * s) * 0.5)
            .collect()
    }

    /// Born probability of `outcome` when measuring `obs`.
    pub fn outcome_probability(&self, obs: &Observable, outcome: i8) -> Result<f64> {
        self.check_observable(obs)?;
        if outcome != 1 && outcome != -1 {
            return invalid("outcome must be ±1");
        }
        let p: f64 = self.project(obs, outcome).iter().map(|a| a.norm_sqr()).sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Project onto the `outcome` eigenspace of `obs` and renormalise.
    pub fn measure_forced(&self, obs: &Observable, outcome: i8) -> Result<(MeasurementOutcome, StateVector)> {
        let p = self.outcome_probability(obs, outcome)?;
        if p < ZERO_BRANCH {
            return invalid(format!("forced outcome {outcome:+} of {obs} has zero probability"));
        }
        let mut post = StateVector { n_qubits: self.n_qubits, amplitudes: self.project(obs, outcome) };
        post.renormalize();
        Ok((
            MeasurementOutcome { eigenvalue: outcome, probability: p, observable: obs.clone() },
            post,
        ))
    }

    /// Sample a Born-rule outcome of `obs` with `rng` and collapse.
    pub fn measure<R: Rng + ?Sized>(&self, obs: &Observable, rng: &mut R) -> Result<(MeasurementOutcome, StateVector)> {
        let p_plus = self.outcome_probability(obs, 1)?;
        let p_minus = (1.0 - p_plus).max(0.0);
        let u: f64 = rng.gen();
        let outcome = if p_plus < ZERO_BRANCH {
            -1
        } else if p_minus < ZERO_BRANCH || u < p_plus {
            1
        } else {
            -1
        };
        self.measure_forced(obs, outcome).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Internal(format!("sampled impossible branch: {m}")),
            other => other,
        })
    }

    /// Either a forced outcome or a sampled one.
    pub fn measure_with<R: Rng + ?Sized>(
        &self,
        obs: &Observable,
        forced: Option<i8>,
        rng: &mut R,
    ) -> Result<(MeasurementOutcome, StateVector)> {
        match forced {
            Some(o) => self.measure_forced(obs, o),
            None => self.measure(obs, rng),
        }
    }

    /// Append a qubit in `state` as the new last wire.
    pub fn append_qubit(&self, state: [C64; 2]) -> Result<StateVector> {
        check_qubit_count(self.n_qubits + 1)?;
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|&a| [a * state[0], a * state[1]])
            .collect();
        StateVector::from_amplitudes(amps)
    }

    /// Remove qubit `q`, which must be in the product state `state`.
    ///
    /// Fails unless the remaining register keeps unit norm within
    /// [`NORM_TOL`], i.e. unless `q` really is disentangled in `state`.
    pub fn remove_qubit(&self, q: usize, state: [C64; 2]) -> Result<StateVector> {
        self.check_targets(&[q])?;
        if self.n_qubits == 1 {
            return invalid("cannot remove the only qubit");
        }
        let n = self.n_qubits;
        let mask = bit_of(n, q);
        let low = mask - 1;
        let amps: Vec<C64> = (0..1usize << (n - 1))
            .map(|r| {
                let i0 = ((r & !low) << 1) | (r & low);
                state[0].conj() * self.amplitudes[i0] + state[1].conj() * self.amplitudes[i0 | mask]
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Internal(format!(
                "qubit {q} is not in the claimed product state (overlap norm {norm})"
            )));
        }
        StateVector::from_amplitudes(amps)
    }

    /// Move qubit `from` to position `to`, shifting the qubits in between.
    pub fn move_qubit(&self, from: usize, to: usize) -> Result<StateVector> {
        if from >= self.n_qubits || to >= self.n_qubits {
            return invalid(format!("qubit move {from}→{to} out of range"));
        }
        let mut order: Vec<usize> = (0..self.n_qubits).collect();
        let q = order.remove(from);
        order.insert(to, q);
        self.permute(&order)
    }

    /// New state whose qubit `i` is old qubit `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector> {
        let n = self.n_qubits;
        let mut seen = order.to_vec();
        seen.sort_unstable();
        if seen != (0..n).collect::<Vec<_>>() {
            return invalid("permutation must list each qubit once");
        }
        let mut amps = vec![ZERO; 1 << n];
        for (old, &a) in self.amplitudes.iter().enumerate() {
            let mut new = 0usize;
            for (i, &src) in order.iter().enumerate() {
                if old & bit_of(n, src) != 0 {
                    new |= bit_of(n, i);
                }
            }
            amps[new] = a;
        }
        Ok(StateVector { n_qubits: n, amplitudes: amps })
    }
}

/// Measure a Hermitian Pauli word.
pub fn measure_pauli<R: Rng + ?Sized>(
    state: &StateVector,
    observable: &PauliString,
    rng: &mut R,
) -> Result<(MeasurementOutcome, StateVector)> {
    if observable.len() != state.n_qubits() {
        return invalid(format!(
            "observable length {} vs {} qubits",
            observable.len(),
            state.n_qubits()
        ));
    }
    state.measure(&Observable::from_pauli(observable)?, rng)
}

/// `(true, ⟨a|b⟩/|⟨a|b⟩|)` when `|⟨a|b⟩| ≥ 1 − tol`.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> Result<(bool, Option<C64>)> {
    let ip = a.inner(b)?;
    let m = ip.norm();
    if m >= 1.0 - tol {
        Ok((true, Some(ip / m)))
    } else {
        Ok((false, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Letter, NamedGate, Phase};
    use crate::rng::seeded;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_amps(s: &StateVector, want: &[C64]) {
        assert_eq!(s.amplitudes().len(), want.len());
        for (a, b) in s.amplitudes().iter().zip(want) {
            assert!((a - b).norm() < STATE_TOL, "{:?} vs {:?}", s.amplitudes(), want);
        }
    }

    #[test]
    fn basis_states() {
        assert_amps(&StateVector::new_basis_state(1, "0").unwrap(), &[c(1., 0.), c(0., 0.)]);
        let s = StateVector::new_basis_state(2, "10").unwrap();
        assert_amps(&s, &[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]);
        let s = StateVector::new_basis_state(3, "000").unwrap();
        assert_eq!(s.amplitude(0), c(1., 0.));
        assert!(StateVector::new_basis_state(2, "0").is_err());
        assert!(StateVector::new_basis_state(0, "").is_err());
        assert!(StateVector::new_basis_state(17, &"0".repeat(17)).is_err());
        assert!(StateVector::new_basis_state(1, "2").is_err());
    }

    #[test]
    fn apply_gate_examples() {
        let r = FRAC_1_SQRT_2;
        let plus = StateVector::zero(1).unwrap().apply_gate(&NamedGate::H.matrix(), &[0]).unwrap();
        assert_amps(&plus, &[c(r, 0.), c(r, 0.)]);
        let minus = plus.apply_gate(&NamedGate::Xp.matrix(), &[0]).unwrap();
        assert_amps(&minus, &[c(r, 0.), c(-r, 0.)]);
        let s = StateVector::zero(2)
            .unwrap()
            .apply_gate(&NamedGate::H.matrix(), &[0])
            .unwrap()
            .apply_gate(&NamedGate::Cnot.matrix(), &[0, 1])
            .unwrap();
        assert_amps(&s, &[c(r, 0.), c(0., 0.), c(0., 0.), c(r, 0.)]);
    }

    #[test]
    fn apply_gate_errors() {
        let s = StateVector::zero(2).unwrap();
        let bad = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(s.apply_gate(&bad, &[0]).is_err());
        assert!(s.apply_gate(&NamedGate::Cnot.matrix(), &[0, 0]).is_err());
        assert!(s.apply_gate(&NamedGate::H.matrix(), &[2]).is_err());
        assert!(s.apply_gate(&NamedGate::Cnot.matrix(), &[0]).is_err());
    }

    #[test]
    fn reversed_targets_match_swap_conjugation() {
        let mut rng = seeded(5);
        let s = StateVector::random(3, &mut rng).unwrap();
        let a = s.apply_gate(&NamedGate::Cnot.matrix(), &[2, 0]).unwrap();
        let sw = NamedGate::Swap.matrix();
        let rev = sw.matmul(&NamedGate::Cnot.matrix()).matmul(&sw);
        let b = s.apply_gate(&rev, &[0, 2]).unwrap();
        assert_amps(&a, b.amplitudes());
    }

    #[test]
    fn measure_x_on_plus_is_deterministic() {
        let mut rng = seeded(1);
        let plus = StateVector::from_amplitudes(vec![c(1., 0.), c(1., 0.)]).unwrap();
        let x = PauliString::single(1, 0, Letter::X);
        for _ in 0..20 {
            let (o, post) = measure_pauli(&plus, &x, &mut rng).unwrap();
            assert_eq!(o.eigenvalue, 1);
            assert!((o.probability - 1.0).abs() < NORM_TOL);
            assert!(equal_up_to_global_phase(&post, &plus, STATE_TOL).unwrap().0);
        }
    }

    #[test]
    fn measure_x_on_zero_gives_plus_or_minus() {
        let mut rng = seeded(2);
        let zero = StateVector::zero(1).unwrap();
        let x = PauliString::single(1, 0, Letter::X);
        let r = FRAC_1_SQRT_2;
        for _ in 0..20 {
            let (o, post) = measure_pauli(&zero, &x, &mut rng).unwrap();
            assert!((o.probability - 0.5).abs() < NORM_TOL);
            let want = [c(r, 0.), c(r * f64::from(o.eigenvalue), 0.)];
            assert_amps(&post, &want);
        }
    }

    #[test]
    fn imaginary_observable_rejected() {
        let s = StateVector::zero(1).unwrap();
        let p = PauliString::new(Phase::I, vec![Letter::X]);
        assert!(measure_pauli(&s, &p, &mut seeded(0)).is_err());
        let id = PauliString::identity(1);
        assert!(measure_pauli(&s, &id, &mut seeded(0)).is_err());
    }

    #[test]
    fn forced_zero_probability_branch_is_an_error() {
        let s = StateVector::zero(1).unwrap();
        let z = Observable::single(0, Axis::Xp);
        assert!(s.measure_forced(&z, -1).is_err());
        assert!(s.measure_forced(&z, 1).is_ok());
    }

    #[test]
    fn global_phase_examples() {
        let zero = StateVector::zero(1).unwrap();
        let ph = C64::from_polar(1.0, PI / 3.0);
        let rotated = StateVector::from_amplitudes(vec![ph, c(0., 0.)]).unwrap();
        let (eq, phase) = equal_up_to_global_phase(&zero, &rotated, 1e-10).unwrap();
        assert!(eq);
        assert!((phase.unwrap() - ph).norm() < 1e-12);
        let one = StateVector::new_basis_state(1, "1").unwrap();
        assert_eq!(equal_up_to_global_phase(&zero, &one, 1e-10).unwrap(), (false, None));
        let h0 = zero.apply_gate(&NamedGate::H.matrix(), &[0]).unwrap();
        let plus = StateVector::from_amplitudes(vec![c(1., 0.), c(1., 0.)]).unwrap();
        let (eq, phase) = equal_up_to_global_phase(&h0, &plus, 1e-10).unwrap();
        assert!(eq && (phase.unwrap() - c(1., 0.)).norm() < 1e-12);
        assert!(equal_up_to_global_phase(&zero, &StateVector::zero(2).unwrap(), 1e-10).is_err());
    }

    #[test]
    fn remove_and_move_qubits() {
        let mut rng = seeded(9);
        let psi = StateVector::random(2, &mut rng).unwrap();
        let minus = Axis::X.eigenvector(-1);
        let ext = psi.append_qubit(minus).unwrap();
        let moved = ext.move_qubit(2, 0).unwrap();
        let back = moved.remove_qubit(0, minus).unwrap();
        assert_amps(&back, psi.amplitudes());
        let bell = StateVector::from_amplitudes(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        assert!(matches!(bell.remove_qubit(0, [c(1., 0.), c(0., 0.)]), Err(Error::Internal(_))));
    }

    #[test]
    fn permute_is_consistent_with_swap_gate() {
        let mut rng = seeded(3);
        let s = StateVector::random(2, &mut rng).unwrap();
        let a = s.permute(&[1, 0]).unwrap();
        let b = s.apply_gate(&NamedGate::Swap.matrix(), &[0, 1]).unwrap();
        assert_amps(&a, b.amplitudes());
    }
}
