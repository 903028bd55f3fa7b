//! The two-qubit dealer: dense coding with strategy-parametrised tactics.
//!
//! Wire A is qubit 0 and starts in `|0⟩`; wire B is qubit 1 and starts in
//! `|0′⟩ = |+⟩`. The circuit is CNOT(B→A), `U_{z,α}` on A, CNOT(A→B). The
//! four outputs are `|±⟩_A ⊗ |0/1⟩_B`, so A is read in the X basis and B in
//! the computational basis.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{bloch_vector, u_z_alpha, Axis, Matrix, NamedGate, Strategy};
use crate::error::Result;
use crate::statevec::{MeasurementOutcome, Observable, StateVector};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TacticsLabel {
    I,
    X,
    Xp,
    Xpp,
}

/// A tactics together with the two classical bits it carries.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TacticsChoice {
    pub label: TacticsLabel,
    pub bits: (u8, u8),
}

impl TacticsChoice {
    pub const ALL: [TacticsChoice; 4] = [
        TacticsChoice { label: TacticsLabel::I, bits: (0, 0) },
        TacticsChoice { label: TacticsLabel::X, bits: (0, 1) },
        TacticsChoice { label: TacticsLabel::Xp, bits: (1, 0) },
        TacticsChoice { label: TacticsLabel::Xpp, bits: (1, 1) },
    ];

    pub fn from_bits(bits: (u8, u8)) -> TacticsChoice {
        let i = usize::from(bits.0 & 1) * 2 + usize::from(bits.1 & 1);
        TacticsChoice::ALL[i]
    }

    /// `(z, α)` realising the tactics as `U_{z,α}` (up to global phase).
    pub fn strategy(self) -> (Strategy, f64) {
        match self.label {
            TacticsLabel::I => (Strategy::real(0.0), 0.0),
            TacticsLabel::X => (Strategy::real(1.0), FRAC_PI_2),
            TacticsLabel::Xp => (Strategy::real(0.0), FRAC_PI_2),
            TacticsLabel::Xpp => (Strategy::Finite(C64::new(0.0, 1.0)), FRAC_PI_2),
        }
    }
}

impl fmt::Display for TacticsChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}→{}{}", self.label, self.bits.0, self.bits.1)
    }
}

fn initial() -> Result<StateVector> {
    StateVector::product(&[Axis::Xp.eigenvector(1), Axis::X.eigenvector(1)])
}

/// Output of the dealer circuit on `|0⟩_A |0′⟩_B`.
pub fn dealer_state(s: Strategy, alpha: f64) -> Result<StateVector> {
    let cnot = NamedGate::Cnot.matrix();
    let mut st = initial()?;
    st.apply_gate_mut(&cnot, &[1, 0])?;
    st.apply_gate_mut(&u_z_alpha(s, alpha), &[0])?;
    st.apply_gate_mut(&cnot, &[0, 1])?;
    Ok(st)
}

fn closed_form(s: Strategy, alpha: f64, xpp_phase: C64) -> StateVector {
    let [ex, ey, ez] = bloch_vector(s);
    let (sin, cos) = alpha.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [C64::new(r, 0.0), C64::new(r, 0.0)];
    let minus = [C64::new(r, 0.0), C64::new(-r, 0.0)];
    let zero = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let one = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    let terms = [
        (C64::new(cos, 0.0), plus, zero),
        (C64::new(0.0, sin * ex), plus, one),
        (C64::new(0.0, sin * ez), minus, zero),
        (C64::new(0.0, sin * ey) * xpp_phase, minus, one),
    ];
    let mut amps = vec![C64::new(0.0, 0.0); 4];
    for (c, a, b) in terms {
        for i in 0..2 {
            for j in 0..2 {
                amps[2 * i + j] += c * a[i] * b[j];
            }
        }
    }
    StateVector::from_amplitudes(amps).expect("closed form is a unit vector")
}

/// The superposition as displayed:
/// `cos α |0′0⟩ + i sin α (E(X)|0′I⟩ + E(X′)|I′0⟩ + E(X″)|I′I⟩)`.
pub fn dealer_closed_form(s: Strategy, alpha: f64) -> StateVector {
    closed_form(s, alpha, C64::new(1.0, 0.0))
}

/// The closed form with the factor `−i` the X″ branch actually carries
/// (`X″ = σy` maps `|0⟩` to `i|1⟩` and `|1⟩` to `−i|0⟩`).
pub fn dealer_closed_form_exact(s: Strategy, alpha: f64) -> StateVector {
    closed_form(s, alpha, C64::new(0.0, -1.0))
}

/// The dealer output for a tactics choice.
pub fn encode(choice: TacticsChoice) -> Result<StateVector> {
    let (s, alpha) = choice.strategy();
    dealer_state(s, alpha)
}

pub fn encoded_states() -> Result<Vec<StateVector>> {
    TacticsChoice::ALL.iter().map(|&c| encode(c)).collect()
}

/// `G[i][j] = ⟨ψ_i|ψ_j⟩`.
pub fn gram_matrix(states: &[StateVector]) -> Result<Matrix> {
    let mut g = Matrix::zeros(states.len());
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            g.set(i, j, a.inner(b)?);
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseCodingTrace {
    pub choice: TacticsChoice,
    pub encoded: StateVector,
    /// A in the X basis, then B in the computational basis.
    pub outcomes: Vec<MeasurementOutcome>,
}

/// Send `bits` through the dealer circuit and read them back.
pub fn encode_decode<R: Rng + ?Sized>(bits: (u8, u8), rng: &mut R) -> Result<((u8, u8), DenseCodingTrace)> {
    let choice = TacticsChoice::from_bits(bits);
    let encoded = encode(choice)?;
    let (a, st) = encoded.measure(&Observable::single(0, Axis::X), rng)?;
    let (b, _) = st.measure(&Observable::single(1, Axis::Xp), rng)?;
    let decoded = (a.bit(), b.bit());
    Ok((decoded, DenseCodingTrace { choice, encoded, outcomes: vec![a, b] }))
}

/// The dealer circuit with the meters replaced by a controlled-H (control B,
/// target A) followed by G on B.
pub fn polarization_state(s: Strategy, alpha: f64) -> Result<StateVector> {
    let mut st = dealer_state(s, alpha)?;
    st.apply_gate_mut(&NamedGate::Ch.matrix(), &[1, 0])?;
    st.apply_gate_mut(&NamedGate::G.matrix(), &[1])?;
    Ok(st)
}

/// Market reading of a computational basis value.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    Supply,
    Demand,
}

/// Amplitudes keyed by the per-qubit polarization labels. Labels are
/// metadata; the amplitudes are the state's own.
pub fn polarization_view(state: &StateVector) -> Vec<(Vec<Polarization>, C64)> {
    let n = state.n_qubits();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let labels = (0..n)
                .map(|q| if i >> (n - 1 - q) & 1 == 0 { Polarization::Supply } else { Polarization::Demand })
                .collect();
            (labels, a)
        })
        .collect()
}
