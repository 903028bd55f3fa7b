//! Classical byproduct bookkeeping.
//!
//! A frame `F` records that the physical state equals `F` applied to the ideal
//! state, up to global phase. A gadget with byproduct `B` implementing `U`
//! turns `F` into `B · U F U†`, which is [`push_through`] followed by
//! [`frame_update`].

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{conjugate_by, pauli_mul, Letter, NamedGate, PauliString, Phase};
use crate::error::{invalid, Error, Result};
use crate::statevec::StateVector;

/// Default walk budget; exhaustion has probability (3/4)^200.
pub const DEFAULT_MAX_STEPS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliFrame {
    pub element: PauliString,
}

impl PauliFrame {
    pub fn identity(n_qubits: usize) -> Self {
        PauliFrame { element: PauliString::identity(n_qubits) }
    }

    pub fn new(element: PauliString) -> Self {
        PauliFrame { element }
    }

    pub fn n_qubits(&self) -> usize {
        self.element.len()
    }

    pub fn letter(&self, q: usize) -> Letter {
        self.element.letters[q]
    }

    pub fn is_identity(&self) -> bool {
        self.element.letters.iter().all(|&l| l == Letter::I)
    }

    /// Undo the frame on a physical state, recovering the ideal state up to
    /// global phase.
    pub fn correct(&self, physical: &StateVector) -> Result<StateVector> {
        physical.apply_pauli(&self.element.adjoint())
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.element.fmt(f)
    }
}

/// `byproduct · frame`.
pub fn frame_update(frame: &PauliFrame, byproduct: &PauliString) -> Result<PauliFrame> {
    if frame.n_qubits() != byproduct.len() {
        return invalid(format!(
            "frame has {} qubits, byproduct {}",
            frame.n_qubits(),
            byproduct.len()
        ));
    }
    Ok(PauliFrame::new(pauli_mul(byproduct, &frame.element)?))
}

/// `gate · frame · gate†`. Non-Clifford gates (T, CH) succeed only when the
/// image is still a Pauli word.
pub fn push_through(frame: &PauliFrame, gate: NamedGate, targets: &[usize]) -> Result<PauliFrame> {
    Ok(PauliFrame::new(conjugate_by(&frame.element, gate, targets)?))
}

/// A symbol of a single-qubit word.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WordSymbol {
    H,
    Pauli(Letter),
}

/// `phase · pauli · H^with_h`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedWord {
    pub pauli: Letter,
    pub with_h: bool,
}

fn h_conjugate(l: Letter) -> (Phase, Letter) {
    match l {
        Letter::I => (Phase::ONE, Letter::I),
        Letter::X => (Phase::ONE, Letter::Xp),
        Letter::Xp => (Phase::ONE, Letter::X),
        Letter::Xpp => (Phase::MINUS_ONE, Letter::Xpp),
    }
}

/// Reduce the matrix product `w[0] · w[1] · …` to `phase · P · H^h`, moving
/// every Hadamard to the right.
pub fn reduce_word(word: &[WordSymbol]) -> Result<(ReducedWord, Phase)> {
    if word.is_empty() {
        return invalid("empty word");
    }
    let mut phase = Phase::ONE;
    let mut pauli = Letter::I;
    let mut with_h = false;
    for s in word {
        match *s {
            WordSymbol::H => with_h = !with_h,
            WordSymbol::Pauli(q) => {
                let (p, q) = if with_h { h_conjugate(q) } else { (Phase::ONE, q) };
                let (m, l) = pauli.mul(q);
                phase = phase * p * m;
                pauli = l;
            }
        }
    }
    Ok((ReducedWord { pauli, with_h }, phase))
}

/// Stopping rule of the cleanup walk.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    /// Check after every draw.
    Direct,
    /// Draw in pairs and check only after an even number of draws.
    EvenParity,
}

impl WalkMode {
    pub fn draws_per_step(self) -> usize {
        match self {
            WalkMode::Direct => 1,
            WalkMode::EvenParity => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    /// Number of checks performed; each check follows `draws_per_step` draws.
    pub steps: usize,
    /// Visited vertices, starting vertex first, one entry per draw.
    pub trajectory: Vec<Letter>,
    /// Edge label drawn at each move.
    pub labels: Vec<Letter>,
    pub terminal: Letter,
}

/// Draw one uniformly random Pauli label.
pub fn draw_label<R: Rng + ?Sized>(rng: &mut R) -> Letter {
    Letter::ALL[rng.gen_range(0..4)]
}

/// Walk on {I, X, X′, X″} until the vertex equals `target`.
pub fn random_walk_cleanup<R: Rng + ?Sized>(
    start: Letter,
    target: Letter,
    rng: &mut R,
    max_steps: usize,
) -> Result<WalkRecord> {
    random_walk_cleanup_with(start, target, WalkMode::Direct, rng, max_steps)
}

pub fn random_walk_cleanup_with<R: Rng + ?Sized>(
    start: Letter,
    target: Letter,
    mode: WalkMode,
    rng: &mut R,
    max_steps: usize,
) -> Result<WalkRecord> {
    if max_steps == 0 {
        return invalid("max_steps must be at least 1");
    }
    let mut current = start;
    let mut trajectory = vec![start];
    let mut labels = Vec::new();
    for step in 1..=max_steps {
        for _ in 0..mode.draws_per_step() {
            let label = draw_label(rng);
            current = current.mul(label).1;
            labels.push(label);
            trajectory.push(current);
        }
        if current == target {
            return Ok(WalkRecord { steps: step, trajectory, labels, terminal: current });
        }
    }
    Err(Error::WalkExhausted {
        steps: max_steps,
        probability: 0.75f64.powi(max_steps as i32),
    })
}
