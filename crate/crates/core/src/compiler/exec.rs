//! Program execution and equivalence checking.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::program::{describe, Instruction, MeasurementProgram, Wire};
use crate::algebra::Axis;
use crate::error::{invalid, Error, Result};
use crate::par::map_trials;
use crate::pauliframe::{frame_update, push_through, PauliFrame};
use crate::rng::trial_rng;
use crate::statevec::{outcome_bit, Observable, StateVector};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub register: u32,
    pub eigenvalue: i8,
}

/// Eigenstate a discarded wire was left in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaResidue {
    pub wire: Wire,
    pub axis: Axis,
    pub eigenvalue: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStat {
    pub qubit: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Logical register only, qubit order restored.
    pub final_state: StateVector,
    pub frame: PauliFrame,
    /// Every measurement in execution order.
    pub outcomes: Vec<OutcomeRecord>,
    pub residues: Vec<AncillaResidue>,
    pub walks: Vec<WalkStat>,
    pub ancillas: usize,
    pub seed: Option<u64>,
}

impl RunRecord {
    /// Last value written to each register.
    pub fn registers(&self) -> BTreeMap<u32, i8> {
        self.outcomes.iter().map(|o| (o.register, o.eigenvalue)).collect()
    }

    /// The frame undone on the final state: the ideal output up to phase.
    pub fn corrected_state(&self) -> Result<StateVector> {
        self.frame.correct(&self.final_state)
    }
}

struct Machine<'a, R: Rng + ?Sized> {
    state: StateVector,
    logical: Vec<Option<usize>>,
    ancillas: BTreeMap<u32, usize>,
    registers: Vec<Option<i8>>,
    frame: PauliFrame,
    forced: std::slice::Iter<'a, i8>,
    rng: &'a mut R,
    outcomes: Vec<OutcomeRecord>,
    residues: Vec<AncillaResidue>,
    walks: Vec<WalkStat>,
    prepared: usize,
}

impl<R: Rng + ?Sized> Machine<'_, R> {
    fn physical(&self, w: Wire) -> Result<usize> {
        match w {
            Wire::Logical(q) => self.logical.get(q).copied().flatten(),
            Wire::Ancilla(a) => self.ancillas.get(&a).copied(),
        }
        .ok_or_else(|| Error::Program(format!("wire {w} is not live")))
    }

    fn parity(&self, regs: &[u32]) -> Result<u8> {
        regs.iter().try_fold(0u8, |acc, &r| {
            let v = self
                .registers
                .get(r as usize)
                .copied()
                .flatten()
                .ok_or_else(|| Error::Program(format!("register {r} read before it was set")))?;
            Ok(acc ^ outcome_bit(v))
        })
    }

    fn run(&mut self, ins: &[Instruction]) -> Result<()> {
        for i in ins {
            self.step(i)?;
        }
        Ok(())
    }

    fn step(&mut self, ins: &Instruction) -> Result<()> {
        match ins {
            Instruction::Expand { .. } => {}
            Instruction::Prepare { ancilla, axis } => {
                if self.ancillas.contains_key(ancilla) {
                    return Err(Error::Program(format!("ancilla a{ancilla} prepared twice")));
                }
                self.state = self.state.append_qubit(axis.eigenvector(1))?;
                self.ancillas.insert(*ancilla, self.state.n_qubits() - 1);
                self.prepared += 1;
            }
            Instruction::Measure { observable, register, .. } => {
                let factors = observable
                    .iter()
                    .map(|&(w, a)| Ok((self.physical(w)?, a)))
                    .collect::<Result<Vec<_>>>()?;
                let obs = Observable::new(1, factors)?;
                let forced = self.forced.next().copied();
                let (o, post) = self
                    .state
                    .measure_with(&obs, forced, self.rng)
                    .map_err(|e| Error::Program(format!("measuring {}: {e}", describe(observable))))?;
                self.state = post;
                let slot = self
                    .registers
                    .get_mut(*register as usize)
                    .ok_or_else(|| Error::Program(format!("register {register} out of range")))?;
                *slot = Some(o.eigenvalue);
                self.outcomes.push(OutcomeRecord { register: *register, eigenvalue: o.eigenvalue });
            }
            Instruction::Discard { wire, axis, parity } => {
                let p = self.physical(*wire)?;
                let eigenvalue = if self.parity(parity)? == 1 { -1 } else { 1 };
                self.state = self.state.remove_qubit(p, axis.eigenvector(eigenvalue))?;
                match wire {
                    Wire::Logical(q) => self.logical[*q] = None,
                    Wire::Ancilla(a) => {
                        self.ancillas.remove(a);
                    }
                }
                for slot in self.logical.iter_mut().flatten().chain(self.ancillas.values_mut()) {
                    if *slot > p {
                        *slot -= 1;
                    }
                }
                self.residues.push(AncillaResidue { wire: *wire, axis: *axis, eigenvalue });
            }
            Instruction::Relabel { ancilla, logical } => {
                let slot = self
                    .logical
                    .get(*logical)
                    .ok_or_else(|| Error::Program(format!("logical {logical} out of range")))?;
                if slot.is_some() {
                    return Err(Error::Program(format!("logical q{logical} is still live")));
                }
                let p = self
                    .ancillas
                    .remove(ancilla)
                    .ok_or_else(|| Error::Program(format!("ancilla a{ancilla} is not live")))?;
                self.logical[*logical] = Some(p);
            }
            Instruction::Frame { pauli, parity } => {
                if parity.is_empty() || self.parity(parity)? == 1 {
                    self.frame = frame_update(&self.frame, pauli)?;
                }
            }
            Instruction::Conjugate { gate, targets } => {
                self.frame = push_through(&self.frame, *gate, targets)?;
            }
            Instruction::Cleanup { qubit, target, max_steps, body } => {
                let mut steps = 0;
                while self.frame.letter(*qubit) != *target {
                    if steps == *max_steps {
                        return Err(Error::WalkExhausted {
                            steps,
                            probability: 0.75f64.powi(steps as i32),
                        });
                    }
                    self.run(body)?;
                    steps += 1;
                }
                self.walks.push(WalkStat { qubit: *qubit, steps });
            }
        }
        Ok(())
    }
}

/// Run `program` on `input`.
pub fn execute<R: Rng + ?Sized>(program: &MeasurementProgram, input: &StateVector, rng: &mut R) -> Result<RunRecord> {
    execute_forced(program, input, &[], rng)
}

/// Run `program` with the first `forced.len()` measurement outcomes fixed.
pub fn execute_forced<R: Rng + ?Sized>(
    program: &MeasurementProgram,
    input: &StateVector,
    forced: &[i8],
    rng: &mut R,
) -> Result<RunRecord> {
    let n = program.n_logical;
    if input.n_qubits() != n {
        return invalid(format!("program has {n} logical qubits, input {}", input.n_qubits()));
    }
    let mut m = Machine {
        state: input.clone(),
        logical: (0..n).map(Some).collect(),
        ancillas: BTreeMap::new(),
        registers: vec![None; program.n_registers as usize],
        frame: PauliFrame::identity(n),
        forced: forced.iter(),
        rng,
        outcomes: Vec::new(),
        residues: Vec::new(),
        walks: Vec::new(),
        prepared: 0,
    };
    m.run(&program.instructions)?;
    if let Some(a) = m.ancillas.keys().next() {
        return Err(Error::Program(format!("ancilla a{a} still live at the end")));
    }
    let order = m
        .logical
        .iter()
        .enumerate()
        .map(|(q, p)| p.ok_or_else(|| Error::Program(format!("logical q{q} was discarded"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunRecord {
        final_state: m.state.permute(&order)?,
        frame: m.frame,
        outcomes: m.outcomes,
        residues: m.residues,
        walks: m.walks,
        ancillas: m.prepared,
        seed: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub fidelity: f64,
    pub pass: bool,
    pub measurements: usize,
    pub walk_steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub seed: u64,
    pub tol: f64,
    pub trials: Vec<TrialRecord>,
    pub min_fidelity: f64,
    pub passed: bool,
    pub failing: Vec<usize>,
    /// Total +1 and −1 outcomes over all trials.
    pub outcome_counts: [u64; 2],
    /// Trials per total cleanup-walk length.
    pub walk_histogram: BTreeMap<usize, usize>,
}

/// Check `program` against `circuit` on `trials` Haar-random inputs. Trial
/// `t` draws its input and outcomes from stream `t` of `seed`, so the report
/// does not depend on how trials are scheduled.
pub fn check_equivalence(
    circuit: &Circuit,
    program: &MeasurementProgram,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<EquivalenceReport> {
    if circuit.n_qubits != program.n_logical {
        return invalid("circuit and program qubit counts differ");
    }
    if !circuit.is_unitary() {
        return invalid("circuit is not unitary");
    }
    let results: Vec<(TrialRecord, [u64; 2])> = map_trials(trials, |t| {
        let mut rng = trial_rng(seed, t as u64);
        let outcome = (|| -> Result<(f64, RunRecord)> {
            let input = StateVector::random(circuit.n_qubits, &mut rng)?;
            let reference = circuit.apply(&input)?;
            let run = execute(program, &input, &mut rng)?;
            Ok((reference.fidelity(&run.corrected_state()?)?, run))
        })();
        match outcome {
            Ok((fidelity, run)) => {
                let minus = run.outcomes.iter().filter(|o| o.eigenvalue < 0).count() as u64;
                let record = TrialRecord {
                    trial: t,
                    fidelity,
                    pass: fidelity >= 1.0 - tol,
                    measurements: run.outcomes.len(),
                    walk_steps: run.walks.iter().map(|w| w.steps).sum(),
                    error: None,
                };
                (record, [run.outcomes.len() as u64 - minus, minus])
            }
            Err(e) => (
                TrialRecord { trial: t, fidelity: 0.0, pass: false, measurements: 0, walk_steps: 0, error: Some(e.to_string()) },
                [0, 0],
            ),
        }
    });
    let mut counts = [0u64; 2];
    let mut walk_histogram = BTreeMap::new();
    for (r, c) in &results {
        counts[0] += c[0];
        counts[1] += c[1];
        *walk_histogram.entry(r.walk_steps).or_insert(0) += 1;
    }
    let trials: Vec<TrialRecord> = results.into_iter().map(|(r, _)| r).collect();
    let failing: Vec<usize> = trials.iter().filter(|r| !r.pass).map(|r| r.trial).collect();
    let min_fidelity = trials.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min);
    Ok(EquivalenceReport {
        seed,
        tol,
        passed: failing.is_empty(),
        failing,
        min_fidelity: if trials.is_empty() { 1.0 } else { min_fidelity },
        trials,
        outcome_counts: counts,
        walk_histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Letter, NamedGate, PauliString};
    use crate::compiler::circuit::parse_circuit;
    use crate::compiler::program::{compile_to_measurements, Mode};
    use crate::rng::seeded;
    use crate::statevec::equal_up_to_global_phase;

    fn both_modes(text: &str) -> Vec<(Circuit, MeasurementProgram)> {
        let c = parse_circuit(text).unwrap();
        [Mode::Extended, Mode::Strict]
            .into_iter()
            .map(|m| (c.clone(), compile_to_measurements(&c, m).unwrap()))
            .collect()
    }

    #[test]
    fn empty_program_is_identity() {
        let p = MeasurementProgram { n_logical: 1, mode: Mode::Extended, n_registers: 0, instructions: vec![] };
        let zero = StateVector::zero(1).unwrap();
        let r = execute(&p, &zero, &mut seeded(0)).unwrap();
        assert_eq!(r.final_state, zero);
        assert!(r.frame.is_identity());
    }

    #[test]
    fn compiled_h_on_zero_gives_plus() {
        let plus = StateVector::product(&[Axis::X.eigenvector(1)]).unwrap();
        for (_, p) in both_modes("qubits 1\nh 0") {
            for seed in 0..200 {
                let r = execute(&p, &StateVector::zero(1).unwrap(), &mut seeded(seed)).unwrap();
                let (ok, _) = equal_up_to_global_phase(&r.corrected_state().unwrap(), &plus, 1e-10).unwrap();
                assert!(ok, "seed {seed}");
            }
        }
    }

    #[test]
    fn compiled_bell_prep() {
        let bell = StateVector::from_amplitudes(vec![
            num_complex::Complex64::new(1.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        for (_, p) in both_modes("qubits 2\nh 0\ncnot 0 1") {
            for seed in 0..50 {
                let r = execute(&p, &StateVector::zero(2).unwrap(), &mut seeded(seed)).unwrap();
                assert!(r.corrected_state().unwrap().fidelity(&bell).unwrap() > 1.0 - 1e-10);
                assert_eq!(r.ancillas, r.residues.len());
            }
        }
    }

    #[test]
    fn every_gate_in_both_modes() {
        for text in [
            "qubits 1\nt 0",
            "qubits 1\ng 0",
            "qubits 1\nxpp 0\nh 0\nxp 0\nt 0\nx 0",
            "qubits 2\ncnot 1 0",
            "qubits 2\nch 0 1",
            "qubits 2\nch 1 0\nt 0",
            "qubits 2\nswap 0 1\ns 1",
            "qubits 3\nh 2\ncnot 2 0\nt 0\ncnot 0 1",
        ] {
            for (c, p) in both_modes(text) {
                let rep = check_equivalence(&c, &p, 30, 1e-10, 11).unwrap();
                assert!(rep.passed, "{text} {:?}: {:?}", p.mode, rep.trials.iter().find(|t| !t.pass));
            }
        }
    }

    #[test]
    fn mismatched_program_fails() {
        let h = parse_circuit("qubits 1\nh 0").unwrap();
        let t = compile_to_measurements(&parse_circuit("qubits 1\nt 0").unwrap(), Mode::Extended).unwrap();
        let rep = check_equivalence(&h, &t, 50, 1e-10, 1).unwrap();
        assert!(!rep.passed);
        assert!(rep.min_fidelity < 1.0 - 1e-10);
        let p = compile_to_measurements(&h, Mode::Strict).unwrap().without_feedforward();
        assert!(!check_equivalence(&h, &p, 50, 1e-10, 1).unwrap().passed);
    }

    #[test]
    fn runs_are_deterministic() {
        let c = parse_circuit("qubits 2\nh 0\nt 0\ncnot 0 1\nt 1").unwrap();
        let p = compile_to_measurements(&c, Mode::Strict).unwrap();
        let input = StateVector::random(2, &mut seeded(4)).unwrap();
        let a = execute(&p, &input, &mut seeded(8)).unwrap();
        let b = execute(&p, &input, &mut seeded(8)).unwrap();
        assert_eq!(a, b);
        let r1 = check_equivalence(&c, &p, 20, 1e-10, 3).unwrap();
        let r2 = check_equivalence(&c, &p, 20, 1e-10, 3).unwrap();
        assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
    }

    #[test]
    fn forced_outcomes_are_honoured() {
        let p = compile_to_measurements(&parse_circuit("qubits 1\nh 0").unwrap(), Mode::Extended).unwrap();
        let r = execute_forced(&p, &StateVector::zero(1).unwrap(), &[1, -1, 1], &mut seeded(0)).unwrap();
        let values: Vec<i8> = r.outcomes.iter().map(|o| o.eigenvalue).collect();
        assert_eq!(values, vec![1, -1, 1]);
        assert_eq!(r.frame.element, PauliString::single(1, 0, Letter::X));
    }

    #[test]
    fn unset_register_is_a_program_error() {
        let p = MeasurementProgram {
            n_logical: 1,
            mode: Mode::Extended,
            n_registers: 1,
            instructions: vec![Instruction::Frame { pauli: PauliString::single(1, 0, Letter::X), parity: vec![0] }],
        };
        assert!(matches!(execute(&p, &StateVector::zero(1).unwrap(), &mut seeded(0)), Err(Error::Program(_))));
        let p = MeasurementProgram {
            instructions: vec![Instruction::Conjugate { gate: NamedGate::H, targets: vec![0] }],
            n_registers: 0,
            ..p
        };
        assert!(execute(&p, &StateVector::zero(2).unwrap(), &mut seeded(0)).is_err());
    }
}
