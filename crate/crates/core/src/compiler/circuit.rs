//! Circuit IR and its line-based text format.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Axis, Letter, Matrix, NamedGate};
use crate::error::{invalid, Error, Result};
use crate::statevec::{MeasurementOutcome, Observable, StateVector, MAX_QUBITS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    Gate { gate: NamedGate, targets: Vec<usize> },
    Measure { observable: Observable },
    /// Reset `qubit` to the `sign` eigenstate of a Pauli axis.
    Prepare { qubit: usize, axis: Axis, sign: i8 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return invalid(format!("qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}"));
        }
        Ok(Circuit { n_qubits, ops: Vec::new() })
    }

    pub fn gate(mut self, gate: NamedGate, targets: &[usize]) -> Result<Self> {
        self.push(Op::Gate { gate, targets: targets.to_vec() })?;
        Ok(self)
    }

    pub fn push(&mut self, op: Op) -> Result<()> {
        check_op(self.n_qubits, &op)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn gate_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, Op::Gate { .. })).count()
    }

    pub fn is_unitary(&self) -> bool {
        self.ops.iter().all(|o| matches!(o, Op::Gate { .. }))
    }

    /// Apply the gates to `state`. Fails on measurement or preparation ops.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return invalid(format!(
                "circuit has {} qubits, state {}",
                self.n_qubits,
                state.n_qubits()
            ));
        }
        let mut st = state.clone();
        for op in &self.ops {
            match op {
                Op::Gate { gate, targets } => st.apply_gate_mut(&gate.matrix(), targets)?,
                _ => return invalid("circuit is not unitary"),
            }
        }
        Ok(st)
    }

    /// Dense unitary, column by column.
    pub fn unitary(&self) -> Result<Matrix> {
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim);
        for col in 0..dim {
            let bits: String = (0..self.n_qubits)
                .map(|q| if col >> (self.n_qubits - 1 - q) & 1 == 1 { '1' } else { '0' })
                .collect();
            let out = self.apply(&StateVector::new_basis_state(self.n_qubits, &bits)?)?;
            for (row, a) in out.amplitudes().iter().enumerate() {
                m.set(row, col, *a);
            }
        }
        Ok(m)
    }

    /// Direct simulation including measurements and resets.
    pub fn simulate<R: Rng + ?Sized>(
        &self,
        state: &StateVector,
        rng: &mut R,
    ) -> Result<(StateVector, Vec<MeasurementOutcome>)> {
        if state.n_qubits() != self.n_qubits {
            return invalid("state size does not match circuit");
        }
        let mut st = state.clone();
        let mut outcomes = Vec::new();
        for op in &self.ops {
            match op {
                Op::Gate { gate, targets } => st.apply_gate_mut(&gate.matrix(), targets)?,
                Op::Measure { observable } => {
                    let (o, post) = st.measure(observable, rng)?;
                    outcomes.push(o);
                    st = post;
                }
                Op::Prepare { qubit, axis, sign } => {
                    let (o, post) = st.measure(&Observable::single(*qubit, *axis), rng)?;
                    st = post;
                    if o.eigenvalue != *sign {
                        let flip = if *axis == Axis::X { Letter::Xp } else { Letter::X };
                        st.apply_gate_mut(&flip.matrix(), &[*qubit])?;
                    }
                }
            }
        }
        Ok((st, outcomes))
    }
}

fn check_op(n: usize, op: &Op) -> Result<()> {
    let qubits: Vec<usize> = match op {
        Op::Gate { gate, targets } => {
            if targets.len() != gate.arity() {
                return invalid(format!("{gate} takes {} qubits, got {}", gate.arity(), targets.len()));
            }
            if targets.len() == 2 && targets[0] == targets[1] {
                return invalid(format!("{gate} needs distinct qubits"));
            }
            targets.clone()
        }
        Op::Measure { observable } => observable.qubits(),
        Op::Prepare { qubit, axis, sign } => {
            if axis.as_letter().is_none() {
                return invalid("prepare supports the x, xp and xpp axes");
            }
            if *sign != 1 && *sign != -1 {
                return invalid("prepare sign must be + or -");
            }
            vec![*qubit]
        }
    };
    if let Some(q) = qubits.iter().find(|&&q| q >= n) {
        return invalid(format!("qubit {q} out of range for {n} qubits"));
    }
    Ok(())
}

fn axis_name(a: Axis) -> &'static str {
    match a {
        Axis::X => "x",
        Axis::Xp => "xp",
        Axis::Xpp => "xpp",
        Axis::G => "g",
        Axis::TxT => "txt",
    }
}

fn parse_axis(s: &str) -> Result<Axis> {
    match s {
        "x" => Ok(Axis::X),
        "xp" => Ok(Axis::Xp),
        "xpp" => Ok(Axis::Xpp),
        "g" => Ok(Axis::G),
        "txt" => Ok(Axis::TxT),
        other => invalid(format!("unknown axis {other:?}")),
    }
}

fn parse_qubit(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::InvalidInput(format!("bad qubit index {s:?}")))
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for op in &self.ops {
            match op {
                Op::Gate { gate, targets } => {
                    write!(f, "{gate}")?;
                    for t in targets {
                        write!(f, " {t}")?;
                    }
                }
                Op::Measure { observable } => {
                    f.write_str("measure")?;
                    if observable.sign < 0 {
                        f.write_str(" -")?;
                    }
                    for (q, a) in &observable.factors {
                        write!(f, " {} {q}", axis_name(*a))?;
                    }
                }
                Op::Prepare { qubit, axis, sign } => {
                    let s = if *sign > 0 { '+' } else { '-' };
                    write!(f, "prepare {qubit} {} {s}", axis_name(*axis))?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parse the text format:
///
/// ```text
/// qubits 2
/// h 0          # comment
/// cnot 0 1
/// measure x 0 xp 1
/// prepare 1 xp +
/// ```
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let at = |e: Error| match e {
            Error::InvalidInput(message) => Error::Parse { line, message },
            other => Error::Parse { line, message: other.to_string() },
        };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some(c) = circuit.as_mut() else {
            if words[0] != "qubits" || words.len() != 2 {
                return Err(Error::Parse { line, message: "expected `qubits N` header".into() });
            }
            let n = words[1]
                .parse()
                .map_err(|_| Error::Parse { line, message: format!("bad qubit count {:?}", words[1]) })?;
            circuit = Some(Circuit::new(n).map_err(at)?);
            continue;
        };
        let op = parse_op(&words).map_err(at)?;
        c.push(op).map_err(at)?;
    }
    circuit.ok_or(Error::Parse { line: 1, message: "missing `qubits N` header".into() })
}

fn parse_op(words: &[&str]) -> Result<Op> {
    match words[0] {
        "measure" => {
            let mut rest = &words[1..];
            let mut sign = 1;
            if rest.first() == Some(&"-") {
                sign = -1;
                rest = &rest[1..];
            }
            if rest.is_empty() || !rest.len().is_multiple_of(2) {
                return invalid("measure expects `axis qubit` pairs");
            }
            let factors = rest
                .chunks(2)
                .map(|p| Ok((parse_qubit(p[1])?, parse_axis(p[0])?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Op::Measure { observable: Observable::new(sign, factors)? })
        }
        "prepare" => {
            if words.len() != 4 {
                return invalid("prepare expects `prepare qubit axis +|-`");
            }
            let sign = match words[3] {
                "+" => 1,
                "-" => -1,
                other => return invalid(format!("bad sign {other:?}")),
            };
            Ok(Op::Prepare { qubit: parse_qubit(words[1])?, axis: parse_axis(words[2])?, sign })
        }
        name => {
            let gate: NamedGate = name.parse()?;
            let targets = words[1..].iter().map(|w| parse_qubit(w)).collect::<Result<Vec<_>>>()?;
            Ok(Op::Gate { gate, targets })
        }
    }
}

/// Random circuit over {H, T, CNOT, X, X′, X″} with `1..=max_qubits` qubits
/// and `1..=max_gates` gates.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, max_qubits: usize, max_gates: usize) -> Circuit {
    let n = rng.gen_range(1..=max_qubits);
    let len = rng.gen_range(1..=max_gates);
    let mut c = Circuit { n_qubits: n, ops: Vec::with_capacity(len) };
    let pool: &[NamedGate] = if n > 1 {
        &[NamedGate::H, NamedGate::T, NamedGate::Cnot, NamedGate::X, NamedGate::Xp, NamedGate::Xpp]
    } else {
        &[NamedGate::H, NamedGate::T, NamedGate::X, NamedGate::Xp, NamedGate::Xpp]
    };
    for _ in 0..len {
        let gate = pool[rng.gen_range(0..pool.len())];
        let a = rng.gen_range(0..n);
        let targets = if gate.arity() == 2 {
            let b = (a + rng.gen_range(1..n)) % n;
            vec![a, b]
        } else {
            vec![a]
        };
        c.ops.push(Op::Gate { gate, targets });
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn bell_prep_parses() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1").unwrap();
        assert_eq!(c.n_qubits, 2);
        assert_eq!(c.ops.len(), 2);
        let out = c.apply(&StateVector::zero(2).unwrap()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(0).re - r).abs() < 1e-12);
        assert!((out.amplitude(3).re - r).abs() < 1e-12);
    }

    #[test]
    fn tt_is_s() {
        let c = parse_circuit("qubits 1\nt 0\nt 0").unwrap();
        assert!(c.unitary().unwrap().approx_eq(&NamedGate::S.matrix(), 1e-12));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(parse_circuit("qubits 1\nbogus 0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_circuit("# c\n\nqubits 1\nh 3"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_circuit("qubits 2\ncnot 0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_circuit("qubits 2\ncnot 1 1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_circuit("h 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_circuit(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_circuit("qubits 17"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn comments_blank_lines_and_roundtrip() {
        let text = "# bell\nqubits 2\n\nh 0   # first\ncnot 0 1\nmeasure x 0 xp 1\nprepare 1 xpp -\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.ops.len(), 4);
        assert_eq!(parse_circuit(&c.to_string()).unwrap(), c);
        assert!(!c.is_unitary());
        assert!(c.apply(&StateVector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn simulate_prepare_resets() {
        let c = parse_circuit("qubits 1\nh 0\nprepare 0 xp -").unwrap();
        let mut rng = seeded(2);
        for _ in 0..20 {
            let (st, _) = c.simulate(&StateVector::zero(1).unwrap(), &mut rng).unwrap();
            assert!((st.amplitude(1).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_circuits_respect_bounds() {
        let mut rng = seeded(9);
        for _ in 0..200 {
            let c = random_circuit(&mut rng, 4, 8);
            assert!((1..=4).contains(&c.n_qubits));
            assert!((1..=8).contains(&c.gate_count()));
            for op in &c.ops {
                check_op(c.n_qubits, op).unwrap();
            }
        }
    }
}
