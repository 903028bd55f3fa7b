//! Measurement programs and the lowering from circuits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, Op};
use crate::algebra::{Axis, Letter, NamedGate, PauliString};
use crate::error::{Error, Result};
use crate::gadgets::{GadgetForm, GadgetKind, Local};
use crate::pauliframe::DEFAULT_MAX_STEPS;

/// Deepest nesting of expansions the lowering may produce.
pub const MAX_DEPTH: u8 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Any single-qubit axis and any two-qubit parity may be measured.
    Extended,
    /// Only X, the G family and X⊗X′.
    Strict,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extended" => Ok(Mode::Extended),
            "strict" => Ok(Mode::Strict),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Extended => "extended",
            Mode::Strict => "strict",
        })
    }
}

/// A wire of the running register: a logical qubit or a numbered ancilla.
/// Serialised as `q3` / `a7`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Wire {
    Logical(usize),
    Ancilla(u32),
}

impl From<Wire> for String {
    fn from(w: Wire) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Wire {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        let bad = || format!("bad wire {s:?}");
        let (head, tail) = s.split_at(s.len().min(1));
        match head {
            "q" => tail.parse().map(Wire::Logical).map_err(|_| bad()),
            "a" => tail.parse().map(Wire::Ancilla).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::Logical(q) => write!(f, "q{q}"),
            Wire::Ancilla(a) => write!(f, "a{a}"),
        }
    }
}

/// Member of the strict primitive set a measurement instantiates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    X,
    /// single-qubit G-type observable
    G,
    /// X on one wire, X′ on the other
    XXp,
}

/// What an expansion marker stands for.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Gadget(GadgetForm),
    /// X′ from X on a fresh ancilla and X⊗X′
    DerivedXp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Instruction {
    /// Start of an expansion; no runtime effect.
    Expand { construction: Construction, wires: Vec<Wire>, depth: u8 },
    /// Fresh ancilla in the +1 eigenstate of `axis`.
    Prepare { ancilla: u32, axis: Axis },
    Measure {
        observable: Vec<(Wire, Axis)>,
        register: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        primitive: Option<Primitive>,
    },
    /// Remove `wire`, left in the `(−1)^{parity}` eigenstate of `axis`.
    Discard { wire: Wire, axis: Axis, parity: Vec<u32> },
    /// The ancilla takes over a logical slot vacated by a discard.
    Relabel { ancilla: u32, logical: usize },
    /// `frame ← pauli · frame` when the XOR of the listed outcome bits is 1
    /// (always when the list is empty).
    Frame { pauli: PauliString, parity: Vec<u32> },
    /// `frame ← gate · frame · gate†`, tracking the ideal unitary.
    Conjugate { gate: NamedGate, targets: Vec<usize> },
    /// Run `body` until the frame letter on `qubit` equals `target`.
    Cleanup { qubit: usize, target: Letter, max_steps: usize, body: Vec<Instruction> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementProgram {
    pub n_logical: usize,
    pub mode: Mode,
    pub n_registers: u32,
    pub instructions: Vec<Instruction>,
}

/// Header line of the JSON-lines program format.
#[derive(Serialize, Deserialize)]
struct Header {
    record: String,
    n_logical: usize,
    mode: Mode,
    n_registers: u32,
}

/// Static counts over a program, descending into cleanup bodies once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramStats {
    pub measurements: usize,
    pub ancillas: usize,
    pub expansions: usize,
    pub cleanups: usize,
    pub frame_rules: usize,
}

fn walk<'a>(ins: &'a [Instruction], f: &mut impl FnMut(&'a Instruction)) {
    for i in ins {
        f(i);
        if let Instruction::Cleanup { body, .. } = i {
            walk(body, f);
        }
    }
}

impl MeasurementProgram {
    pub fn stats(&self) -> ProgramStats {
        let mut s = ProgramStats::default();
        walk(&self.instructions, &mut |i| match i {
            Instruction::Measure { .. } => s.measurements += 1,
            Instruction::Prepare { .. } => s.ancillas += 1,
            Instruction::Expand { .. } => s.expansions += 1,
            Instruction::Cleanup { .. } => s.cleanups += 1,
            Instruction::Frame { .. } => s.frame_rules += 1,
            _ => {}
        });
        s
    }

    /// Every measured observable, in program order.
    pub fn measured(&self) -> Vec<&[(Wire, Axis)]> {
        let mut out = Vec::new();
        walk(&self.instructions, &mut |i| {
            if let Instruction::Measure { observable, .. } = i {
                out.push(observable.as_slice());
            }
        });
        out
    }

    /// Confirm that every measurement is structurally one of X, G-type or
    /// X⊗X′ and carries the matching primitive tag.
    pub fn check_strict(&self) -> Result<()> {
        let mut err = None;
        walk(&self.instructions, &mut |i| {
            if let Instruction::Measure { observable, primitive, register } = i {
                let found = classify(observable);
                if found.is_none() || found != *primitive {
                    err.get_or_insert(Error::Program(format!(
                        "register {register}: {} is not a strict primitive",
                        describe(observable)
                    )));
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Copy with every outcome-dependent frame rule removed. Test hook for a
    /// program that must fail verification.
    pub fn without_feedforward(&self) -> MeasurementProgram {
        fn strip(ins: &[Instruction]) -> Vec<Instruction> {
            ins.iter()
                .filter(|i| !matches!(i, Instruction::Frame { parity, .. } if !parity.is_empty()))
                .map(|i| match i {
                    Instruction::Cleanup { qubit, target, max_steps, body } => Instruction::Cleanup {
                        qubit: *qubit,
                        target: *target,
                        max_steps: *max_steps,
                        body: strip(body),
                    },
                    other => other.clone(),
                })
                .collect()
        }
        MeasurementProgram { instructions: strip(&self.instructions), ..self.clone() }
    }

    pub fn to_jsonl(&self) -> String {
        let header = Header {
            record: "program".into(),
            n_logical: self.n_logical,
            mode: self.mode,
            n_registers: self.n_registers,
        };
        let mut out = serde_json::to_string(&header).expect("header serialises");
        out.push('\n');
        for i in &self.instructions {
            out.push_str(&serde_json::to_string(i).expect("instruction serialises"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<MeasurementProgram> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |e: serde_json::Error| Error::Program(format!("bad program record: {e}"));
        let header: Header = serde_json::from_str(lines.next().ok_or(Error::Program("empty program".into()))?)
            .map_err(bad)?;
        let instructions = lines
            .map(|l| serde_json::from_str(l).map_err(bad))
            .collect::<Result<Vec<Instruction>>>()?;
        Ok(MeasurementProgram {
            n_logical: header.n_logical,
            mode: header.mode,
            n_registers: header.n_registers,
            instructions,
        })
    }
}

fn classify(observable: &[(Wire, Axis)]) -> Option<Primitive> {
    match observable {
        [(_, Axis::X)] => Some(Primitive::X),
        [(_, Axis::G)] => Some(Primitive::G),
        [(a, Axis::X), (b, Axis::Xp)] | [(a, Axis::Xp), (b, Axis::X)] if a != b => Some(Primitive::XXp),
        _ => None,
    }
}

pub(crate) fn describe(observable: &[(Wire, Axis)]) -> String {
    observable
        .iter()
        .map(|(w, a)| format!("{a}[{w}]"))
        .collect::<Vec<_>>()
        .join("⊗")
}

struct Lowering {
    mode: Mode,
    n: usize,
    next_ancilla: u32,
    next_register: u32,
}

impl Lowering {
    fn ancilla(&mut self) -> u32 {
        self.next_ancilla += 1;
        self.next_ancilla - 1
    }

    fn register(&mut self) -> u32 {
        self.next_register += 1;
        self.next_register - 1
    }

    fn gate(&mut self, out: &mut Vec<Instruction>, gate: NamedGate, t: &[usize], depth: u8) -> Result<()> {
        use NamedGate::*;
        match gate {
            I => {}
            X | Xp | Xpp => out.push(Instruction::Frame {
                pauli: PauliString::single(self.n, t[0], gate.as_letter().expect("Pauli gate")),
                parity: Vec::new(),
            }),
            H => self.gadget(out, GadgetForm::SigmaH, t, depth)?,
            T => {
                let form = match self.mode {
                    Mode::Extended => GadgetForm::SigmaTRotated,
                    Mode::Strict => GadgetForm::SigmaTViaG,
                };
                self.gadget(out, form, t, depth)?
            }
            Cnot => self.gadget(out, GadgetForm::Cnot, t, depth)?,
            G if self.mode == Mode::Extended => self.gadget(out, GadgetForm::SigmaG, t, depth)?,
            // G = S H S†, with S† = X S X up to phase
            G => self.sequence(out, &[X, T, T, X, H, T, T], &[t[0]], depth)?,
            S => self.sequence(out, &[T, T], t, depth)?,
            Swap => {
                let (a, b) = (t[0], t[1]);
                for pair in [[a, b], [b, a], [a, b]] {
                    self.gadget(out, GadgetForm::Cnot, &pair, depth)?;
                }
            }
            // CH = (I⊗V) CNOT (I⊗V†) with V = T T H T; V† is applied as
            // X S X · H · X T X, equal to it up to global phase
            Ch => {
                let (c, tg) = (t[0], t[1]);
                self.sequence(out, &[X, T, T, X, H, X, T, X], &[tg], depth)?;
                self.gadget(out, GadgetForm::Cnot, &[c, tg], depth)?;
                self.sequence(out, &[T, H, T, T], &[tg], depth)?;
            }
        }
        Ok(())
    }

    fn sequence(&mut self, out: &mut Vec<Instruction>, gates: &[NamedGate], t: &[usize], depth: u8) -> Result<()> {
        for &g in gates {
            self.gate(out, g, t, depth)?;
        }
        Ok(())
    }

    fn cleanup(&mut self, out: &mut Vec<Instruction>, q: usize, depth: u8) -> Result<()> {
        let mut body = Vec::new();
        match self.mode {
            Mode::Extended => self.gadget(&mut body, GadgetForm::SigmaXpPrepared, &[q], depth)?,
            // two σH gadgets: an identity with a uniformly random byproduct
            Mode::Strict => {
                self.gadget(&mut body, GadgetForm::SigmaH, &[q], depth)?;
                self.gadget(&mut body, GadgetForm::SigmaH, &[q], depth)?;
            }
        }
        out.push(Instruction::Cleanup { qubit: q, target: Letter::I, max_steps: DEFAULT_MAX_STEPS, body });
        Ok(())
    }

    fn gadget(&mut self, out: &mut Vec<Instruction>, form: GadgetForm, logical: &[usize], depth: u8) -> Result<()> {
        let depth = depth + 1;
        if depth > MAX_DEPTH {
            return Err(Error::Internal(format!("{form} expansion exceeds depth {MAX_DEPTH}")));
        }
        let recipe = form.recipe();
        out.push(Instruction::Expand {
            construction: Construction::Gadget(form),
            wires: logical.iter().map(|&q| Wire::Logical(q)).collect(),
            depth,
        });
        if let Some(pre) = recipe.pre_gate {
            self.gate(out, pre, &logical[..1], depth)?;
        }
        if form.kind() == GadgetKind::SigmaT {
            // T maps X-type frame letters outside the Pauli group
            self.cleanup(out, logical[0], depth)?;
        }
        let a = self.ancilla();
        let wire = |l: Local| match l {
            Local::Logical(i) => Wire::Logical(logical[i]),
            Local::Ancilla => Wire::Ancilla(a),
        };
        out.push(Instruction::Prepare { ancilla: a, axis: recipe.ancilla_prep });
        let mut regs: Vec<Vec<u32>> = Vec::with_capacity(recipe.steps.len());
        for step in &recipe.steps {
            let factors: Vec<(Wire, Axis)> = step.iter().map(|&(l, ax)| (wire(l), ax)).collect();
            regs.push(self.measure(out, factors, depth)?);
        }
        let c = recipe.consumed;
        out.push(Instruction::Discard { wire: wire(c.wire), axis: c.axis, parity: regs[c.step].clone() });
        for (i, o) in recipe.output.iter().enumerate() {
            if *o == Local::Ancilla {
                out.push(Instruction::Relabel { ancilla: a, logical: logical[i] });
            }
        }
        // the steps realise target · pre†; every pre gate used is self-inverse
        if let Some(pre) = recipe.pre_gate {
            out.push(Instruction::Conjugate { gate: pre, targets: logical[..1].to_vec() });
        }
        let target = form.kind().target();
        if target != NamedGate::I {
            out.push(Instruction::Conjugate { gate: target, targets: logical.to_vec() });
        }
        for (q, letter, idx) in recipe.byproduct.iter().rev() {
            out.push(Instruction::Frame {
                pauli: PauliString::single(self.n, logical[*q], *letter),
                parity: idx.iter().flat_map(|&i| regs[i].iter().copied()).collect(),
            });
        }
        Ok(())
    }

    /// Emit a measurement of `factors`, expanding it in strict mode. Returns
    /// the registers whose XOR is the outcome bit.
    fn measure(&mut self, out: &mut Vec<Instruction>, factors: Vec<(Wire, Axis)>, depth: u8) -> Result<Vec<u32>> {
        if self.mode == Mode::Extended {
            let register = self.register();
            out.push(Instruction::Measure { observable: factors, register, primitive: None });
            return Ok(vec![register]);
        }
        if let Some(p) = classify(&factors) {
            let register = self.register();
            out.push(Instruction::Measure { observable: factors, register, primitive: Some(p) });
            return Ok(vec![register]);
        }
        match factors.as_slice() {
            [(w, Axis::Xp)] => self.derived_xp(out, *w, depth),
            other => Err(Error::Internal(format!("no strict expansion for {}", describe(other)))),
        }
    }

    fn derived_xp(&mut self, out: &mut Vec<Instruction>, w: Wire, depth: u8) -> Result<Vec<u32>> {
        let depth = depth + 1;
        if depth > MAX_DEPTH {
            return Err(Error::Internal(format!("derived X′ expansion exceeds depth {MAX_DEPTH}")));
        }
        out.push(Instruction::Expand { construction: Construction::DerivedXp, wires: vec![w], depth });
        let b = self.ancilla();
        let (j, k) = (self.register(), self.register());
        out.push(Instruction::Prepare { ancilla: b, axis: Axis::Xp });
        out.push(Instruction::Measure {
            observable: vec![(Wire::Ancilla(b), Axis::X)],
            register: j,
            primitive: Some(Primitive::X),
        });
        out.push(Instruction::Measure {
            observable: vec![(Wire::Ancilla(b), Axis::X), (w, Axis::Xp)],
            register: k,
            primitive: Some(Primitive::XXp),
        });
        out.push(Instruction::Discard { wire: Wire::Ancilla(b), axis: Axis::X, parity: vec![j] });
        Ok(vec![j, k])
    }
}

/// Lower a unitary circuit to a measurement-only program.
pub fn compile_to_measurements(circuit: &Circuit, mode: Mode) -> Result<MeasurementProgram> {
    let mut l = Lowering { mode, n: circuit.n_qubits, next_ancilla: 0, next_register: 0 };
    let mut instructions = Vec::new();
    for (i, op) in circuit.ops.iter().enumerate() {
        match op {
            Op::Gate { gate, targets } => l.gate(&mut instructions, *gate, targets, 0)?,
            _ => return Err(Error::Compile(format!("op {}: only gates can be compiled", i + 1))),
        }
    }
    let program = MeasurementProgram { n_logical: circuit.n_qubits, mode, n_registers: l.next_register, instructions };
    if mode == Mode::Strict {
        program.check_strict().map_err(|e| Error::Internal(e.to_string()))?;
    }
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::circuit::parse_circuit;

    fn compile(text: &str, mode: Mode) -> MeasurementProgram {
        compile_to_measurements(&parse_circuit(text).unwrap(), mode).unwrap()
    }

    #[test]
    fn h_extended_has_three_measurements_one_ancilla() {
        let p = compile("qubits 1\nh 0", Mode::Extended);
        let s = p.stats();
        assert_eq!(s.measurements, 3);
        assert_eq!(s.ancillas, 1);
        assert_eq!(s.cleanups, 0);
    }

    #[test]
    fn pauli_is_a_frame_update_only() {
        for mode in [Mode::Extended, Mode::Strict] {
            let p = compile("qubits 1\nx 0", mode);
            assert_eq!(p.stats().measurements, 0);
            assert_eq!(
                p.instructions,
                vec![Instruction::Frame { pauli: PauliString::single(1, 0, Letter::X), parity: vec![] }]
            );
        }
    }

    #[test]
    fn strict_programs_are_structurally_strict() {
        for text in ["qubits 2\nh 0\ncnot 0 1", "qubits 1\nt 0", "qubits 2\nch 0 1\ng 1\nswap 0 1"] {
            let p = compile(text, Mode::Strict);
            p.check_strict().unwrap();
            assert!(p.measured().iter().all(|o| classify(o).is_some()));
            let e = compile(text, Mode::Extended);
            assert!(e.check_strict().is_err());
        }
    }

    #[test]
    fn ancillas_match_expansions() {
        for text in ["qubits 2\nh 0\ncnot 0 1\nt 1", "qubits 1\ng 0\nt 0"] {
            for mode in [Mode::Extended, Mode::Strict] {
                let s = compile(text, mode).stats();
                assert_eq!(s.ancillas, s.expansions, "{text} {mode}");
            }
        }
    }

    #[test]
    fn depth_stays_bounded() {
        let p = compile("qubits 2\nt 0\nch 0 1", Mode::Strict);
        let mut max = 0;
        walk(&p.instructions, &mut |i| {
            if let Instruction::Expand { depth, .. } = i {
                max = max.max(*depth);
            }
        });
        assert_eq!(max, MAX_DEPTH);
    }

    #[test]
    fn measurements_are_not_compiled() {
        let c = parse_circuit("qubits 1\nmeasure x 0").unwrap();
        assert!(matches!(compile_to_measurements(&c, Mode::Extended), Err(Error::Compile(_))));
    }

    #[test]
    fn jsonl_roundtrip() {
        let p = compile("qubits 2\nh 0\ncnot 0 1\nt 1", Mode::Strict);
        let text = p.to_jsonl();
        assert_eq!(text.lines().count(), p.instructions.len() + 1);
        assert_eq!(MeasurementProgram::from_jsonl(&text).unwrap(), p);
        assert!(text.contains("\"wire\":\"a0\"") || text.contains("\"a0\""));
    }

    #[test]
    fn wire_strings() {
        assert_eq!(Wire::try_from("q12".to_string()).unwrap(), Wire::Logical(12));
        assert_eq!(Wire::try_from("a3".to_string()).unwrap(), Wire::Ancilla(3));
        assert!(Wire::try_from("b1".to_string()).is_err());
        assert!(Wire::try_from(String::new()).is_err());
    }

    #[test]
    fn mode_parse() {
        assert_eq!("strict".parse::<Mode>().unwrap(), Mode::Strict);
        assert!("loose".parse::<Mode>().is_err());
    }
}
