//! Measurement-only gadgets.
//!
//! Each gadget appends one fresh ancilla, measures a fixed sequence of
//! observables and leaves the logical state transformed by its target unitary
//! up to a Pauli byproduct that is a closed-form function of the outcomes.
//! Byproduct exponents use `b(o) = (1 − o)/2`, so a product of outcomes such
//! as `j·l` becomes the XOR `b(j) ⊕ b(l)`.
//!
//! The consumed wire (the original logical wire for single-qubit gadgets,
//! the ancilla for CNOT) finishes in a known eigenstate of the last
//! observable measured on it and is removed exactly. Logical indices are
//! stable: when the state migrates to the ancilla wire, that wire takes the
//! logical wire's place.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{pauli_mul, Axis, Letter, NamedGate, PauliString};
use crate::error::{invalid, Error, Result};
use crate::statevec::{outcome_bit, MeasurementOutcome, Observable, StateVector};

/// The unitary a gadget implements.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetKind {
    SigmaH,
    Sigma,
    SigmaT,
    SigmaG,
    Cnot,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 5] = [
        GadgetKind::SigmaH,
        GadgetKind::Sigma,
        GadgetKind::SigmaT,
        GadgetKind::SigmaG,
        GadgetKind::Cnot,
    ];

    pub fn target(self) -> NamedGate {
        match self {
            GadgetKind::SigmaH => NamedGate::H,
            GadgetKind::Sigma => NamedGate::I,
            GadgetKind::SigmaT => NamedGate::T,
            GadgetKind::SigmaG => NamedGate::G,
            GadgetKind::Cnot => NamedGate::Cnot,
        }
    }

    /// The form used by the named `gadget_*` entry points.
    pub fn default_form(self) -> GadgetForm {
        match self {
            GadgetKind::SigmaH => GadgetForm::SigmaH,
            GadgetKind::Sigma => GadgetForm::SigmaXpPrepared,
            GadgetKind::SigmaT => GadgetForm::SigmaTRotated,
            GadgetKind::SigmaG => GadgetForm::SigmaG,
            GadgetKind::Cnot => GadgetForm::Cnot,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::SigmaH => "sigma_h",
            GadgetKind::Sigma => "sigma",
            GadgetKind::SigmaT => "sigma_t",
            GadgetKind::SigmaG => "sigma_g",
            GadgetKind::Cnot => "cnot",
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete measurement pattern.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GadgetForm {
    /// ancilla X, X⊗X′ on (logical, ancilla), X′ on logical
    SigmaH,
    /// σH with supply and demand exchanged: ancilla X′, X′⊗X, X on logical
    SigmaHSwapped,
    /// H followed by the σH pattern
    SigmaViaH,
    /// ancilla X, X′⊗X′, X on logical
    SigmaXPrepared,
    /// ancilla X′, X⊗X, X′ on logical
    SigmaXpPrepared,
    /// ancilla X, X′⊗X′, T⁻¹XT on logical
    SigmaTRotated,
    /// H, then ancilla X, X⊗X′, G on logical
    SigmaTViaG,
    /// ancilla X′, X′⊗X″, X″ on logical
    SigmaG,
    /// ancilla X, X′⊗X on (ancilla, target), X′⊗X on (control, ancilla), ancilla X′
    Cnot,
}

impl GadgetForm {
    pub const ALL: [GadgetForm; 9] = [
        GadgetForm::SigmaH,
        GadgetForm::SigmaHSwapped,
        GadgetForm::SigmaViaH,
        GadgetForm::SigmaXPrepared,
        GadgetForm::SigmaXpPrepared,
        GadgetForm::SigmaTRotated,
        GadgetForm::SigmaTViaG,
        GadgetForm::SigmaG,
        GadgetForm::Cnot,
    ];

    pub fn kind(self) -> GadgetKind {
        match self {
            GadgetForm::SigmaH | GadgetForm::SigmaHSwapped => GadgetKind::SigmaH,
            GadgetForm::SigmaViaH | GadgetForm::SigmaXPrepared | GadgetForm::SigmaXpPrepared => {
                GadgetKind::Sigma
            }
            GadgetForm::SigmaTRotated | GadgetForm::SigmaTViaG => GadgetKind::SigmaT,
            GadgetForm::SigmaG => GadgetKind::SigmaG,
            GadgetForm::Cnot => GadgetKind::Cnot,
        }
    }

    pub fn recipe(self) -> Recipe {
        use Axis::*;
        use Local::{Ancilla as A, Logical as L};
        let l0 = L(0);
        let single = |prep: Axis,
                      pre: Option<NamedGate>,
                      steps: Vec<Vec<(Local, Axis)>>,
                      byproduct: Vec<(usize, Letter, Vec<usize>)>| {
            let last = steps[2][0].1;
            Recipe {
                form: self,
                arity: 1,
                ancilla_prep: prep,
                pre_gate: pre,
                steps,
                byproduct,
                consumed: Consumed { wire: l0, axis: last, step: 2 },
                output: vec![A],
            }
        };
        let sigma_h_steps = || vec![vec![(A, X)], vec![(l0, X), (A, Xp)], vec![(l0, Xp)]];
        // σx^{b(k)} σz^{b(j·l)}
        let xk_zjl = || vec![(0, Letter::X, vec![1]), (0, Letter::Xp, vec![0, 2])];
        // σx^{b(j·l)} σz^{b(k)}
        let xjl_zk = || vec![(0, Letter::X, vec![0, 2]), (0, Letter::Xp, vec![1])];
        match self {
            GadgetForm::SigmaH => single(Xp, None, sigma_h_steps(), xk_zjl()),
            GadgetForm::SigmaHSwapped => single(
                X,
                None,
                vec![vec![(A, Xp)], vec![(l0, Xp), (A, X)], vec![(l0, X)]],
                xjl_zk(),
            ),
            GadgetForm::SigmaViaH => single(Xp, Some(NamedGate::H), sigma_h_steps(), xk_zjl()),
            GadgetForm::SigmaXPrepared => single(
                Xp,
                None,
                vec![vec![(A, X)], vec![(l0, Xp), (A, Xp)], vec![(l0, X)]],
                xk_zjl(),
            ),
            GadgetForm::SigmaXpPrepared => single(
                X,
                None,
                vec![vec![(A, Xp)], vec![(l0, X), (A, X)], vec![(l0, Xp)]],
                xjl_zk(),
            ),
            GadgetForm::SigmaTRotated => single(
                Xp,
                None,
                vec![vec![(A, X)], vec![(l0, Xp), (A, Xp)], vec![(l0, TxT)]],
                xk_zjl(),
            ),
            GadgetForm::SigmaTViaG => single(
                Xp,
                Some(NamedGate::H),
                vec![vec![(A, X)], vec![(l0, X), (A, Xp)], vec![(l0, G)]],
                xk_zjl(),
            ),
            // cyclic image of σH: X′^{b(k)} X″^{b(j·l)}
            GadgetForm::SigmaG => single(
                X,
                None,
                vec![vec![(A, Xp)], vec![(l0, Xp), (A, Xpp)], vec![(l0, Xpp)]],
                vec![(0, Letter::Xp, vec![1]), (0, Letter::Xpp, vec![0, 2])],
            ),
            // σz^{b(m·k)} ⊗ σx^{b(l·j)}
            GadgetForm::Cnot => Recipe {
                form: self,
                arity: 2,
                ancilla_prep: Xp,
                pre_gate: None,
                steps: vec![
                    vec![(A, X)],
                    vec![(A, Xp), (L(1), X)],
                    vec![(L(0), Xp), (A, X)],
                    vec![(A, Xp)],
                ],
                byproduct: vec![(0, Letter::Xp, vec![1, 3]), (1, Letter::X, vec![0, 2])],
                consumed: Consumed { wire: A, axis: Xp, step: 3 },
                output: vec![L(0), L(1)],
            },
        }
    }
}

impl fmt::Display for GadgetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A wire local to one gadget application.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Local {
    Logical(usize),
    Ancilla,
}

/// The wire a gadget disposes of and the eigenstate it is left in.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Consumed {
    pub wire: Local,
    pub axis: Axis,
    /// Outcome index fixing the eigenvalue.
    pub step: usize,
}

/// Static description of a gadget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub form: GadgetForm,
    pub arity: usize,
    /// The fresh ancilla starts in the +1 eigenstate of this axis, chosen
    /// unbiased with respect to the first ancilla measurement.
    pub ancilla_prep: Axis,
    /// Unitary applied to logical 0 before the measurements.
    pub pre_gate: Option<NamedGate>,
    pub steps: Vec<Vec<(Local, Axis)>>,
    /// Byproduct factors `(logical, letter, outcome indices)`, multiplied in
    /// order; each letter is raised to the XOR of the listed outcome bits.
    pub byproduct: Vec<(usize, Letter, Vec<usize>)>,
    pub consumed: Consumed,
    /// Wire holding each logical qubit afterwards.
    pub output: Vec<Local>,
}

impl Recipe {
    pub fn n_measurements(&self) -> usize {
        self.steps.len()
    }
}

/// Eigenstate a removed wire was left in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residue {
    pub wire: Local,
    pub axis: Axis,
    pub eigenvalue: i8,
}

impl Residue {
    pub fn bit(&self) -> u8 {
        outcome_bit(self.eigenvalue)
    }
}

/// Outcomes, predicted byproduct and post-state of one gadget run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetResult {
    pub form: GadgetForm,
    pub outcomes: Vec<MeasurementOutcome>,
    /// Byproduct over the whole register (identity off the gadget's qubits).
    pub byproduct: PauliString,
    pub post_state: StateVector,
    pub ancilla_residue: Vec<Residue>,
}

impl GadgetResult {
    pub fn eigenvalues(&self) -> Vec<i8> {
        self.outcomes.iter().map(|o| o.eigenvalue).collect()
    }

    pub fn residue_bits(&self) -> String {
        self.ancilla_residue.iter().map(|r| char::from(b'0' + r.bit())).collect()
    }
}

fn parity(outcomes: &[i8], idx: &[usize]) -> u8 {
    idx.iter().fold(0, |acc, &i| acc ^ outcome_bit(outcomes[i]))
}

/// Closed-form byproduct of `form` on its own `arity` qubits.
pub fn predicted_byproduct(form: GadgetForm, outcomes: &[i8]) -> Result<PauliString> {
    let recipe = form.recipe();
    if outcomes.len() != recipe.n_measurements() {
        return invalid(format!(
            "{form} takes {} outcomes, got {}",
            recipe.n_measurements(),
            outcomes.len()
        ));
    }
    if outcomes.iter().any(|&o| o != 1 && o != -1) {
        return invalid("outcomes must be ±1");
    }
    let mut acc = PauliString::identity(recipe.arity);
    for (q, letter, idx) in &recipe.byproduct {
        if parity(outcomes, idx) == 1 {
            acc = pauli_mul(&acc, &PauliString::single(recipe.arity, *q, *letter))?;
        }
    }
    Ok(acc)
}

fn check_logical(state: &StateVector, logical: &[usize], arity: usize) -> Result<()> {
    if logical.len() != arity {
        return invalid(format!("gadget acts on {arity} qubits, got {}", logical.len()));
    }
    for (i, &q) in logical.iter().enumerate() {
        if q >= state.n_qubits() {
            return invalid(format!("qubit {q} out of range for {} qubits", state.n_qubits()));
        }
        if logical[..i].contains(&q) {
            return invalid("control and target must differ");
        }
    }
    Ok(())
}

fn check_forced(forced: Option<&[i8]>, len: usize) -> Result<()> {
    if let Some(f) = forced {
        if f.len() != len {
            return invalid(format!("expected {len} forced outcomes, got {}", f.len()));
        }
    }
    Ok(())
}

/// Run `form` on `logical` qubits of `state`.
pub fn run_gadget<R: Rng + ?Sized>(
    form: GadgetForm,
    state: &StateVector,
    logical: &[usize],
    forced: Option<&[i8]>,
    rng: &mut R,
) -> Result<GadgetResult> {
    let recipe = form.recipe();
    check_logical(state, logical, recipe.arity)?;
    check_forced(forced, recipe.n_measurements())?;
    let n = state.n_qubits();
    let wire = |l: Local| match l {
        Local::Logical(i) => logical[i],
        Local::Ancilla => n,
    };

    let mut st = state.append_qubit(recipe.ancilla_prep.eigenvector(1))?;
    if let Some(g) = recipe.pre_gate {
        st.apply_gate_mut(&g.matrix(), &[logical[0]])?;
    }
    let mut outcomes = Vec::with_capacity(recipe.steps.len());
    for (i, step) in recipe.steps.iter().enumerate() {
        let obs = Observable::new(1, step.iter().map(|&(l, a)| (wire(l), a)).collect())?;
        let (o, post) = st.measure_with(&obs, forced.map(|f| f[i]), rng)?;
        outcomes.push(o);
        st = post;
    }
    let values: Vec<i8> = outcomes.iter().map(|o| o.eigenvalue).collect();

    let local_byproduct = predicted_byproduct(form, &values)?;
    let mut byproduct = PauliString::identity(n).with_phase(local_byproduct.phase);
    for (i, &q) in logical.iter().enumerate() {
        byproduct.letters[q] = local_byproduct.letters[i];
    }

    let c = recipe.consumed;
    let eigenvalue = values[c.step];
    let removed = wire(c.wire);
    st = st.remove_qubit(removed, c.axis.eigenvector(eigenvalue))?;
    for (i, out) in recipe.output.iter().enumerate() {
        if *out == Local::Ancilla {
            if c.wire != Local::Logical(i) {
                return Err(Error::Internal(format!("{form}: relabel without consuming logical {i}")));
            }
            // ancilla now sits last; slot it into the freed position
            st = st.move_qubit(n - 1, logical[i])?;
        }
    }

    Ok(GadgetResult {
        form,
        outcomes,
        byproduct,
        post_state: st,
        ancilla_residue: vec![Residue { wire: c.wire, axis: c.axis, eigenvalue }],
    })
}

/// `byproduct · target · input`, the state a gadget run must reproduce.
pub fn expected_output(form: GadgetForm, input: &StateVector, logical: &[usize], byproduct: &PauliString) -> Result<StateVector> {
    let ideal = input.apply_gate(&form.kind().target().matrix(), logical)?;
    ideal.apply_pauli(byproduct)
}

/// Fidelity between a gadget's post-state and `byproduct · target · input`.
pub fn contract_fidelity(input: &StateVector, logical: &[usize], result: &GadgetResult) -> Result<f64> {
    let expected = expected_output(result.form, input, logical, &result.byproduct)?;
    expected.fidelity(&result.post_state)
}

pub fn gadget_sigma_h<R: Rng + ?Sized>(state: &StateVector, target: usize, forced: Option<&[i8]>, rng: &mut R) -> Result<GadgetResult> {
    run_gadget(GadgetForm::SigmaH, state, &[target], forced, rng)
}

pub fn gadget_sigma<R: Rng + ?Sized>(state: &StateVector, target: usize, forced: Option<&[i8]>, rng: &mut R) -> Result<GadgetResult> {
    run_gadget(GadgetForm::SigmaXpPrepared, state, &[target], forced, rng)
}

pub fn gadget_sigma_t<R: Rng + ?Sized>(state: &StateVector, target: usize, forced: Option<&[i8]>, rng: &mut R) -> Result<GadgetResult> {
    run_gadget(GadgetForm::SigmaTRotated, state, &[target], forced, rng)
}

pub fn gadget_sigma_g<R: Rng + ?Sized>(state: &StateVector, target: usize, forced: Option<&[i8]>, rng: &mut R) -> Result<GadgetResult> {
    run_gadget(GadgetForm::SigmaG, state, &[target], forced, rng)
}

pub fn gadget_cnot<R: Rng + ?Sized>(
    state: &StateVector,
    control: usize,
    target: usize,
    forced: Option<&[i8]>,
    rng: &mut R,
) -> Result<GadgetResult> {
    if control == target {
        return invalid("control and target must differ");
    }
    run_gadget(GadgetForm::Cnot, state, &[control, target], forced, rng)
}

/// X′ on `target` obtained from X on a fresh ancilla followed by X⊗X′ on
/// (ancilla, target). The reported eigenvalue is `j·k`; the ancilla is left
/// in the X eigenstate `j` and removed.
pub fn measure_xprime_derived<R: Rng + ?Sized>(
    state: &StateVector,
    target: usize,
    forced: Option<&[i8]>,
    rng: &mut R,
) -> Result<(MeasurementOutcome, StateVector)> {
    check_logical(state, &[target], 1)?;
    check_forced(forced, 2)?;
    let n = state.n_qubits();
    let st = state.append_qubit(Axis::Xp.eigenvector(1))?;
    let (j, st) = st.measure_with(&Observable::single(n, Axis::X), forced.map(|f| f[0]), rng)?;
    let pair = Observable::pair((n, Axis::X), (target, Axis::Xp))?;
    let (k, st) = st.measure_with(&pair, forced.map(|f| f[1]), rng)?;
    let st = st.remove_qubit(n, Axis::X.eigenvector(j.eigenvalue))?;
    Ok((
        MeasurementOutcome {
            eigenvalue: j.eigenvalue * k.eigenvalue,
            probability: k.probability,
            observable: Observable::single(target, Axis::Xp),
        },
        st,
    ))
}

/// Same-side parity measurements.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityKind {
    /// X⊗X, via H on the second wire around X⊗X′
    XX,
    /// X′⊗X′, via H on the first wire around X⊗X′
    XpXp,
}

/// X⊗X or X′⊗X′ on `pair`, realised as an H-conjugated X⊗X′ measurement.
pub fn measure_parity_conjugated<R: Rng + ?Sized>(
    state: &StateVector,
    pair: (usize, usize),
    kind: ParityKind,
    forced: Option<i8>,
    rng: &mut R,
) -> Result<(MeasurementOutcome, StateVector)> {
    let (a, b) = pair;
    check_logical(state, &[a, b], 2)?;
    let h = NamedGate::H.matrix();
    let (wire, reported) = match kind {
        ParityKind::XX => (b, Observable::pair((a, Axis::X), (b, Axis::X))?),
        ParityKind::XpXp => (a, Observable::pair((a, Axis::Xp), (b, Axis::Xp))?),
    };
    let st = state.apply_gate(&h, &[wire])?;
    let (o, st) = st.measure_with(&Observable::pair((a, Axis::X), (b, Axis::Xp))?, forced, rng)?;
    let st = st.apply_gate(&h, &[wire])?;
    Ok((MeasurementOutcome { observable: reported, ..o }, st))
}

/// Controlled-G assembled as `(H G) · CH · (G H)` on the target. That
/// sandwich alone is controlled-(HGHGH) = controlled-(−G), so an X′ on the
/// control removes the sign.
pub fn controlled_g_via_ch(state: &StateVector, control: usize, target: usize) -> Result<StateVector> {
    let (h, g) = (NamedGate::H.matrix(), NamedGate::G.matrix());
    let mut st = state.apply_gate(&h, &[target])?;
    st.apply_gate_mut(&g, &[target])?;
    st.apply_gate_mut(&NamedGate::Ch.matrix(), &[control, target])?;
    st.apply_gate_mut(&g, &[target])?;
    st.apply_gate_mut(&h, &[target])?;
    st.apply_gate_mut(&NamedGate::Xp.matrix(), &[control])?;
    Ok(st)
}

/// Measure G on `target` with a Hadamard test: fresh `|0⟩` ancilla, H,
/// controlled-G, H, meter. Ancilla `|0⟩` reports eigenvalue +1.
pub fn measure_g_via_hghgh<R: Rng + ?Sized>(
    state: &StateVector,
    target: usize,
    forced: Option<i8>,
    rng: &mut R,
) -> Result<(MeasurementOutcome, StateVector)> {
    check_logical(state, &[target], 1)?;
    let n = state.n_qubits();
    let h = NamedGate::H.matrix();
    let mut st = state.append_qubit(Axis::Xp.eigenvector(1))?;
    st.apply_gate_mut(&h, &[n])?;
    st = controlled_g_via_ch(&st, n, target)?;
    st.apply_gate_mut(&h, &[n])?;
    let (o, st) = st.measure_with(&Observable::single(n, Axis::Xp), forced, rng)?;
    let st = st.remove_qubit(n, Axis::Xp.eigenvector(o.eigenvalue))?;
    Ok((
        MeasurementOutcome { observable: Observable::single(target, Axis::G), ..o },
        st,
    ))
}

/// All `2^len` outcome patterns, `+1` first.
pub fn outcome_patterns(len: usize) -> Vec<Vec<i8>> {
    (0..1usize << len)
        .map(|m| (0..len).map(|i| if m >> (len - 1 - i) & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}
