//! Named gates, the phase-tracked Pauli group, strategy-parametrised tactics
//! and the single-qubit observables the gadgets measure.
//!
//! Letters follow the market notation: `X = σx`, `Xp = X′ = σz`,
//! `Xpp = X″ = σy`. Display output prints primes; identifiers use `p`/`pp`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance used when checking that a matrix is unitary.
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A power of `i`: the four phases a Pauli word can carry.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(p: i32) -> Self {
        Phase(p.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn conj(self) -> Self {
        Phase::from_power(-(self.0 as i32))
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        }
    }

    /// Nearest phase to a complex unit scalar, if it is within `tol` of one.
    pub fn from_complex(c: C64, tol: f64) -> Option<Self> {
        (0..4)
            .map(Phase)
            .find(|p| (p.to_complex() - c).norm() <= tol)
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        };
        f.write_str(s)
    }
}

impl From<Phase> for String {
    fn from(p: Phase) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Phase {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        match s.as_str() {
            "+1" | "1" => Ok(Phase::ONE),
            "+i" | "i" => Ok(Phase::I),
            "-1" => Ok(Phase::MINUS_ONE),
            "-i" => Ok(Phase::MINUS_I),
            other => Err(format!("unknown phase {other:?}")),
        }
    }
}

/// One tensor factor of a Pauli word.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    I,
    /// σx
    X,
    /// σz
    Xp,
    /// σy
    Xpp,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Xp, Letter::Xpp];

    /// Product `self · rhs` as (phase, letter).
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Letter) -> (Phase, Letter) {
        use Letter::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Xp) => (Phase::MINUS_I, Xpp),
            (Xp, X) => (Phase::I, Xpp),
            (Xp, Xpp) => (Phase::MINUS_I, X),
            (Xpp, Xp) => (Phase::I, X),
            (Xpp, X) => (Phase::MINUS_I, Xp),
            (X, Xpp) => (Phase::I, Xp),
            _ => unreachable!(),
        }
    }

    /// `(x, z)` exponents with `letter = i^{x·z} X^x Z^z`.
    pub fn xz(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Xp => (false, true),
            Letter::Xpp => (true, true),
        }
    }

    pub fn commutes_with(self, other: Letter) -> bool {
        self == Letter::I || other == Letter::I || self == other
    }

    pub fn matrix(self) -> Matrix {
        match self {
            Letter::I => Matrix::identity(2),
            other => Axis::from(other).matrix(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Letter::I => "I",
            Letter::X => "X",
            Letter::Xp => "X′",
            Letter::Xpp => "X″",
        }
    }

    pub fn ident(self) -> &'static str {
        match self {
            Letter::I => "i",
            Letter::X => "x",
            Letter::Xp => "xp",
            Letter::Xpp => "xpp",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" => Ok(Letter::I),
            "x" => Ok(Letter::X),
            "xp" | "z" => Ok(Letter::Xp),
            "xpp" | "y" => Ok(Letter::Xpp),
            other => invalid(format!("unknown Pauli letter {other:?}")),
        }
    }
}

/// A phase-tracked tensor word over {I, X, X′, X″}; qubit 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub phase: Phase,
    pub letters: Vec<Letter>,
}

impl PauliString {
    pub fn new(phase: Phase, letters: Vec<Letter>) -> Self {
        PauliString { phase, letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(Phase::ONE, vec![Letter::I; n])
    }

    /// `letter` on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = PauliString::identity(n);
        p.letters[q] = letter;
        p
    }

    /// Word built from `(qubit, letter)` pairs; unspecified qubits are `I`.
    pub fn from_sparse(n: usize, factors: &[(usize, Letter)]) -> Self {
        let mut p = PauliString::identity(n);
        for &(q, l) in factors {
            p.letters[q] = l;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == Letter::I)
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != Letter::I).count()
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Same letters, phase dropped.
    pub fn unsigned(&self) -> Self {
        self.clone().with_phase(Phase::ONE)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| !a.commutes_with(**b))
            .count();
        anti % 2 == 0
    }

    /// Group product `self · rhs`.
    pub fn try_mul(&self, rhs: &PauliString) -> Result<PauliString> {
        pauli_mul(self, rhs)
    }

    pub fn adjoint(&self) -> PauliString {
        self.clone().with_phase(self.phase.conj())
    }

    /// Restriction to the listed qubits, phase carried along.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        PauliString::new(self.phase, qubits.iter().map(|&q| self.letters[q]).collect())
    }

    /// Dense `2^n × 2^n` matrix including the phase.
    pub fn matrix(&self) -> Matrix {
        let mut m = Matrix::identity(1).scale(self.phase.to_complex());
        for l in &self.letters {
            m = m.kron(&l.matrix());
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.power() {
            0 => "",
            1 => "i·",
            2 => "-",
            _ => "-i·",
        };
        f.write_str(prefix)?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("⊗")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Product of two Pauli words of equal length, with exact phase.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    if a.len() != b.len() {
        return invalid(format!(
            "Pauli length mismatch: {} vs {}",
            a.len(),
            b.len()
        ));
    }
    let mut phase = a.phase * b.phase;
    let letters = a
        .letters
        .iter()
        .zip(&b.letters)
        .map(|(&x, &y)| {
            let (p, l) = x.mul(y);
            phase = phase * p;
            l
        })
        .collect();
    Ok(PauliString::new(phase, letters))
}

/// A single-qubit Hermitian involution: `n·σ` for a fixed unit axis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Xp,
    Xpp,
    /// `(X′ + X″)/√2`
    G,
    /// `T⁻¹ X T = (X − X″)/√2`
    TxT,
}

impl Axis {
    /// Bloch-axis components `(x, y, z)`.
    pub fn direction(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Xp => [0.0, 0.0, 1.0],
            Axis::Xpp => [0.0, 1.0, 0.0],
            Axis::G => [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            Axis::TxT => [FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0],
        }
    }

    pub fn matrix(self) -> Matrix {
        let [x, y, z] = self.direction();
        // x·σx + y·σy + z·σz
        Matrix::from_rows(&[
            vec![C64::new(z, 0.0), C64::new(x, -y)],
            vec![C64::new(x, y), C64::new(-z, 0.0)],
        ])
    }

    /// Normalised eigenvector with eigenvalue `sign` (±1).
    pub fn eigenvector(self, sign: i8) -> [C64; 2] {
        let [x, y, z] = self.direction();
        let s = f64::from(sign);
        // (n·σ − s)v = 0 ⇒ v ∝ (x − iy, s − z) or (s + z, x + iy)
        let a = [C64::new(s + z, 0.0), C64::new(x, y)];
        let b = [C64::new(x, -y), C64::new(s - z, 0.0)];
        let pick = if a[0].norm_sqr() + a[1].norm_sqr() >= b[0].norm_sqr() + b[1].norm_sqr() {
            a
        } else {
            b
        };
        let n = (pick[0].norm_sqr() + pick[1].norm_sqr()).sqrt();
        [pick[0] / n, pick[1] / n]
    }

    pub fn as_letter(self) -> Option<Letter> {
        match self {
            Axis::X => Some(Letter::X),
            Axis::Xp => Some(Letter::Xp),
            Axis::Xpp => Some(Letter::Xpp),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Axis::X => "X",
            Axis::Xp => "X′",
            Axis::Xpp => "X″",
            Axis::G => "G",
            Axis::TxT => "T⁻¹XT",
        }
    }
}

impl From<Letter> for Axis {
    /// Panics on `I`, which is not an observable axis.
    fn from(l: Letter) -> Axis {
        match l {
            Letter::X => Axis::X,
            Letter::Xp => Axis::Xp,
            Letter::Xpp => Axis::Xpp,
            Letter::I => panic!("identity has no axis"),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Dense complex square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

/// Matrices handed to `apply_gate`; unitarity is checked on use.
pub type UnitaryMatrix = Matrix;

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Matrix { dim, data: rows.concat() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Matrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect::<Vec<_>>(),
        )
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Matrix::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.dim + c] = v;
    }

    /// Number of qubits the matrix acts on, if its dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * rhs.data[k * d + c];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        out
    }

    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (a, b) = (self.dim, rhs.dim);
        let d = a * b;
        let mut out = Matrix::zeros(d);
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.data[r1 * a + c1];
                for r2 in 0..b {
                    for c2 in 0..b {
                        out.data[(r1 * b + r2) * d + c1 * b + c2] = x * rhs.data[r2 * b + c2];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix { dim: self.dim, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.scale(-ONE))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self − rhs`.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, rhs: &Matrix, tol: f64) -> bool {
        self.dim == rhs.dim && self.max_abs_diff(rhs) <= tol
    }

    /// `self = c · rhs` for some unit scalar `c`; returns `c`.
    pub fn equal_up_to_phase(&self, rhs: &Matrix, tol: f64) -> Option<C64> {
        if self.dim != rhs.dim {
            return None;
        }
        let (idx, _) = rhs
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if rhs.data[idx].norm() <= tol {
            return None;
        }
        let c = self.data[idx] / rhs.data[idx];
        if (c.norm() - 1.0).abs() > tol {
            return None;
        }
        self.approx_eq(&rhs.scale(c), tol).then_some(c)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.matmul(&self.adjoint()).approx_eq(&Matrix::identity(self.dim), tol)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }
}

/// Gates known by name.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedGate {
    I,
    X,
    Xp,
    Xpp,
    H,
    G,
    T,
    S,
    Cnot,
    /// controlled-Hadamard
    Ch,
    Swap,
}

impl NamedGate {
    pub const ALL: [NamedGate; 11] = [
        NamedGate::I,
        NamedGate::X,
        NamedGate::Xp,
        NamedGate::Xpp,
        NamedGate::H,
        NamedGate::G,
        NamedGate::T,
        NamedGate::S,
        NamedGate::Cnot,
        NamedGate::Ch,
        NamedGate::Swap,
    ];

    pub fn arity(self) -> usize {
        match self {
            NamedGate::Cnot | NamedGate::Ch | NamedGate::Swap => 2,
            _ => 1,
        }
    }

    /// Lowercase name used in the circuit text format.
    pub fn name(self) -> &'static str {
        match self {
            NamedGate::I => "i",
            NamedGate::X => "x",
            NamedGate::Xp => "xp",
            NamedGate::Xpp => "xpp",
            NamedGate::H => "h",
            NamedGate::G => "g",
            NamedGate::T => "t",
            NamedGate::S => "s",
            NamedGate::Cnot => "cnot",
            NamedGate::Ch => "ch",
            NamedGate::Swap => "swap",
        }
    }

    pub fn as_letter(self) -> Option<Letter> {
        match self {
            NamedGate::I => Some(Letter::I),
            NamedGate::X => Some(Letter::X),
            NamedGate::Xp => Some(Letter::Xp),
            NamedGate::Xpp => Some(Letter::Xpp),
            _ => None,
        }
    }

    pub fn matrix(self) -> Matrix {
        let h = FRAC_1_SQRT_2;
        match self {
            NamedGate::I => Matrix::identity(2),
            NamedGate::X => Letter::X.matrix(),
            NamedGate::Xp => Letter::Xp.matrix(),
            NamedGate::Xpp => Letter::Xpp.matrix(),
            NamedGate::H => Matrix::from_real_rows(&[&[h, h], &[h, -h]]),
            NamedGate::G => Axis::G.matrix(),
            NamedGate::T => Matrix::diag(&[ONE, C64::new(h, h)]),
            NamedGate::S => Matrix::diag(&[ONE, I]),
            NamedGate::Cnot => Matrix::from_real_rows(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ]),
            NamedGate::Ch => Matrix::from_real_rows(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, h, h],
                &[0.0, 0.0, h, -h],
            ]),
            NamedGate::Swap => Matrix::from_real_rows(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
            ]),
        }
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        NamedGate::ALL
            .into_iter()
            .find(|g| g.name() == lower)
            .ok_or_else(|| Error::InvalidInput(format!("unknown gate {s:?}")))
    }
}

/// Matrix of a gate given by name (`X`, `Xp`, `Xpp`, `H`, `G`, `T`, `S`,
/// `CNOT`, `CH`, `SWAP`, `I`; case-insensitive).
pub fn named_gate(name: &str) -> Result<Matrix> {
    Ok(name.parse::<NamedGate>()?.matrix())
}

/// A strategy `|z⟩ = |0⟩ + z|1⟩`, with `z = ∞` standing for `|1⟩`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Strategy {
    Finite(C64),
    Infinity,
}

impl Strategy {
    pub fn real(x: f64) -> Self {
        Strategy::Finite(C64::new(x, 0.0))
    }

    /// Normalised state vector components `(⟨0|z⟩, ⟨1|z⟩)`.
    pub fn amplitudes(self) -> [C64; 2] {
        match self {
            Strategy::Infinity => [ZERO, ONE],
            Strategy::Finite(z) => {
                let n = (1.0 + z.norm_sqr()).sqrt();
                [ONE / n, z / n]
            }
        }
    }
}

/// Expectation values `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of the strategy.
pub fn bloch_vector(s: Strategy) -> [f64; 3] {
    match s {
        Strategy::Infinity => [0.0, 0.0, -1.0],
        Strategy::Finite(z) => {
            let n = 1.0 + z.norm_sqr();
            [2.0 * z.re / n, 2.0 * z.im / n, (1.0 - z.norm_sqr()) / n]
        }
    }
}

/// `U_{z,α} = I cos α + i (σ·E_z(σ)) sin α`.
pub fn u_z_alpha(s: Strategy, alpha: f64) -> Matrix {
    let [x, y, z] = bloch_vector(s);
    let (sin, cos) = alpha.sin_cos();
    let sigma = Letter::X
        .matrix()
        .scale(C64::new(x, 0.0))
        .add(&Letter::Xpp.matrix().scale(C64::new(y, 0.0)))
        .add(&Letter::Xp.matrix().scale(C64::new(z, 0.0)));
    Matrix::identity(2)
        .scale(C64::new(cos, 0.0))
        .add(&sigma.scale(C64::new(0.0, sin)))
}

/// Images of `X_k` and `Z_k` for each target `k` under a Clifford gate.
fn generator_images(gate: NamedGate) -> Option<Vec<(PauliString, PauliString)>> {
    use Letter::*;
    let p = |phase: Phase, ls: &[Letter]| PauliString::new(phase, ls.to_vec());
    Some(match gate {
        NamedGate::I => vec![(p(Phase::ONE, &[X]), p(Phase::ONE, &[Xp]))],
        NamedGate::X => vec![(p(Phase::ONE, &[X]), p(Phase::MINUS_ONE, &[Xp]))],
        NamedGate::Xp => vec![(p(Phase::MINUS_ONE, &[X]), p(Phase::ONE, &[Xp]))],
        NamedGate::Xpp => vec![(p(Phase::MINUS_ONE, &[X]), p(Phase::MINUS_ONE, &[Xp]))],
        NamedGate::H => vec![(p(Phase::ONE, &[Xp]), p(Phase::ONE, &[X]))],
        NamedGate::G => vec![(p(Phase::MINUS_ONE, &[X]), p(Phase::ONE, &[Xpp]))],
        NamedGate::S => vec![(p(Phase::ONE, &[Xpp]), p(Phase::ONE, &[Xp]))],
        NamedGate::Cnot => vec![
            (p(Phase::ONE, &[X, X]), p(Phase::ONE, &[Xp, I])),
            (p(Phase::ONE, &[I, X]), p(Phase::ONE, &[Xp, Xp])),
        ],
        NamedGate::Swap => vec![
            (p(Phase::ONE, &[I, X]), p(Phase::ONE, &[I, Xp])),
            (p(Phase::ONE, &[X, I]), p(Phase::ONE, &[Xp, I])),
        ],
        NamedGate::T | NamedGate::Ch => return None,
    })
}

/// Decompose a dense matrix on `k` qubits as a single phased Pauli word.
pub fn matrix_as_pauli(m: &Matrix, tol: f64) -> Option<PauliString> {
    let k = m.n_qubits()?;
    let d = m.dim() as f64;
    let mut found: Option<PauliString> = None;
    for code in 0..(1usize << (2 * k)) {
        let letters: Vec<Letter> = (0..k)
            .map(|q| Letter::ALL[(code >> (2 * (k - 1 - q))) & 3])
            .collect();
        let word = PauliString::new(Phase::ONE, letters);
        let coeff = word.matrix().adjoint().matmul(m).trace() / d;
        if coeff.norm() <= tol {
            continue;
        }
        let phase = Phase::from_complex(coeff, tol)?;
        if found.is_some() {
            return None;
        }
        found = Some(word.with_phase(phase));
    }
    found
}

/// `gate · pauli · gate†` with the gate acting on `targets`.
///
/// H, G, S, CNOT, SWAP and the Paulis are handled symbolically. T and CH are
/// not Clifford; they are conjugated densely and the result is accepted only
/// when it is still a Pauli word (e.g. X′ through T).
pub fn conjugate_by(pauli: &PauliString, gate: NamedGate, targets: &[usize]) -> Result<PauliString> {
    let n = pauli.len();
    if targets.len() != gate.arity() {
        return invalid(format!("{gate} expects {} targets, got {}", gate.arity(), targets.len()));
    }
    if targets.iter().any(|&t| t >= n) {
        return invalid(format!("target out of range for {n}-qubit Pauli"));
    }
    if targets.len() == 2 && targets[0] == targets[1] {
        return invalid("duplicate targets");
    }
    let local = pauli.restrict(targets);
    let image = match generator_images(gate) {
        Some(images) => {
            let k = targets.len();
            let mut acc = PauliString::identity(k).with_phase(local.phase);
            for (q, &l) in local.letters.iter().enumerate() {
                let (x, z) = l.xz();
                if x && z {
                    // Y = i X Z
                    acc.phase = acc.phase * Phase::I;
                }
                if x {
                    acc = pauli_mul(&acc, &images[q].0)?;
                }
                if z {
                    acc = pauli_mul(&acc, &images[q].1)?;
                }
            }
            acc
        }
        None => {
            let u = gate.matrix();
            let m = u.matmul(&local.matrix()).matmul(&u.adjoint());
            matrix_as_pauli(&m, 1e-12).ok_or_else(|| Error::NotPauli {
                pauli: local.to_string(),
                gate: gate.to_string(),
            })?
        }
    };
    let mut out = pauli.clone();
    out.phase = image.phase;
    for (i, &t) in targets.iter().enumerate() {
        out.letters[t] = image.letters[i];
    }
    Ok(out)
}
