//! Independent dense-matrix oracle for integration tests. Builds every
//! operator from explicit 2×2 blocks and Kronecker products; shares no code
//! with the library's matrix type.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use tactics_core::statevec::StateVector;

pub type M = Vec<Vec<C>>;

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn id2() -> M {
    vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]]
}
pub fn sx() -> M {
    vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]
}
pub fn sy() -> M {
    vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]
}
pub fn sz() -> M {
    vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]]
}
pub fn had() -> M {
    vec![vec![c(R, 0.), c(R, 0.)], vec![c(R, 0.), c(-R, 0.)]]
}
pub fn tgate() -> M {
    vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(R, R)]]
}
/// (σz + σy)/√2
pub fn ggate() -> M {
    vec![vec![c(R, 0.), c(0., -R)], vec![c(0., R), c(-R, 0.)]]
}
pub fn cnot() -> M {
    let mut m = zeros(4);
    m[0][0] = c(1., 0.);
    m[1][1] = c(1., 0.);
    m[2][3] = c(1., 0.);
    m[3][2] = c(1., 0.);
    m
}

pub fn zeros(d: usize) -> M {
    vec![vec![c(0., 0.); d]; d]
}

pub fn identity(d: usize) -> M {
    let mut m = zeros(d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1., 0.);
    }
    m
}

pub fn kron(a: &M, b: &M) -> M {
    let (da, db) = (a.len(), b.len());
    let mut m = zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    m[i * db + k][j * db + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    m
}

pub fn mul(a: &M, b: &M) -> M {
    let d = a.len();
    let mut m = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0., 0.) {
                continue;
            }
            for j in 0..d {
                m[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    m
}

pub fn dagger(a: &M) -> M {
    let d = a.len();
    let mut m = zeros(d);
    for i in 0..d {
        for j in 0..d {
            m[i][j] = a[j][i].conj();
        }
    }
    m
}

pub fn scale(a: &M, s: C) -> M {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn add(a: &M, b: &M) -> M {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

/// `ops[0] ⊗ ops[1] ⊗ …`
pub fn tensor(ops: &[M]) -> M {
    ops.iter().skip(1).fold(ops[0].clone(), |acc, m| kron(&acc, m))
}

/// Single-qubit `u` on qubit `q` of `n`.
pub fn on(n: usize, q: usize, u: &M) -> M {
    let ops: Vec<M> = (0..n).map(|i| if i == q { u.clone() } else { id2() }).collect();
    tensor(&ops)
}

/// Swap qubits `a` and `b` of `n` as a permutation matrix.
#[allow(clippy::needless_range_loop)]
pub fn swap_perm(n: usize, a: usize, b: usize) -> M {
    let d = 1 << n;
    let mut m = zeros(d);
    for i in 0..d {
        let (ba, bb) = ((i >> (n - 1 - a)) & 1, (i >> (n - 1 - b)) & 1);
        let mut j = i & !(1 << (n - 1 - a)) & !(1 << (n - 1 - b));
        j |= ba << (n - 1 - b);
        j |= bb << (n - 1 - a);
        m[j][i] = c(1., 0.);
    }
    m
}

/// A two-qubit gate on `(a, b)` of `n`, by conjugating the adjacent
/// placement on `(0, 1)` with qubit swaps.
pub fn on2(n: usize, a: usize, b: usize, u: &M) -> M {
    let mut rest = vec![u.clone()];
    rest.extend((2..n).map(|_| id2()));
    let placed = tensor(&rest);
    // move a → 0 then b → 1
    let p1 = swap_perm(n, 0, a);
    let b1 = if b == 0 { a } else { b };
    let p2 = swap_perm(n, 1, b1);
    let p = mul(&p2, &p1);
    mul(&dagger(&p), &mul(&placed, &p))
}

pub fn apply(m: &M, v: &[C]) -> Vec<C> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn vec_of(s: &StateVector) -> Vec<C> {
    s.amplitudes().to_vec()
}

/// `|⟨a|b⟩|²` for normalised vectors.
pub fn fidelity(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C>().norm_sqr()
}

/// Letter index 0..4 = I, X, X′(σz), X″(σy).
pub fn pauli(k: usize) -> M {
    match k {
        0 => id2(),
        1 => sx(),
        2 => sz(),
        _ => sy(),
    }
}

/// `b(o) = (1 − o)/2`
pub fn b(o: i8) -> u32 {
    u32::from(o < 0)
}

pub fn pow(m: &M, e: u32) -> M {
    if e % 2 == 1 {
        m.clone()
    } else {
        identity(m.len())
    }
}

/// Copy a library matrix into oracle form.
pub fn from_lib(m: &tactics_core::algebra::Matrix) -> M {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect()).collect()
}

/// Oracle matrix for a library letter.
pub fn letter(l: tactics_core::algebra::Letter) -> M {
    use tactics_core::algebra::Letter::*;
    match l {
        I => id2(),
        X => sx(),
        Xp => sz(),
        Xpp => sy(),
    }
}
