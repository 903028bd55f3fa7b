//! Compiled measurement programs reproduce their circuits.

mod oracle;

use oracle::*;
use tactics_core::algebra::NamedGate;
use tactics_core::compiler::{
    check_equivalence, compile_to_measurements, execute, parse_circuit, random_circuit, Circuit, Mode, Op,
};
use tactics_core::rng::{seeded, trial_rng};
use tactics_core::statevec::StateVector;

fn oracle_unitary(c: &Circuit) -> M {
    let mut u = identity(1 << c.n_qubits);
    for op in &c.ops {
        if let Op::Gate { gate, targets } = op {
            let g = from_lib(&gate.matrix());
            let full = if targets.len() == 1 { on(c.n_qubits, targets[0], &g) } else { on2(c.n_qubits, targets[0], targets[1], &g) };
            u = mul(&full, &u);
        }
    }
    u
}

#[test]
fn circuit_unitary_matches_oracle() {
    let mut rng = seeded(1);
    for _ in 0..50 {
        let c = random_circuit(&mut rng, 4, 8);
        assert!(max_diff(&from_lib(&c.unitary().unwrap()), &oracle_unitary(&c)) < 1e-12);
    }
}

#[test]
fn random_circuits_compile_in_both_modes() {
    let mut rng = seeded(2);
    for i in 0..20 {
        let c = random_circuit(&mut rng, 3, 6);
        let u = oracle_unitary(&c);
        for mode in [Mode::Extended, Mode::Strict] {
            let p = compile_to_measurements(&c, mode).unwrap();
            if mode == Mode::Strict {
                p.check_strict().unwrap();
            }
            for t in 0..20 {
                let mut r = trial_rng(100 + i, t);
                let input = StateVector::random(c.n_qubits, &mut r).unwrap();
                let run = execute(&p, &input, &mut r).unwrap();
                let want = apply(&u, &vec_of(&input));
                let f = fidelity(&want, &vec_of(&run.corrected_state().unwrap()));
                assert!(f >= 1.0 - 1e-9, "{mode} circuit {i} trial {t}: {f}\n{c}");
            }
        }
    }
}

#[test]
fn every_gate_name_compiles_strictly() {
    for g in NamedGate::ALL {
        let n = g.arity().max(2);
        let targets: Vec<usize> = (0..g.arity()).collect();
        let c = Circuit::new(n).unwrap().gate(g, &targets).unwrap();
        let p = compile_to_measurements(&c, Mode::Strict).unwrap();
        let rep = check_equivalence(&c, &p, 30, 1e-9, 3).unwrap();
        assert!(rep.passed, "{g:?}: min fidelity {}", rep.min_fidelity);
    }
}

#[test]
fn reports_are_reproducible() {
    let c = parse_circuit("qubits 2\nh 0\nt 1\ncnot 0 1\n").unwrap();
    let p = compile_to_measurements(&c, Mode::Strict).unwrap();
    let a = check_equivalence(&c, &p, 64, 1e-9, 42).unwrap();
    let b = check_equivalence(&c, &p, 64, 1e-9, 42).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let other = check_equivalence(&c, &p, 64, 1e-9, 43).unwrap();
    assert_ne!(serde_json::to_string(&a.trials).unwrap(), serde_json::to_string(&other.trials).unwrap());
}

#[test]
fn dropping_feedforward_breaks_equivalence() {
    let c = parse_circuit("qubits 1\nh 0\nt 0\n").unwrap();
    let p = compile_to_measurements(&c, Mode::Strict).unwrap().without_feedforward();
    let rep = check_equivalence(&c, &p, 100, 1e-9, 5).unwrap();
    assert!(!rep.passed);
}

#[test]
fn outcomes_are_balanced() {
    let c = parse_circuit("qubits 2\nh 0\ncnot 0 1\nt 1\n").unwrap();
    let p = compile_to_measurements(&c, Mode::Strict).unwrap();
    let rep = check_equivalence(&c, &p, 400, 1e-9, 6).unwrap();
    let [plus, minus] = rep.outcome_counts;
    let n = (plus + minus) as f64;
    let frac = minus as f64 / n;
    assert!((frac - 0.5).abs() < 4.0 * (0.25 / n).sqrt(), "{plus} {minus}");
}
