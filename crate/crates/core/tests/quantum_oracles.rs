mod common;

use num_complex::Complex64;
use qscw::quantum::{Basis, Pauli, PauliError, StateVector};
use qscw::rng::RngStream;
use qscw::witness::WitnessState;

use common::{all_qubits, c, ghz_vector, matvec, on_qubit, parity, pauli, sigma, DensityMatrix};

const EPS: f64 = 1e-12;

fn assert_close(a: &[Complex64], b: &[Complex64]) {
    assert_eq!(a.len(), b.len());
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).norm() < EPS, "amplitude {i}: {x} vs {y}");
    }
}

/// A deterministic, non-symmetric normalized state for gate checks.
fn probe_state(n: usize) -> Vec<Complex64> {
    let raw: Vec<Complex64> = (0..1usize << n)
        .map(|i| c(1.0 + i as f64, 0.5 * i as f64 - 1.0))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|a| a / norm).collect()
}

#[test]
fn ghz_preparation_matches_formula() {
    for n in 1..=8 {
        for phase in [0, 1] {
            let sim = StateVector::ghz_with_phase(n, phase).unwrap();
            assert_close(sim.amplitudes(), &ghz_vector(n, phase));
        }
    }
}

#[test]
fn hadamard_transform_kills_wrong_parity() {
    for n in 1..=5 {
        for phase in [0u8, 1] {
            let h = all_qubits(&pauli('H'), n);
            let out = matvec(&h, &ghz_vector(n, phase));
            let mut sim = StateVector::ghz_with_phase(n, phase).unwrap();
            sim.hadamard_all();
            assert_close(sim.amplitudes(), &out);
            for (idx, a) in out.iter().enumerate() {
                if parity(idx) != phase {
                    assert!(a.norm() < EPS, "n={n} phase={phase} idx={idx}");
                }
            }
        }
    }
}

#[test]
fn single_qubit_gates_match_kronecker_operators() {
    let n = 3;
    for qubit in 0..n {
        for (axis, name) in [(Pauli::X, 'X'), (Pauli::Y, 'Y'), (Pauli::Z, 'Z')] {
            let psi = probe_state(n);
            let mut sim = StateVector::from_amplitudes(psi.clone()).unwrap();
            sim.apply_pauli(PauliError { axis, qubit }).unwrap();
            assert_close(
                sim.amplitudes(),
                &matvec(&on_qubit(&pauli(name), qubit, n), &psi),
            );
        }
        let psi = probe_state(n);
        let mut sim = StateVector::from_amplitudes(psi.clone()).unwrap();
        sim.hadamard(qubit).unwrap();
        assert_close(
            sim.amplitudes(),
            &matvec(&on_qubit(&pauli('H'), qubit, n), &psi),
        );
    }
}

#[test]
fn cnot_permutes_basis_states() {
    let n = 3;
    let psi = probe_state(n);
    for control in 0..n {
        for target in (0..n).filter(|&t| t != control) {
            let mut sim = StateVector::from_amplitudes(psi.clone()).unwrap();
            sim.cnot(control, target).unwrap();
            let mut expected = psi.clone();
            for (idx, a) in psi.iter().enumerate() {
                let mapped = if idx >> control & 1 == 1 {
                    idx ^ (1 << target)
                } else {
                    idx
                };
                expected[mapped] = *a;
            }
            assert_close(sim.amplitudes(), &expected);
        }
    }
}

#[test]
fn measurement_distributions_match_density_matrix() {
    for n in 1..=4 {
        for phase in [0, 1] {
            let sim = StateVector::ghz_with_phase(n, phase).unwrap();
            let dm = DensityMatrix::pure(n, &ghz_vector(n, phase));
            for (basis, exact) in [
                (Basis::X, dm.x_basis_probabilities()),
                (Basis::Z, dm.z_basis_probabilities()),
            ] {
                for (a, b) in sim.probabilities(basis).unwrap().iter().zip(&exact) {
                    assert!((a - b).abs() < EPS);
                }
            }
        }
    }
}

#[test]
fn noiseless_x_parity_is_deterministic() {
    let mut rng = RngStream::from_seed(3);
    for n in 1..=8 {
        for phase in [0, 1] {
            let w = WitnessState::new(n, phase).unwrap();
            let ev = w.generate_evidence(Basis::X, 200, 0.0, &mut rng).unwrap();
            assert!(ev.shots.iter().all(|s| qscw::witness::parity(*s) == phase));
            let ev = w.generate_evidence(Basis::Z, 200, 0.0, &mut rng).unwrap();
            assert!(ev.shots.iter().all(|s| s.is_all_zeros() || s.is_all_ones()));
        }
    }
}

#[test]
fn depolarized_ghz3_outcome_frequencies() {
    let (n, p, shots) = (3, 0.1, 10_000);
    let mut dm = DensityMatrix::pure(n, &ghz_vector(n, 0));
    dm.depolarize(p);
    let w = WitnessState::new(n, 0).unwrap();
    let mut rng = RngStream::from_seed(17);
    for (basis, exact) in [
        (Basis::X, dm.x_basis_probabilities()),
        (Basis::Z, dm.z_basis_probabilities()),
    ] {
        let ev = w.generate_evidence(basis, shots, p, &mut rng).unwrap();
        let mut counts = vec![0usize; 1 << n];
        for s in &ev.shots {
            counts[s.value() as usize] += 1;
        }
        for (idx, &q) in exact.iter().enumerate() {
            let f = counts[idx] as f64 / shots as f64;
            let tol = 4.0 * sigma(q, shots).max(1.0 / shots as f64);
            assert!((f - q).abs() <= tol, "{basis} idx={idx}: {f} vs {q}");
        }
    }
}

#[test]
fn fully_depolarized_parity_law() {
    // Each qubit flips its X outcome with probability 2/3 at p = 1.
    for n in 1..=4 {
        let mut dm = DensityMatrix::pure(n, &ghz_vector(n, 0));
        dm.depolarize(1.0);
        let expected = (1.0 + (-1.0f64 / 3.0).powi(n as i32)) / 2.0;
        assert!((dm.x_parity_probability(0) - expected).abs() < EPS);
    }
}
