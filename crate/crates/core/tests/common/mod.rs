//! Independent oracles for tests: explicit Kronecker-product operators and a
//! small density-matrix depolarizing channel. Nothing here calls into the
//! simulator's gate code.
#![allow(dead_code)]

use num_complex::Complex64;

pub type Matrix = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn pauli(axis: char) -> Matrix {
    match axis {
        'I' => identity(2),
        'X' => vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ],
        'Y' => vec![
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ],
        'Z' => vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ],
        'H' => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]
        }
        _ => panic!("unknown single-qubit operator {axis}"),
    }
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `op` acting on `qubit` of `n`, qubit 0 being the least significant
/// index bit (so it is the rightmost Kronecker factor).
pub fn on_qubit(op: &Matrix, qubit: usize, n: usize) -> Matrix {
    let mut m = vec![vec![c(1.0, 0.0)]];
    for q in (0..n).rev() {
        let factor = if q == qubit { op.clone() } else { identity(2) };
        m = kron(&m, &factor);
    }
    m
}

pub fn all_qubits(op: &Matrix, n: usize) -> Matrix {
    let mut m = vec![vec![c(1.0, 0.0)]];
    for _ in 0..n {
        m = kron(&m, op);
    }
    m
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    let mut out = vec![vec![c(0.0, 0.0); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Matrix) -> Matrix {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| a[j][i].conj()).collect())
        .collect()
}

pub fn matvec(a: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// GHZ amplitudes straight from the defining formula.
pub fn ghz_vector(n: usize, phase: u8) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(s, 0.0);
    v[(1 << n) - 1] = c(if phase == 1 { -s } else { s }, 0.0);
    v
}

pub fn parity(idx: usize) -> u8 {
    (idx.count_ones() & 1) as u8
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub n: usize,
    pub rho: Matrix,
}

impl DensityMatrix {
    pub fn pure(n: usize, psi: &[Complex64]) -> Self {
        let rho = psi
            .iter()
            .map(|a| psi.iter().map(|b| a * b.conj()).collect())
            .collect();
        DensityMatrix { n, rho }
    }

    fn conjugate(&self, u: &Matrix) -> Matrix {
        matmul(&matmul(u, &self.rho), &dagger(u))
    }

    /// Independent per-qubit depolarizing channel:
    /// ρ → (1-p) ρ + (p/3)(XρX + YρY + ZρZ) on every qubit.
    pub fn depolarize(&mut self, p: f64) {
        for q in 0..self.n {
            let d = self.rho.len();
            let mut next = vec![vec![c(0.0, 0.0); d]; d];
            for (axis, w) in [
                ('I', 1.0 - p),
                ('X', p / 3.0),
                ('Y', p / 3.0),
                ('Z', p / 3.0),
            ] {
                let term = self.conjugate(&on_qubit(&pauli(axis), q, self.n));
                for i in 0..d {
                    for j in 0..d {
                        next[i][j] += term[i][j] * w;
                    }
                }
            }
            self.rho = next;
        }
    }

    /// Outcome probabilities of a full measurement in the X basis.
    pub fn x_basis_probabilities(&self) -> Vec<f64> {
        let rotated = self.conjugate(&all_qubits(&pauli('H'), self.n));
        (0..rotated.len()).map(|i| rotated[i][i].re).collect()
    }

    pub fn z_basis_probabilities(&self) -> Vec<f64> {
        (0..self.rho.len()).map(|i| self.rho[i][i].re).collect()
    }

    pub fn x_parity_probability(&self, phase: u8) -> f64 {
        self.x_basis_probabilities()
            .iter()
            .enumerate()
            .filter(|(i, _)| parity(*i) == phase)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn z_all_equal_probability(&self) -> f64 {
        let probs = self.z_basis_probabilities();
        probs[0] + probs[probs.len() - 1]
    }
}

pub fn sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
