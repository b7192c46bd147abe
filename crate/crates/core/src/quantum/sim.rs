//! Dense statevector simulation for a handful of qubits.
//!
//! Qubit q maps to bit q of the basis-state index (qubit 0 = least
//! significant bit). Single-qubit gates walk amplitude pairs in place; the
//! Ising evolution operator is a dense 2^n × 2^n matrix prepared once per
//! model by eigendecomposition of the (real symmetric) Hamiltonian.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub amplitudes: Vec<Complex64>,
    pub n_qubits: usize,
}

impl Statevector {
    /// |0...0⟩
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            n_qubits,
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ⟨Z_q⟩: +1 weight for basis states with bit q clear, −1 when set.
    pub fn expectation_z(&self, qubit: usize) -> f64 {
        let mask = 1usize << qubit;
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let sign = if idx & mask == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum()
    }

    /// Applies a 2×2 unitary to one qubit in place.
    pub fn apply_single(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) {
        let mask = 1usize << qubit;
        for idx in 0..self.amplitudes.len() {
            if idx & mask != 0 {
                continue;
            }
            let a0 = self.amplitudes[idx];
            let a1 = self.amplitudes[idx | mask];
            self.amplitudes[idx] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[idx | mask] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

pub fn rx_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

pub fn ry_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = (theta / 2.0).sin();
    [
        [c, Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), c],
    ]
}

pub fn rz_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -theta / 2.0), zero],
        [zero, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

/// Precomputed exp(−i·H·dt) for H = Σ_{i<j} J_ij Z_i Z_j + Σ_i h_i X_i.
#[derive(Debug, Clone)]
pub struct IsingEvolution {
    dim: usize,
    /// Row-major dense unitary; identity when dt = 0.
    matrix: Vec<Complex64>,
}

impl IsingEvolution {
    /// `couplings` holds J_ij for i < j in lexicographic order.
    pub fn new(n_qubits: usize, couplings: &[f64], fields: &[f64], dt: f64) -> Self {
        let dim = 1 << n_qubits;
        assert_eq!(couplings.len(), n_qubits * (n_qubits - 1) / 2);
        assert_eq!(fields.len(), n_qubits);

        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for idx in 0..dim {
            let z = |q: usize| if idx & (1 << q) == 0 { 1.0 } else { -1.0 };
            let mut diag = 0.0;
            let mut pair = 0;
            for i in 0..n_qubits {
                for j in (i + 1)..n_qubits {
                    diag += couplings[pair] * z(i) * z(j);
                    pair += 1;
                }
            }
            h[(idx, idx)] = diag;
            for (q, &field) in fields.iter().enumerate() {
                h[(idx, idx ^ (1 << q))] += field;
            }
        }

        let eig = h.symmetric_eigen();
        let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
        // U = V · diag(e^{−iλdt}) · Vᵀ
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    let phase = Complex64::from_polar(1.0, -eig.eigenvalues[k] * dt);
                    acc += Complex64::new(eig.eigenvectors[(r, k)] * eig.eigenvectors[(c, k)], 0.0)
                        * phase;
                }
                matrix[r * dim + c] = acc;
            }
        }
        Self { dim, matrix }
    }

    pub fn apply(&self, state: &mut Statevector) {
        debug_assert_eq!(state.amplitudes.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (r, slot) in out.iter_mut().enumerate() {
            let row = &self.matrix[r * self.dim..(r + 1) * self.dim];
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, amp) in state.amplitudes.iter().enumerate() {
                acc += row[c] * amp;
            }
            *slot = acc;
        }
        state.amplitudes = out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gates_preserve_norm() {
        let mut s = Statevector::zero_state(3);
        s.apply_single(0, &ry_matrix(0.7));
        s.apply_single(1, &rx_matrix(-1.2));
        s.apply_single(2, &rz_matrix(2.9));
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_dt_evolution_is_identity() {
        let u = IsingEvolution::new(2, &[0.5], &[0.3, -0.2], 0.0);
        let mut s = Statevector::zero_state(2);
        s.apply_single(0, &ry_matrix(0.4));
        let before = s.clone();
        u.apply(&mut s);
        for (a, b) in s.amplitudes.iter().zip(&before.amplitudes) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pure_zz_evolution_adds_phases_only() {
        let u = IsingEvolution::new(2, &[1.0], &[0.0, 0.0], 0.5);
        let mut s = Statevector::zero_state(2);
        u.apply(&mut s);
        // |00⟩ picks up e^{−i·J·dt}; magnitude 1 on the same basis state.
        assert!((s.amplitudes[0].norm() - 1.0).abs() < 1e-12);
        assert!((s.amplitudes[0].arg() - -0.5).abs() < 1e-12);
    }

    #[test]
    fn expectation_sign_convention() {
        let mut s = Statevector::zero_state(1);
        assert!((s.expectation_z(0) - 1.0).abs() < 1e-15);
        s.apply_single(0, &rx_matrix(std::f64::consts::PI));
        assert!((s.expectation_z(0) + 1.0).abs() < 1e-12);
    }
}
