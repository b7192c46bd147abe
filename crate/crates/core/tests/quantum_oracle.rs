//! Independent dense-matrix oracle for the QCL circuit: full 16×16 gate
//! matrices built by Kronecker products, with the Ising evolution
//! exponentiated by scaled-and-squared Taylor series. Completely separate
//! code path from the production simulator.

use npscreen_core::quantum::{apply_circuit, fit_single, qcl_predict, QclModel};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type CMat = Vec<Vec<Complex64>>;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn identity(n: usize) -> CMat {
    let mut m = vec![vec![czero(); n]; n];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = cone();
    }
    m
}

fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = vec![vec![czero(); n]; n];
    for r in 0..n {
        for k in 0..n {
            let ark = a[r][k];
            if ark == czero() {
                continue;
            }
            for c in 0..n {
                out[r][c] += ark * b[k][c];
            }
        }
    }
    out
}

fn matvec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
        .collect()
}

/// kron(a, b)
fn kron(a: &CMat, b: &CMat) -> CMat {
    let (na, nb) = (a.len(), b.len());
    let n = na * nb;
    let mut out = vec![vec![czero(); n]; n];
    for ra in 0..na {
        for ca in 0..na {
            for rb in 0..nb {
                for cb in 0..nb {
                    out[ra * nb + rb][ca * nb + cb] = a[ra][ca] * b[rb][cb];
                }
            }
        }
    }
    out
}

/// Embeds a single-qubit gate on `qubit` (bit q of the index, qubit 0 =
/// least significant) into the full register: kron over qubits from most to
/// least significant.
fn embed(gate: &CMat, qubit: usize, n_qubits: usize) -> CMat {
    let mut full = identity(1);
    for q in (0..n_qubits).rev() {
        let factor = if q == qubit { gate.clone() } else { identity(2) };
        full = kron(&full, &factor);
    }
    full
}

fn rx(theta: f64) -> CMat {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    vec![vec![c, s], vec![s, c]]
}

fn ry(theta: f64) -> CMat {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = (theta / 2.0).sin();
    vec![
        vec![c, Complex64::new(-s, 0.0)],
        vec![Complex64::new(s, 0.0), c],
    ]
}

fn rz(theta: f64) -> CMat {
    vec![
        vec![Complex64::from_polar(1.0, -theta / 2.0), czero()],
        vec![czero(), Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

/// exp(M) by scaling and squaring with a 24-term Taylor series.
fn expm(m: &CMat) -> CMat {
    let n = m.len();
    let norm: f64 = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let squarings = norm.log2().ceil().max(0.0) as u32 + 4;
    let scale = 2f64.powi(-(squarings as i32));
    let scaled: CMat = m
        .iter()
        .map(|row| row.iter().map(|z| z * scale).collect())
        .collect();
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=24 {
        term = matmul(&term, &scaled);
        let inv_k = 1.0 / (1..=k).map(|x| x as f64).product::<f64>();
        for r in 0..n {
            for c in 0..n {
                result[r][c] += term[r][c] * inv_k;
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// Full-register circuit re-implementation straight from the model fields.
fn oracle_circuit(x: f64, model: &QclModel) -> Vec<Complex64> {
    let n = model.n_qubits;
    let dim = 1 << n;
    let x = x.clamp(-1.0, 1.0);

    let mut state = vec![czero(); dim];
    state[0] = cone();

    for q in 0..n {
        state = matvec(&embed(&ry(x.asin()), q, n), &state);
        state = matvec(&embed(&rz((x * x).acos()), q, n), &state);
    }

    // H = Σ J_ij Z_i Z_j + Σ h_i X_i as a dense matrix, then U = exp(−iH dt).
    let mut h = vec![vec![czero(); dim]; dim];
    let mut pair = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for (idx, row) in h.iter_mut().enumerate() {
                let zi = if idx & (1 << i) == 0 { 1.0 } else { -1.0 };
                let zj = if idx & (1 << j) == 0 { 1.0 } else { -1.0 };
                row[idx] += Complex64::new(model.couplings_zz[pair] * zi * zj, 0.0);
            }
            pair += 1;
        }
    }
    for (q, &field) in model.fields_x.iter().enumerate() {
        for idx in 0..dim {
            h[idx][idx ^ (1 << q)] += Complex64::new(field, 0.0);
        }
    }
    let minus_i_h_dt: CMat = h
        .iter()
        .map(|row| {
            row.iter()
                .map(|z| Complex64::new(0.0, -model.dt) * z)
                .collect()
        })
        .collect();
    let u = expm(&minus_i_h_dt);

    for layer in 0..model.n_layers {
        state = matvec(&u, &state);
        for q in 0..n {
            let base = 3 * (layer * n + q);
            state = matvec(&embed(&rx(model.params[base]), q, n), &state);
            state = matvec(&embed(&rz(model.params[base + 1]), q, n), &state);
            state = matvec(&embed(&rx(model.params[base + 2]), q, n), &state);
        }
    }
    state
}

#[test]
fn circuit_matches_dense_oracle_on_100_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for draw in 0..100 {
        let mut model = QclModel::default_config(draw);
        model.params = (0..model.n_params())
            .map(|_| rng.gen_range(-3.0..3.0))
            .collect();
        let x: f64 = rng.gen_range(-1.0..1.0);

        let fast = apply_circuit(x, &model);
        let slow = oracle_circuit(x, &model);
        assert!((fast.norm() - 1.0).abs() < 1e-10, "norm drift");
        let mut err = 0.0f64;
        for (a, b) in fast.amplitudes.iter().zip(&slow) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-10, "draw {draw}: amplitude error {err}");
    }
}

#[test]
fn qcl_learns_a_quadratic() {
    let n = 50;
    let x: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
    let y: Vec<f64> = x.iter().map(|v| v * v).collect();
    let model = fit_single(&x, &y, &QclModel::default_config(0), 7).unwrap();

    let mut se = 0.0;
    let mut count = 0usize;
    for i in 0..39 {
        let xi = -0.975 + 0.05 * i as f64;
        let p = qcl_predict(&model, xi);
        se += (p - xi * xi) * (p - xi * xi);
        count += 1;
    }
    let rmse = (se / count as f64).sqrt();
    assert!(rmse < 0.05, "held-out rmse {rmse}");
}

#[test]
fn trained_predictions_stay_inside_the_readout_bound() {
    let n = 40;
    let x: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
    let y: Vec<f64> = x.iter().map(|v| 0.3 * v * v - 1.5).collect();
    let model = fit_single(&x, &y, &QclModel::default_config(1), 3).unwrap();
    let lo = model.output_shift - model.output_scale.abs() - 1e-12;
    let hi = model.output_shift + model.output_scale.abs() + 1e-12;
    for i in 0..200 {
        let xi = -1.2 + 2.4 * i as f64 / 199.0; // includes clipped inputs
        let p = qcl_predict(&model, xi);
        assert!(p >= lo && p <= hi, "prediction {p} outside [{lo}, {hi}]");
    }
}
