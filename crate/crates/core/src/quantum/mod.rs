//! Quantum-circuit-learning (QCL) regression on a statevector simulator.
//!
//! The circuit follows the standard QCL construction (Mitarai et al., Phys.
//! Rev. A 98, 032309 (2018)): each qubit encodes the scalar input through
//! RY(arcsin x) · RZ(arccos x²), then `n_layers` repetitions of a fixed
//! random Ising evolution exp(−i·H·dt) followed by trainable RX·RZ·RX
//! rotations per qubit. The readout is an affine map of ⟨Z₀⟩, so every
//! prediction is hard-bounded by |output_scale| around output_shift — the
//! built-in regularization that distinguishes QCL from kernel methods.

pub mod sim;

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::models::{Dataset, DescriptorKind};
use crate::seed::derive_seed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sim::{rx_matrix, ry_matrix, rz_matrix, IsingEvolution, Statevector};
use std::collections::BTreeMap;

/// A trained (or default-initialized) QCL regressor for one element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QclModel {
    pub n_qubits: usize,
    pub n_layers: usize,
    /// Evolution time of the entangler per layer.
    pub dt: f64,
    /// Seed that drew the fixed Ising couplings.
    pub seed: u64,
    /// J_ij for i < j, lexicographic.
    pub couplings_zz: Vec<f64>,
    /// Transverse fields h_i.
    pub fields_x: Vec<f64>,
    /// Trainable rotation angles, 3 per (layer, qubit).
    pub params: Vec<f64>,
    /// Affine readout (eV): prediction = output_scale·⟨Z₀⟩ + output_shift.
    pub output_scale: f64,
    pub output_shift: f64,
    /// Input standardization: x ↦ (x − x_center)/x_halfwidth, clipped to [−1, 1].
    pub x_center: f64,
    pub x_halfwidth: f64,
}

impl QclModel {
    /// Fresh model with couplings and fields drawn uniform from [−1, 1].
    pub fn new(n_qubits: usize, n_layers: usize, dt: f64, seed: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 10 {
            return Err(CoreError::InvalidArgument(format!(
                "n_qubits must be in 1..=10, got {n_qubits}"
            )));
        }
        if n_layers == 0 {
            return Err(CoreError::InvalidArgument("n_layers must be >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let couplings_zz = (0..n_qubits * (n_qubits - 1) / 2)
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let fields_x = (0..n_qubits).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Ok(Self {
            n_qubits,
            n_layers,
            dt,
            seed,
            couplings_zz,
            fields_x,
            params: vec![0.0; 3 * n_qubits * n_layers],
            output_scale: 1.0,
            output_shift: 0.0,
            x_center: 0.0,
            x_halfwidth: 1.0,
        })
    }

    /// The configuration used throughout: 4 qubits, 6 layers, dt = 0.5.
    pub fn default_config(seed: u64) -> Self {
        Self::new(4, 6, 0.5, seed).expect("default configuration is valid")
    }

    pub fn n_params(&self) -> usize {
        3 * self.n_qubits * self.n_layers
    }

    fn standardize(&self, x_raw: f64) -> f64 {
        let x = (x_raw - self.x_center) / self.x_halfwidth;
        if x.abs() > 1.0 {
            log::warn!("QCL input {x_raw} outside the training window; clipping");
            x.clamp(-1.0, 1.0)
        } else {
            x
        }
    }
}

/// Runs the circuit for a standardized input `x` (|x| ≤ 1 after clipping)
/// and the model's current parameters.
pub fn apply_circuit(x: f64, model: &QclModel) -> Statevector {
    let evolution = IsingEvolution::new(
        model.n_qubits,
        &model.couplings_zz,
        &model.fields_x,
        model.dt,
    );
    apply_circuit_with(&evolution, x, model, &model.params)
}

fn apply_circuit_with(
    evolution: &IsingEvolution,
    x: f64,
    model: &QclModel,
    params: &[f64],
) -> Statevector {
    let x = x.clamp(-1.0, 1.0);
    let mut state = Statevector::zero_state(model.n_qubits);
    let ry = ry_matrix(x.asin());
    let rz = rz_matrix((x * x).acos());
    for q in 0..model.n_qubits {
        state.apply_single(q, &ry);
        state.apply_single(q, &rz);
    }
    for layer in 0..model.n_layers {
        evolution.apply(&mut state);
        for q in 0..model.n_qubits {
            let base = 3 * (layer * model.n_qubits + q);
            state.apply_single(q, &rx_matrix(params[base]));
            state.apply_single(q, &rz_matrix(params[base + 1]));
            state.apply_single(q, &rx_matrix(params[base + 2]));
        }
    }
    state
}

/// Prediction in original units (eV).
pub fn qcl_predict(model: &QclModel, x_raw: f64) -> f64 {
    let state = apply_circuit(model.standardize(x_raw), model);
    model.output_scale * state.expectation_z(0) + model.output_shift
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QclModelSet {
    pub descriptor_kind: DescriptorKind,
    pub seed: u64,
    pub models: BTreeMap<Element, QclModel>,
}

pub fn predict_qcl(set: &QclModelSet, element: Element, x: f64) -> Result<f64> {
    let model = set
        .models
        .get(&element)
        .ok_or(CoreError::MissingModel(element))?;
    Ok(qcl_predict(model, x))
}

/// BFGS stopping criteria for parameter training.
const FIT_MAX_ITERATIONS: usize = 200;
const FIT_GRAD_TOL: f64 = 1e-7;
const FD_STEP: f64 = 1e-6;

/// Trains one QCL model per element on the clean training rows, minimizing
/// the mean squared error with BFGS over the rotation angles; the affine
/// readout is profiled out by ordinary least squares at every evaluation.
/// Gradients are central finite differences (h = 1e-6 rad). Deterministic
/// given the seed.
pub fn fit_qcl(
    dataset: &Dataset,
    kind: DescriptorKind,
    config: &QclModel,
    seed: u64,
) -> Result<QclModelSet> {
    let mut by_element: BTreeMap<Element, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for row in dataset.train_rows() {
        let e = by_element.entry(row.element).or_default();
        e.0.push(row.descriptor(kind));
        e.1.push(row.e_ad);
    }
    if by_element.is_empty() {
        return Err(CoreError::InvalidArgument(
            "training split is empty".into(),
        ));
    }
    let mut models = BTreeMap::new();
    for (element, (x, y)) in by_element {
        let el_seed = derive_seed(seed, element.index() as u64);
        models.insert(element, fit_single(&x, &y, config, el_seed)?);
    }
    Ok(QclModelSet {
        descriptor_kind: kind,
        seed,
        models,
    })
}

/// Trains a single regressor on raw (x, y) pairs.
pub fn fit_single(x_raw: &[f64], y_raw: &[f64], config: &QclModel, seed: u64) -> Result<QclModel> {
    if x_raw.len() != y_raw.len() || x_raw.is_empty() {
        return Err(CoreError::InvalidArgument(
            "QCL fit needs matching, non-empty inputs".into(),
        ));
    }
    let mut model = QclModel::new(config.n_qubits, config.n_layers, config.dt, seed)?;

    // Input window.
    let x_min = x_raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let x_max = x_raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    model.x_center = 0.5 * (x_min + x_max);
    model.x_halfwidth = (0.5 * (x_max - x_min)).max(1e-9);
    let xs: Vec<f64> = x_raw.iter().map(|&v| model.standardize(v)).collect();

    // Target standardization.
    let y_mean = y_raw.iter().sum::<f64>() / y_raw.len() as f64;
    let y_var = y_raw.iter().map(|v| (v - y_mean) * (v - y_mean)).sum::<f64>() / y_raw.len() as f64;
    let y_std = if y_var > 1e-24 { y_var.sqrt() } else { 1.0 };
    let ys: Vec<f64> = y_raw.iter().map(|v| (v - y_mean) / y_std).collect();

    let evolution = IsingEvolution::new(
        model.n_qubits,
        &model.couplings_zz,
        &model.fields_x,
        model.dt,
    );

    // Loss with the affine readout solved exactly per evaluation.
    let readout = |z: &[f64]| -> (f64, f64) {
        let n = z.len() as f64;
        let zm = z.iter().sum::<f64>() / n;
        let ym = ys.iter().sum::<f64>() / n;
        let mut szz = 0.0;
        let mut szy = 0.0;
        for (zi, yi) in z.iter().zip(&ys) {
            szz += (zi - zm) * (zi - zm);
            szy += (zi - zm) * (yi - ym);
        }
        let w1 = if szz > 1e-18 { szy / szz } else { 0.0 };
        (w1, ym - w1 * zm)
    };
    let loss = |params: &[f64]| -> f64 {
        let z: Vec<f64> = xs
            .iter()
            .map(|&xi| apply_circuit_with(&evolution, xi, &model, params).expectation_z(0))
            .collect();
        let (w1, w0) = readout(&z);
        z.iter()
            .zip(&ys)
            .map(|(zi, yi)| {
                let r = w1 * zi + w0 - yi;
                r * r
            })
            .sum::<f64>()
            / xs.len() as f64
    };

    // Small random start breaks the symmetry of the all-zero circuit.
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xA11C));
    let mut params: Vec<f64> = (0..model.n_params())
        .map(|_| rng.gen_range(-0.3..0.3))
        .collect();
    bfgs_minimize(&loss, &mut params, FIT_MAX_ITERATIONS, FIT_GRAD_TOL)?;

    // Final readout in original units.
    let z: Vec<f64> = xs
        .iter()
        .map(|&xi| apply_circuit_with(&evolution, xi, &model, &params).expectation_z(0))
        .collect();
    let (w1, w0) = readout(&z);
    model.params = params;
    model.output_scale = y_std * w1;
    model.output_shift = y_mean + y_std * w0;
    Ok(model)
}

/// Plain dense-BFGS minimizer with backtracking line search and central
/// finite-difference gradients.
fn bfgs_minimize(
    loss: &dyn Fn(&[f64]) -> f64,
    params: &mut Vec<f64>,
    max_iterations: usize,
    grad_tol: f64,
) -> Result<()> {
    let m = params.len();
    let grad_of = |p: &[f64]| -> Result<Vec<f64>> {
        let mut g = vec![0.0; m];
        let mut probe = p.to_vec();
        for k in 0..m {
            let orig = probe[k];
            probe[k] = orig + FD_STEP;
            let hi = loss(&probe);
            probe[k] = orig - FD_STEP;
            let lo = loss(&probe);
            probe[k] = orig;
            if !hi.is_finite() || !lo.is_finite() {
                return Err(CoreError::NumericalFailure(format!(
                    "non-finite loss near parameter {k}"
                )));
            }
            g[k] = (hi - lo) / (2.0 * FD_STEP);
        }
        Ok(g)
    };

    let mut f = loss(params);
    if !f.is_finite() {
        return Err(CoreError::NumericalFailure("non-finite initial loss".into()));
    }
    let mut g = grad_of(params)?;
    let mut hess: Vec<f64> = identity(m);

    for _ in 0..max_iterations {
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < grad_tol {
            break;
        }
        let mut d = vec![0.0; m];
        for r in 0..m {
            let mut acc = 0.0;
            for c in 0..m {
                acc += hess[r * m + c] * g[c];
            }
            d[r] = -acc;
        }
        let mut slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();
        if slope >= 0.0 {
            hess = identity(m);
            for (dk, gk) in d.iter_mut().zip(&g) {
                *dk = -gk;
            }
            slope = -g.iter().map(|v| v * v).sum::<f64>();
        }
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-14 {
            let trial: Vec<f64> = params.iter().zip(&d).map(|(p, dk)| p + t * dk).collect();
            let ft = loss(&trial);
            if ft.is_finite() && ft <= f + 1e-4 * t * slope {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, ft)) = accepted else { break };
        let g_new = grad_of(&trial)?;
        let s: Vec<f64> = d.iter().map(|dk| dk * t).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-14 {
            let mut hy = vec![0.0; m];
            for r in 0..m {
                let mut acc = 0.0;
                for c in 0..m {
                    acc += hess[r * m + c] * y[c];
                }
                hy[r] = acc;
            }
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            let c1 = (sy + yhy) / (sy * sy);
            for r in 0..m {
                for c in 0..m {
                    hess[r * m + c] += c1 * s[r] * s[c] - (hy[r] * s[c] + s[r] * hy[c]) / sy;
                }
            }
        } else {
            hess = identity(m);
        }
        *params = trial;
        f = ft;
        g = g_new;
    }
    Ok(())
}

fn identity(m: usize) -> Vec<f64> {
    let mut h = vec![0.0; m * m];
    for k in 0..m {
        h[k * m + k] = 1.0;
    }
    h
}
