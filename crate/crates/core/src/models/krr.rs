//! Per-element Gaussian-kernel ridge regression with seeded randomized
//! hyperparameter search and k-fold cross-validation.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::models::{Dataset, DescriptorKind};
use crate::seed::derive_seed;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const GAMMA_LOG10_RANGE: (f64, f64) = (-3.0, 2.0);
const LAMBDA_LOG10_RANGE: (f64, f64) = (-8.0, 0.0);
const CV_FOLDS: usize = 5;
const LAMBDA_FLOOR: f64 = 1e-6;

/// One element's fitted model. Inputs are standardized to zero mean / unit
/// variance with the stored constants, so prediction is self-contained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrrElementModel {
    pub gamma: f64,
    pub lambda: f64,
    pub x_mean: f64,
    pub x_std: f64,
    /// Target offset removed before solving (training-target mean).
    pub y_offset: f64,
    /// Standardized training inputs.
    pub train_x: Vec<f64>,
    /// Dual coefficients, one per training row.
    pub dual: Vec<f64>,
}

impl KrrElementModel {
    /// Fits at fixed hyperparameters. `x` in original units.
    pub fn fit(x: &[f64], y: &[f64], gamma: f64, lambda: f64) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(CoreError::InvalidArgument(
                "kernel fit needs at least two rows".into(),
            ));
        }
        let n = x.len();
        let x_mean = x.iter().sum::<f64>() / n as f64;
        let var = x.iter().map(|v| (v - x_mean) * (v - x_mean)).sum::<f64>() / n as f64;
        let x_std = if var > 1e-24 { var.sqrt() } else { 1.0 };
        let xs: Vec<f64> = x.iter().map(|v| (v - x_mean) / x_std).collect();
        let y_offset = y.iter().sum::<f64>() / n as f64;
        let yc: Vec<f64> = y.iter().map(|v| v - y_offset).collect();

        let dual = match solve_dual(&xs, &yc, gamma, lambda) {
            Some(d) => d,
            None => {
                // Singular system: retry once with a floored ridge.
                solve_dual(&xs, &yc, gamma, lambda.max(LAMBDA_FLOOR)).ok_or_else(|| {
                    CoreError::NumericalFailure(
                        "kernel system singular even after the lambda floor".into(),
                    )
                })?
            }
        };
        Ok(Self {
            gamma,
            lambda,
            x_mean,
            x_std,
            y_offset,
            train_x: xs,
            dual,
        })
    }

    pub fn predict(&self, x: f64) -> f64 {
        let xs = (x - self.x_mean) / self.x_std;
        let mut acc = self.y_offset;
        for (xt, alpha) in self.train_x.iter().zip(&self.dual) {
            let d = xs - xt;
            acc += alpha * (-self.gamma * d * d).exp();
        }
        acc
    }
}

fn solve_dual(xs: &[f64], yc: &[f64], gamma: f64, lambda: f64) -> Option<Vec<f64>> {
    let n = xs.len();
    let mut k = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = xs[i] - xs[j];
            k[(i, j)] = (-gamma * d * d).exp();
        }
        k[(i, i)] += lambda;
    }
    let rhs = DMatrix::<f64>::from_column_slice(n, 1, yc);
    let solution = k
        .clone()
        .cholesky()
        .map(|c| c.solve(&rhs))
        .or_else(|| k.lu().solve(&rhs))?;
    let dual: Vec<f64> = solution.column(0).iter().copied().collect();
    if dual.iter().all(|a| a.is_finite()) {
        Some(dual)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrrModelSet {
    pub descriptor_kind: DescriptorKind,
    pub seed: u64,
    pub n_search: usize,
    pub models: BTreeMap<Element, KrrElementModel>,
}

/// Fits one KRR model per element on the clean training rows. For each
/// element, `n_search` (gamma, lambda) pairs are drawn log-uniformly from a
/// seeded stream and scored by 5-fold cross-validated RMSE; the best pair is
/// refit on the element's full training split.
pub fn fit_krr(
    dataset: &Dataset,
    kind: DescriptorKind,
    n_search: usize,
    seed: u64,
) -> Result<KrrModelSet> {
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
        if x.len() < 2 {
            return Err(CoreError::LinearFitFailure {
                element,
                reason: "kernel regression needs at least 2 training rows".into(),
            });
        }
        let el_seed = derive_seed(seed, element.index() as u64);
        let (gamma, lambda) = search_hyperparameters(&x, &y, n_search, el_seed)?;
        models.insert(element, KrrElementModel::fit(&x, &y, gamma, lambda)?);
    }
    Ok(KrrModelSet {
        descriptor_kind: kind,
        seed,
        n_search,
        models,
    })
}

fn search_hyperparameters(x: &[f64], y: &[f64], n_search: usize, seed: u64) -> Result<(f64, f64)> {
    let n = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Fold assignment: seeded shuffle, then round-robin.
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let folds = CV_FOLDS.min(n);
    let fold_of: Vec<usize> = {
        let mut f = vec![0usize; n];
        for (rank, &idx) in order.iter().enumerate() {
            f[idx] = rank % folds;
        }
        f
    };

    let mut best: Option<(f64, (f64, f64))> = None;
    for _ in 0..n_search.max(1) {
        let gamma = 10f64.powf(rng.gen_range(GAMMA_LOG10_RANGE.0..GAMMA_LOG10_RANGE.1));
        let lambda = 10f64.powf(rng.gen_range(LAMBDA_LOG10_RANGE.0..LAMBDA_LOG10_RANGE.1));
        let mut rmse_acc = 0.0;
        let mut ok = true;
        for fold in 0..folds {
            let mut xt = Vec::new();
            let mut yt = Vec::new();
            let mut xv = Vec::new();
            let mut yv = Vec::new();
            for i in 0..n {
                if fold_of[i] == fold {
                    xv.push(x[i]);
                    yv.push(y[i]);
                } else {
                    xt.push(x[i]);
                    yt.push(y[i]);
                }
            }
            if xt.len() < 2 || xv.is_empty() {
                ok = false;
                break;
            }
            match KrrElementModel::fit(&xt, &yt, gamma, lambda) {
                Ok(m) => {
                    let se: f64 = xv
                        .iter()
                        .zip(&yv)
                        .map(|(xi, yi)| {
                            let p = m.predict(*xi);
                            (p - yi) * (p - yi)
                        })
                        .sum();
                    rmse_acc += (se / xv.len() as f64).sqrt();
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let score = rmse_acc / folds as f64;
        if best.map_or(true, |(b, _)| score < b) {
            best = Some((score, (gamma, lambda)));
        }
    }
    best.map(|(_, hp)| hp).ok_or_else(|| {
        CoreError::NumericalFailure("no hyperparameter candidate survived cross-validation".into())
    })
}

pub fn predict_krr(set: &KrrModelSet, element: Element, x: f64) -> Result<f64> {
    let model = set
        .models
        .get(&element)
        .ok_or(CoreError::MissingModel(element))?;
    Ok(model.predict(x))
}
