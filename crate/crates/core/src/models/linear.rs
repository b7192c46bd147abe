//! Per-element ordinary least squares on a single descriptor.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::models::Dataset;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorKind {
    Lse,
    Gcn,
}

impl std::fmt::Display for DescriptorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DescriptorKind::Lse => "lse",
            DescriptorKind::Gcn => "gcn",
        })
    }
}

/// E_ad = alpha · descriptor + beta, both in eV (alpha per descriptor unit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearCoeffs {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearModelSet {
    pub descriptor_kind: DescriptorKind,
    /// Which oracle produced the training targets (free text).
    pub source_tag: String,
    pub elements: BTreeMap<Element, LinearCoeffs>,
}

/// Per-element OLS of the adsorption energy on the chosen descriptor over
/// the clean training rows.
pub fn fit_linear(
    dataset: &Dataset,
    kind: DescriptorKind,
    source_tag: &str,
) -> Result<LinearModelSet> {
    let mut by_element: BTreeMap<Element, Vec<(f64, f64)>> = BTreeMap::new();
    for row in dataset.train_rows() {
        if !row.e_ad.is_finite() {
            return Err(CoreError::InvalidArgument(format!(
                "non-finite target for atom {} of particle {}",
                row.atom_index, row.np_id
            )));
        }
        by_element
            .entry(row.element)
            .or_default()
            .push((row.descriptor(kind), row.e_ad));
    }
    if by_element.is_empty() {
        return Err(CoreError::InvalidArgument(
            "training split is empty".into(),
        ));
    }
    let mut elements = BTreeMap::new();
    for (element, points) in by_element {
        elements.insert(element, ols(element, &points)?);
    }
    Ok(LinearModelSet {
        descriptor_kind: kind,
        source_tag: source_tag.to_string(),
        elements,
    })
}

fn ols(element: Element, points: &[(f64, f64)]) -> Result<LinearCoeffs> {
    let n = points.len() as f64;
    let mut distinct = points.iter().map(|p| p.0).collect::<Vec<_>>();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if distinct.len() < 2 {
        return Err(CoreError::LinearFitFailure {
            element,
            reason: format!(
                "needs at least 2 distinct descriptor values, found {}",
                distinct.len()
            ),
        });
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let alpha = sxy / sxx;
    let beta = mean_y - alpha * mean_x;
    Ok(LinearCoeffs { alpha, beta })
}

/// alpha · x + beta for the element's line.
pub fn predict_linear(models: &LinearModelSet, element: Element, x: f64) -> Result<f64> {
    let c = models
        .elements
        .get(&element)
        .ok_or(CoreError::MissingModel(element))?;
    Ok(c.alpha * x + c.beta)
}
