//! Regression models over surface descriptors, their metrics, and the model
//! file format.

mod krr;
mod linear;
mod metrics;
mod persist;

pub use krr::{fit_krr, predict_krr, KrrElementModel, KrrModelSet};
pub use linear::{fit_linear, predict_linear, DescriptorKind, LinearCoeffs, LinearModelSet};
pub use metrics::{evaluate_metrics, Metrics};
pub use persist::{load_models, save_models, ModelSet};

use crate::element::Element;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

/// One labeled ontop site: descriptors, oracle target, and bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteSample {
    pub np_id: usize,
    pub atom_index: usize,
    pub element: Element,
    pub lse: f64,
    pub gcn: f64,
    /// Oracle adsorption energy (eV).
    pub e_ad: f64,
    pub migrated: bool,
    pub converged: bool,
    pub split: Split,
}

impl SiteSample {
    pub fn descriptor(&self, kind: DescriptorKind) -> f64 {
        match kind {
            DescriptorKind::Lse => self.lse,
            DescriptorKind::Gcn => self.gcn,
        }
    }

    /// Usable for fitting: converged and still ontop.
    pub fn usable(&self) -> bool {
        self.converged && !self.migrated
    }
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub rows: Vec<SiteSample>,
}

impl Dataset {
    pub fn new(rows: Vec<SiteSample>) -> Self {
        Self { rows }
    }

    /// Clean training rows (migrated and unconverged sites excluded).
    pub fn train_rows(&self) -> impl Iterator<Item = &SiteSample> {
        self.rows
            .iter()
            .filter(|r| r.split == Split::Train && r.usable())
    }

    /// Clean test rows.
    pub fn test_rows(&self) -> impl Iterator<Item = &SiteSample> {
        self.rows
            .iter()
            .filter(|r| r.split == Split::Test && r.usable())
    }

    pub fn elements(&self) -> Vec<Element> {
        let mut els: Vec<Element> = self.rows.iter().map(|r| r.element).collect();
        els.sort();
        els.dedup();
        els
    }
}
