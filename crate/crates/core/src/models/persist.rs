//! Model-file persistence.
//!
//! A model file holds the two per-element linear blocks (one per descriptor)
//! plus optional nonlinear correctors, all with their standardization
//! constants, so prediction is self-contained. JSON uses sorted keys and a
//! fixed layout: save → load → save is byte-identical.

use crate::error::{CoreError, Result};
use crate::models::{KrrModelSet, LinearModelSet};
use crate::quantum::QclModelSet;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSet {
    pub lse: LinearModelSet,
    pub gcn: LinearModelSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub krr: Option<KrrModelSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qcl: Option<QclModelSet>,
}

pub fn save_models(path: &Path, models: &ModelSet) -> Result<()> {
    let text =
        serde_json::to_string_pretty(models).map_err(|e| CoreError::ModelIo(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn load_models(path: &Path) -> Result<ModelSet> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CoreError::ModelIo(e.to_string()))
}
