//! Run configuration: JSON file plus command-line overrides.

use crate::errors::CliError;
use npscreen_core::geometry::ClusterShape;
use npscreen_core::optimize::RelaxSettings;
use npscreen_core::Element;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectorKind {
    None,
    Krr,
    Qcl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsConfig {
    /// Potential parameter JSON; omitted = built-in defaults.
    #[serde(default)]
    pub params: Option<PathBuf>,
    /// Bulk reference JSON (written by `bulkref`, read by everything else).
    #[serde(default)]
    pub bulkref: Option<PathBuf>,
    /// Model JSON (written by `train-mono`, updated by `fit-corrector`).
    #[serde(default)]
    pub models: Option<PathBuf>,
    /// Output directory for CSV/JSON artifacts.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl Default for PathsConfig {
    fn default() -> Self {
        Self {
            params: None,
            bulkref: None,
            models: None,
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxConfig {
    pub fmax: f64,
    pub max_step: f64,
    pub max_iterations: usize,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        let d = RelaxSettings::default();
        Self {
            fmax: d.fmax,
            max_step: d.max_step,
            max_iterations: d.max_iterations,
        }
    }
}

impl RelaxConfig {
    pub fn settings(&self) -> RelaxSettings {
        RelaxSettings {
            fmax: self.fmax,
            max_step: self.max_step,
            max_iterations: self.max_iterations,
        }
    }
}

fn default_elements() -> Vec<Element> {
    Element::METALS.to_vec()
}
fn default_shape() -> ClusterShape {
    ClusterShape::TruncatedOctahedron
}
fn default_size() -> usize {
    201
}
fn default_ensemble() -> usize {
    20
}
fn default_seed() -> u64 {
    7
}
fn default_workers() -> usize {
    0
}
fn default_corrector() -> CorrectorKind {
    CorrectorKind::None
}
fn default_train_count() -> usize {
    6
}
fn default_mono_sizes() -> Vec<usize> {
    vec![38, 79, 116, 201]
}
fn default_bin_width() -> f64 {
    0.05
}
fn default_height() -> f64 {
    npscreen_core::adsorption::DEFAULT_HEIGHT
}
fn default_krr_search() -> usize {
    100
}
fn default_shape_ensemble() -> usize {
    5
}

/// Everything a run needs; every field has a sensible desk-scale default.
/// Train/test splitting is by particle id: ids < `train_count` train the
/// correctors, the rest are the held-out test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub elements: Vec<Element>,
    pub shape: ClusterShape,
    pub size: usize,
    pub ensemble: usize,
    pub master_seed: u64,
    /// 0 = use all available cores.
    pub workers: usize,
    pub paths: PathsConfig,
    /// Run the direct adsorption oracle during `screen`.
    pub oracle: bool,
    pub corrector: CorrectorKind,
    pub train_count: usize,
    pub mono_sizes: Vec<usize>,
    /// Explicit composition override (counts per element); empty = near-uniform split.
    pub counts_override: BTreeMap<Element, usize>,
    pub histogram_bin_width: f64,
    pub relax: RelaxConfig,
    pub placement_height: f64,
    pub krr_search: usize,
    /// Particles per shape in the `shapes` command.
    pub shape_ensemble: usize,
    pub overwrite: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            elements: default_elements(),
            shape: default_shape(),
            size: default_size(),
            ensemble: default_ensemble(),
            master_seed: default_seed(),
            workers: default_workers(),
            paths: PathsConfig::default(),
            oracle: false,
            corrector: default_corrector(),
            train_count: default_train_count(),
            mono_sizes: default_mono_sizes(),
            counts_override: BTreeMap::new(),
            histogram_bin_width: default_bin_width(),
            relax: RelaxConfig::default(),
            placement_height: default_height(),
            krr_search: default_krr_search(),
            shape_ensemble: default_shape_ensemble(),
            overwrite: false,
        }
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub overwrite: bool,
}

/// A validated configuration with all paths made concrete.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub run: RunConfig,
    pub out_dir: PathBuf,
    pub params_path: Option<PathBuf>,
    pub bulkref_path: PathBuf,
    pub models_path: PathBuf,
    pub workers: usize,
    pub config_hash: String,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read config {path:?}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("bad config {path:?}: {e}")))
    }

    pub fn resolve(mut self, overrides: &Overrides) -> Result<ResolvedConfig, CliError> {
        if let Some(seed) = overrides.seed {
            self.master_seed = seed;
        }
        if let Some(workers) = overrides.workers {
            self.workers = workers;
        }
        if let Some(out) = &overrides.out {
            self.paths.out_dir = Some(out.clone());
        }
        if overrides.overwrite {
            self.overwrite = true;
        }

        if self.elements.is_empty() {
            return Err(CliError::validation("element list must not be empty"));
        }
        let mut sorted = self.elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.elements.len() {
            return Err(CliError::validation("element list contains duplicates"));
        }
        self.elements = sorted;
        if self.elements.iter().any(|e| !e.is_metal()) {
            return Err(CliError::validation("elements must be metals"));
        }
        if self.ensemble < 1 {
            return Err(CliError::validation("ensemble count must be >= 1"));
        }
        if self.train_count >= self.ensemble && self.ensemble > 1 {
            return Err(CliError::validation(format!(
                "train_count {} must leave test particles in an ensemble of {}",
                self.train_count, self.ensemble
            )));
        }
        if self.histogram_bin_width <= 0.0 {
            return Err(CliError::validation("histogram bin width must be positive"));
        }
        if self.placement_height <= 0.0 {
            return Err(CliError::validation("placement height must be positive"));
        }
        if self.relax.fmax <= 0.0 || self.relax.max_step <= 0.0 {
            return Err(CliError::validation("relax settings must be positive"));
        }

        let workers = if self.workers == 0 {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        } else {
            self.workers
        };

        let out_dir = self
            .paths
            .out_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"));
        let bulkref_path = self
            .paths
            .bulkref
            .clone()
            .unwrap_or_else(|| out_dir.join("bulkref.json"));
        let models_path = self
            .paths
            .models
            .clone()
            .unwrap_or_else(|| out_dir.join("models.json"));
        if let Some(p) = &self.paths.params {
            if !p.exists() {
                return Err(CliError::validation(format!(
                    "parameter file {p:?} does not exist"
                )));
            }
        }

        let canonical = serde_json::to_string(&self)
            .map_err(|e| CliError::validation(format!("cannot canonicalize config: {e}")))?;
        let config_hash = hex_digest(&canonical);

        Ok(ResolvedConfig {
            params_path: self.paths.params.clone(),
            bulkref_path,
            models_path,
            out_dir,
            workers,
            config_hash,
            run: self,
        })
    }
}

fn hex_digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

impl ResolvedConfig {
    /// Loads a config file when given, otherwise starts from defaults.
    pub fn from_cli(
        config_path: Option<&Path>,
        overrides: &Overrides,
    ) -> Result<Self, CliError> {
        let base = match config_path {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        base.resolve(overrides)
    }

    pub fn ensure_out_dir(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| CliError::validation(format!("cannot create {:?}: {e}", self.out_dir)))
    }

    /// Refuses to clobber an existing artifact unless --overwrite was given.
    pub fn guard_overwrite(&self, path: &Path) -> Result<(), CliError> {
        if path.exists() && !self.run.overwrite {
            return Err(CliError::validation(format!(
                "{path:?} already exists; pass --overwrite to replace it"
            )));
        }
        Ok(())
    }
}
