//! Subcommand implementations. Each `run_*` function takes a resolved
//! configuration, writes its artifacts, and returns a report the binary (or
//! a test harness) can inspect.

pub mod bulkref;
pub mod fit_corrector;
pub mod oracle_compare;
pub mod screen;
pub mod shapes;
pub mod space;
pub mod train_mono;

pub use bulkref::run_bulkref;
pub use fit_corrector::{run_fit_corrector, CorrectorReport};
pub use oracle_compare::{run_oracle_compare, CompareReport};
pub use screen::{run_screen, ScreenReport};
pub use shapes::{run_shapes, ShapesReport};
pub use space::{run_space, SpaceArgs, SpaceReport};
pub use train_mono::{run_train_mono, TrainMonoReport};

use crate::config::{CorrectorKind, ResolvedConfig};
use crate::errors::CliError;
use crate::pipeline::ScreenedParticle;
use crate::records::SiteRecord;
use npscreen_core::adsorption::AdsorptionResult;
use npscreen_core::models::{predict_krr, predict_linear, ModelSet, SiteSample, Split};
use npscreen_core::quantum::predict_qcl;
use npscreen_core::CoreError;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

/// Run manifest: configuration fingerprint, record accounting, timings.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub workers: usize,
    pub ensemble: usize,
    pub n_records: usize,
    pub skipped: Vec<usize>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl Manifest {
    pub fn new(command: &str, cfg: &ResolvedConfig) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: cfg.config_hash.clone(),
            master_seed: cfg.run.master_seed,
            workers: cfg.workers,
            ensemble: cfg.run.ensemble,
            n_records: 0,
            skipped: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms
            .insert(label.to_string(), start.elapsed().as_millis());
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        crate::records::write_json(path, self)
    }
}

/// Assembles the per-site output rows for one particle: descriptors plus
/// every configured prediction, plus oracle results when available.
pub fn site_records_for(
    particle: &ScreenedParticle,
    models: &ModelSet,
    corrector: CorrectorKind,
    oracle: Option<&[AdsorptionResult]>,
) -> Result<Vec<SiteRecord>, CoreError> {
    if let Some(o) = oracle {
        debug_assert_eq!(o.len(), particle.records.len());
    }
    let mut rows = Vec::with_capacity(particle.records.len());
    for (k, r) in particle.records.iter().enumerate() {
        let e_ad_lse = predict_linear(&models.lse, r.element, r.lse)?;
        let e_ad_gcn = predict_linear(&models.gcn, r.element, r.gcn)?;
        let e_ad_corrected = match corrector {
            CorrectorKind::None => None,
            CorrectorKind::Krr => {
                let set = models
                    .krr
                    .as_ref()
                    .ok_or_else(|| CoreError::ModelIo("model file has no krr block".into()))?;
                Some(predict_krr(set, r.element, r.lse)?)
            }
            CorrectorKind::Qcl => {
                let set = models
                    .qcl
                    .as_ref()
                    .ok_or_else(|| CoreError::ModelIo("model file has no qcl block".into()))?;
                Some(predict_qcl(set, r.element, r.lse)?)
            }
        };
        let ads = oracle.map(|o| &o[k]);
        rows.push(SiteRecord {
            np_id: particle.np_id,
            atom_index: r.atom_index,
            element: r.element,
            cn: r.cn,
            site_class: r.site_class,
            lse_ev: r.lse,
            gcn: r.gcn,
            e_ad_oracle_ev: ads.map(|a| a.e_ad),
            e_ad_lse_ev: e_ad_lse,
            e_ad_gcn_ev: e_ad_gcn,
            e_ad_corrected_ev: e_ad_corrected,
            migrated: ads.map(|a| a.migrated),
            converged: ads.map(|a| a.converged),
        });
    }
    Ok(rows)
}

/// Dataset rows (descriptors + oracle target) for one particle.
pub fn dataset_rows(
    particle: &ScreenedParticle,
    oracle: &[AdsorptionResult],
    split: Split,
) -> Vec<SiteSample> {
    particle
        .records
        .iter()
        .zip(oracle)
        .map(|(r, a)| SiteSample {
            np_id: particle.np_id,
            atom_index: r.atom_index,
            element: r.element,
            lse: r.lse,
            gcn: r.gcn,
            e_ad: a.e_ad,
            migrated: a.migrated,
            converged: a.converged,
            split,
        })
        .collect()
}

pub fn load_models(cfg: &ResolvedConfig) -> Result<ModelSet, CliError> {
    if !cfg.models_path.exists() {
        return Err(CliError::validation(format!(
            "model file {:?} not found; run `npscreen train-mono` first",
            cfg.models_path
        )));
    }
    Ok(npscreen_core::models::load_models(&cfg.models_path)?)
}
