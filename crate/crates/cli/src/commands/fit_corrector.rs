//! `fit-corrector`: run the oracle over the training split of the ensemble
//! and fit the configured nonlinear corrector (KRR or QCL) on (LSE, E_ad),
//! then update the model file in place.

use crate::commands::{dataset_rows, load_models, Manifest};
use crate::config::{CorrectorKind, ResolvedConfig};
use crate::errors::CliError;
use crate::pipeline::{with_pool, Pipeline};
use npscreen_core::models::{fit_krr, save_models, Dataset, DescriptorKind};
use npscreen_core::quantum::{fit_qcl, QclModel};
use npscreen_core::models::Split;

pub struct CorrectorReport {
    pub kind: CorrectorKind,
    pub n_train_rows: usize,
    pub n_train_particles: usize,
}

pub fn run_fit_corrector(cfg: &ResolvedConfig) -> Result<CorrectorReport, CliError> {
    if cfg.run.corrector == CorrectorKind::None {
        return Err(CliError::validation(
            "fit-corrector needs `corrector` set to \"krr\" or \"qcl\" in the config",
        ));
    }
    cfg.ensure_out_dir()?;
    let pipeline = Pipeline::new(cfg)?;
    let mut models = load_models(cfg)?;
    let mut manifest = Manifest::new("fit-corrector", cfg);

    let (particles, skipped) = manifest.time("screen_train_split", || {
        with_pool(cfg.workers, || {
            pipeline.screen_ensemble(cfg.run.shape, cfg.run.size, 0..cfg.run.train_count, 0)
        })
    })?;
    if !skipped.is_empty() {
        return Err(CliError::Numerical(format!(
            "training particles failed to relax: {skipped:?}"
        )));
    }

    let mut samples = Vec::new();
    manifest.time("oracle_train_split", || -> Result<(), CliError> {
        for particle in &particles {
            let oracle = with_pool(cfg.workers, || pipeline.oracle_all_sites(particle))??;
            samples.extend(dataset_rows(particle, &oracle, Split::Train));
        }
        Ok(())
    })?;
    let dataset = Dataset::new(samples);
    let n_train_rows = dataset.train_rows().count();

    manifest.time("fit", || -> Result<(), CliError> {
        match cfg.run.corrector {
            CorrectorKind::Krr => {
                let set = fit_krr(
                    &dataset,
                    DescriptorKind::Lse,
                    cfg.run.krr_search,
                    cfg.run.master_seed,
                )?;
                models.krr = Some(set);
            }
            CorrectorKind::Qcl => {
                let config = QclModel::default_config(cfg.run.master_seed);
                let set = fit_qcl(&dataset, DescriptorKind::Lse, &config, cfg.run.master_seed)?;
                models.qcl = Some(set);
            }
            CorrectorKind::None => unreachable!(),
        }
        Ok(())
    })?;

    save_models(&cfg.models_path, &models)?;
    manifest.n_records = n_train_rows;
    manifest.write(&cfg.out_dir.join("fit_corrector_manifest.json"))?;

    println!(
        "fitted {:?} corrector on {} usable rows from {} training particles -> {:?}",
        cfg.run.corrector,
        n_train_rows,
        particles.len(),
        cfg.models_path
    );
    Ok(CorrectorReport {
        kind: cfg.run.corrector,
        n_train_rows,
        n_train_particles: particles.len(),
    })
}
