//! `screen`: generate the seeded alloy ensemble, relax every particle,
//! compute both descriptors, predict adsorption energies per element, and
//! emit the site table plus distribution histograms.

use crate::commands::{load_models, site_records_for, Manifest};
use crate::config::ResolvedConfig;
use crate::errors::CliError;
use crate::pipeline::{with_pool, Pipeline};
use crate::records::{histogram_csv, sites_csv, write_text, SiteRecord};
use npscreen_core::Element;
use std::path::PathBuf;

pub struct ScreenReport {
    pub rows: Vec<SiteRecord>,
    pub skipped: Vec<usize>,
    pub sites_path: PathBuf,
    pub histograms_path: PathBuf,
    pub manifest_path: PathBuf,
}

pub fn run_screen(cfg: &ResolvedConfig) -> Result<ScreenReport, CliError> {
    cfg.ensure_out_dir()?;
    let sites_path = cfg.out_dir.join("sites.csv");
    let histograms_path = cfg.out_dir.join("histograms.csv");
    let manifest_path = cfg.out_dir.join("screen_manifest.json");
    cfg.guard_overwrite(&sites_path)?;

    let pipeline = Pipeline::new(cfg)?;
    let models = load_models(cfg)?;
    let mut manifest = Manifest::new("screen", cfg);

    let (particles, skipped) = manifest.time("screen", || {
        with_pool(cfg.workers, || {
            pipeline.screen_ensemble(cfg.run.shape, cfg.run.size, 0..cfg.run.ensemble, 0)
        })
    })?;

    let mut rows: Vec<SiteRecord> = Vec::new();
    manifest.time("predict_and_oracle", || -> Result<(), CliError> {
        for particle in &particles {
            let oracle = if cfg.run.oracle {
                Some(with_pool(cfg.workers, || {
                    pipeline.oracle_all_sites(particle)
                })??)
            } else {
                None
            };
            rows.extend(site_records_for(
                particle,
                &models,
                cfg.run.corrector,
                oracle.as_deref(),
            )?);
        }
        Ok(())
    })?;

    let lse_values: Vec<(Element, f64)> = rows.iter().map(|r| (r.element, r.lse_ev)).collect();
    let pred_values: Vec<(Element, f64)> =
        rows.iter().map(|r| (r.element, r.e_ad_lse_ev)).collect();
    let histograms = histogram_csv(
        &[("lse", lse_values), ("e_ad_pred", pred_values)],
        cfg.run.histogram_bin_width,
    );

    write_text(&sites_path, &sites_csv(&rows))?;
    write_text(&histograms_path, &histograms)?;
    manifest.n_records = rows.len();
    manifest.skipped = skipped.clone();
    manifest.write(&manifest_path)?;

    println!(
        "screened {} particles ({} skipped), {} site records -> {:?}",
        cfg.run.ensemble - skipped.len(),
        skipped.len(),
        rows.len(),
        sites_path
    );
    Ok(ScreenReport {
        rows,
        skipped,
        sites_path,
        histograms_path,
        manifest_path,
    })
}
