//! `oracle-compare`: run the direct oracle over the held-out test split and
//! report side-by-side metrics for the LSE-linear, GCN-linear, and corrected
//! predictors, plus a scatter table.

use crate::commands::{load_models, site_records_for, Manifest};
use crate::config::{CorrectorKind, ResolvedConfig};
use crate::errors::CliError;
use crate::pipeline::{with_pool, Pipeline};
use crate::records::{sites_csv, write_text, SiteRecord};
use npscreen_core::geometry::ClusterShape;
use npscreen_core::models::{
    evaluate_metrics, predict_krr, predict_linear, Metrics, ModelSet,
};
use npscreen_core::quantum::predict_qcl;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub lse_linear: Metrics,
    pub gcn_linear: Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub krr: Option<Metrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qcl: Option<Metrics>,
    pub n_test_particles: usize,
    pub n_excluded_sites: usize,
    #[serde(skip)]
    pub rows: Vec<SiteRecord>,
}

/// Oracle + predictions over an ensemble id range of one shape; shared with
/// the `shapes` command.
pub fn compare_on_split(
    cfg: &ResolvedConfig,
    pipeline: &Pipeline,
    models: &ModelSet,
    shape: ClusterShape,
    size: usize,
    ids: std::ops::Range<usize>,
    seed_offset: u64,
) -> Result<CompareReport, CliError> {
    let n_particles = ids.len();
    let (particles, skipped) = with_pool(cfg.workers, || {
        pipeline.screen_ensemble(shape, size, ids, seed_offset)
    })?;
    if !skipped.is_empty() {
        return Err(CliError::Numerical(format!(
            "test particles failed to relax: {skipped:?}"
        )));
    }

    let mut rows: Vec<SiteRecord> = Vec::new();
    let mut oracle_by_particle = Vec::new();
    for particle in &particles {
        let oracle = with_pool(cfg.workers, || pipeline.oracle_all_sites(particle))??;
        rows.extend(site_records_for(
            particle,
            models,
            cfg.run.corrector,
            Some(&oracle),
        )?);
        oracle_by_particle.push(oracle);
    }

    // Usable sites: converged and still ontop.
    let mut lse_pred = Vec::new();
    let mut gcn_pred = Vec::new();
    let mut krr_pred = Vec::new();
    let mut qcl_pred = Vec::new();
    let mut targets = Vec::new();
    let mut n_excluded = 0usize;
    for (particle, oracle) in particles.iter().zip(&oracle_by_particle) {
        for (r, a) in particle.records.iter().zip(oracle) {
            if !(a.converged && !a.migrated) {
                n_excluded += 1;
                continue;
            }
            targets.push(a.e_ad);
            lse_pred.push(predict_linear(&models.lse, r.element, r.lse)?);
            gcn_pred.push(predict_linear(&models.gcn, r.element, r.gcn)?);
            if let Some(set) = &models.krr {
                krr_pred.push(predict_krr(set, r.element, r.lse)?);
            }
            if let Some(set) = &models.qcl {
                qcl_pred.push(predict_qcl(set, r.element, r.lse)?);
            }
        }
    }
    if targets.is_empty() {
        return Err(CliError::Numerical(
            "no usable oracle sites on the test split".into(),
        ));
    }

    let lse_linear = evaluate_metrics(&lse_pred, &targets)?;
    let gcn_linear = evaluate_metrics(&gcn_pred, &targets)?;
    let krr = if krr_pred.len() == targets.len() {
        Some(evaluate_metrics(&krr_pred, &targets)?)
    } else {
        None
    };
    let qcl = if qcl_pred.len() == targets.len() {
        Some(evaluate_metrics(&qcl_pred, &targets)?)
    } else {
        None
    };

    Ok(CompareReport {
        lse_linear,
        gcn_linear,
        krr,
        qcl,
        n_test_particles: n_particles,
        n_excluded_sites: n_excluded,
        rows,
    })
}

pub fn run_oracle_compare(cfg: &ResolvedConfig) -> Result<CompareReport, CliError> {
    cfg.ensure_out_dir()?;
    let pipeline = Pipeline::new(cfg)?;
    let models = load_models(cfg)?;
    // The corrector column in the scatter table follows the config, but
    // metrics are reported for every fitted corrector block.
    if cfg.run.corrector == CorrectorKind::Krr && models.krr.is_none() {
        return Err(CliError::validation("corrector = krr but the model file has no krr block"));
    }
    if cfg.run.corrector == CorrectorKind::Qcl && models.qcl.is_none() {
        return Err(CliError::validation("corrector = qcl but the model file has no qcl block"));
    }
    let mut manifest = Manifest::new("oracle-compare", cfg);

    let report = manifest.time("compare", || {
        compare_on_split(
            cfg,
            &pipeline,
            &models,
            cfg.run.shape,
            cfg.run.size,
            cfg.run.train_count..cfg.run.ensemble,
            0,
        )
    })?;

    write_text(&cfg.out_dir.join("scatter.csv"), &sites_csv(&report.rows))?;
    crate::records::write_json(&cfg.out_dir.join("metrics.json"), &report)?;
    manifest.n_records = report.rows.len();
    manifest.write(&cfg.out_dir.join("oracle_compare_manifest.json"))?;

    let show = |name: &str, m: &Metrics| {
        println!(
            "{name:<12} rmse {:.4} eV   me {:+.4} eV   r2 {:+.4}   n {}",
            m.rmse, m.me, m.r2, m.n
        );
    };
    show("lse-linear", &report.lse_linear);
    show("gcn-linear", &report.gcn_linear);
    if let Some(m) = &report.krr {
        show("krr", m);
    }
    if let Some(m) = &report.qcl {
        show("qcl", m);
    }
    println!(
        "test particles {}, excluded sites {}",
        report.n_test_particles, report.n_excluded_sites
    );
    Ok(report)
}
