//! `shapes`: test the truncated-octahedron-trained LSE model on regular
//! octahedra and icosahedra — the shape-universality check.

use crate::commands::oracle_compare::compare_on_split;
use crate::commands::{load_models, Manifest};
use crate::config::ResolvedConfig;
use crate::errors::CliError;
use crate::pipeline::{Pipeline, SEED_OFFSET_ICOSAHEDRON, SEED_OFFSET_OCTAHEDRON};
use npscreen_core::geometry::ClusterShape;
use npscreen_core::models::Metrics;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct ShapesReport {
    /// LSE-linear RMSE on the truncated-octahedron test split.
    pub baseline: Metrics,
    pub octahedron: Metrics,
    pub icosahedron: Metrics,
    pub ratio_octahedron: f64,
    pub ratio_icosahedron: f64,
    /// Cross-shape RMSE within 1.5× of the baseline.
    pub universality_holds: bool,
}

pub fn run_shapes(cfg: &ResolvedConfig) -> Result<ShapesReport, CliError> {
    if cfg.run.shape_ensemble < 1 {
        return Err(CliError::validation("shape_ensemble must be >= 1"));
    }
    cfg.ensure_out_dir()?;
    let pipeline = Pipeline::new(cfg)?;
    let models = load_models(cfg)?;
    let mut manifest = Manifest::new("shapes", cfg);

    let baseline = manifest.time("baseline", || {
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
    let oct = manifest.time("octahedron", || {
        compare_on_split(
            cfg,
            &pipeline,
            &models,
            ClusterShape::Octahedron,
            146,
            0..cfg.run.shape_ensemble,
            SEED_OFFSET_OCTAHEDRON,
        )
    })?;
    let ico = manifest.time("icosahedron", || {
        compare_on_split(
            cfg,
            &pipeline,
            &models,
            ClusterShape::Icosahedron,
            147,
            0..cfg.run.shape_ensemble,
            SEED_OFFSET_ICOSAHEDRON,
        )
    })?;

    let ratio_oct = oct.lse_linear.rmse / baseline.lse_linear.rmse;
    let ratio_ico = ico.lse_linear.rmse / baseline.lse_linear.rmse;
    let report = ShapesReport {
        baseline: baseline.lse_linear,
        octahedron: oct.lse_linear,
        icosahedron: ico.lse_linear,
        ratio_octahedron: ratio_oct,
        ratio_icosahedron: ratio_ico,
        universality_holds: ratio_oct <= 1.5 && ratio_ico <= 1.5,
    };
    crate::records::write_json(&cfg.out_dir.join("shapes_metrics.json"), &report)?;
    manifest.write(&cfg.out_dir.join("shapes_manifest.json"))?;

    println!(
        "baseline (truncated octahedron) rmse {:.4} eV",
        report.baseline.rmse
    );
    println!(
        "octahedron-146  rmse {:.4} eV  (x{:.2})",
        report.octahedron.rmse, ratio_oct
    );
    println!(
        "icosahedron-147 rmse {:.4} eV  (x{:.2})",
        report.icosahedron.rmse, ratio_ico
    );
    Ok(report)
}
