//! `train-mono`: build the monometallic training set (irreducible ontop
//! sites of every configured truncated-octahedron size), run the direct
//! oracle, and fit the per-element linear models on both descriptors.

use crate::config::ResolvedConfig;
use crate::errors::CliError;
use crate::pipeline::{with_pool, Pipeline};
use crate::records::{mono_csv, write_text, MonoRecord};
use npscreen_core::models::{
    evaluate_metrics, fit_linear, predict_linear, save_models, Dataset, DescriptorKind, Metrics,
    ModelSet, SiteSample, Split,
};
use npscreen_core::{CoreError, Element};
use std::collections::BTreeMap;

pub struct TrainMonoReport {
    pub models: ModelSet,
    pub rows: Vec<MonoRecord>,
    pub dataset: Dataset,
    /// Training-set metrics of the LSE-linear model, per element.
    pub lse_fit_metrics: BTreeMap<Element, Metrics>,
}

pub const SOURCE_TAG: &str = "sma_oracle";

pub fn run_train_mono(cfg: &ResolvedConfig) -> Result<TrainMonoReport, CliError> {
    cfg.ensure_out_dir()?;
    cfg.guard_overwrite(&cfg.models_path)?;
    let pipeline = Pipeline::new(cfg)?;

    let tasks: Vec<(Element, usize)> = cfg
        .run
        .elements
        .iter()
        .flat_map(|&el| cfg.run.mono_sizes.iter().map(move |&s| (el, s)))
        .collect();

    let results: Vec<Result<_, CoreError>> = with_pool(cfg.workers, || {
        use rayon::prelude::*;
        tasks
            .par_iter()
            .map(|&(el, size)| pipeline.mono_orbit_oracle(el, size))
            .collect()
    })?;

    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for result in results {
        for r in result? {
            rows.push(MonoRecord {
                element: r.element,
                size: r.size,
                atom_index: r.site.atom_index,
                orbit_size: r.orbit_size,
                cn: r.site.cn,
                site_class: r.site.site_class,
                lse_ev: r.lse,
                gcn: r.gcn,
                e_ad_ev: r.ads.e_ad,
                migrated: r.ads.migrated,
                converged: r.ads.converged,
            });
            samples.push(SiteSample {
                np_id: r.size,
                atom_index: r.site.atom_index,
                element: r.element,
                lse: r.lse,
                gcn: r.gcn,
                e_ad: r.ads.e_ad,
                migrated: r.ads.migrated,
                converged: r.ads.converged,
                split: Split::Train,
            });
        }
    }

    let dataset = Dataset::new(samples);
    let lse = fit_linear(&dataset, DescriptorKind::Lse, SOURCE_TAG)?;
    let gcn = fit_linear(&dataset, DescriptorKind::Gcn, SOURCE_TAG)?;

    let mut lse_fit_metrics = BTreeMap::new();
    for &el in &cfg.run.elements {
        let mut preds = Vec::new();
        let mut targets = Vec::new();
        for row in dataset.train_rows().filter(|r| r.element == el) {
            preds.push(predict_linear(&lse, el, row.lse)?);
            targets.push(row.e_ad);
        }
        lse_fit_metrics.insert(el, evaluate_metrics(&preds, &targets)?);
    }

    let models = ModelSet {
        lse,
        gcn,
        krr: None,
        qcl: None,
    };
    save_models(&cfg.models_path, &models)?;
    write_text(&cfg.out_dir.join("mono_sites.csv"), &mono_csv(&rows))?;

    for (el, m) in &lse_fit_metrics {
        println!(
            "{el}: n = {}, LSE-linear train RMSE {:.4} eV, R² {:.4}",
            m.n, m.rmse, m.r2
        );
    }
    println!("wrote {:?} and mono_sites.csv", cfg.models_path);
    Ok(TrainMonoReport {
        models,
        rows,
        dataset,
        lse_fit_metrics,
    })
}
