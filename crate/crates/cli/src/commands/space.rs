//! `space`: exact chemical-space sizes — element-set combinations and
//! per-composition site configurations.

use crate::errors::CliError;
use clap::Args;
use npscreen_core::geometry::{chemical_space_size, Composition};
use npscreen_core::Element;
use serde::Serialize;

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// Size of the candidate element pool.
    #[arg(long, default_value_t = 40)]
    pub candidates: u64,
    /// Elements chosen per alloy.
    #[arg(long, default_value_t = 5)]
    pub choose: u64,
    /// Ontop sites per particle.
    #[arg(long, default_value_t = 122)]
    pub sites: u64,
    /// Atoms per particle (near-uniform split over the element list).
    #[arg(long, default_value_t = 201)]
    pub atoms: usize,
    /// Comma-separated element labels for the site-configuration count.
    #[arg(long, value_delimiter = ',', default_values_t = vec![
        Element::Ir, Element::Pd, Element::Pt, Element::Rh, Element::Ru
    ])]
    pub elements: Vec<Element>,
}

#[derive(Debug, Serialize)]
pub struct SpaceReport {
    pub combinations_exact: String,
    pub combinations_log10: f64,
    pub site_configurations_exact: String,
    pub site_configurations_log10: f64,
}

pub fn run_space(args: &SpaceArgs) -> Result<SpaceReport, CliError> {
    let composition = Composition::near_uniform(args.atoms, &args.elements)
        .map_err(CliError::from)?;
    let space = chemical_space_size(args.sites, &composition, args.candidates, args.choose)?;
    let report = SpaceReport {
        combinations_exact: space
            .combinations
            .exact_value
            .as_ref()
            .map(|v| v.to_string())
            .unwrap_or_default(),
        combinations_log10: space.combinations.log10_value,
        site_configurations_exact: space
            .site_configurations
            .exact_value
            .as_ref()
            .map(|v| v.to_string())
            .unwrap_or_default(),
        site_configurations_log10: space.site_configurations.log10_value,
    };
    println!(
        "element combinations C({}, {}) = {} (log10 = {:.4})",
        args.candidates, args.choose, report.combinations_exact, report.combinations_log10
    );
    println!(
        "site configurations for {composition} over {} sites = {} (log10 = {:.4})",
        args.sites, report.site_configurations_exact, report.site_configurations_log10
    );
    Ok(report)
}
