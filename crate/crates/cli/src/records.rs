//! Output records and CSV/JSON writers.
//!
//! Column order and headers are fixed and guarded by golden tests. Floats
//! are written with Rust's shortest round-trip formatting, so identical
//! numbers always serialize to identical bytes. Optional columns are left
//! empty, never fabricated.

use npscreen_core::geometry::SiteClass;
use npscreen_core::Element;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub const SITES_HEADER: &str = "np_id,atom_index,element,cn,site_class,lse_eV,gcn,e_ad_oracle_eV,e_ad_lse_eV,e_ad_gcn_eV,e_ad_corrected_eV,migrated,converged";
pub const MONO_HEADER: &str =
    "element,size,atom_index,orbit_size,cn,site_class,lse_eV,gcn,e_ad_eV,migrated,converged";
pub const HISTOGRAM_HEADER: &str = "quantity,element,bin_lo,bin_hi,count";

/// One ontop site of one screened particle, with every prediction made for it.
#[derive(Debug, Clone, Serialize)]
pub struct SiteRecord {
    pub np_id: usize,
    pub atom_index: usize,
    pub element: Element,
    pub cn: usize,
    pub site_class: SiteClass,
    pub lse_ev: f64,
    pub gcn: f64,
    pub e_ad_oracle_ev: Option<f64>,
    pub e_ad_lse_ev: f64,
    pub e_ad_gcn_ev: f64,
    pub e_ad_corrected_ev: Option<f64>,
    /// Oracle bookkeeping; empty unless the oracle ran for this site.
    pub migrated: Option<bool>,
    pub converged: Option<bool>,
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_bool(v: Option<bool>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn sites_csv(rows: &[SiteRecord]) -> String {
    let mut out = String::from(SITES_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.np_id,
            r.atom_index,
            r.element,
            r.cn,
            r.site_class,
            r.lse_ev,
            r.gcn,
            fmt_opt_f64(r.e_ad_oracle_ev),
            r.e_ad_lse_ev,
            r.e_ad_gcn_ev,
            fmt_opt_f64(r.e_ad_corrected_ev),
            fmt_opt_bool(r.migrated),
            fmt_opt_bool(r.converged),
        )
        .unwrap();
    }
    out
}

/// One oracle row of the monometallic training set.
#[derive(Debug, Clone, Serialize)]
pub struct MonoRecord {
    pub element: Element,
    pub size: usize,
    pub atom_index: usize,
    pub orbit_size: usize,
    pub cn: usize,
    pub site_class: SiteClass,
    pub lse_ev: f64,
    pub gcn: f64,
    pub e_ad_ev: f64,
    pub migrated: bool,
    pub converged: bool,
}

pub fn mono_csv(rows: &[MonoRecord]) -> String {
    let mut out = String::from(MONO_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.element,
            r.size,
            r.atom_index,
            r.orbit_size,
            r.cn,
            r.site_class,
            r.lse_ev,
            r.gcn,
            r.e_ad_ev,
            r.migrated,
            r.converged,
        )
        .unwrap();
    }
    out
}

/// Histogram with bins aligned to multiples of the bin width.
pub fn histogram_csv(
    quantities: &[(&str, Vec<(Element, f64)>)],
    bin_width: f64,
) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for (name, values) in quantities {
        // Per element, then pooled under the pseudo-label "all".
        let mut by_el: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for (el, v) in values {
            by_el.entry(el.to_string()).or_default().push(*v);
        }
        by_el.insert(
            "all".to_string(),
            values.iter().map(|(_, v)| *v).collect(),
        );
        for (el, vals) in by_el {
            let mut bins: BTreeMap<i64, usize> = BTreeMap::new();
            for v in vals {
                *bins.entry((v / bin_width).floor() as i64).or_insert(0) += 1;
            }
            for (bin, count) in bins {
                let lo = bin as f64 * bin_width;
                let hi = (bin + 1) as f64 * bin_width;
                writeln!(out, "{name},{el},{lo},{hi},{count}").unwrap();
            }
        }
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), crate::errors::CliError> {
    std::fs::write(path, text).map_err(|e| {
        crate::errors::CliError::Validation(format!("cannot write {path:?}: {e}"))
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), crate::errors::CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| crate::errors::CliError::Validation(format!("serialize {path:?}: {e}")))?;
    write_text(path, &(text + "\n"))
}
