//! Surface descriptors: local surface energy (LSE) and generalized
//! coordination number (GCN).
//!
//! LSE of a surface atom is its per-atom energy minus the bulk per-atom
//! energy of the same element — the energy penalty of sitting in a surface
//! environment. GCN is the coordination-weighted neighbor count
//! Σ_j cn(j)/12 with 12 the fcc bulk coordination.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::geometry::{classify_sites, ClusterShape, SiteClass};
use crate::neighbors::NeighborTable;
use crate::potential::EnergyReport;
use crate::structure::Structure;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// Per-element bulk reference: per-atom energy and equilibrium lattice
/// constant from the lattice scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BulkRefEntry {
    pub e_atom_bulk: f64,
    pub lattice_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BulkReference {
    entries: BTreeMap<Element, BulkRefEntry>,
}

impl BulkReference {
    pub fn new(entries: BTreeMap<Element, BulkRefEntry>) -> Self {
        Self { entries }
    }

    pub fn get(&self, element: Element) -> Result<BulkRefEntry> {
        self.entries
            .get(&element)
            .copied()
            .ok_or(CoreError::MissingReference(element))
    }

    pub fn insert(&mut self, element: Element, entry: BulkRefEntry) {
        self.entries.insert(element, entry);
    }

    pub fn entries(&self) -> &BTreeMap<Element, BulkRefEntry> {
        &self.entries
    }

    /// Unweighted mean lattice constant of the given constituents; the basis
    /// of the neighbor cutoff for relaxed or multi-element structures.
    pub fn mean_lattice_constant(&self, elements: &[Element]) -> Result<f64> {
        if elements.is_empty() {
            return Err(CoreError::InvalidArgument(
                "mean lattice constant over an empty element list".into(),
            ));
        }
        let mut acc = 0.0;
        for &el in elements {
            acc += self.get(el)?.lattice_constant;
        }
        Ok(acc / elements.len() as f64)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text =
            serde_json::to_string_pretty(self).map_err(|e| CoreError::ModelIo(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CoreError::ModelIo(e.to_string()))
    }
}

/// Both descriptors for one surface atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorRecord {
    pub atom_index: usize,
    pub element: Element,
    pub cn: usize,
    pub site_class: SiteClass,
    /// Local surface energy (eV).
    pub lse: f64,
    /// Generalized coordination number (dimensionless).
    pub gcn: f64,
}

/// GCN of any atom: Σ over neighbors of cn(neighbor)/12. The integer sum is
/// divided once so equal neighbor multisets give bit-identical values.
pub fn gcn_of(table: &NeighborTable, i: usize) -> f64 {
    let total: usize = table.neighbors[i].iter().map(|&j| table.cn(j)).sum();
    total as f64 / 12.0
}

/// LSE of any atom given its per-atom energy.
pub fn lse_of(report: &EnergyReport, bulk: &BulkReference, element: Element, i: usize) -> Result<f64> {
    Ok(report.per_atom[i] - bulk.get(element)?.e_atom_bulk)
}

/// Computes LSE and GCN for every surface atom (cn < 12) of a relaxed,
/// adsorbate-free structure. `report` must come from evaluating exactly this
/// structure.
pub fn compute_descriptors(
    structure: &Structure,
    report: &EnergyReport,
    bulk: &BulkReference,
    shape: ClusterShape,
    cutoff: f64,
) -> Result<Vec<DescriptorRecord>> {
    if report.per_atom.len() != structure.len() {
        return Err(CoreError::InvalidArgument(
            "energy report does not match the structure".into(),
        ));
    }
    let sites = classify_sites(structure, shape, cutoff)?;
    let table = NeighborTable::build(structure, cutoff);
    let mut records = Vec::with_capacity(sites.len());
    for site in sites {
        let i = site.atom_index;
        if site.cn == 0 {
            log::warn!("atom {i} is isolated at cutoff {cutoff}; gcn recorded as 0");
        }
        let lse = lse_of(report, bulk, site.element, i)?;
        if !lse.is_finite() {
            return Err(CoreError::NumericalFailure(format!(
                "non-finite LSE for atom {i}"
            )));
        }
        records.push(DescriptorRecord {
            atom_index: i,
            element: site.element,
            cn: site.cn,
            site_class: site.site_class,
            lse,
            gcn: gcn_of(&table, i),
        });
    }
    Ok(records)
}
