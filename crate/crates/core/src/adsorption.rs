//! Direct ontop adsorption-energy oracle.
//!
//! Protocol: place the adsorbate 2 Å above the site atom along the outward
//! surface normal, freeze everything except the adsorbate and the site atom,
//! relax, and take E_ad = E(adsorbate+particle) − E(adsorbate) − E(bare
//! particle). Relaxations that leave the ontop registry are flagged as
//! migrated, never dropped.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::geometry::SiteInfo;
use crate::optimize::{relax, RelaxSettings};
use crate::potential::Potential;
use crate::structure::Structure;
use crate::vec3;

/// Default adsorbate placement height above the site atom (Å).
pub const DEFAULT_HEIGHT: f64 = 2.0;

/// Lateral drift off the placement axis beyond which the adsorbate no longer
/// counts as ontop (Å).
const MIGRATION_LATERAL_TOL: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct AdsorptionResult {
    pub site: SiteInfo,
    /// Adsorption energy (eV, negative = binding).
    pub e_ad: f64,
    /// Relaxation left the ontop registry (nearest metal changed or the
    /// adsorbate drifted off the placement axis).
    pub migrated: bool,
    pub converged: bool,
    pub n_steps: usize,
    pub e_tot_combined: f64,
    pub e_tot_slab: f64,
    pub e_tot_adsorbate: f64,
}

/// Adds the adsorbate pseudo-atom at `height` along the outward normal of
/// the site atom (particle centroid → site atom direction).
pub fn place_ontop(structure: &Structure, site: &SiteInfo, height: f64) -> Result<Structure> {
    if height <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "placement height must be positive, got {height}"
        )));
    }
    if site.atom_index >= structure.len() {
        return Err(CoreError::InvalidArgument(format!(
            "site atom index {} out of range ({} atoms)",
            site.atom_index,
            structure.len()
        )));
    }
    if structure.adsorbate_index().is_some() {
        return Err(CoreError::InvalidArgument(
            "structure already carries an adsorbate".into(),
        ));
    }
    let site_pos = structure.positions[site.atom_index];
    let normal = vec3::normalized(vec3::sub(site_pos, structure.metal_centroid())).ok_or_else(
        || CoreError::InvalidArgument("site atom coincides with the particle centroid".into()),
    )?;
    let mut species = structure.species.clone();
    let mut positions = structure.positions.clone();
    let mut frozen = structure.frozen.clone();
    species.push(Element::X);
    positions.push(vec3::add(site_pos, vec3::scale(normal, height)));
    frozen.push(false);
    Structure::new(
        species,
        positions,
        frozen,
        format!("{} adsorbate=ontop:{}", structure.provenance, site.atom_index),
    )
}

/// Runs the constrained-relaxation adsorption protocol for one site of a
/// relaxed bare particle.
pub fn adsorption_energy(
    bare: &Structure,
    site: &SiteInfo,
    potential: &Potential,
    settings: &RelaxSettings,
    height: f64,
) -> Result<AdsorptionResult> {
    let e_tot_slab = potential.evaluate(bare)?.total;

    let placed = place_ontop(bare, site, height)?;
    let x_idx = placed.len() - 1;
    let axis_origin = placed.positions[site.atom_index];
    let axis = vec3::normalized(vec3::sub(placed.positions[x_idx], axis_origin))
        .expect("placement height is positive");

    // Only the adsorbate and the site atom relax.
    let mut constrained = placed;
    for i in 0..constrained.len() {
        constrained.frozen[i] = !(i == x_idx || i == site.atom_index);
    }

    let relaxed = relax(&constrained, potential, settings)?;
    let e_tot_combined = *relaxed
        .energy_trace
        .last()
        .expect("relaxation records at least the initial energy");

    // The isolated adsorbate is evaluated, not assumed: the point adsorbate
    // carries no internal energy, so this is zero by construction.
    let lone = Structure::unconstrained(
        vec![Element::X],
        vec![[0.0, 0.0, 0.0]],
        "isolated adsorbate",
    )?;
    let e_tot_adsorbate = potential.evaluate(&lone)?.total;

    let e_ad = e_tot_combined - e_tot_adsorbate - e_tot_slab;

    let final_x = relaxed.structure.positions[x_idx];
    let mut nearest = None;
    let mut best = f64::INFINITY;
    for (i, p) in relaxed.structure.positions.iter().enumerate() {
        if relaxed.structure.species[i].is_metal() {
            let d = vec3::dist(*p, final_x);
            if d < best {
                best = d;
                nearest = Some(i);
            }
        }
    }
    let rel = vec3::sub(final_x, axis_origin);
    let lateral = vec3::norm(vec3::sub(rel, vec3::scale(axis, vec3::dot(rel, axis))));
    let migrated = nearest != Some(site.atom_index) || lateral > MIGRATION_LATERAL_TOL;

    Ok(AdsorptionResult {
        site: site.clone(),
        e_ad,
        migrated,
        converged: relaxed.converged,
        n_steps: relaxed.n_steps,
        e_tot_combined,
        e_tot_slab,
        e_tot_adsorbate,
    })
}
