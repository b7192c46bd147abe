//! Shared screening machinery: build → composition → relax → descriptors →
//! oracle, with deterministic per-particle seeding.

use crate::config::ResolvedConfig;
use crate::errors::CliError;
use npscreen_core::adsorption::{adsorption_energy, AdsorptionResult};
use npscreen_core::descriptors::{compute_descriptors, BulkReference, DescriptorRecord};
use npscreen_core::geometry::{
    assign_composition, assign_composition_with_counts, build_cluster, surface_orbits,
    ClusterShape, Composition, SiteInfo,
};
use npscreen_core::neighbors::fcc_first_shell_cutoff;
use npscreen_core::optimize::{relax, scan_lattice_constant};
use npscreen_core::potential::{default_params, Potential, PotentialParams};
use npscreen_core::seed::derive_seed;
use npscreen_core::{CoreError, Element, Structure};
use rayon::prelude::*;

/// Lattice-constant scan window (Å) covering the five fcc metals.
pub const SCAN_RANGE: (f64, f64) = (3.6, 4.3);
pub const SCAN_STEP: f64 = 0.01;

/// Particle-id offsets separating seed streams of different ensembles.
pub const SEED_OFFSET_OCTAHEDRON: u64 = 1_000_000;
pub const SEED_OFFSET_ICOSAHEDRON: u64 = 2_000_000;

pub struct Pipeline {
    pub cfg: ResolvedConfig,
    pub potential: Potential,
    pub bulkref: BulkReference,
}

/// One relaxed, descriptor-annotated alloy particle.
pub struct ScreenedParticle {
    pub np_id: usize,
    pub seed: u64,
    pub shape: ClusterShape,
    pub relaxed: Structure,
    pub records: Vec<DescriptorRecord>,
}

pub fn load_potential(cfg: &ResolvedConfig) -> Result<Potential, CliError> {
    let params = match &cfg.params_path {
        Some(path) => PotentialParams::load(path)?,
        None => default_params()?,
    };
    Ok(Potential::new(params)?)
}

impl Pipeline {
    /// Loads the potential and the bulk reference; errors cleanly before any
    /// heavy compute when the reference is missing.
    pub fn new(cfg: &ResolvedConfig) -> Result<Self, CliError> {
        let potential = load_potential(cfg)?;
        if !cfg.bulkref_path.exists() {
            return Err(CliError::validation(format!(
                "bulk reference {:?} not found; run `npscreen bulkref` first",
                cfg.bulkref_path
            )));
        }
        let bulkref = BulkReference::load(&cfg.bulkref_path)?;
        for el in &cfg.run.elements {
            bulkref.get(*el)?;
        }
        Ok(Self {
            cfg: cfg.clone(),
            potential,
            bulkref,
        })
    }

    /// Scans every configured element and returns the fresh reference.
    pub fn scan_bulk_reference(cfg: &ResolvedConfig) -> Result<BulkReference, CliError> {
        let potential = load_potential(cfg)?;
        let mut bulkref = BulkReference::default();
        for &el in &cfg.run.elements {
            let (lc, e) = scan_lattice_constant(el, &potential, SCAN_RANGE, SCAN_STEP)?;
            bulkref.insert(
                el,
                npscreen_core::descriptors::BulkRefEntry {
                    e_atom_bulk: e,
                    lattice_constant: lc,
                },
            );
        }
        Ok(bulkref)
    }

    /// Initial lattice constant for alloy builds: the largest constituent
    /// bulk value.
    pub fn initial_lattice_constant(&self, elements: &[Element]) -> Result<f64, CoreError> {
        let mut lc: f64 = 0.0;
        for &el in elements {
            lc = lc.max(self.bulkref.get(el)?.lattice_constant);
        }
        Ok(lc)
    }

    /// First-shell cutoff for relaxed or multi-element structures: 0.854 ×
    /// the mean constituent lattice constant.
    pub fn classification_cutoff(&self, elements: &[Element]) -> Result<f64, CoreError> {
        Ok(fcc_first_shell_cutoff(
            self.bulkref.mean_lattice_constant(elements)?,
        ))
    }

    /// Builds, relaxes, and annotates ensemble member `np_id` of the given
    /// shape. The per-particle seed is `derive_seed(master, offset + id)`.
    pub fn screen_particle(
        &self,
        shape: ClusterShape,
        size: usize,
        np_id: usize,
        seed_offset: u64,
    ) -> Result<ScreenedParticle, CoreError> {
        let seed = derive_seed(self.cfg.run.master_seed, seed_offset + np_id as u64);
        let lc_init = self.initial_lattice_constant(&self.cfg.run.elements)?;
        let ideal = build_cluster(shape, size, lc_init)?;
        let assigned = if self.cfg.run.counts_override.is_empty() {
            assign_composition(&ideal, &self.cfg.run.elements, seed)?
        } else {
            let comp = Composition::from_counts(self.cfg.run.counts_override.clone())?;
            assign_composition_with_counts(&ideal, &comp, seed)?
        };
        let result = relax(&assigned, &self.potential, &self.cfg.run.relax.settings())?;
        if !result.converged {
            return Err(CoreError::NumericalFailure(format!(
                "particle {np_id} relaxation unconverged (fmax {:.3e})",
                result.final_fmax
            )));
        }
        let relaxed = result.structure;
        let report = self.potential.evaluate(&relaxed)?;
        let cutoff = self.classification_cutoff(&self.cfg.run.elements)?;
        let records = compute_descriptors(&relaxed, &report, &self.bulkref, shape, cutoff)?;
        Ok(ScreenedParticle {
            np_id,
            seed,
            shape,
            relaxed,
            records,
        })
    }

    /// Screens ids in order, in parallel, preserving output order.
    /// Returns the successes and the skipped ids (with their errors logged).
    pub fn screen_ensemble(
        &self,
        shape: ClusterShape,
        size: usize,
        ids: std::ops::Range<usize>,
        seed_offset: u64,
    ) -> (Vec<ScreenedParticle>, Vec<usize>) {
        let results: Vec<(usize, Result<ScreenedParticle, CoreError>)> = ids
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|np_id| (np_id, self.screen_particle(shape, size, np_id, seed_offset)))
            .collect();
        let mut particles = Vec::new();
        let mut skipped = Vec::new();
        for (np_id, r) in results {
            match r {
                Ok(p) => particles.push(p),
                Err(e) => {
                    log::warn!("skipping particle {np_id}: {e}");
                    skipped.push(np_id);
                }
            }
        }
        (particles, skipped)
    }

    /// Direct oracle over every ontop site of a particle, ordered by atom
    /// index, sites evaluated in parallel.
    pub fn oracle_all_sites(
        &self,
        particle: &ScreenedParticle,
    ) -> Result<Vec<AdsorptionResult>, CoreError> {
        let sites: Vec<SiteInfo> = particle
            .records
            .iter()
            .map(|r| SiteInfo {
                atom_index: r.atom_index,
                element: r.element,
                cn: r.cn,
                site_class: r.site_class,
                orbit_id: None,
            })
            .collect();
        sites
            .into_par_iter()
            .map(|site| {
                adsorption_energy(
                    &particle.relaxed,
                    &site,
                    &self.potential,
                    &self.cfg.run.relax.settings(),
                    self.cfg.run.placement_height,
                )
            })
            .collect()
    }

    /// Monometallic training pass for one element and one cluster size:
    /// relaxes the particle and runs the oracle on each irreducible site.
    pub fn mono_orbit_oracle(
        &self,
        element: Element,
        size: usize,
    ) -> Result<Vec<MonoOrbitResult>, CoreError> {
        let lc = self.bulkref.get(element)?.lattice_constant;
        let shape = ClusterShape::TruncatedOctahedron;
        let ideal = build_cluster(shape, size, lc)?;
        let ideal = assign_composition(&ideal, &[element], 0)?;
        let cutoff = fcc_first_shell_cutoff(lc);
        let orbits = surface_orbits(&ideal, shape, cutoff)?;
        let relaxed = relax(&ideal, &self.potential, &self.cfg.run.relax.settings())?;
        if !relaxed.converged {
            return Err(CoreError::NumericalFailure(format!(
                "monometallic {element}-{size} relaxation unconverged"
            )));
        }
        let relaxed = relaxed.structure;
        let report = self.potential.evaluate(&relaxed)?;
        let table = npscreen_core::neighbors::NeighborTable::build(&relaxed, cutoff);

        orbits
            .into_par_iter()
            .map(|orbit| {
                let site = orbit.representative.clone();
                let i = site.atom_index;
                let lse = report.per_atom[i] - self.bulkref.get(element)?.e_atom_bulk;
                let gcn = npscreen_core::descriptors::gcn_of(&table, i);
                let ads = adsorption_energy(
                    &relaxed,
                    &site,
                    &self.potential,
                    &self.cfg.run.relax.settings(),
                    self.cfg.run.placement_height,
                )?;
                Ok(MonoOrbitResult {
                    element,
                    size,
                    site,
                    orbit_size: orbit.members.len(),
                    lse,
                    gcn,
                    ads,
                })
            })
            .collect()
    }
}

pub struct MonoOrbitResult {
    pub element: Element,
    pub size: usize,
    pub site: SiteInfo,
    pub orbit_size: usize,
    pub lse: f64,
    pub gcn: f64,
    pub ads: AdsorptionResult,
}

/// Runs `f` on a rayon pool with the configured worker count.
pub fn with_pool<T: Send>(
    workers: usize,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::validation(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}
