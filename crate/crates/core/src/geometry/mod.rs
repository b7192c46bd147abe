//! Nanoparticle and bulk geometry: cluster construction, alloy composition
//! assignment, surface-site classification, symmetry orbits, and
//! chemical-space counting.

mod cluster;
mod composition;
mod sites;
mod space;

pub use cluster::{build_cluster, build_fcc_bulk, supported_sizes, ClusterShape};
pub use composition::{assign_composition, assign_composition_with_counts, Composition};
pub use sites::{classify_sites, irreducible_sites, surface_orbits, Orbit, SiteClass, SiteInfo};
pub use space::{
    chemical_space_size, element_combinations, site_configurations, ChemicalSpace, SpaceSize,
};
