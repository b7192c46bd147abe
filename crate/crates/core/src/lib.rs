//! Screening library for molecular adsorption on fcc alloy nanoparticles.
//!
//! The crate covers the full desk-scale workflow:
//!
//! * [`geometry`] — fcc bulk blocks and magic-number clusters (truncated
//!   octahedron, regular octahedron, Mackay icosahedron), random near-uniform
//!   alloy compositions, surface-site classification and symmetry orbits,
//!   and exact chemical-space counting.
//! * [`potential`] — a per-atom-decomposable second-moment (Gupta/SMA) metal
//!   potential with a coordination-modulated Morse adsorbate, with analytic
//!   forces.
//! * [`optimize`] — constrained BFGS relaxation and bulk lattice-constant
//!   scans.
//! * [`descriptors`] — local surface energy (LSE) and generalized
//!   coordination number (GCN) for every surface atom.
//! * [`adsorption`] — the direct ontop adsorption-energy oracle.
//! * [`models`] — per-element linear models, kernel ridge regression, and
//!   metric evaluation, with JSON persistence.
//! * [`quantum`] — a small statevector simulator and quantum-circuit-learning
//!   regressor used as a nonlinear corrector.

pub mod adsorption;
pub mod descriptors;
pub mod element;
pub mod error;
pub mod geometry;
pub mod models;
pub mod neighbors;
pub mod optimize;
pub mod potential;
pub mod quantum;
pub mod seed;
pub mod structure;
pub mod vec3;
pub mod xyz;

pub use adsorption::{adsorption_energy, place_ontop, AdsorptionResult};
pub use descriptors::{compute_descriptors, BulkReference, DescriptorRecord};
pub use element::Element;
pub use error::CoreError;
pub use geometry::{
    assign_composition, build_cluster, build_fcc_bulk, classify_sites, irreducible_sites,
    ClusterShape, Composition, SiteClass, SiteInfo, SpaceSize,
};
pub use neighbors::NeighborTable;
pub use optimize::{relax, scan_lattice_constant, RelaxResult, RelaxSettings};
pub use potential::{EnergyReport, Potential, PotentialParams};
pub use structure::Structure;
