//! Per-atom-decomposable analytic energy model with analytic forces.
//!
//! Metal–metal interactions use the second-moment (Gupta/SMA) form: a
//! pairwise Born–Mayer repulsion against the square root of a pairwise
//! hopping-integral density (Cleri & Rosato, Phys. Rev. B 48, 22 (1993)).
//! The adsorbate is a single pseudo-atom bound by a Morse well to its
//! nearest metal atom, with the well depth modulated by the host density of
//! that atom so that under-coordinated sites bind more strongly, plus a
//! weaker Morse attraction to the remaining metals in range. Every term is
//! attributed to atoms (half/half for pair terms), which is what makes
//! surface descriptors computable from a single evaluation.

mod fit;
mod params;
mod sma;

pub use fit::{default_bulk_targets, default_params, fit_metal_params, reference_facet_density, BulkTarget};
pub use params::{AdsorbateParams, MetalPairParams, PotentialParams};
pub use sma::{EnergyReport, Potential};
