//! Atomic structures: element labels plus Cartesian coordinates.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::vec3::{self, Vec3};

/// Minimum allowed interatomic distance; anything closer is a degenerate
/// build rather than physics.
pub const MIN_ATOM_SEPARATION: f64 = 0.5;

/// A nanoparticle, bulk block, or nanoparticle+adsorbate system.
///
/// Coordinates are Cartesian in Å with open boundary conditions (no periodic
/// cell). `frozen[i]` marks atoms held fixed during relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct Structure {
    pub species: Vec<Element>,
    pub positions: Vec<Vec3>,
    pub frozen: Vec<bool>,
    /// Free-text build tag (shape, seed, ...) carried into output files.
    pub provenance: String,
}

impl Structure {
    /// Builds a structure and checks its invariants: non-empty and equally
    /// sized arrays, no atom pair closer than [`MIN_ATOM_SEPARATION`], and at
    /// most one adsorbate pseudo-atom.
    pub fn new(
        species: Vec<Element>,
        positions: Vec<Vec3>,
        frozen: Vec<bool>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if species.is_empty() {
            return Err(CoreError::InvalidArgument(
                "structure must contain at least one atom".into(),
            ));
        }
        if species.len() != positions.len() || species.len() != frozen.len() {
            return Err(CoreError::InvalidArgument(format!(
                "species/positions/frozen lengths differ: {}/{}/{}",
                species.len(),
                positions.len(),
                frozen.len()
            )));
        }
        let n_adsorbate = species.iter().filter(|&&s| s == Element::X).count();
        if n_adsorbate > 1 {
            return Err(CoreError::InvalidArgument(format!(
                "at most one adsorbate atom allowed, found {n_adsorbate}"
            )));
        }
        let s = Self {
            species,
            positions,
            frozen,
            provenance: provenance.into(),
        };
        s.check_min_separation()?;
        Ok(s)
    }

    /// All atoms free, provenance attached.
    pub fn unconstrained(
        species: Vec<Element>,
        positions: Vec<Vec3>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let n = species.len();
        Self::new(species, positions, vec![false; n], provenance)
    }

    pub fn len(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty()
    }

    /// Index of the adsorbate pseudo-atom, if present.
    pub fn adsorbate_index(&self) -> Option<usize> {
        self.species.iter().position(|&s| s == Element::X)
    }

    /// Distinct metal species present, in sorted label order.
    pub fn metal_species(&self) -> Vec<Element> {
        let mut set: Vec<Element> = self
            .species
            .iter()
            .copied()
            .filter(|s| s.is_metal())
            .collect();
        set.sort();
        set.dedup();
        set
    }

    /// Geometric center of the metal atoms.
    pub fn metal_centroid(&self) -> Vec3 {
        let mut c = [0.0; 3];
        let mut n = 0usize;
        for (s, p) in self.species.iter().zip(&self.positions) {
            if s.is_metal() {
                c = vec3::add(c, *p);
                n += 1;
            }
        }
        if n > 0 {
            vec3::scale(c, 1.0 / n as f64)
        } else {
            c
        }
    }

    fn check_min_separation(&self) -> Result<()> {
        let n = self.positions.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let r2 = vec3::norm2(vec3::sub(self.positions[i], self.positions[j]));
                if r2 < MIN_ATOM_SEPARATION * MIN_ATOM_SEPARATION {
                    return Err(CoreError::SingularGeometry {
                        i,
                        j,
                        r: r2.sqrt(),
                        min: MIN_ATOM_SEPARATION,
                    });
                }
            }
        }
        Ok(())
    }
}
