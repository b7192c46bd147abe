//! Cell-list pair search and first-shell neighbor tables.
//!
//! Clusters here are a few hundred atoms, but energy evaluation runs inside
//! relaxation loops, so pair search is linear-time: atoms are binned into
//! cells of the cutoff size and only the 27 surrounding cells are scanned.
//! Iteration order is by ascending atom index, which keeps floating-point
//! accumulation deterministic.

use crate::error::{CoreError, Result};
use crate::structure::Structure;
use crate::vec3::{self, Vec3};
use std::collections::HashMap;

pub struct CellList {
    cells: HashMap<(i32, i32, i32), Vec<usize>>,
    keys: Vec<(i32, i32, i32)>,
    origin: Vec3,
    side: f64,
    cutoff: f64,
}

impl CellList {
    pub fn build(positions: &[Vec3], cutoff: f64) -> Self {
        assert!(cutoff > 0.0, "cell list cutoff must be positive");
        let mut origin = [f64::INFINITY; 3];
        for p in positions {
            for k in 0..3 {
                origin[k] = origin[k].min(p[k]);
            }
        }
        if positions.is_empty() {
            origin = [0.0; 3];
        }
        let side = cutoff;
        let mut cells: HashMap<(i32, i32, i32), Vec<usize>> = HashMap::new();
        let mut keys = Vec::new();
        for (i, p) in positions.iter().enumerate() {
            let key = (
                ((p[0] - origin[0]) / side).floor() as i32,
                ((p[1] - origin[1]) / side).floor() as i32,
                ((p[2] - origin[2]) / side).floor() as i32,
            );
            cells.entry(key).or_default().push(i);
            keys.push(key);
        }
        Self {
            cells,
            keys,
            origin,
            side,
            cutoff,
        }
    }

    /// Calls `f(i, j, r, r_ij)` once for every unordered pair with
    /// `r <= cutoff` and `i < j`, in ascending `(i, j)` order. `r_ij` is
    /// `positions[j] - positions[i]`.
    pub fn for_each_pair(&self, positions: &[Vec3], mut f: impl FnMut(usize, usize, f64, Vec3)) {
        let c2 = self.cutoff * self.cutoff;
        for i in 0..positions.len() {
            let (cx, cy, cz) = self.keys[i];
            let mut js: Vec<usize> = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(cell) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) {
                            js.extend(cell.iter().copied().filter(|&j| j > i));
                        }
                    }
                }
            }
            js.sort_unstable();
            for j in js {
                let rij = vec3::sub(positions[j], positions[i]);
                let r2 = vec3::norm2(rij);
                if r2 <= c2 {
                    f(i, j, r2.sqrt(), rij);
                }
            }
        }
    }

    /// Neighbor indices of `i` within the cutoff, ascending.
    pub fn neighbors_of(&self, positions: &[Vec3], i: usize) -> Vec<usize> {
        let c2 = self.cutoff * self.cutoff;
        let (cx, cy, cz) = self.keys[i];
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(cell) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &j in cell {
                            if j != i
                                && vec3::norm2(vec3::sub(positions[j], positions[i])) <= c2
                            {
                                out.push(j);
                            }
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn cell_side(&self) -> f64 {
        self.side
    }
}

/// First-neighbor-shell table: adjacency and coordination numbers at a fixed
/// geometric cutoff.
#[derive(Debug, Clone)]
pub struct NeighborTable {
    pub cutoff: f64,
    pub neighbors: Vec<Vec<usize>>,
}

impl NeighborTable {
    pub fn build(structure: &Structure, cutoff: f64) -> Self {
        let list = CellList::build(&structure.positions, cutoff);
        let mut neighbors = vec![Vec::new(); structure.len()];
        list.for_each_pair(&structure.positions, |i, j, _r, _| {
            neighbors[i].push(j);
            neighbors[j].push(i);
        });
        for n in &mut neighbors {
            n.sort_unstable();
        }
        Self { cutoff, neighbors }
    }

    pub fn cn(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    /// Errors if any coordination number exceeds the fcc bulk maximum of 12,
    /// which means the cutoff swallowed the second neighbor shell.
    pub fn validate_fcc(&self) -> Result<()> {
        for i in 0..self.neighbors.len() {
            if self.cn(i) > 12 {
                return Err(CoreError::BadCutoff {
                    cutoff: self.cutoff,
                    cn: self.cn(i),
                });
            }
        }
        Ok(())
    }
}

/// First-shell cutoff for an fcc lattice constant: the midpoint of the first
/// (a/√2) and second (a) neighbor shells, robust against small relaxations.
pub fn fcc_first_shell_cutoff(lattice_constant: f64) -> f64 {
    0.854 * lattice_constant
}
