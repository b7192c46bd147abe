//! fcc bulk blocks and magic-number cluster builders.
//!
//! Octahedral-family clusters are carved from the integer fcc lattice: with
//! positions in units of a/2, fcc sites are the integer triples of one
//! parity, a regular octahedron with `n` atoms per edge is the L1 ball of
//! radius `n - 1`, and truncating `c` layers at each vertex caps the L∞ norm
//! at `n - 1 - c`. Icosahedra use the Mackay construction: twenty fcc-like
//! tetrahedra sharing a common center, with the radial spacing set to the
//! first-neighbor distance a/√2 (intra-shell bonds carry the usual ~5%
//! Mackay strain).

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::structure::Structure;
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Placeholder species carried by freshly built clusters until a composition
/// is assigned (first metal in sorted label order).
const PLACEHOLDER: Element = Element::Ir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterShape {
    TruncatedOctahedron,
    Octahedron,
    Icosahedron,
}

impl ClusterShape {
    pub fn label(self) -> &'static str {
        match self {
            ClusterShape::TruncatedOctahedron => "truncated_octahedron",
            ClusterShape::Octahedron => "octahedron",
            ClusterShape::Icosahedron => "icosahedron",
        }
    }
}

impl fmt::Display for ClusterShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ClusterShape {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncated_octahedron" | "to" => Ok(ClusterShape::TruncatedOctahedron),
            "octahedron" | "oct" => Ok(ClusterShape::Octahedron),
            "icosahedron" | "ico" => Ok(ClusterShape::Icosahedron),
            other => Err(CoreError::InvalidArgument(format!(
                "unknown cluster shape '{other}'"
            ))),
        }
    }
}

/// Magic-number sizes supported per shape.
pub fn supported_sizes(shape: ClusterShape) -> &'static [usize] {
    match shape {
        ClusterShape::TruncatedOctahedron => &[38, 79, 116, 201],
        ClusterShape::Octahedron => &[146],
        ClusterShape::Icosahedron => &[147],
    }
}

/// (edge atom count, vertex layers cut) for the octahedral family.
fn octahedral_recipe(shape: ClusterShape, size: usize) -> Option<(usize, usize)> {
    match (shape, size) {
        (ClusterShape::TruncatedOctahedron, 38) => Some((4, 1)),
        (ClusterShape::TruncatedOctahedron, 79) => Some((5, 1)),
        (ClusterShape::TruncatedOctahedron, 116) => Some((6, 2)),
        (ClusterShape::TruncatedOctahedron, 201) => Some((7, 2)),
        (ClusterShape::Octahedron, 146) => Some((6, 0)),
        _ => None,
    }
}

/// Builds a `reps`³ block of conventional fcc cells (4-atom basis), all of
/// one element, anchored at the origin.
pub fn build_fcc_bulk(element: Element, lattice_constant: f64, reps: usize) -> Result<Structure> {
    if lattice_constant <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "lattice constant must be positive, got {lattice_constant}"
        )));
    }
    if reps < 1 {
        return Err(CoreError::InvalidArgument("reps must be >= 1".into()));
    }
    if !element.is_metal() {
        return Err(CoreError::InvalidArgument(
            "bulk blocks must be built from a metal element".into(),
        ));
    }
    const BASIS: [[f64; 3]; 4] = [
        [0.0, 0.0, 0.0],
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
        [0.5, 0.5, 0.0],
    ];
    let mut positions = Vec::with_capacity(4 * reps * reps * reps);
    for cx in 0..reps {
        for cy in 0..reps {
            for cz in 0..reps {
                for b in &BASIS {
                    positions.push([
                        lattice_constant * (cx as f64 + b[0]),
                        lattice_constant * (cy as f64 + b[1]),
                        lattice_constant * (cz as f64 + b[2]),
                    ]);
                }
            }
        }
    }
    let n = positions.len();
    Structure::unconstrained(
        vec![element; n],
        positions,
        format!("shape=fcc_bulk element={element} reps={reps} lattice_constant={lattice_constant:.6}"),
    )
}

/// Builds a magic-number cluster centered at the origin with the shape's
/// ideal point symmetry, single placeholder element.
pub fn build_cluster(shape: ClusterShape, size: usize, lattice_constant: f64) -> Result<Structure> {
    if lattice_constant <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "lattice constant must be positive, got {lattice_constant}"
        )));
    }
    let positions = match shape {
        ClusterShape::Icosahedron => {
            if size != 147 {
                return Err(unsupported(shape, size));
            }
            mackay_icosahedron(3, lattice_constant)
        }
        _ => {
            let (edge, cut) = octahedral_recipe(shape, size).ok_or_else(|| unsupported(shape, size))?;
            octahedral_cluster(edge, cut, lattice_constant)
        }
    };
    debug_assert_eq!(positions.len(), size);
    if positions.len() != size {
        return Err(CoreError::NumericalFailure(format!(
            "cluster construction produced {} atoms, expected {size}",
            positions.len()
        )));
    }
    Structure::unconstrained(
        vec![PLACEHOLDER; size],
        positions,
        format!("shape={shape} size={size} lattice_constant={lattice_constant:.6}"),
    )
}

fn unsupported(shape: ClusterShape, size: usize) -> CoreError {
    CoreError::UnsupportedSize {
        shape: shape.to_string(),
        size,
        valid: supported_sizes(shape).to_vec(),
    }
}

/// Octahedron with `edge` atoms per edge, `cut` layers removed at each of
/// the six vertices. Lattice points in units of a/2; the parity of the
/// L1 radius decides whether the center sits on an atom (odd edge counts)
/// or on an octahedral hole (even edge counts) — both give full O_h
/// symmetry about the origin.
fn octahedral_cluster(edge: usize, cut: usize, lattice_constant: f64) -> Vec<Vec3> {
    let radius = (edge - 1) as i64;
    let max_axis = radius - cut as i64;
    let parity = radius.rem_euclid(2);
    let half = lattice_constant / 2.0;
    let mut positions = Vec::new();
    for i in -radius..=radius {
        for j in -radius..=radius {
            for k in -radius..=radius {
                if (i + j + k).rem_euclid(2) != parity {
                    continue;
                }
                if i.abs() + j.abs() + k.abs() > radius {
                    continue;
                }
                if i.abs().max(j.abs()).max(k.abs()) > max_axis {
                    continue;
                }
                positions.push([i as f64 * half, j as f64 * half, k as f64 * half]);
            }
        }
    }
    positions
}

/// Mackay icosahedron with `shells` closed shells around the central atom.
/// `lattice_constant` fixes the radial (center-to-vertex per shell) spacing
/// to the fcc first-neighbor distance a/√2.
fn mackay_icosahedron(shells: usize, lattice_constant: f64) -> Vec<Vec3> {
    let t = (1.0 + 5.0f64.sqrt()) / 2.0;
    let circ = (1.0 + t * t).sqrt();
    // Twelve vertices, unit circumradius: cyclic permutations of (0, ±1, ±t).
    let mut verts = Vec::with_capacity(12);
    for (a, b) in [(1.0, t), (1.0, -t), (-1.0, t), (-1.0, -t)] {
        verts.push([0.0, a / circ, b / circ]);
        verts.push([a / circ, b / circ, 0.0]);
        verts.push([b / circ, 0.0, a / circ]);
    }

    let edge_len = 2.0 / circ;
    let adjacent = |u: Vec3, v: Vec3| {
        let d2 = (u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2);
        (d2.sqrt() - edge_len).abs() < 0.1
    };

    let mut edges = Vec::new();
    for i in 0..12 {
        for j in (i + 1)..12 {
            if adjacent(verts[i], verts[j]) {
                edges.push((i, j));
            }
        }
    }
    let mut faces = Vec::new();
    for i in 0..12 {
        for j in (i + 1)..12 {
            if !adjacent(verts[i], verts[j]) {
                continue;
            }
            for k in (j + 1)..12 {
                if adjacent(verts[i], verts[k]) && adjacent(verts[j], verts[k]) {
                    faces.push((i, j, k));
                }
            }
        }
    }
    debug_assert_eq!(edges.len(), 30);
    debug_assert_eq!(faces.len(), 20);

    let d = lattice_constant / std::f64::consts::SQRT_2;
    let mut positions: Vec<Vec3> = vec![[0.0; 3]];
    for shell in 1..=shells {
        let s = shell as f64;
        for v in &verts {
            positions.push([v[0] * s * d, v[1] * s * d, v[2] * s * d]);
        }
        for &(i, j) in &edges {
            for m in 1..shell {
                let (wi, wj) = ((shell - m) as f64, m as f64);
                positions.push([
                    (verts[i][0] * wi + verts[j][0] * wj) * d,
                    (verts[i][1] * wi + verts[j][1] * wj) * d,
                    (verts[i][2] * wi + verts[j][2] * wj) * d,
                ]);
            }
        }
        for &(i, j, k) in &faces {
            for p in 1..shell {
                for q in 1..(shell - p) {
                    let (wi, wj, wk) = ((shell - p - q) as f64, p as f64, q as f64);
                    positions.push([
                        (verts[i][0] * wi + verts[j][0] * wj + verts[k][0] * wk) * d,
                        (verts[i][1] * wi + verts[j][1] * wj + verts[k][1] * wk) * d,
                        (verts[i][2] * wi + verts[j][2] * wj + verts[k][2] * wk) * d,
                    ]);
                }
            }
        }
    }
    positions
}
