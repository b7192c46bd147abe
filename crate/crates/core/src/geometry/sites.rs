//! Surface-site classification and symmetry-orbit reduction.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::geometry::ClusterShape;
use crate::neighbors::NeighborTable;
use crate::structure::Structure;
use crate::vec3;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Site classes of an fcc cluster surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteClass {
    Facet,
    Edge,
    Corner,
}

impl fmt::Display for SiteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SiteClass::Facet => "facet",
            SiteClass::Edge => "edge",
            SiteClass::Corner => "corner",
        })
    }
}

/// One ontop adsorption site: a surface atom and its local environment tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteInfo {
    pub atom_index: usize,
    pub element: Element,
    pub cn: usize,
    pub site_class: SiteClass,
    /// Symmetry-equivalence class id; filled by orbit reduction on ideal
    /// monometallic clusters only.
    pub orbit_id: Option<usize>,
}

/// A class of symmetry-equivalent surface atoms.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: SiteInfo,
    /// Atom indices of every member, ascending.
    pub members: Vec<usize>,
}

/// Coordination-number → class map for each shape, from the cn census of the
/// ideal geometries.
fn class_of(shape: ClusterShape, cn: usize) -> Result<SiteClass> {
    let class = match shape {
        ClusterShape::TruncatedOctahedron => match cn {
            0..=6 => Some(SiteClass::Corner),
            7 => Some(SiteClass::Edge),
            8 | 9 => Some(SiteClass::Facet),
            _ => None,
        },
        ClusterShape::Octahedron => match cn {
            4 => Some(SiteClass::Corner),
            7 => Some(SiteClass::Edge),
            9 => Some(SiteClass::Facet),
            _ => None,
        },
        ClusterShape::Icosahedron => match cn {
            6 => Some(SiteClass::Corner),
            8 => Some(SiteClass::Edge),
            9 => Some(SiteClass::Facet),
            _ => None,
        },
    };
    class.ok_or_else(|| {
        CoreError::InvalidArgument(format!(
            "coordination number {cn} has no class in the {shape} map"
        ))
    })
}

/// Classifies every under-coordinated (cn < 12) atom as a facet, edge, or
/// corner ontop site. `cutoff` must select exactly the first neighbor shell
/// (see [`crate::neighbors::fcc_first_shell_cutoff`]).
pub fn classify_sites(
    structure: &Structure,
    shape: ClusterShape,
    cutoff: f64,
) -> Result<Vec<SiteInfo>> {
    if structure.adsorbate_index().is_some() {
        return Err(CoreError::InvalidArgument(
            "site classification requires an adsorbate-free structure".into(),
        ));
    }
    let table = NeighborTable::build(structure, cutoff);
    table.validate_fcc()?;
    let mut sites = Vec::new();
    for i in 0..structure.len() {
        let cn = table.cn(i);
        if cn >= 12 {
            continue;
        }
        sites.push(SiteInfo {
            atom_index: i,
            element: structure.species[i],
            cn,
            site_class: class_of(shape, cn)?,
            orbit_id: None,
        });
    }
    Ok(sites)
}

/// Groups the surface atoms of an ideal monometallic cluster into
/// symmetry-equivalence orbits.
///
/// Detection is by canonical coordinate signature — sorted absolute
/// coordinates plus the sorted neighbor-distance multiset, both quantized at
/// 1e-6 Å — rather than explicit group-element enumeration. For the
/// axis-aligned octahedral family this is exact; for icosahedra it can split
/// a true orbit into a few classes (never merge distinct ones), which only
/// costs a handful of redundant oracle evaluations.
pub fn surface_orbits(
    structure: &Structure,
    shape: ClusterShape,
    cutoff: f64,
) -> Result<Vec<Orbit>> {
    let species = structure.metal_species();
    if species.len() != 1 || structure.adsorbate_index().is_some() {
        return Err(CoreError::NotApplicable(species.len()));
    }
    let sites = classify_sites(structure, shape, cutoff)?;
    let table = NeighborTable::build(structure, cutoff);

    const TOL: f64 = 1e-6;
    let quantize = |x: f64| (x / TOL).round() as i64;
    let mut groups: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    let mut site_by_atom: BTreeMap<usize, SiteInfo> = BTreeMap::new();
    for site in sites {
        let i = site.atom_index;
        let p = structure.positions[i];
        let mut abs = [p[0].abs(), p[1].abs(), p[2].abs()];
        abs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut key: Vec<i64> = abs.iter().map(|&x| quantize(x)).collect();
        let mut dists: Vec<f64> = table.neighbors[i]
            .iter()
            .map(|&j| vec3::dist(structure.positions[i], structure.positions[j]))
            .collect();
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        key.extend(dists.iter().map(|&d| quantize(d)));
        groups.entry(key).or_default().push(i);
        site_by_atom.insert(i, site);
    }

    // Orbit ids in order of each group's lowest atom index.
    let mut ordered: Vec<Vec<usize>> = groups.into_values().collect();
    for members in &mut ordered {
        members.sort_unstable();
    }
    ordered.sort_by_key(|members| members[0]);

    let orbits = ordered
        .into_iter()
        .enumerate()
        .map(|(orbit_id, members)| {
            let mut representative = site_by_atom[&members[0]].clone();
            representative.orbit_id = Some(orbit_id);
            Orbit {
                representative,
                members,
            }
        })
        .collect();
    Ok(orbits)
}

/// Lowest-atom-index representative of each surface orbit.
pub fn irreducible_sites(
    structure: &Structure,
    shape: ClusterShape,
    cutoff: f64,
) -> Result<Vec<SiteInfo>> {
    Ok(surface_orbits(structure, shape, cutoff)?
        .into_iter()
        .map(|o| o.representative)
        .collect())
}
