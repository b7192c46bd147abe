//! Cluster geometry oracles: brute-force coordination censuses, explicit
//! point-group orbit enumeration, and exact chemical-space counts.

use npscreen_core::geometry::{
    build_cluster, build_fcc_bulk, classify_sites, element_combinations, site_configurations,
    surface_orbits, ClusterShape, Composition, SiteClass,
};
use npscreen_core::neighbors::fcc_first_shell_cutoff;
use npscreen_core::{Element, Structure};
use std::collections::BTreeMap;

const A: f64 = 3.9;

/// Independent census oracle: plain double loop, no cell list.
fn census(structure: &Structure, cutoff: f64) -> BTreeMap<usize, usize> {
    let n = structure.len();
    let mut hist = BTreeMap::new();
    for i in 0..n {
        let mut cn = 0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = dist(structure.positions[i], structure.positions[j]);
            if d <= cutoff {
                cn += 1;
            }
        }
        *hist.entry(cn).or_insert(0usize) += 1;
    }
    hist
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[test]
fn truncated_octahedron_201_census() {
    let s = build_cluster(ClusterShape::TruncatedOctahedron, 201, A).unwrap();
    let hist = census(&s, fcc_first_shell_cutoff(A));
    let mut expected = BTreeMap::new();
    expected.insert(6, 24);
    expected.insert(7, 36);
    expected.insert(8, 6);
    expected.insert(9, 56);
    expected.insert(12, 79);
    assert_eq!(hist, expected);
}

#[test]
fn surface_interior_split_of_all_shapes() {
    // (shape, size, surface atoms, interior atoms) frozen from the census
    // oracle over the ideal geometries.
    let cases = [
        (ClusterShape::TruncatedOctahedron, 38, 32, 6),
        (ClusterShape::TruncatedOctahedron, 79, 60, 19),
        (ClusterShape::TruncatedOctahedron, 116, 78, 38),
        (ClusterShape::TruncatedOctahedron, 201, 122, 79),
        (ClusterShape::Octahedron, 146, 102, 44),
        (ClusterShape::Icosahedron, 147, 92, 55),
    ];
    for (shape, size, surface, interior) in cases {
        let s = build_cluster(shape, size, A).unwrap();
        let hist = census(&s, fcc_first_shell_cutoff(A));
        let got_surface: usize = hist.iter().filter(|(&cn, _)| cn < 12).map(|(_, c)| c).sum();
        let got_interior: usize = hist.iter().filter(|(&cn, _)| cn >= 12).map(|(_, c)| c).sum();
        assert_eq!(got_surface, surface, "{shape}-{size} surface");
        assert_eq!(got_interior, interior, "{shape}-{size} interior");
        assert!(hist.keys().all(|&cn| cn <= 12), "{shape}-{size} cn > 12");
    }
}

#[test]
fn octahedron_vertices_and_icosahedron_vertices() {
    let oct = build_cluster(ClusterShape::Octahedron, 146, A).unwrap();
    let hist = census(&oct, fcc_first_shell_cutoff(A));
    assert_eq!(hist[&4], 6, "octahedron-146 has 6 cn-4 vertices");

    let ico = build_cluster(ClusterShape::Icosahedron, 147, A).unwrap();
    let hist = census(&ico, fcc_first_shell_cutoff(A));
    assert_eq!(hist[&6], 12, "icosahedron-147 has 12 five-fold vertices (cn 6)");
}

#[test]
fn classification_partitions_the_surface() {
    for (shape, size, corners, edges, facets) in [
        (ClusterShape::TruncatedOctahedron, 201, 24, 36, 62),
        (ClusterShape::Octahedron, 146, 6, 48, 48),
        (ClusterShape::Icosahedron, 147, 12, 60, 20),
    ] {
        let s = build_cluster(shape, size, A).unwrap();
        let sites = classify_sites(&s, shape, fcc_first_shell_cutoff(A)).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut count = BTreeMap::new();
        for site in &sites {
            assert!(seen.insert(site.atom_index), "atom in two classes");
            *count.entry(site.site_class).or_insert(0usize) += 1;
        }
        assert_eq!(count.get(&SiteClass::Corner).copied().unwrap_or(0), corners, "{shape}");
        assert_eq!(count.get(&SiteClass::Edge).copied().unwrap_or(0), edges, "{shape}");
        assert_eq!(count.get(&SiteClass::Facet).copied().unwrap_or(0), facets, "{shape}");
    }
}

#[test]
fn bulk_interior_atom_is_not_a_site() {
    let block = build_fcc_bulk(Element::Pt, A, 4).unwrap();
    let hist = census(&block, fcc_first_shell_cutoff(A));
    // 4x4x4 conventional cells = 256 atoms; interior count cross-checked by
    // the census oracle, and classify_sites must exclude exactly those.
    let interior = hist.get(&12).copied().unwrap_or(0);
    assert!(interior > 0);
    let sites = classify_sites(&block, ClusterShape::TruncatedOctahedron, fcc_first_shell_cutoff(A)).unwrap();
    assert_eq!(sites.len(), 256 - interior);
}

/// All 48 signed permutation matrices (the O_h action on axis-aligned fcc
/// clusters), applied as an independent orbit oracle.
fn oh_images(p: [f64; 3]) -> Vec<[f64; 3]> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut images = Vec::with_capacity(48);
    for perm in perms {
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    images.push([sx * p[perm[0]], sy * p[perm[1]], sz * p[perm[2]]]);
                }
            }
        }
    }
    images
}

fn oh_orbit_partition(structure: &Structure, surface: &[usize]) -> Vec<Vec<usize>> {
    let mut assigned = vec![usize::MAX; structure.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for &i in surface {
        if assigned[i] != usize::MAX {
            continue;
        }
        let images = oh_images(structure.positions[i]);
        let id = orbits.len();
        let mut members = Vec::new();
        for &j in surface {
            if assigned[j] != usize::MAX {
                continue;
            }
            let pj = structure.positions[j];
            if images.iter().any(|im| dist(*im, pj) < 1e-6) {
                assigned[j] = id;
                members.push(j);
            }
        }
        orbits.push(members);
    }
    orbits
}

#[test]
fn octahedral_orbits_match_explicit_group_enumeration() {
    for (shape, size, expected_orbits) in [
        (ClusterShape::TruncatedOctahedron, 38, 2),
        (ClusterShape::TruncatedOctahedron, 79, 3),
        (ClusterShape::TruncatedOctahedron, 116, 4),
        (ClusterShape::TruncatedOctahedron, 201, 6),
        (ClusterShape::Octahedron, 146, 5),
    ] {
        let s = build_cluster(shape, size, A).unwrap();
        let cutoff = fcc_first_shell_cutoff(A);
        let got = surface_orbits(&s, shape, cutoff).unwrap();
        let surface: Vec<usize> = classify_sites(&s, shape, cutoff)
            .unwrap()
            .iter()
            .map(|x| x.atom_index)
            .collect();
        let oracle = oh_orbit_partition(&s, &surface);
        assert_eq!(got.len(), expected_orbits, "{shape}-{size} orbit count");
        assert_eq!(oracle.len(), expected_orbits, "{shape}-{size} oracle count");
        // Same partition: every implementation orbit must equal one oracle
        // orbit as an index set.
        let mut oracle_sets: Vec<Vec<usize>> = oracle
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        oracle_sets.sort();
        let mut got_sets: Vec<Vec<usize>> = got.iter().map(|o| o.members.clone()).collect();
        got_sets.sort();
        assert_eq!(got_sets, oracle_sets, "{shape}-{size} partition");
        // Orbit sizes sum to the surface count.
        let total: usize = got.iter().map(|o| o.members.len()).sum();
        assert_eq!(total, surface.len());
    }
}

#[test]
fn truncated_octahedron_corners_form_one_orbit_of_24() {
    let s = build_cluster(ClusterShape::TruncatedOctahedron, 201, A).unwrap();
    let orbits = surface_orbits(&s, ClusterShape::TruncatedOctahedron, fcc_first_shell_cutoff(A)).unwrap();
    let corner_orbits: Vec<_> = orbits
        .iter()
        .filter(|o| o.representative.site_class == SiteClass::Corner)
        .collect();
    assert_eq!(corner_orbits.len(), 1);
    assert_eq!(corner_orbits[0].members.len(), 24);
}

#[test]
fn icosahedron_vertices_form_one_orbit() {
    let s = build_cluster(ClusterShape::Icosahedron, 147, A).unwrap();
    let cutoff = fcc_first_shell_cutoff(A);
    let orbits = surface_orbits(&s, ClusterShape::Icosahedron, cutoff).unwrap();
    // The twelve outermost atoms are the five-fold vertices.
    let max_r = s
        .positions
        .iter()
        .map(|p| dist(*p, [0.0; 3]))
        .fold(0.0f64, f64::max);
    let vertices: Vec<usize> = (0..s.len())
        .filter(|&i| (dist(s.positions[i], [0.0; 3]) - max_r).abs() < 1e-6)
        .collect();
    assert_eq!(vertices.len(), 12);
    let vertex_orbit = orbits
        .iter()
        .find(|o| o.members.contains(&vertices[0]))
        .unwrap();
    let mut sorted = vertices.clone();
    sorted.sort_unstable();
    assert_eq!(vertex_orbit.members, sorted);

    // Within every orbit: identical cn and identical sorted neighbor
    // distances (1e-6 Å), and sizes sum to the surface count.
    let total: usize = orbits.iter().map(|o| o.members.len()).sum();
    assert_eq!(total, 92);
    for orbit in &orbits {
        let dists_of = |i: usize| {
            let mut v: Vec<f64> = (0..s.len())
                .filter(|&j| j != i)
                .map(|j| dist(s.positions[i], s.positions[j]))
                .filter(|&d| d <= cutoff)
                .collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        };
        let first = dists_of(orbit.members[0]);
        for &m in &orbit.members[1..] {
            let d = dists_of(m);
            assert_eq!(d.len(), first.len());
            for (a, b) in d.iter().zip(&first) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn point_group_invariance_of_builds() {
    // O_h for the octahedral family: every signed permutation maps the point
    // set onto itself.
    for (shape, size) in [
        (ClusterShape::TruncatedOctahedron, 201),
        (ClusterShape::Octahedron, 146),
    ] {
        let s = build_cluster(shape, size, A).unwrap();
        for (k, im0) in oh_images([1.0, 2.0, 3.0]).into_iter().enumerate() {
            let _ = im0;
            for p in &s.positions {
                let image = oh_images(*p)[k];
                assert!(
                    s.positions.iter().any(|q| dist(*q, image) < 1e-9),
                    "{shape}: image not in point set"
                );
            }
        }
    }

    // Icosahedron: 72° rotation about a vertex axis plus inversion.
    let ico = build_cluster(ClusterShape::Icosahedron, 147, A).unwrap();
    let max_r = ico
        .positions
        .iter()
        .map(|p| dist(*p, [0.0; 3]))
        .fold(0.0f64, f64::max);
    let axis_atom = (0..ico.len())
        .find(|&i| (dist(ico.positions[i], [0.0; 3]) - max_r).abs() < 1e-9)
        .unwrap();
    let axis = ico.positions[axis_atom];
    let norm = dist(axis, [0.0; 3]);
    let u = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
    let theta = 2.0 * std::f64::consts::PI / 5.0;
    let rotate = |p: [f64; 3]| -> [f64; 3] {
        // Rodrigues rotation about u.
        let (c, s) = (theta.cos(), theta.sin());
        let dot = u[0] * p[0] + u[1] * p[1] + u[2] * p[2];
        let cross = [
            u[1] * p[2] - u[2] * p[1],
            u[2] * p[0] - u[0] * p[2],
            u[0] * p[1] - u[1] * p[0],
        ];
        [
            p[0] * c + cross[0] * s + u[0] * dot * (1.0 - c),
            p[1] * c + cross[1] * s + u[1] * dot * (1.0 - c),
            p[2] * c + cross[2] * s + u[2] * dot * (1.0 - c),
        ]
    };
    for p in &ico.positions {
        let r = rotate(*p);
        assert!(ico.positions.iter().any(|q| dist(*q, r) < 1e-9), "C5 image missing");
        let inv = [-p[0], -p[1], -p[2]];
        assert!(ico.positions.iter().any(|q| dist(*q, inv) < 1e-9), "inversion image missing");
    }
}

#[test]
fn chemical_space_fixtures() {
    let c = element_combinations(40, 5).unwrap();
    assert_eq!(c.exact_value.unwrap().to_string(), "658008");

    let comp = Composition::near_uniform(201, &Element::METALS).unwrap();
    let sc = site_configurations(122, &comp);
    assert!(
        (sc.log10_value - 138.11).abs() <= 0.05,
        "log10 {}",
        sc.log10_value
    );
    // Exact consistency between the big integer and its logarithm.
    let exact = sc.exact_value.unwrap();
    let digits = exact.to_string();
    assert_eq!(digits.len(), 139); // 10^138.1 has 139 decimal digits
}
