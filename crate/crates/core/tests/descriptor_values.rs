//! Descriptor contracts: the bulk reference zero of LSE, hand-counted GCN
//! values, symmetry equalities, and the coordination ordering trends.

use npscreen_core::descriptors::{compute_descriptors, gcn_of, lse_of, BulkRefEntry, BulkReference};
use npscreen_core::geometry::{
    assign_composition, build_cluster, surface_orbits, ClusterShape, SiteClass,
};
use npscreen_core::neighbors::{fcc_first_shell_cutoff, NeighborTable};
use npscreen_core::optimize::{bulk_atom_energy, relax, scan_lattice_constant, RelaxSettings};
use npscreen_core::potential::{default_params, Potential};
use npscreen_core::{Element, Structure};
use std::collections::BTreeMap;

fn potential() -> Potential {
    Potential::new(default_params().unwrap()).unwrap()
}

fn bulk_reference(pot: &Potential) -> BulkReference {
    let mut bulk = BulkReference::default();
    for el in Element::METALS {
        let (lc, e) = scan_lattice_constant(el, pot, (3.6, 4.3), 0.01).unwrap();
        bulk.insert(
            el,
            BulkRefEntry {
                e_atom_bulk: e,
                lattice_constant: lc,
            },
        );
    }
    bulk
}

#[test]
fn central_bulk_atom_has_zero_lse() {
    let pot = potential();
    let bulk = bulk_reference(&pot);
    let lc = bulk.get(Element::Pt).unwrap().lattice_constant;
    // Same construction as the scan's readout: per-atom energy of the block
    // center at the scanned minimum equals the stored reference.
    let e_central = bulk_atom_energy(Element::Pt, &pot, lc).unwrap();
    let lse = e_central - bulk.get(Element::Pt).unwrap().e_atom_bulk;
    assert!(lse.abs() < 1e-6, "central-atom lse {lse}");
}

#[test]
fn fcc111_surface_atom_has_gcn_7_5() {
    // Half-space slab cut along a {111} plane: in lattice units of a/2, fcc
    // sites are even-parity integer triples; keep i+j+k <= 0. The atom at
    // the origin sits in the top layer with 6 in-plane neighbors (cn 9) and
    // 3 subsurface neighbors (cn 12): GCN = (6·9 + 3·12)/12 = 7.5 exactly.
    let a = 3.9;
    let mut species = Vec::new();
    let mut positions = Vec::new();
    let range = 8i64;
    for i in -range..=range {
        for j in -range..=range {
            for k in -range..=range {
                if (i + j + k).rem_euclid(2) != 0 || i + j + k > 0 {
                    continue;
                }
                species.push(Element::Pt);
                positions.push([
                    i as f64 * a / 2.0,
                    j as f64 * a / 2.0,
                    k as f64 * a / 2.0,
                ]);
            }
        }
    }
    let slab = Structure::unconstrained(species, positions, "fcc111 half-space").unwrap();
    let center = slab
        .positions
        .iter()
        .position(|p| p[0] == 0.0 && p[1] == 0.0 && p[2] == 0.0)
        .unwrap();
    let table = NeighborTable::build(&slab, fcc_first_shell_cutoff(a));
    assert_eq!(table.cn(center), 9);
    assert_eq!(gcn_of(&table, center), 7.5);
}

#[test]
fn bulk_interior_gcn_is_12() {
    let a = 3.9;
    let block = npscreen_core::geometry::build_fcc_bulk(Element::Pt, a, 6).unwrap();
    let table = NeighborTable::build(&block, fcc_first_shell_cutoff(a));
    // GCN = 12 needs a bulk-like atom whose whole first shell is itself
    // fully coordinated (depth two below the block surface).
    let interior = (0..block.len())
        .find(|&i| table.cn(i) == 12 && table.neighbors[i].iter().all(|&j| table.cn(j) == 12))
        .expect("6x6x6 block has deep interior atoms");
    assert_eq!(gcn_of(&table, interior), 12.0);
}

#[test]
fn to201_corner_gcn_from_neighbor_census() {
    // Hand count on the ideal geometry: a corner atom's neighbors are one
    // hex-hex edge atom (cn 7), one interior atom (cn 12), two facet atoms
    // (cn 9), and two square-hex edge atoms (cn 7): GCN = 51/12 = 4.25.
    let s = build_cluster(ClusterShape::TruncatedOctahedron, 201, 3.9).unwrap();
    let table = NeighborTable::build(&s, fcc_first_shell_cutoff(3.9));
    let corners: Vec<usize> = (0..s.len()).filter(|&i| table.cn(i) == 6).collect();
    assert_eq!(corners.len(), 24);
    for &i in &corners {
        assert_eq!(gcn_of(&table, i), 4.25);
    }
}

#[test]
fn monometallic_orbit_members_share_lse_and_gcn() {
    // On the ideal point-symmetric geometry, orbit members are exactly
    // equivalent: LSE agrees to rounding and GCN exactly.
    let pot = potential();
    let bulk = bulk_reference(&pot);
    let lc = bulk.get(Element::Pt).unwrap().lattice_constant;
    let ideal = build_cluster(ClusterShape::TruncatedOctahedron, 201, lc).unwrap();
    let ideal = assign_composition(&ideal, &[Element::Pt], 0).unwrap();
    let cutoff = fcc_first_shell_cutoff(lc);
    let orbits = surface_orbits(&ideal, ClusterShape::TruncatedOctahedron, cutoff).unwrap();
    let report = pot.evaluate(&ideal).unwrap();
    let table = NeighborTable::build(&ideal, cutoff);
    for orbit in &orbits {
        let i0 = orbit.members[0];
        let lse0 = lse_of(&report, &bulk, Element::Pt, i0).unwrap();
        let gcn0 = gcn_of(&table, i0);
        for &m in &orbit.members[1..] {
            let lse = lse_of(&report, &bulk, Element::Pt, m).unwrap();
            assert!(
                (lse - lse0).abs() < 1e-8,
                "orbit lse spread {} vs {}",
                lse,
                lse0
            );
            assert_eq!(gcn_of(&table, m), gcn0);
        }
    }
}

#[test]
fn coordination_trends_across_site_classes() {
    let pot = potential();
    let bulk = bulk_reference(&pot);
    let lc = bulk.get(Element::Rh).unwrap().lattice_constant;
    let ideal = build_cluster(ClusterShape::TruncatedOctahedron, 201, lc).unwrap();
    let ideal = assign_composition(&ideal, &[Element::Rh], 0).unwrap();
    let relaxed = relax(&ideal, &pot, &RelaxSettings::default()).unwrap().structure;
    let report = pot.evaluate(&relaxed).unwrap();
    let records = compute_descriptors(
        &relaxed,
        &report,
        &bulk,
        ClusterShape::TruncatedOctahedron,
        fcc_first_shell_cutoff(lc),
    )
    .unwrap();
    assert_eq!(records.len(), 122);

    let mut lse_by_class: BTreeMap<SiteClass, Vec<f64>> = BTreeMap::new();
    let mut gcn_by_class: BTreeMap<SiteClass, Vec<f64>> = BTreeMap::new();
    for r in &records {
        lse_by_class.entry(r.site_class).or_default().push(r.lse);
        gcn_by_class.entry(r.site_class).or_default().push(r.gcn);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let lse_corner = mean(&lse_by_class[&SiteClass::Corner]);
    let lse_edge = mean(&lse_by_class[&SiteClass::Edge]);
    let lse_facet = mean(&lse_by_class[&SiteClass::Facet]);
    assert!(
        lse_corner > lse_edge && lse_edge > lse_facet,
        "LSE ordering violated: {lse_corner} {lse_edge} {lse_facet}"
    );
    // GCN ordering is exact and reversed.
    let gcn_corner = gcn_by_class[&SiteClass::Corner].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let gcn_edge_min = gcn_by_class[&SiteClass::Edge].iter().cloned().fold(f64::INFINITY, f64::min);
    let gcn_edge_max = gcn_by_class[&SiteClass::Edge].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let gcn_facet_min = gcn_by_class[&SiteClass::Facet].iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(gcn_corner < gcn_edge_min, "corner gcn {gcn_corner} vs edge {gcn_edge_min}");
    assert!(gcn_edge_max < gcn_facet_min, "edge gcn {gcn_edge_max} vs facet {gcn_facet_min}");
}

#[test]
fn gcn_is_element_blind_and_lse_is_not() {
    let pot = potential();
    let bulk = bulk_reference(&pot);
    let lc = bulk.mean_lattice_constant(&Element::METALS).unwrap();
    let base = build_cluster(ClusterShape::TruncatedOctahedron, 79, lc).unwrap();
    let hea = assign_composition(&base, &Element::METALS, 3).unwrap();
    let cutoff = fcc_first_shell_cutoff(lc);
    let table = NeighborTable::build(&hea, cutoff);

    // Swap the species of two different-element atoms at fixed geometry.
    let (i, j) = {
        let mut pick = None;
        'outer: for i in 0..hea.len() {
            for j in (i + 1)..hea.len() {
                if hea.species[i] != hea.species[j] {
                    pick = Some((i, j));
                    break 'outer;
                }
            }
        }
        pick.unwrap()
    };
    let mut swapped = hea.clone();
    swapped.species.swap(i, j);

    // GCN: purely geometric, identical after the swap.
    let table_swapped = NeighborTable::build(&swapped, cutoff);
    for k in 0..hea.len() {
        assert_eq!(gcn_of(&table, k), gcn_of(&table_swapped, k));
    }

    // LSE: the affected atoms' per-atom energies change.
    let rep_a = pot.evaluate(&hea).unwrap();
    let rep_b = pot.evaluate(&swapped).unwrap();
    let lse_a = lse_of(&rep_a, &bulk, hea.species[i], i).unwrap();
    let lse_b = lse_of(&rep_b, &bulk, swapped.species[i], i).unwrap();
    assert!(
        (lse_a - lse_b).abs() > 1e-6,
        "swapping elements left LSE unchanged"
    );
}

#[test]
fn lse_is_invariant_under_rigid_motion() {
    let pot = potential();
    let bulk = bulk_reference(&pot);
    let lc = bulk.get(Element::Ir).unwrap().lattice_constant;
    let s = assign_composition(
        &build_cluster(ClusterShape::TruncatedOctahedron, 38, lc).unwrap(),
        &[Element::Ir],
        0,
    )
    .unwrap();
    let rep = pot.evaluate(&s).unwrap();
    let mut moved = s.clone();
    for p in &mut moved.positions {
        let (x, y, z) = (p[0], p[1], p[2]);
        let (c, sn) = (0.28f64.cos(), 0.28f64.sin());
        *p = [c * x - sn * y + 3.0, sn * x + c * y - 7.0, z + 0.5];
    }
    let rep_m = pot.evaluate(&moved).unwrap();
    for i in 0..s.len() {
        let a = lse_of(&rep, &bulk, Element::Ir, i).unwrap();
        let b = lse_of(&rep_m, &bulk, Element::Ir, i).unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}
