// Scratch diagnostics used while calibrating defaults. Not part of the API.

use npscreen_core::adsorption::{adsorption_energy, DEFAULT_HEIGHT};
use npscreen_core::descriptors::{BulkRefEntry, BulkReference};
use npscreen_core::geometry::{
    assign_composition, build_cluster, classify_sites, site_configurations, surface_orbits,
    ClusterShape, Composition,
};
use npscreen_core::neighbors::{fcc_first_shell_cutoff, NeighborTable};
use npscreen_core::optimize::{relax, scan_lattice_constant, RelaxSettings};
use npscreen_core::potential::{default_bulk_targets, default_params, Potential};
use npscreen_core::{Element, Structure};
use std::collections::BTreeMap;

fn census(structure: &Structure, cutoff: f64) -> BTreeMap<usize, usize> {
    let nt = NeighborTable::build(structure, cutoff);
    let mut hist = BTreeMap::new();
    for i in 0..structure.len() {
        *hist.entry(nt.cn(i)).or_insert(0) += 1;
    }
    hist
}

fn main() {
    let params = default_params().unwrap();
    let pot = Potential::new(params.clone()).unwrap();

    println!("== fitted metal params ==");
    for (el, pp) in &params.elements {
        println!(
            "{el}: A={:.5} xi={:.5} p={:.3} q={:.3} r0={:.5} cutoff={:.4}",
            pp.a, pp.xi, pp.p, pp.q, pp.r0, pp.cutoff
        );
    }
    println!("rho_ref: {:?}", params.adsorbate.rho_ref);

    println!("\n== cluster censuses (ideal, a=3.9) ==");
    for (shape, size) in [
        (ClusterShape::TruncatedOctahedron, 38),
        (ClusterShape::TruncatedOctahedron, 79),
        (ClusterShape::TruncatedOctahedron, 116),
        (ClusterShape::TruncatedOctahedron, 201),
        (ClusterShape::Octahedron, 146),
        (ClusterShape::Icosahedron, 147),
    ] {
        let s = build_cluster(shape, size, 3.9).unwrap();
        let hist = census(&s, fcc_first_shell_cutoff(3.9));
        let surface: usize = hist.iter().filter(|(&cn, _)| cn < 12).map(|(_, &c)| c).sum();
        println!("{shape}-{size}: cn hist {hist:?} surface {surface}");
        if let Ok(orbits) = surface_orbits(&s, shape, fcc_first_shell_cutoff(3.9)) {
            let sizes: Vec<usize> = orbits.iter().map(|o| o.members.len()).collect();
            println!("  orbits: {} sizes {:?}", orbits.len(), sizes);
        }
    }

    println!("\n== chemical space ==");
    let comp = Composition::near_uniform(201, &Element::METALS).unwrap();
    let sc = site_configurations(122, &comp);
    println!("multinomial x 122: log10 = {:.4}", sc.log10_value);

    println!("\n== lattice scans ==");
    let mut bulkref = BulkReference::default();
    for el in Element::METALS {
        let (lc, e) = scan_lattice_constant(el, &pot, (3.6, 4.3), 0.01).unwrap();
        let t = default_bulk_targets()[&el];
        println!(
            "{el}: lc* = {lc:.5} (target {:.3}), e = {e:.5} (target {:.3})",
            t.lattice_constant, t.cohesive_energy
        );
        bulkref.insert(el, BulkRefEntry { e_atom_bulk: e, lattice_constant: lc });
    }

    println!("\n== monometallic TO-201: relax + LSE + E_ad per orbit ==");
    let settings = RelaxSettings::default();
    for el in Element::METALS {
        let lc = bulkref.get(el).unwrap().lattice_constant;
        let ideal = build_cluster(ClusterShape::TruncatedOctahedron, 201, lc).unwrap();
        let ideal = assign_composition(&ideal, &[el], 0).unwrap();
        let orbits = surface_orbits(&ideal, ClusterShape::TruncatedOctahedron, fcc_first_shell_cutoff(lc)).unwrap();
        let relaxed = relax(&ideal, &pot, &settings).unwrap();
        println!(
            "{el}: relax steps {} fmax {:.2e} converged {}",
            relaxed.n_steps, relaxed.final_fmax, relaxed.converged
        );
        let report = pot.evaluate(&relaxed.structure).unwrap();
        let eb = bulkref.get(el).unwrap().e_atom_bulk;
        for orbit in &orbits {
            let rep = &orbit.representative;
            let i = rep.atom_index;
            let lse = report.per_atom[i] - eb;
            let ads = adsorption_energy(&relaxed.structure, rep, &pot, &settings, DEFAULT_HEIGHT).unwrap();
            println!(
                "  orbit {:?} cn {} class {} x{}: lse {:.4} e_ad {:.4} migrated {} steps {}",
                rep.orbit_id, rep.cn, rep.site_class, orbit.members.len(), lse, ads.e_ad, ads.migrated, ads.n_steps
            );
        }
    }

    println!("\n== one HEA TO-201 ==");
    let lc_max = Element::METALS
        .iter()
        .map(|el| bulkref.get(*el).unwrap().lattice_constant)
        .fold(0.0f64, f64::max);
    let base = build_cluster(ClusterShape::TruncatedOctahedron, 201, lc_max).unwrap();
    let hea = assign_composition(&base, &Element::METALS, 7).unwrap();
    let relaxed = relax(&hea, &pot, &settings).unwrap();
    println!(
        "relax steps {} fmax {:.2e} converged {}",
        relaxed.n_steps, relaxed.final_fmax, relaxed.converged
    );
    let mean_lc = bulkref.mean_lattice_constant(&Element::METALS).unwrap();
    let sites = classify_sites(&relaxed.structure, ClusterShape::TruncatedOctahedron, fcc_first_shell_cutoff(mean_lc)).unwrap();
    println!("surface sites: {}", sites.len());
    let report = pot.evaluate(&relaxed.structure).unwrap();
    let mut lse_range = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &sites {
        let lse = report.per_atom[s.atom_index] - bulkref.get(s.element).unwrap().e_atom_bulk;
        lse_range.0 = lse_range.0.min(lse);
        lse_range.1 = lse_range.1.max(lse);
    }
    println!("HEA LSE range: [{:.3}, {:.3}]", lse_range.0, lse_range.1);
}
