//! Potential correctness: per-atom decomposition, analytic forces against
//! central finite differences, symmetry invariances, cutoff smoothness, and
//! the coordination-modulated adsorbate well.

use npscreen_core::geometry::{build_cluster, ClusterShape};
use npscreen_core::optimize::scan_lattice_constant;
use npscreen_core::potential::{default_params, Potential};
use npscreen_core::{Element, Structure};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn potential() -> Potential {
    Potential::new(default_params().unwrap()).unwrap()
}

/// Random 20-atom alloy cluster: jittered fcc fragment with random species.
/// `with_adsorbate` replaces the last atom by X floated above the cluster.
fn random_cluster(seed: u64, with_adsorbate: bool) -> Structure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = build_cluster(ClusterShape::TruncatedOctahedron, 38, 3.9).unwrap();
    let mut species = Vec::new();
    let mut positions = Vec::new();
    for i in 0..20 {
        species.push(Element::METALS[rng.gen_range(0..5)]);
        let p = base.positions[i];
        positions.push([
            p[0] + rng.gen_range(-0.1..0.1),
            p[1] + rng.gen_range(-0.1..0.1),
            p[2] + rng.gen_range(-0.1..0.1),
        ]);
    }
    if with_adsorbate {
        species[19] = Element::X;
        // Float the adsorbate above the outermost metal so the nearest-metal
        // assignment has a clear margin.
        let mut top = 0;
        let mut best = f64::NEG_INFINITY;
        for (i, p) in positions.iter().enumerate().take(19) {
            if p[2] > best {
                best = p[2];
                top = i;
            }
        }
        let t = positions[top];
        positions[19] = [t[0] + 0.1, t[1] - 0.05, t[2] + 1.95];
    }
    Structure::unconstrained(species, positions, format!("random-{seed}")).unwrap()
}

#[test]
fn decomposition_identity_on_100_random_structures() {
    let pot = potential();
    for seed in 0..100 {
        let s = random_cluster(seed, seed % 3 == 0);
        let rep = pot.evaluate(&s).unwrap();
        let sum: f64 = rep.per_atom.iter().sum();
        let denom = rep.total.abs().max(1e-12);
        assert!(
            ((sum - rep.total) / denom).abs() < 1e-9,
            "seed {seed}: sum {sum} total {}",
            rep.total
        );
    }
}

#[test]
fn forces_match_central_finite_differences() {
    let pot = potential();
    let h = 1e-5;
    for seed in [1u64, 2, 3, 11, 12] {
        let s = random_cluster(seed, seed > 10);
        let rep = pot.evaluate(&s).unwrap();
        let fmax = rep
            .forces
            .iter()
            .flat_map(|f| f.iter())
            .fold(0.0f64, |m, &v| m.max(v.abs()));
        let mut err_max = 0.0f64;
        for i in 0..s.len() {
            for c in 0..3 {
                let mut plus = s.clone();
                plus.positions[i][c] += h;
                let mut minus = s.clone();
                minus.positions[i][c] -= h;
                let fd = -(pot.evaluate(&plus).unwrap().total
                    - pot.evaluate(&minus).unwrap().total)
                    / (2.0 * h);
                err_max = err_max.max((rep.forces[i][c] - fd).abs());
            }
        }
        assert!(
            err_max / fmax < 1e-6,
            "seed {seed}: max force error {err_max} vs fmax {fmax}"
        );
    }
}

#[test]
fn forces_sum_to_zero() {
    let pot = potential();
    for seed in [0u64, 9, 21] {
        let s = random_cluster(seed, seed == 21);
        let rep = pot.evaluate(&s).unwrap();
        let mut net = [0.0f64; 3];
        for f in &rep.forces {
            for c in 0..3 {
                net[c] += f[c];
            }
        }
        for c in 0..3 {
            assert!(net[c].abs() < 1e-8, "net force {net:?}");
        }
    }
}

#[test]
fn translation_rotation_permutation_invariance() {
    let pot = potential();
    let s = random_cluster(5, true);
    let rep = pot.evaluate(&s).unwrap();

    // Translation.
    let mut shifted = s.clone();
    for p in &mut shifted.positions {
        p[0] += 11.3;
        p[1] -= 4.9;
        p[2] += 0.25;
    }
    let rep_t = pot.evaluate(&shifted).unwrap();
    for (a, b) in rep.per_atom.iter().zip(&rep_t.per_atom) {
        assert!((a - b).abs() < 1e-12, "translation drift");
    }

    // Proper rotation about the origin.
    let (c, sn) = (0.6f64, 0.8f64);
    let mut rotated = s.clone();
    for p in &mut rotated.positions {
        let (x, y, z) = (p[0], p[1], p[2]);
        // Rotation about z then x.
        let (x1, y1) = (c * x - sn * y, sn * x + c * y);
        let (y2, z2) = (c * y1 - sn * z, sn * y1 + c * z);
        *p = [x1, y2, z2];
    }
    let rep_r = pot.evaluate(&rotated).unwrap();
    for (a, b) in rep.per_atom.iter().zip(&rep_r.per_atom) {
        assert!((a - b).abs() < 1e-10, "rotation drift");
    }

    // Permutation equivariance (keep the adsorbate's index change in mind).
    let perm: Vec<usize> = (0..s.len()).rev().collect();
    let mut permuted_species = Vec::new();
    let mut permuted_positions = Vec::new();
    for &src in &perm {
        permuted_species.push(s.species[src]);
        permuted_positions.push(s.positions[src]);
    }
    let permuted =
        Structure::unconstrained(permuted_species, permuted_positions, "perm").unwrap();
    let rep_p = pot.evaluate(&permuted).unwrap();
    for (dst, &src) in perm.iter().enumerate() {
        assert!(
            (rep_p.per_atom[dst] - rep.per_atom[src]).abs() < 1e-12,
            "permutation drift"
        );
    }
}

#[test]
fn energy_and_force_are_smooth_across_the_cutoff() {
    let pot = potential();
    let pp_cutoff = pot.params().elements[&Element::Pt].cutoff;
    let energy_at = |r: f64| {
        let s = Structure::unconstrained(
            vec![Element::Pt, Element::Pt],
            vec![[0.0; 3], [r, 0.0, 0.0]],
            "dimer",
        )
        .unwrap();
        pot.evaluate(&s).unwrap().total
    };
    let force_at = |r: f64| {
        let s = Structure::unconstrained(
            vec![Element::Pt, Element::Pt],
            vec![[0.0; 3], [r, 0.0, 0.0]],
            "dimer",
        )
        .unwrap();
        pot.evaluate(&s).unwrap().forces[1][0]
    };
    // A genuine discontinuity keeps the two-sided difference finite as the
    // probe interval shrinks; a continuous function scales it to zero.
    let eps = 1e-10;
    for r in [pp_cutoff, pp_cutoff - pot.params().elements[&Element::Pt].taper_width] {
        let de = (energy_at(r + eps) - energy_at(r - eps)).abs();
        let df = (force_at(r + eps) - force_at(r - eps)).abs();
        assert!(de < 1e-8, "energy jump {de} at r = {r}");
        assert!(df < 1e-8, "force jump {df} at r = {r}");
    }
    assert_eq!(energy_at(pp_cutoff + 0.001), 0.0);
}

#[test]
fn bulk_energy_consistent_with_lattice_scan() {
    let pot = potential();
    let (lc, e_bulk) = scan_lattice_constant(Element::Pt, &pot, (3.7, 4.3), 0.01).unwrap();
    // The fit anchors: minimum within 1% of 3.977 Å and 2% of -6.069 eV.
    assert!((lc - 3.977).abs() / 3.977 < 0.01, "lc {lc}");
    assert!((e_bulk - -6.069).abs() / 6.069 < 0.02, "e {e_bulk}");
    // Self-consistency: evaluating the block at lc reproduces e_bulk.
    let e2 = npscreen_core::optimize::bulk_atom_energy(Element::Pt, &pot, lc).unwrap();
    assert!((e2 - e_bulk).abs() < 1e-12);
}

#[test]
fn ruthenium_scan_hits_its_anchor() {
    let pot = potential();
    let (lc, e_bulk) = scan_lattice_constant(Element::Ru, &pot, (3.6, 4.1), 0.01).unwrap();
    assert!((lc - 3.815).abs() / 3.815 < 0.01, "lc {lc}");
    assert!((e_bulk - -9.305).abs() / 9.305 < 0.02, "e {e_bulk}");
}

#[test]
fn kappa_strengthens_undercoordinated_binding() {
    // Two hosts with different coordination for the site atom, same bond
    // length: raising kappa must deepen the low-density site and weaken a
    // site denser than the reference.
    let mut params = default_params().unwrap();
    params.adsorbate.secondary_scale = 0.0;
    let rho_ref_pt = params.adsorbate.rho_ref[&Element::Pt];

    let make = |kappa: f64| {
        let mut p = params.clone();
        p.adsorbate.kappa = kappa;
        Potential::new(p).unwrap()
    };

    // Sparse host: site atom with a single metal neighbor (rho << rho_ref).
    let sparse = Structure::unconstrained(
        vec![Element::Pt, Element::Pt, Element::X],
        vec![[0.0; 3], [2.81, 0.0, 0.0], [0.0, 0.0, 1.9]],
        "sparse",
    )
    .unwrap();
    // Dense host: central atom of a bulk block plus the adsorbate is not
    // geometrically reachable; instead compress a 13-atom shell so the site
    // density exceeds the facet reference.
    let mut species = vec![Element::Pt; 13];
    species.push(Element::X);
    let mut positions = vec![[0.0; 3]];
    let d = 2.55; // compressed first shell
    for v in [
        [1.0, 1.0, 0.0],
        [1.0, -1.0, 0.0],
        [-1.0, 1.0, 0.0],
        [-1.0, -1.0, 0.0],
        [1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0],
        [-1.0, 0.0, 1.0],
        [-1.0, 0.0, -1.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, -1.0],
        [0.0, -1.0, 1.0],
        [0.0, -1.0, -1.0],
    ] {
        let norm = (2.0f64).sqrt();
        positions.push([v[0] * d / norm, v[1] * d / norm, v[2] * d / norm]);
    }
    positions.push([0.0, 0.0, 3.2]); // X above, nearest to a shell atom
    let dense = Structure::unconstrained(species, positions, "dense").unwrap();

    let low = make(0.1);
    let high = make(0.6);
    assert!(low.site_density(&sparse, 0).unwrap() < rho_ref_pt);
    let e_sparse_low = low.evaluate(&sparse).unwrap().total;
    let e_sparse_high = high.evaluate(&sparse).unwrap().total;
    assert!(
        e_sparse_high < e_sparse_low - 1e-6,
        "higher kappa must deepen the sparse site: {e_sparse_high} vs {e_sparse_low}"
    );

    // For the dense geometry, check the site the adsorbate actually binds to.
    let rep = low.evaluate(&dense).unwrap();
    let _ = rep;
    let site_rho = low.site_density(&dense, 12).unwrap();
    if site_rho > rho_ref_pt {
        let e_dense_low = low.evaluate(&dense).unwrap().total;
        let e_dense_high = high.evaluate(&dense).unwrap().total;
        assert!(
            e_dense_high > e_dense_low + 1e-9,
            "higher kappa must weaken an over-dense site"
        );
    }
}

#[test]
fn secondary_attraction_contributes_when_enabled() {
    let mut params = default_params().unwrap();
    params.adsorbate.secondary_scale = 0.2;
    let with = Potential::new(params.clone()).unwrap();
    params.adsorbate.secondary_scale = 0.0;
    let without = Potential::new(params).unwrap();

    // X bonded to atom 0, with a second metal in range.
    let s = Structure::unconstrained(
        vec![Element::Pt, Element::Pt, Element::X],
        vec![[0.0; 3], [2.81, 0.0, 0.0], [0.0, 0.0, 1.9]],
        "trimer",
    )
    .unwrap();
    let e_with = with.evaluate(&s).unwrap().total;
    let e_without = without.evaluate(&s).unwrap().total;
    assert!(
        e_with < e_without - 1e-6,
        "secondary Morse attraction missing: {e_with} vs {e_without}"
    );
}

#[test]
fn adsorbate_far_away_contributes_nothing() {
    let pot = potential();
    let near = Structure::unconstrained(
        vec![Element::Pt, Element::Pt],
        vec![[0.0; 3], [2.81, 0.0, 0.0]],
        "bare",
    )
    .unwrap();
    let far = Structure::unconstrained(
        vec![Element::Pt, Element::Pt, Element::X],
        vec![[0.0; 3], [2.81, 0.0, 0.0], [0.0, 0.0, 50.0]],
        "far",
    )
    .unwrap();
    let e_bare = pot.evaluate(&near).unwrap().total;
    let e_far = pot.evaluate(&far).unwrap().total;
    assert_eq!(e_bare, e_far);
}
