//! Relaxer contracts: dimer minimum against a golden-section oracle,
//! monotone energy traces, frozen-atom bit-identity, determinism, and scan
//! refinement stability.

use npscreen_core::geometry::{build_cluster, ClusterShape};
use npscreen_core::optimize::{relax, scan_lattice_constant, RelaxSettings};
use npscreen_core::potential::{default_params, Potential};
use npscreen_core::{CoreError, Element, Structure};

fn potential() -> Potential {
    Potential::new(default_params().unwrap()).unwrap()
}

fn pt_dimer(r: f64) -> Structure {
    Structure::unconstrained(
        vec![Element::Pt, Element::Pt],
        vec![[0.0; 3], [r, 0.0, 0.0]],
        "dimer",
    )
    .unwrap()
}

/// Independent 1-D oracle: golden-section minimization of the dimer energy
/// curve.
fn golden_section_minimum(pot: &Potential, mut a: f64, mut b: f64) -> f64 {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let energy = |r: f64| pot.evaluate(&pt_dimer(r)).unwrap().total;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (energy(c), energy(d));
    while (b - a) > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = energy(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = energy(d);
        }
    }
    0.5 * (a + b)
}

#[test]
fn dimer_relaxes_to_the_golden_section_minimum() {
    let pot = potential();
    let r_star = golden_section_minimum(&pot, 2.0, 3.5);

    // Default settings satisfy the stated force tolerance.
    let defaults = RelaxSettings::default();
    let res = relax(&pt_dimer(3.2), &pot, &defaults).unwrap();
    assert!(res.converged);
    assert!(res.final_fmax <= 1e-3);
    let d = dist(res.structure.positions[0], res.structure.positions[1]);
    assert!((d - r_star).abs() < 1e-3, "default-tolerance distance {d} vs {r_star}");

    // Tight settings pin the distance to the oracle within 1e-6 Å.
    let tight = RelaxSettings {
        fmax: 1e-7,
        ..RelaxSettings::default()
    };
    let res = relax(&pt_dimer(3.2), &pot, &tight).unwrap();
    assert!(res.converged);
    let d = dist(res.structure.positions[0], res.structure.positions[1]);
    assert!(
        (d - r_star).abs() < 1e-6,
        "tight distance {d} vs oracle {r_star}"
    );
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[test]
fn energy_trace_is_monotone_and_final_energy_not_above_input() {
    let pot = potential();
    let cluster = build_cluster(ClusterShape::TruncatedOctahedron, 79, 3.977).unwrap();
    let res = relax(&cluster, &pot, &RelaxSettings::default()).unwrap();
    assert!(res.converged);
    for w in res.energy_trace.windows(2) {
        assert!(w[1] <= w[0] + 1e-10, "trace rose: {} -> {}", w[0], w[1]);
    }
    assert!(res.energy_trace.last().unwrap() <= &res.energy_trace[0]);
}

#[test]
fn frozen_atoms_are_bit_identical() {
    let pot = potential();
    let mut cluster = build_cluster(ClusterShape::TruncatedOctahedron, 38, 3.9).unwrap();
    for i in 0..20 {
        cluster.frozen[i] = true;
    }
    let before: Vec<[f64; 3]> = cluster.positions.clone();
    let res = relax(&cluster, &pot, &RelaxSettings::default()).unwrap();
    for i in 0..20 {
        assert_eq!(res.structure.positions[i], before[i], "frozen atom {i} moved");
    }
    // And at least one free atom actually moved.
    assert!((20..38).any(|i| res.structure.positions[i] != before[i]));
}

#[test]
fn already_converged_input_is_a_fixed_point() {
    let pot = potential();
    let cluster = build_cluster(ClusterShape::TruncatedOctahedron, 38, 3.9).unwrap();
    let first = relax(&cluster, &pot, &RelaxSettings::default()).unwrap();
    assert!(first.converged);
    let again = relax(&first.structure, &pot, &RelaxSettings::default()).unwrap();
    assert!(again.n_steps <= 1);
    for (a, b) in again.structure.positions.iter().zip(&first.structure.positions) {
        assert!(dist(*a, *b) < 1e-8);
    }
}

#[test]
fn no_free_atoms_is_a_precondition_error() {
    let pot = potential();
    let mut s = pt_dimer(2.8);
    s.frozen = vec![true, true];
    assert!(matches!(
        relax(&s, &pot, &RelaxSettings::default()),
        Err(CoreError::InvalidArgument(_))
    ));
}

#[test]
fn relaxation_is_deterministic() {
    let pot = potential();
    let cluster = build_cluster(ClusterShape::TruncatedOctahedron, 38, 3.9).unwrap();
    let a = relax(&cluster, &pot, &RelaxSettings::default()).unwrap();
    let b = relax(&cluster, &pot, &RelaxSettings::default()).unwrap();
    assert_eq!(a.energy_trace, b.energy_trace);
    assert_eq!(a.structure.positions, b.structure.positions);
}

#[test]
fn unconverged_budget_is_flagged_not_thrown() {
    let pot = potential();
    let settings = RelaxSettings {
        max_iterations: 2,
        ..RelaxSettings::default()
    };
    let res = relax(&pt_dimer(3.2), &pot, &settings).unwrap();
    assert!(!res.converged);
    assert!(res.n_steps <= 2);
}

#[test]
fn scan_refinement_is_stable_under_step_halving() {
    let pot = potential();
    let (coarse, _) = scan_lattice_constant(Element::Pt, &pot, (3.7, 4.3), 0.02).unwrap();
    let (fine, _) = scan_lattice_constant(Element::Pt, &pot, (3.7, 4.3), 0.01).unwrap();
    assert!(
        (coarse - fine).abs() < 0.005,
        "halving the step moved lc from {coarse} to {fine}"
    );
}

#[test]
fn scan_with_boundary_minimum_fails_cleanly() {
    let pot = potential();
    assert!(matches!(
        scan_lattice_constant(Element::Pt, &pot, (4.2, 4.6), 0.01),
        Err(CoreError::BracketFailure { .. })
    ));
}
