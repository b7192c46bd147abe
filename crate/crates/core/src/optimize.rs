//! Constrained local relaxation and bulk lattice-constant scanning.
//!
//! The relaxer is dense-inverse-Hessian BFGS with a backtracking Armijo line
//! search (Nocedal & Wright, Numerical Optimization, ch. 6), a per-atom
//! displacement cap, and a Hessian reset whenever the curvature condition
//! fails. Frozen atoms are excluded from the optimization variables
//! entirely, so their coordinates pass through bit-identically.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::geometry::build_fcc_bulk;
use crate::potential::Potential;
use crate::structure::Structure;
use crate::vec3;

#[derive(Debug, Clone)]
pub struct RelaxSettings {
    /// Convergence threshold on the max per-atom force norm (eV/Å).
    pub fmax: f64,
    /// Per-atom displacement cap per iteration (Å).
    pub max_step: f64,
    pub max_iterations: usize,
}

impl Default for RelaxSettings {
    fn default() -> Self {
        Self {
            fmax: 0.001,
            max_step: 0.005,
            max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RelaxResult {
    pub structure: Structure,
    /// Accepted BFGS steps.
    pub n_steps: usize,
    /// Max per-atom force norm over free atoms at exit (eV/Å).
    pub final_fmax: f64,
    /// Energy after step 0 (input) and after each accepted step.
    pub energy_trace: Vec<f64>,
    pub converged: bool,
}

const ARMIJO_C1: f64 = 1e-4;
const MIN_BACKTRACK: f64 = 1e-12;
const INITIAL_HESSIAN_SCALE: f64 = 1.0 / 70.0; // Å²/eV, metals-appropriate

/// Quasi-Newton minimization over the free atoms of `structure`.
pub fn relax(
    structure: &Structure,
    potential: &Potential,
    settings: &RelaxSettings,
) -> Result<RelaxResult> {
    relax_traced(structure, potential, settings, false).map(|(r, _)| r)
}

/// Same as [`relax`], optionally recording every accepted geometry for a
/// trajectory dump.
pub fn relax_traced(
    structure: &Structure,
    potential: &Potential,
    settings: &RelaxSettings,
    record_frames: bool,
) -> Result<(RelaxResult, Vec<Structure>)> {
    if settings.fmax <= 0.0 || settings.max_step <= 0.0 {
        return Err(CoreError::InvalidArgument(
            "fmax and max_step must be positive".into(),
        ));
    }
    let free: Vec<usize> = (0..structure.len())
        .filter(|&i| !structure.frozen[i])
        .collect();
    if free.is_empty() {
        return Err(CoreError::InvalidArgument(
            "relaxation needs at least one free atom".into(),
        ));
    }
    let m = 3 * free.len();

    let mut current = structure.clone();
    let mut frames: Vec<Structure> = Vec::new();
    if record_frames {
        frames.push(current.clone());
    }

    let eval = |s: &Structure| -> Result<(f64, Vec<f64>, f64)> {
        let report = potential.evaluate(s)?;
        if !report.total.is_finite() {
            return Err(CoreError::NumericalFailure("non-finite energy".into()));
        }
        let mut grad = vec![0.0; m];
        let mut fmax: f64 = 0.0;
        for (k, &atom) in free.iter().enumerate() {
            let f = report.forces[atom];
            fmax = fmax.max(vec3::norm(f));
            grad[3 * k] = -f[0];
            grad[3 * k + 1] = -f[1];
            grad[3 * k + 2] = -f[2];
        }
        Ok((report.total, grad, fmax))
    };

    let (mut energy, mut grad, mut fmax) = eval(&current)?;
    let mut trace = vec![energy];
    let mut n_steps = 0usize;

    if fmax <= settings.fmax {
        return Ok((
            RelaxResult {
                structure: current,
                n_steps,
                final_fmax: fmax,
                energy_trace: trace,
                converged: true,
            },
            frames,
        ));
    }

    // Dense inverse Hessian approximation.
    let mut hess = identity_scaled(m, INITIAL_HESSIAN_SCALE);
    let mut hessian_is_fresh = true;

    for _ in 0..settings.max_iterations {
        let mut direction = neg_matvec(&hess, &grad);
        clip_per_atom(&mut direction, settings.max_step);
        let mut slope = dot(&direction, &grad);
        if slope >= 0.0 {
            // Not a descent direction; fall back to steepest descent.
            hess = identity_scaled(m, INITIAL_HESSIAN_SCALE);
            hessian_is_fresh = true;
            direction = grad.iter().map(|g| -g * INITIAL_HESSIAN_SCALE).collect();
            clip_per_atom(&mut direction, settings.max_step);
            slope = dot(&direction, &grad);
        }

        let mut accepted: Option<(f64, Vec<f64>, f64, f64)> = None;
        let mut t = 1.0;
        while t >= MIN_BACKTRACK {
            let trial = apply_step(&current, &free, &direction, t);
            match eval(&trial) {
                Ok((e_t, g_t, f_t)) if e_t <= energy + ARMIJO_C1 * t * slope => {
                    accepted = Some((e_t, g_t, f_t, t));
                    current = trial;
                    break;
                }
                Ok(_) => {}
                Err(CoreError::SingularGeometry { .. }) => {}
                Err(other) => return Err(other),
            }
            t *= 0.5;
        }

        let Some((e_new, g_new, f_new, t)) = accepted else {
            if hessian_is_fresh {
                // Even steepest descent cannot lower the energy: numerical
                // floor reached.
                break;
            }
            hess = identity_scaled(m, INITIAL_HESSIAN_SCALE);
            hessian_is_fresh = true;
            continue;
        };

        let s: Vec<f64> = direction.iter().map(|d| d * t).collect();
        let y: Vec<f64> = g_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            bfgs_update(&mut hess, &s, &y, sy);
            hessian_is_fresh = false;
        } else {
            hess = identity_scaled(m, INITIAL_HESSIAN_SCALE);
            hessian_is_fresh = true;
        }

        energy = e_new;
        grad = g_new;
        fmax = f_new;
        trace.push(energy);
        n_steps += 1;
        if record_frames {
            frames.push(current.clone());
        }
        if fmax <= settings.fmax {
            break;
        }
    }

    let converged = fmax <= settings.fmax;
    Ok((
        RelaxResult {
            structure: current,
            n_steps,
            final_fmax: fmax,
            energy_trace: trace,
            converged,
        },
        frames,
    ))
}

fn apply_step(base: &Structure, free: &[usize], direction: &[f64], t: f64) -> Structure {
    let mut s = base.clone();
    for (k, &atom) in free.iter().enumerate() {
        for c in 0..3 {
            s.positions[atom][c] += t * direction[3 * k + c];
        }
    }
    s
}

fn clip_per_atom(direction: &mut [f64], max_step: f64) {
    for chunk in direction.chunks_mut(3) {
        let n = (chunk[0] * chunk[0] + chunk[1] * chunk[1] + chunk[2] * chunk[2]).sqrt();
        if n > max_step {
            let s = max_step / n;
            chunk[0] *= s;
            chunk[1] *= s;
            chunk[2] *= s;
        }
    }
}

fn identity_scaled(m: usize, scale: f64) -> Vec<f64> {
    let mut h = vec![0.0; m * m];
    for k in 0..m {
        h[k * m + k] = scale;
    }
    h
}

fn neg_matvec(h: &[f64], g: &[f64]) -> Vec<f64> {
    let m = g.len();
    let mut out = vec![0.0; m];
    for r in 0..m {
        let row = &h[r * m..(r + 1) * m];
        let mut acc = 0.0;
        for c in 0..m {
            acc += row[c] * g[c];
        }
        out[r] = -acc;
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sherman–Morrison inverse-Hessian update:
/// H ← H + (sy + yᵀHy)/(sy)² · ssᵀ − (Hysᵀ + syᵀH)/sy.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let m = s.len();
    let mut hy = vec![0.0; m];
    for r in 0..m {
        let row = &h[r * m..(r + 1) * m];
        let mut acc = 0.0;
        for c in 0..m {
            acc += row[c] * y[c];
        }
        hy[r] = acc;
    }
    let yhy = dot(y, &hy);
    let c1 = (sy + yhy) / (sy * sy);
    let inv_sy = 1.0 / sy;
    for r in 0..m {
        for c in 0..m {
            h[r * m + c] += c1 * s[r] * s[c] - inv_sy * (hy[r] * s[c] + s[r] * hy[c]);
        }
    }
}

/// Locates the grid minimum of `(x, value)` samples and refines it by a
/// parabola through the minimum and its two neighbors. Errors when the
/// minimum sits on the boundary (no bracket).
pub fn refine_minimum(grid: &[(f64, f64)]) -> Result<f64> {
    if grid.len() < 3 {
        return Err(CoreError::InvalidArgument(
            "scan grid needs at least three points".into(),
        ));
    }
    let mut k = 0;
    for (i, &(_, e)) in grid.iter().enumerate() {
        if e < grid[k].1 {
            k = i;
        }
    }
    if k == 0 || k == grid.len() - 1 {
        return Err(CoreError::BracketFailure {
            lo: grid[0].0,
            hi: grid[grid.len() - 1].0,
        });
    }
    let (x0, y0) = grid[k - 1];
    let (x1, y1) = grid[k];
    let (x2, y2) = grid[k + 1];
    // Vertex of the interpolating parabola via divided differences.
    let d1 = (y1 - y0) / (x1 - x0);
    let d2 = (y2 - y1) / (x2 - x1);
    let second = (d2 - d1) / (0.5 * (x2 - x0));
    if second <= 0.0 {
        return Ok(x1);
    }
    let vertex = 0.5 * (x0 + x1) - d1 / second;
    Ok(vertex.clamp(x0, x2))
}

/// Per-atom energy of a bulk-like atom: the most central atom of a 6×6×6
/// conventional-cell block, whose environment is complete within the cutoff.
pub fn bulk_atom_energy(element: Element, potential: &Potential, lattice_constant: f64) -> Result<f64> {
    const REPS: usize = 6;
    let block = build_fcc_bulk(element, lattice_constant, REPS)?;
    let center = [
        lattice_constant * REPS as f64 / 2.0,
        lattice_constant * REPS as f64 / 2.0,
        lattice_constant * REPS as f64 / 2.0,
    ];
    let mut idx = 0;
    let mut best = f64::INFINITY;
    for (i, p) in block.positions.iter().enumerate() {
        let d = vec3::dist(*p, center);
        if d < best {
            best = d;
            idx = i;
        }
    }
    let report = potential.evaluate(&block)?;
    Ok(report.per_atom[idx])
}

/// Scans the fcc per-atom energy over lattice constants and returns the
/// refined minimum `(lc_star, e_atom_bulk)`.
pub fn scan_lattice_constant(
    element: Element,
    potential: &Potential,
    range: (f64, f64),
    step: f64,
) -> Result<(f64, f64)> {
    let (lo, hi) = range;
    if !(lo > 0.0 && hi > lo && step > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "bad scan range [{lo}, {hi}] with step {step}"
        )));
    }
    let mut grid = Vec::new();
    let mut a = lo;
    while a < hi + 0.5 * step {
        let a_eval = a.min(hi);
        grid.push((a_eval, bulk_atom_energy(element, potential, a_eval)?));
        a += step;
    }
    let lc_star = refine_minimum(&grid)?;
    let e_atom = bulk_atom_energy(element, potential, lc_star)?;
    Ok((lc_star, e_atom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_vertex_is_exact() {
        // Samples of (x - 3.9)² + 1 on an offset grid.
        let grid: Vec<(f64, f64)> = (0..21)
            .map(|i| {
                let x = 3.7 + 0.02 * i as f64 + 0.003;
                (x, (x - 3.9) * (x - 3.9) + 1.0)
            })
            .collect();
        let v = refine_minimum(&grid).unwrap();
        assert!((v - 3.9).abs() < 1e-6, "vertex {v}");
    }

    #[test]
    fn boundary_minimum_is_bracket_failure() {
        let grid: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, i as f64)).collect();
        assert!(matches!(
            refine_minimum(&grid),
            Err(CoreError::BracketFailure { .. })
        ));
    }
}
