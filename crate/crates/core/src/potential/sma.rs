//! Energy evaluation: total, per-atom decomposition, analytic forces.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::neighbors::CellList;
use crate::potential::params::{parse_pair_key, AdsorbateParams, MetalPairParams, PotentialParams};
use crate::structure::Structure;
use crate::vec3::{self, Vec3};

/// Below this separation the model has no meaning; evaluation refuses.
const SINGULAR_DISTANCE: f64 = 0.3;

/// Result of one energy evaluation.
///
/// `total` is accumulated independently of `per_atom`, so the decomposition
/// identity `sum(per_atom) == total` is a genuine cross-check rather than a
/// tautology. Forces are exact analytic gradients of `total`.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub total: f64,
    pub per_atom: Vec<f64>,
    pub forces: Vec<Vec3>,
}

/// Immutable, thread-safe evaluator built from validated parameters.
pub struct Potential {
    pairs: Vec<Option<MetalPairParams>>,
    adsorbate: AdsorbateParams,
    max_cutoff: f64,
    params: PotentialParams,
}

/// Squared-cosine taper and its derivative: 1 below `cutoff - width`, 0
/// above `cutoff`, C¹ across both joints. The quartic approach to zero
/// matters: the attraction is −√ρ, and √taper must itself stay C¹ when a
/// lone pair crosses the cutoff.
pub(crate) fn taper(r: f64, cutoff: f64, width: f64) -> (f64, f64) {
    if r >= cutoff {
        (0.0, 0.0)
    } else if r <= cutoff - width {
        (1.0, 0.0)
    } else {
        let t = (r - (cutoff - width)) / width;
        let half = 0.5 * (1.0 + (std::f64::consts::PI * t).cos());
        let half_p = -0.5 * std::f64::consts::PI / width * (std::f64::consts::PI * t).sin();
        (half * half, 2.0 * half * half_p)
    }
}

/// Tapered hopping-density contribution ξ²·exp(−2q(r/r0−1))·f(r).
pub(crate) fn pair_phi(pp: &MetalPairParams, r: f64) -> f64 {
    let (f, _) = taper(r, pp.cutoff, pp.taper_width);
    if f == 0.0 {
        return 0.0;
    }
    let eq = (-2.0 * pp.q * (r / pp.r0 - 1.0)).exp();
    pp.xi * pp.xi * eq * f
}

/// d/dr of [`pair_phi`].
fn pair_phi_prime(pp: &MetalPairParams, r: f64) -> f64 {
    let (f, fp) = taper(r, pp.cutoff, pp.taper_width);
    if f == 0.0 && fp == 0.0 {
        return 0.0;
    }
    let eq = (-2.0 * pp.q * (r / pp.r0 - 1.0)).exp();
    pp.xi * pp.xi * (eq * fp - (2.0 * pp.q / pp.r0) * eq * f)
}

/// Tapered Morse bond shape G(r) = [1 − (1 − e^{−a(r−re)})²]·f(r) and its
/// derivative. G(re) ≈ 1, G → 0 beyond the cutoff.
fn morse_shape(r: f64, a: f64, re: f64, cutoff: f64, width: f64) -> (f64, f64) {
    let (f, fp) = taper(r, cutoff, width);
    if f == 0.0 && fp == 0.0 {
        return (0.0, 0.0);
    }
    let e = (-a * (r - re)).exp();
    let g = 1.0 - (1.0 - e) * (1.0 - e);
    let gp = -2.0 * a * e * (1.0 - e);
    (g * f, gp * f + g * fp)
}

struct PairTerm {
    i: usize,
    j: usize,
    u: Vec3,
    drep: f64,
    dphi: f64,
}

impl Potential {
    pub fn new(params: PotentialParams) -> Result<Self> {
        params.validate()?;
        let mut pairs = vec![None; Element::COUNT * Element::COUNT];
        let elements: Vec<Element> = params.elements.keys().copied().collect();
        for &a in &elements {
            for &b in &elements {
                let pp = if a == b {
                    params.elements[&a]
                } else {
                    MetalPairParams::mixed(&params.elements[&a], &params.elements[&b])
                };
                pairs[a.index() * Element::COUNT + b.index()] = Some(pp);
            }
        }
        for (key, pp) in &params.pair_overrides {
            let (a, b) = parse_pair_key(key)?;
            pairs[a.index() * Element::COUNT + b.index()] = Some(*pp);
            pairs[b.index() * Element::COUNT + a.index()] = Some(*pp);
        }
        let max_cutoff = pairs
            .iter()
            .flatten()
            .map(|p| p.cutoff)
            .fold(0.0f64, f64::max);
        Ok(Self {
            pairs,
            adsorbate: params.adsorbate.clone(),
            max_cutoff,
            params,
        })
    }

    pub fn params(&self) -> &PotentialParams {
        &self.params
    }

    pub fn adsorbate(&self) -> &AdsorbateParams {
        &self.adsorbate
    }

    pub fn max_cutoff(&self) -> f64 {
        self.max_cutoff
    }

    fn pair(&self, a: Element, b: Element) -> Result<&MetalPairParams> {
        self.pairs[a.index() * Element::COUNT + b.index()]
            .as_ref()
            .ok_or(CoreError::MissingParams(if self.params.elements.contains_key(&a) {
                b
            } else {
                a
            }))
    }

    fn check_species(&self, structure: &Structure) -> Result<()> {
        for &sp in &structure.species {
            if sp.is_metal() && !self.params.elements.contains_key(&sp) {
                return Err(CoreError::MissingParams(sp));
            }
        }
        Ok(())
    }

    /// SMA host density of atom `i`: the ρ entering both the metal
    /// attraction −√ρ and the adsorbate well-depth modulation.
    pub fn site_density(&self, structure: &Structure, i: usize) -> Result<f64> {
        self.check_species(structure)?;
        if !structure.species[i].is_metal() {
            return Err(CoreError::InvalidArgument(
                "site density is defined for metal atoms".into(),
            ));
        }
        let list = CellList::build(&structure.positions, self.max_cutoff);
        let mut rho = 0.0;
        for j in list.neighbors_of(&structure.positions, i) {
            if !structure.species[j].is_metal() {
                continue;
            }
            let pp = self.pair(structure.species[i], structure.species[j])?;
            let r = vec3::dist(structure.positions[i], structure.positions[j]);
            if r <= pp.cutoff {
                rho += pair_phi(pp, r);
            }
        }
        Ok(rho)
    }

    /// Evaluates total energy, per-atom energies, and forces.
    pub fn evaluate(&self, structure: &Structure) -> Result<EnergyReport> {
        self.check_species(structure)?;
        let n = structure.len();
        let positions = &structure.positions;
        let list = CellList::build(positions, self.max_cutoff);

        let mut raw_pairs: Vec<(usize, usize, f64, Vec3)> = Vec::with_capacity(n * 16);
        let mut singular: Option<(usize, usize, f64)> = None;
        list.for_each_pair(positions, |i, j, r, rij| {
            if r < SINGULAR_DISTANCE && singular.is_none() {
                singular = Some((i, j, r));
            }
            raw_pairs.push((i, j, r, rij));
        });
        if let Some((i, j, r)) = singular {
            return Err(CoreError::SingularGeometry {
                i,
                j,
                r,
                min: SINGULAR_DISTANCE,
            });
        }

        let mut rep = vec![0.0f64; n];
        let mut rho = vec![0.0f64; n];
        let mut total = 0.0f64;
        let mut terms: Vec<PairTerm> = Vec::with_capacity(raw_pairs.len());
        for &(i, j, r, rij) in &raw_pairs {
            let (si, sj) = (structure.species[i], structure.species[j]);
            if !si.is_metal() || !sj.is_metal() {
                continue;
            }
            let pp = self.pair(si, sj)?;
            if r > pp.cutoff {
                continue;
            }
            let (f, fp) = taper(r, pp.cutoff, pp.taper_width);
            let xr = r / pp.r0 - 1.0;
            let ep = (-pp.p * xr).exp();
            let eq = (-2.0 * pp.q * xr).exp();
            let rep_t = pp.a * ep * f;
            let phi_t = pp.xi * pp.xi * eq * f;
            rep[i] += rep_t;
            rep[j] += rep_t;
            rho[i] += phi_t;
            rho[j] += phi_t;
            total += 2.0 * rep_t;
            terms.push(PairTerm {
                i,
                j,
                u: vec3::scale(rij, 1.0 / r),
                drep: pp.a * (ep * fp - (pp.p / pp.r0) * ep * f),
                dphi: pp.xi * pp.xi * (eq * fp - (2.0 * pp.q / pp.r0) * eq * f),
            });
        }

        let mut per_atom = vec![0.0f64; n];
        let mut sfac = vec![0.0f64; n];
        for i in 0..n {
            let sqrt_rho = if rho[i] > 0.0 { rho[i].sqrt() } else { 0.0 };
            per_atom[i] = rep[i] - sqrt_rho;
            total -= sqrt_rho;
            sfac[i] = if rho[i] > 0.0 { 0.5 / sqrt_rho } else { 0.0 };
        }

        let mut forces = vec![[0.0f64; 3]; n];
        for t in &terms {
            // dE/dr of the unordered pair: both repulsive directions plus the
            // pair's share of −√ρ_i − √ρ_j.
            let w = 2.0 * t.drep - (sfac[t.i] + sfac[t.j]) * t.dphi;
            let fvec = vec3::scale(t.u, w);
            forces[t.i] = vec3::add(forces[t.i], fvec);
            forces[t.j] = vec3::sub(forces[t.j], fvec);
        }

        if let Some(x_idx) = structure.adsorbate_index() {
            self.adsorbate_terms(
                structure,
                &list,
                x_idx,
                &rho,
                &mut per_atom,
                &mut total,
                &mut forces,
            )?;
        }

        if !total.is_finite() {
            return Err(CoreError::NumericalFailure(
                "non-finite total energy".into(),
            ));
        }
        Ok(EnergyReport {
            total,
            per_atom,
            forces,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn adsorbate_terms(
        &self,
        structure: &Structure,
        list: &CellList,
        x_idx: usize,
        rho: &[f64],
        per_atom: &mut [f64],
        total: &mut f64,
        forces: &mut [Vec3],
    ) -> Result<()> {
        let positions = &structure.positions;
        let xpos = positions[x_idx];
        let ads = &self.adsorbate;

        // Nearest metal atom hosts the primary bond (first index wins ties).
        let mut site: Option<(usize, f64)> = None;
        for m in 0..structure.len() {
            if !structure.species[m].is_metal() {
                continue;
            }
            let d = vec3::dist(xpos, positions[m]);
            if site.map_or(true, |(_, best)| d < best) {
                site = Some((m, d));
            }
        }
        let Some((site_idx, r_site)) = site else {
            return Ok(()); // lone adsorbate: zero energy by construction
        };

        let site_el = structure.species[site_idx];
        let d0_site = *ads
            .d0
            .get(&site_el)
            .ok_or(CoreError::MissingParams(site_el))?;
        let rho_ref = *ads
            .rho_ref
            .get(&site_el)
            .ok_or(CoreError::MissingParams(site_el))?;
        let site_pp = *self.pair(site_el, site_el)?;
        let d_eff = d0_site * (1.0 + ads.kappa * (rho_ref - rho[site_idx]) / rho_ref);

        let (g, gp) = morse_shape(r_site, ads.a, ads.re, site_pp.cutoff, site_pp.taper_width);
        let e_primary = -d_eff * g;
        per_atom[x_idx] += 0.5 * e_primary;
        per_atom[site_idx] += 0.5 * e_primary;
        *total += e_primary;

        if g != 0.0 || gp != 0.0 {
            let u = vec3::scale(vec3::sub(xpos, positions[site_idx]), 1.0 / r_site);
            let radial = vec3::scale(u, d_eff * gp);
            forces[x_idx] = vec3::add(forces[x_idx], radial);
            forces[site_idx] = vec3::sub(forces[site_idx], radial);

            // Well-depth coupling to the site's host density: moving the
            // site's metal neighbors changes D_eff.
            let c_rho = d0_site * ads.kappa / rho_ref * g;
            if c_rho != 0.0 {
                for m in list.neighbors_of(positions, site_idx) {
                    if !structure.species[m].is_metal() {
                        continue;
                    }
                    let pp = self.pair(site_el, structure.species[m])?;
                    let r = vec3::dist(positions[site_idx], positions[m]);
                    if r > pp.cutoff {
                        continue;
                    }
                    let dphi = pair_phi_prime(pp, r);
                    if dphi == 0.0 {
                        continue;
                    }
                    let u_sm = vec3::scale(vec3::sub(positions[m], positions[site_idx]), 1.0 / r);
                    let fvec = vec3::scale(u_sm, c_rho * dphi);
                    forces[site_idx] = vec3::add(forces[site_idx], fvec);
                    forces[m] = vec3::sub(forces[m], fvec);
                }
            }
        }

        // Weaker Morse attraction to the other metals in range.
        if ads.secondary_scale > 0.0 {
            for m in list.neighbors_of(positions, x_idx) {
                if m == site_idx || !structure.species[m].is_metal() {
                    continue;
                }
                let el = structure.species[m];
                let d0_m = *ads.d0.get(&el).ok_or(CoreError::MissingParams(el))?;
                let pp = self.pair(el, el)?;
                let r = vec3::dist(xpos, positions[m]);
                if r > pp.cutoff {
                    continue;
                }
                let (g2, gp2) = morse_shape(r, ads.a, ads.re, pp.cutoff, pp.taper_width);
                if g2 == 0.0 && gp2 == 0.0 {
                    continue;
                }
                let scale = ads.secondary_scale * d0_m;
                let e2 = -scale * g2;
                per_atom[x_idx] += 0.5 * e2;
                per_atom[m] += 0.5 * e2;
                *total += e2;
                let u = vec3::scale(vec3::sub(xpos, positions[m]), 1.0 / r);
                let fvec = vec3::scale(u, scale * gp2);
                forces[x_idx] = vec3::add(forces[x_idx], fvec);
                forces[m] = vec3::sub(forces[m], fvec);
            }
        }
        Ok(())
    }
}
