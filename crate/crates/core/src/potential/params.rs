//! Potential parameter sets and their JSON schema.

use crate::element::Element;
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Second-moment pair parameters (same-element block or explicit pair
/// override). Units: eV and Å.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetalPairParams {
    /// Repulsive prefactor (eV).
    pub a: f64,
    /// Hopping integral (eV).
    pub xi: f64,
    /// Repulsive decay (dimensionless).
    pub p: f64,
    /// Attractive decay (dimensionless).
    pub q: f64,
    /// Reference first-neighbor distance (Å).
    pub r0: f64,
    /// Interaction cutoff (Å).
    pub cutoff: f64,
    /// Width of the cosine taper ending at the cutoff (Å).
    pub taper_width: f64,
}

impl MetalPairParams {
    pub fn validate(&self, label: &str) -> Result<()> {
        let fields = [
            ("a", self.a),
            ("xi", self.xi),
            ("p", self.p),
            ("q", self.q),
            ("r0", self.r0),
            ("cutoff", self.cutoff),
            ("taper_width", self.taper_width),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(CoreError::InvalidArgument(format!(
                    "{label}: field {name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.cutoff <= self.r0 {
            return Err(CoreError::InvalidArgument(format!(
                "{label}: cutoff {} must exceed r0 {}",
                self.cutoff, self.r0
            )));
        }
        if self.taper_width >= self.cutoff {
            return Err(CoreError::InvalidArgument(format!(
                "{label}: taper width {} must be smaller than the cutoff {}",
                self.taper_width, self.cutoff
            )));
        }
        Ok(())
    }

    /// Mixing rule for unlike pairs: geometric mean for the energy scales
    /// (a, xi), arithmetic mean for decays, reference distance, and cutoff.
    pub fn mixed(a: &MetalPairParams, b: &MetalPairParams) -> MetalPairParams {
        MetalPairParams {
            a: (a.a * b.a).sqrt(),
            xi: (a.xi * b.xi).sqrt(),
            p: 0.5 * (a.p + b.p),
            q: 0.5 * (a.q + b.q),
            r0: 0.5 * (a.r0 + b.r0),
            cutoff: 0.5 * (a.cutoff + b.cutoff),
            taper_width: 0.5 * (a.taper_width + b.taper_width),
        }
    }
}

/// Adsorbate (pseudo-atom X) parameters. The internal-mode stand-ins
/// `internal_k`/`internal_r0` are kept for the file format but contribute
/// nothing for a point adsorbate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdsorbateParams {
    /// Base Morse well depth per host element (eV).
    pub d0: BTreeMap<Element, f64>,
    /// Morse width (1/Å).
    pub a: f64,
    /// Equilibrium bond length (Å).
    pub re: f64,
    /// Coordination-sensitivity gain of the well depth (dimensionless, >= 0).
    pub kappa: f64,
    /// Reference host density per element: the SMA density of a (111) facet
    /// atom of the ideal monometallic 201-atom truncated octahedron.
    pub rho_ref: BTreeMap<Element, f64>,
    /// Relative strength of the Morse attraction to non-site metals, in [0, 1].
    pub secondary_scale: f64,
    /// Internal-mode force constant (eV/Å²); fixed zero contribution.
    pub internal_k: f64,
    /// Internal-mode reference length (Å).
    pub internal_r0: f64,
}

impl AdsorbateParams {
    pub fn validate(&self) -> Result<()> {
        for (el, &d) in &self.d0 {
            if !d.is_finite() || d <= 0.0 {
                return Err(CoreError::InvalidArgument(format!(
                    "adsorbate d0[{el}] must be positive, got {d}"
                )));
            }
        }
        for (el, &r) in &self.rho_ref {
            if !r.is_finite() || r <= 0.0 {
                return Err(CoreError::InvalidArgument(format!(
                    "adsorbate rho_ref[{el}] must be positive, got {r}"
                )));
            }
        }
        if self.kappa < 0.0 || !self.kappa.is_finite() {
            return Err(CoreError::InvalidArgument(format!(
                "adsorbate kappa must be >= 0, got {}",
                self.kappa
            )));
        }
        if !(0.0..=1.0).contains(&self.secondary_scale) {
            return Err(CoreError::InvalidArgument(format!(
                "adsorbate secondary_scale must lie in [0, 1], got {}",
                self.secondary_scale
            )));
        }
        if self.a <= 0.0 || self.re <= 0.0 {
            return Err(CoreError::InvalidArgument(
                "adsorbate a and re must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Full parameter file: per-element blocks, optional pair overrides
/// (keys like "Ir-Pt"), and the adsorbate block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    pub elements: BTreeMap<Element, MetalPairParams>,
    #[serde(default)]
    pub pair_overrides: BTreeMap<String, MetalPairParams>,
    pub adsorbate: AdsorbateParams,
}

impl PotentialParams {
    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(CoreError::InvalidArgument(
                "parameter file must define at least one element".into(),
            ));
        }
        for (el, p) in &self.elements {
            if !el.is_metal() {
                return Err(CoreError::InvalidArgument(
                    "the adsorbate has no metal parameter block".into(),
                ));
            }
            p.validate(el.symbol())?;
        }
        for key in self.pair_overrides.keys() {
            let (a, b) = parse_pair_key(key)?;
            for el in [a, b] {
                if !self.elements.contains_key(&el) {
                    return Err(CoreError::MissingParams(el));
                }
            }
            self.pair_overrides[key].validate(key)?;
        }
        self.adsorbate.validate()?;
        // The adsorbate tables must cover every parameterized metal.
        for el in self.elements.keys() {
            if !self.adsorbate.d0.contains_key(el) {
                return Err(CoreError::InvalidArgument(format!(
                    "adsorbate d0 table misses element {el}"
                )));
            }
            if !self.adsorbate.rho_ref.contains_key(el) {
                return Err(CoreError::InvalidArgument(format!(
                    "adsorbate rho_ref table misses element {el}"
                )));
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CoreError::ModelIo(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let params: PotentialParams =
            serde_json::from_str(&text).map_err(|e| CoreError::ModelIo(e.to_string()))?;
        params.validate()?;
        Ok(params)
    }
}

/// Parses "El1-El2" pair-override keys; element order in the key is free.
pub fn parse_pair_key(key: &str) -> Result<(Element, Element)> {
    let mut parts = key.split('-');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(CoreError::InvalidArgument(format!(
            "pair key '{key}' must have the form 'El1-El2'"
        )));
    };
    Ok((Element::from_str(a)?, Element::from_str(b)?))
}
