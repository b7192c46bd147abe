//! Chemical species handled by the screening pipeline.

use crate::error::CoreError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The five fcc metals of the quinary alloy plus the adsorbate pseudo-atom.
///
/// Variant order is alphabetical, so the derived `Ord` matches sorted label
/// order everywhere a deterministic element ordering is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Ir,
    Pd,
    Pt,
    Rh,
    Ru,
    /// Adsorbate pseudo-element ("X"): a single point particle standing in
    /// for the adsorbed molecule.
    X,
}

impl Element {
    pub const METALS: [Element; 5] = [
        Element::Ir,
        Element::Pd,
        Element::Pt,
        Element::Rh,
        Element::Ru,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Element::Ir => "Ir",
            Element::Pd => "Pd",
            Element::Pt => "Pt",
            Element::Rh => "Rh",
            Element::Ru => "Ru",
            Element::X => "X",
        }
    }

    pub fn is_metal(self) -> bool {
        self != Element::X
    }

    /// Dense index used for pair-parameter lookup tables.
    pub const fn index(self) -> usize {
        match self {
            Element::Ir => 0,
            Element::Pd => 1,
            Element::Pt => 2,
            Element::Rh => 3,
            Element::Ru => 4,
            Element::X => 5,
        }
    }

    pub const COUNT: usize = 6;
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Element {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Ir" => Ok(Element::Ir),
            "Pd" => Ok(Element::Pd),
            "Pt" => Ok(Element::Pt),
            "Rh" => Ok(Element::Rh),
            "Ru" => Ok(Element::Ru),
            "X" => Ok(Element::X),
            other => Err(CoreError::InvalidArgument(format!(
                "unknown element label '{other}' (expected Ir, Pd, Pt, Rh, Ru, or X)"
            ))),
        }
    }
}
