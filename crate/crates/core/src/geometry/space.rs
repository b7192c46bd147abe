//! Exact chemical-space counting.

use crate::error::{CoreError, Result};
use crate::geometry::Composition;
use num_bigint::BigUint;

/// A count too large for machine integers: exact big integer plus its
/// decimal logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSize {
    pub log10_value: f64,
    pub exact_value: Option<BigUint>,
}

impl SpaceSize {
    pub fn from_exact(value: BigUint) -> Self {
        Self {
            log10_value: log10_biguint(&value),
            exact_value: Some(value),
        }
    }
}

/// log10 of an arbitrary-precision integer via the leading 53 bits plus the
/// binary exponent; accurate to ~1e-15 relative, well inside the 1e-9
/// consistency bound between `exact_value` and `log10_value`.
fn log10_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return (v.to_u64_digits()[0] as f64).log10();
    }
    let shift = bits - 53;
    let top = v >> shift;
    (top.to_u64_digits()[0] as f64).log10() + shift as f64 * std::f64::consts::LOG10_2
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut result = BigUint::from(1u32);
    for i in 1..=k {
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

/// Number of ways to choose the element set: C(n_candidates, n_chosen),
/// exact.
pub fn element_combinations(n_candidates: u64, n_chosen: u64) -> Result<SpaceSize> {
    if n_chosen > n_candidates {
        return Err(CoreError::InvalidArgument(format!(
            "cannot choose {n_chosen} elements from {n_candidates} candidates"
        )));
    }
    Ok(SpaceSize::from_exact(binomial(n_candidates, n_chosen)))
}

/// Number of distinct (arrangement, ontop site) pairs for a fixed
/// composition: the multinomial coefficient of the element counts times the
/// per-particle site count.
pub fn site_configurations(n_sites: u64, composition: &Composition) -> SpaceSize {
    let mut value = BigUint::from(1u32);
    let mut placed: u64 = 0;
    for &count in composition.counts().values() {
        placed += count as u64;
        value *= binomial(placed, count as u64);
    }
    value *= BigUint::from(n_sites);
    SpaceSize::from_exact(value)
}

/// Both counts at once, mirroring the CLI `space` report.
#[derive(Debug, Clone)]
pub struct ChemicalSpace {
    pub combinations: SpaceSize,
    pub site_configurations: SpaceSize,
}

pub fn chemical_space_size(
    n_sites: u64,
    composition: &Composition,
    n_candidates: u64,
    n_chosen: u64,
) -> Result<ChemicalSpace> {
    Ok(ChemicalSpace {
        combinations: element_combinations(n_candidates, n_chosen)?,
        site_configurations: site_configurations(n_sites, composition),
    })
}
