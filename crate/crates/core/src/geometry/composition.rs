//! Near-uniform random alloy compositions.

use crate::element::Element;
use crate::error::{CoreError, Result};
use crate::structure::Structure;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Element counts of an alloy nanoparticle.
///
/// Counts are near-uniform by construction: the largest and smallest
/// per-element counts differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Composition {
    counts: BTreeMap<Element, usize>,
}

impl Composition {
    /// Splits `total` atoms as evenly as possible over `elements`; the
    /// remainder goes one atom each to the first `total % k` elements in
    /// sorted label order.
    pub fn near_uniform(total: usize, elements: &[Element]) -> Result<Self> {
        let elements = validated_elements(elements, total)?;
        let k = elements.len();
        let base = total / k;
        let extra = total % k;
        let mut counts = BTreeMap::new();
        for (rank, el) in elements.iter().enumerate() {
            counts.insert(*el, base + usize::from(rank < extra));
        }
        Ok(Self { counts })
    }

    /// Explicit counts (e.g. to pin the remainder on a chosen element).
    /// Still must be near-uniform and free of zero entries.
    pub fn from_counts(counts: BTreeMap<Element, usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(CoreError::InvalidArgument(
                "composition must name at least one element".into(),
            ));
        }
        if counts.keys().any(|e| !e.is_metal()) {
            return Err(CoreError::InvalidArgument(
                "composition may only contain metal elements".into(),
            ));
        }
        if counts.values().any(|&c| c == 0) {
            return Err(CoreError::InvalidArgument(
                "composition counts must be positive".into(),
            ));
        }
        let max = *counts.values().max().unwrap();
        let min = *counts.values().min().unwrap();
        if max - min > 1 {
            return Err(CoreError::InvalidArgument(format!(
                "composition is not near-uniform: max count {max} - min count {min} > 1"
            )));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &BTreeMap<Element, usize> {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn elements(&self) -> Vec<Element> {
        self.counts.keys().copied().collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(e, c)| format!("{e}:{c}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

fn validated_elements(elements: &[Element], total: usize) -> Result<Vec<Element>> {
    if elements.is_empty() {
        return Err(CoreError::InvalidArgument(
            "element list must not be empty".into(),
        ));
    }
    if elements.iter().any(|e| !e.is_metal()) {
        return Err(CoreError::InvalidArgument(
            "composition elements must be metals".into(),
        ));
    }
    let mut sorted = elements.to_vec();
    sorted.sort();
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() != before {
        return Err(CoreError::InvalidArgument(
            "element list contains duplicates".into(),
        ));
    }
    if sorted.len() > total {
        return Err(CoreError::InvalidArgument(format!(
            "{} elements cannot share {} atoms",
            sorted.len(),
            total
        )));
    }
    Ok(sorted)
}

/// Assigns a random near-uniform composition to every atom of `structure`.
///
/// The label multiset is fixed by [`Composition::near_uniform`]; its
/// permutation over atom indices is a seeded Fisher–Yates shuffle, so equal
/// seeds reproduce bit-identical species lists.
pub fn assign_composition(
    structure: &Structure,
    elements: &[Element],
    seed: u64,
) -> Result<Structure> {
    let composition = Composition::near_uniform(structure.len(), elements)?;
    assign_composition_with_counts(structure, &composition, seed)
}

/// Same as [`assign_composition`] but with explicit counts.
pub fn assign_composition_with_counts(
    structure: &Structure,
    composition: &Composition,
    seed: u64,
) -> Result<Structure> {
    if structure.adsorbate_index().is_some() {
        return Err(CoreError::InvalidArgument(
            "cannot assign composition to a structure carrying an adsorbate".into(),
        ));
    }
    if composition.total() != structure.len() {
        return Err(CoreError::InvalidArgument(format!(
            "composition totals {} atoms but structure has {}",
            composition.total(),
            structure.len()
        )));
    }
    let mut labels: Vec<Element> = Vec::with_capacity(structure.len());
    for (el, count) in composition.counts() {
        labels.extend(std::iter::repeat(*el).take(*count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Fisher–Yates
    for i in (1..labels.len()).rev() {
        let j = rng.gen_range(0..=i);
        labels.swap(i, j);
    }
    Structure::new(
        labels,
        structure.positions.clone(),
        structure.frozen.clone(),
        format!(
            "{} seed={} composition={}",
            structure.provenance, seed, composition
        ),
    )
}
