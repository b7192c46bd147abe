//! `bulkref`: scan the equilibrium lattice constant and bulk per-atom energy
//! of every configured element.

use crate::config::ResolvedConfig;
use crate::errors::CliError;
use crate::pipeline::Pipeline;
use npscreen_core::descriptors::BulkReference;

pub fn run_bulkref(cfg: &ResolvedConfig) -> Result<BulkReference, CliError> {
    cfg.ensure_out_dir()?;
    cfg.guard_overwrite(&cfg.bulkref_path)?;
    let bulkref = Pipeline::scan_bulk_reference(cfg)?;
    bulkref.save(&cfg.bulkref_path)?;
    for (el, entry) in bulkref.entries() {
        println!(
            "{el}: lattice constant {:.5} Å, bulk atom energy {:.5} eV",
            entry.lattice_constant, entry.e_atom_bulk
        );
    }
    println!("wrote {:?}", cfg.bulkref_path);
    Ok(bulkref)
}
