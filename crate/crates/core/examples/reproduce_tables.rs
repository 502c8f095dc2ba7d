//! Recomputes every published table, writes the outputs to a directory and
//! prints the PASS/FAIL summary.
//!
//! cargo run --release --example reproduce_tables [out_dir]

use std::path::PathBuf;

use graphene_vdw::atoms::AtomCatalog;
use graphene_vdw::lifshitz::QuadratureConfig;
use graphene_vdw::reproduce::{reproduce, summary_text};

fn main() -> graphene_vdw::error::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("graphene-vdw-reproduction"));
    let checks = reproduce(&dir, &AtomCatalog::builtin(), &QuadratureConfig::default())?;
    print!("{}", summary_text(&checks));
    println!("outputs in {}", dir.display());
    Ok(())
}
