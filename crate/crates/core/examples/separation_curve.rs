//! C3(a) of hydrogen for the hydrodynamic model and the Dirac model at both
//! gap bounds, written as CSV to stdout.
//!
//! cargo run --release --example separation_curve [atom]

use std::io;

use graphene_vdw::atoms::AtomCatalog;
use graphene_vdw::graphene::GrapheneModel;
use graphene_vdw::lifshitz::QuadratureConfig;
use graphene_vdw::report::{write_curve_csv, Provenance};
use graphene_vdw::sweep::{log_grid, sweep_separation};

fn main() -> graphene_vdw::error::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "H".into());
    let catalog = AtomCatalog::builtin();
    let atom = catalog.lookup(&name)?;
    let quad = QuadratureConfig::default();
    let grid = log_grid(3.0, 100.0, 12);

    let mut out = io::stdout().lock();
    for model in [
        GrapheneModel::hydrodynamic(),
        GrapheneModel::dirac(0.1)?,
        GrapheneModel::dirac(1e-15)?,
    ] {
        let curve = sweep_separation(atom, &model, &grid, 0.0, &quad)?;
        write_curve_csv(&mut out, &curve, &Provenance::for_curve(&curve, quad))?;
        println!();
    }
    Ok(())
}
