//! Dependence of the Dirac-model C3 on the gap parameter, with the spread
//! between its extremes and the edge of the small-gap plateau.
//!
//! cargo run --release --example gap_sensitivity [atom]

use graphene_vdw::atoms::AtomCatalog;
use graphene_vdw::lifshitz::QuadratureConfig;
use graphene_vdw::sweep::{default_gap_grid, sweep_gap};

fn main() -> graphene_vdw::error::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "H".into());
    let catalog = AtomCatalog::builtin();
    let atom = catalog.lookup(&name)?;
    let quad = QuadratureConfig::default();

    for a in [5.0, 50.0, 100.0] {
        let s = sweep_gap(atom, a, &default_gap_grid(), &quad)?;
        println!("{name}, a = {a} nm");
        for p in s.points.iter().filter(|p| p.delta >= 1e-5) {
            println!("  delta = {:9.3e} eV  C3 = {:.6e} a.u.", p.delta, p.c3);
        }
        println!("  spread = {:.2}%", 100.0 * s.spread);
        match s.plateau_delta {
            Some(d) => println!("  C3 changes < 1% per decade for delta <= {d:.3e} eV"),
            None => println!("  no plateau on this grid"),
        }
    }
    Ok(())
}
