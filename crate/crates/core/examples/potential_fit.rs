//! Fit of E = -C4/(a^3 (a + l)) to Lifshitz energies of He* for both models,
//! with the residual profile.
//!
//! cargo run --release --example potential_fit [atom]

use graphene_vdw::atoms::AtomCatalog;
use graphene_vdw::fit::{default_fit_grid, fit, FIT_GRID_POINTS};
use graphene_vdw::graphene::GrapheneModel;
use graphene_vdw::lifshitz::QuadratureConfig;
use graphene_vdw::sweep::sweep_separation;

fn main() -> graphene_vdw::error::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "He*".into());
    let catalog = AtomCatalog::builtin();
    let atom = catalog.lookup(&name)?;
    let quad = QuadratureConfig::default();
    let grid = default_fit_grid(FIT_GRID_POINTS);

    for model in [
        GrapheneModel::hydrodynamic(),
        GrapheneModel::dirac(0.1)?,
        GrapheneModel::dirac(1e-15)?,
    ] {
        let curve = sweep_separation(atom, &model, &grid, 0.0, &quad)?;
        let r = fit(&curve)?;
        println!("{name}, {model}");
        println!("  C4 = {:.3} a.u.   l = {:.3} nm", r.potential.c4, r.potential.l);
        println!("  max deviation {:.2}% at {:.1} nm", r.max_rel_deviation, r.max_deviation_at);
        for (a, res) in r.grid.iter().zip(&r.residuals).step_by(7) {
            println!("    a = {a:7.2} nm  |E_ph/E - 1| = {:.3}%", 100.0 * res);
        }
    }
    Ok(())
}
