//! Hydrodynamic/Dirac ratios of C3 for every built-in species, and ratios
//! between species.
//!
//! cargo run --release --example ratio_tables

use graphene_vdw::atoms::AtomCatalog;
use graphene_vdw::graphene::GrapheneModel;
use graphene_vdw::lifshitz::QuadratureConfig;
use graphene_vdw::sweep::{model_ratio_table, species_ratio, REFERENCE_SEPARATIONS};

fn main() -> graphene_vdw::error::Result<()> {
    let catalog = AtomCatalog::builtin();
    let quad = QuadratureConfig::default();

    print!("{:>5}", "atom");
    for a in REFERENCE_SEPARATIONS {
        print!("{:>9}", format!("{a} nm"));
    }
    println!();
    for atom in catalog.iter() {
        let t = model_ratio_table(atom, 0.1, &REFERENCE_SEPARATIONS, &quad)?;
        print!("{:>5}", atom.name);
        for r in &t.rows {
            print!("{:>9.3}", r.ratio);
        }
        println!();
    }

    let h = catalog.lookup("H")?;
    println!();
    for other in ["He*", "Na"] {
        for model in [GrapheneModel::dirac(0.1)?, GrapheneModel::hydrodynamic()] {
            let near = species_ratio(catalog.lookup(other)?, h, &model, 3.0, &quad)?;
            let far = species_ratio(catalog.lookup(other)?, h, &model, 100.0, &quad)?;
            println!("{other}/H {model}: {near:.2} at 3 nm, {far:.2} at 100 nm");
        }
    }
    Ok(())
}
