// Adding species from `name, alpha0_au, omega0_eV` records and evaluating
// them alongside the built-ins.
//
// cargo run --example custom_atom

use graphene_vdw::atoms::AtomCatalog;
use graphene_vdw::graphene::GrapheneModel;
use graphene_vdw::lifshitz::{c3, LifshitzRequest};

const RECORDS: &str = "\
# single-oscillator parameters
Rb, 319.0, 1.58
Cs, 400.9, 1.45
";

fn main() -> graphene_vdw::error::Result<()> {
    let mut catalog = AtomCatalog::builtin();
    for spec in AtomCatalog::parse_records(RECORDS)? {
        catalog.insert(spec)?;
    }
    let model = GrapheneModel::dirac(0.1)?;
    for atom in catalog.iter() {
        let r = c3(&LifshitzRequest::new(atom.clone(), model, 10.0))?;
        println!("{:>4}  C3(10 nm) = {:.5} a.u.  E = {:.4e} eV", atom.name, r.c3, r.energy);
    }
    Ok(())
}
