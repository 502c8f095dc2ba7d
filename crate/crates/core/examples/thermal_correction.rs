//! Zero-temperature C3 against the Matsubara sum at room temperature for
//! metastable helium at 500 nm.
//!
//! cargo run --release --example thermal_correction [a_nm] [T_K]

use graphene_vdw::atoms::AtomCatalog;
use graphene_vdw::graphene::GrapheneModel;
use graphene_vdw::lifshitz::{c3, LifshitzRequest};

fn main() -> graphene_vdw::error::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("numeric argument"));
    let a = args.next().unwrap_or(500.0);
    let t = args.next().unwrap_or(300.0);
    let atom = AtomCatalog::builtin().lookup("He*")?.clone();

    let req = LifshitzRequest::new(atom, GrapheneModel::dirac(0.1)?, a);
    let zero = c3(&req)?;
    let warm = c3(&req.clone().at_temperature(t))?;
    println!("a = {a} nm");
    println!("T = 0      C3 = {:.7} a.u.", zero.c3);
    println!("T = {t} K  C3 = {:.7} a.u.  ({} Matsubara terms)", warm.c3, warm.matsubara_terms.unwrap_or(0));
    println!("relative difference = {:.4}%", 100.0 * (warm.c3 - zero.c3) / zero.c3);
    Ok(())
}
