//! TM and TE reflection coefficients of both graphene models along k⊥ at a
//! fixed imaginary frequency, and the Dirac polarization function.
//!
//! cargo run --example reflection_coefficients [xi_rad_per_s]

use graphene_vdw::graphene::{phi, DiracParams, GrapheneModel, Kinematics, DEFAULT_FERMI_VELOCITY};

fn main() -> graphene_vdw::error::Result<()> {
    let xi: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("xi must be a number"))
        .unwrap_or(1e15);
    let hydro = GrapheneModel::hydrodynamic();
    let dirac = GrapheneModel::dirac(0.1)?;
    let massless = GrapheneModel::dirac(0.0)?;

    println!("xi = {xi:e} rad/s");
    println!("{:>10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}", "k_perp", "hyd TM", "hyd TE", "D0.1 TM", "D0.1 TE", "D0 TM", "D0 TE");
    for k in [1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0] {
        let kin = Kinematics::new(xi, k, DEFAULT_FERMI_VELOCITY)?;
        let h = hydro.reflection(&kin);
        let d = dirac.reflection(&kin);
        let m = massless.reflection(&kin);
        println!(
            "{k:>10.0e} {:>12.6} {:>12.3e} {:>12.6} {:>12.3e} {:>12.6} {:>12.3e}",
            h.r_tm, h.r_te, d.r_tm, d.r_te, m.r_tm, m.r_te
        );
    }

    let p = DiracParams::new(0.1)?;
    let dt = p.delta_tilde();
    println!("\nPhi(q~) for delta = 0.1 eV (2*delta~ = {:.4e} nm^-1)", 2.0 * dt);
    for x in [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0] {
        let qt = 2.0 * dt * x;
        println!("q~ = {qt:.4e}  Phi = {:.6e}  Phi/(pi q~) = {:.6}", phi(qt, &p)?, phi(qt, &p)? / (std::f64::consts::PI * qt));
    }
    Ok(())
}
