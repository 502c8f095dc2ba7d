//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use graphene_vdw::atoms::{AtomCatalog, AtomSpec};
use graphene_vdw::graphene::{kinematics_from_y, GrapheneModel, DEFAULT_FERMI_VELOCITY};
use graphene_vdw::units::{C, C3_AU_EV_NM3, HBAR_C};

pub fn atom(name: &str) -> AtomSpec {
    AtomCatalog::builtin().lookup(name).unwrap().clone()
}

/// Tensor-product trapezoid rule for C3 (a.u.) at T = 0 on an `n × n` grid
/// over y ∈ [0, 60], t ∈ [0, 1].
pub fn trapezoid_c3(atom: &AtomSpec, model: &GrapheneModel, a: f64, n: usize) -> f64 {
    let osc = atom.oscillator();
    let y_max = 60.0;
    let hy = y_max / n as f64;
    let ht = 1.0 / n as f64;
    let end = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
    let mut outer = 0.0;
    for i in 1..=n {
        let y = i as f64 * hy;
        let xi_max = C * (y / (2.0 * a));
        let mut inner = 0.0;
        for j in 0..=n {
            let t = j as f64 * ht;
            let xi = xi_max * t;
            let kin = kinematics_from_y(y, xi, a, DEFAULT_FERMI_VELOCITY).unwrap();
            let r = model.reflection(&kin);
            inner += end(j) * osc.at(xi) * (2.0 * r.r_tm - t * t * (r.r_tm + r.r_te));
        }
        outer += end(i) * (-y).exp() * y * y * y * inner * ht;
    }
    HBAR_C / (32.0 * PI * a) * outer * hy / C3_AU_EV_NM3
}

/// Trapezoid on `n` and `n/2` grids combined by one Richardson step.
pub fn oracle_c3(atom: &AtomSpec, model: &GrapheneModel, a: f64, n: usize) -> f64 {
    let fine = trapezoid_c3(atom, model, a, n);
    let coarse = trapezoid_c3(atom, model, a, n / 2);
    (4.0 * fine - coarse) / 3.0
}

/// Spot separations (nm) for the oracle comparison.
pub const ORACLE_SEPARATIONS: [f64; 5] = [3.0, 7.0, 20.0, 60.0, 150.0];
