//! Lifshitz-theory van der Waals coefficient C3(a) of an atom above graphene.
//!
//! At zero temperature, with y = 2qa and ξ = (cy/2a)·t,
//!
//! ```text
//! C3(a) = ħc/(32πa) ∫₀^∞ dy e^{-y} y³ ∫₀¹ dt α(iξ) [2 r_TM − t² (r_TM + r_TE)]
//! ```
//!
//! and E(a) = −C3(a)/a³. At temperature T the frequency integral becomes a
//! Matsubara sum over ξ_l = 2πk_BTl/ħ (l = 0 weighted ½):
//!
//! ```text
//! C3(a,T) = (k_BT/8) Σ'_l α(iξ_l) ∫_{y_l}^∞ dy y² e^{-y} [2 r_TM − (y_l/y)² (r_TM + r_TE)]
//! ```
//!
//! with y_l = 2aξ_l/c.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::atoms::{AtomSpec, Oscillator};
use crate::error::{Error, Result};
use crate::graphene::{GrapheneModel, Kinematics};
use crate::quadrature::{integrate, Tolerance};
use crate::units::{matsubara_frequency, C, C3_AU_EV_NM3, HBAR_C, KB};

/// Smallest separation (nm) at which boundary conditions describe graphene.
pub const MIN_VALID_SEPARATION: f64 = 3.0;
/// Largest separation (nm) at which the T = 0 formula is accurate at room temperature.
pub const MAX_VALID_SEPARATION: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Target relative error of C3.
    pub rel_tol: f64,
    /// Truncation point of the outer y integral.
    pub y_max: f64,
    /// Subdivision budget per one-dimensional integral.
    pub max_subdivisions: usize,
    /// A Matsubara term is negligible below this fraction of the running sum.
    pub matsubara_term_rel_cutoff: f64,
    /// Hard cap on the number of Matsubara terms.
    pub max_matsubara_terms: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            y_max: 60.0,
            max_subdivisions: 2000,
            matsubara_term_rel_cutoff: 1e-10,
            max_matsubara_terms: 20_000_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Validation(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if !(self.y_max > 10.0 && self.y_max.is_finite()) {
            return Err(Error::Validation(format!(
                "y_max must exceed 10, got {}",
                self.y_max
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Validation("max_subdivisions must be positive".into()));
        }
        if !(self.matsubara_term_rel_cutoff > 0.0) {
            return Err(Error::Validation(
                "matsubara_term_rel_cutoff must be positive".into(),
            ));
        }
        Ok(())
    }

    fn outer_tol(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: 0.0,
            max_intervals: self.max_subdivisions,
        }
    }

    fn inner_tol(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol * 0.1,
            abs: 0.0,
            max_intervals: self.max_subdivisions,
        }
    }
}

/// Conditions attached to a result that did not stop the computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Warning {
    /// a < 3 nm: the atomic structure of the sheet is no longer negligible.
    OutsideValidity,
    /// a > 1000 nm: thermal corrections to the T = 0 result become significant.
    BeyondThermalValidity,
    /// The Matsubara sum hit `max_matsubara_terms` before the cutoff was met.
    MatsubaraTruncated { terms: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifshitzRequest {
    pub atom: AtomSpec,
    pub model: GrapheneModel,
    /// nm
    pub separation: f64,
    /// K; zero selects the T = 0 formula.
    pub temperature: f64,
    pub quadrature: QuadratureConfig,
}

impl LifshitzRequest {
    /// T = 0 request with default quadrature settings.
    pub fn new(atom: AtomSpec, model: GrapheneModel, separation: f64) -> Self {
        LifshitzRequest {
            atom,
            model,
            separation,
            temperature: 0.0,
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn at_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureConfig) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(Error::Validation(format!(
                "separation must be positive, got {} nm",
                self.separation
            )));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::Validation(format!(
                "temperature must be non-negative, got {} K",
                self.temperature
            )));
        }
        AtomSpec::new(self.atom.name.clone(), self.atom.alpha0, self.atom.omega0)?;
        self.model.validate()?;
        self.quadrature.validate()
    }

    fn warnings(&self) -> Vec<Warning> {
        let mut w = Vec::new();
        if self.separation < MIN_VALID_SEPARATION {
            w.push(Warning::OutsideValidity);
        }
        if self.separation > MAX_VALID_SEPARATION {
            w.push(Warning::BeyondThermalValidity);
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C3Result {
    /// a.u.
    pub c3: f64,
    /// eV
    pub energy: f64,
    pub est_rel_error: f64,
    pub converged: bool,
    pub warnings: Vec<Warning>,
    pub atom: String,
    pub model: GrapheneModel,
    /// nm
    pub separation: f64,
    /// K
    pub temperature: f64,
    /// Number of Matsubara terms summed (thermal evaluations only).
    pub matsubara_terms: Option<usize>,
}

/// E(a) = −C3/a³ in eV, for C3 in a.u. and a in nm.
pub fn energy(c3_au: f64, a: f64) -> f64 {
    -c3_au * C3_AU_EV_NM3 / (a * a * a)
}

/// Accumulates convergence state across nested integrals.
#[derive(Default)]
struct Tally {
    inner_failures: usize,
}

/// [2 r_TM − t²(r_TM + r_TE)] at wave number `q` and ξ = c q t.
#[inline]
fn bracket(model: &GrapheneModel, beta: f64, q: f64, t: f64) -> f64 {
    let kin = Kinematics::from_fraction(q, t, beta);
    let r = model.reflection(&kin);
    2.0 * r.r_tm - t * t * (r.r_tm + r.r_te)
}

/// Breakpoints for the inner t integral: the polarizability falls off around
/// t* = ω₀/(cq).
fn inner_points(omega0: f64, q: f64) -> Vec<f64> {
    let t_star = omega0 / (C * q);
    let mut pts = vec![0.0];
    for m in [1.0, 8.0] {
        let t = m * t_star;
        if t < 0.5 {
            pts.push(t);
        }
    }
    pts.push(1.0);
    pts
}

fn outer_points(y_max: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = [0.0, 0.5, 2.0, 5.0, 12.0, 25.0, 40.0]
        .into_iter()
        .filter(|&p| p < y_max)
        .collect();
    pts.push(y_max);
    pts
}

/// ∫₀¹ dt α(i c q t) [2 r_TM − t²(r_TM + r_TE)] at q = y/(2a).
fn inner_integral(
    osc: &Oscillator,
    model: &GrapheneModel,
    beta: f64,
    q: f64,
    tol: Tolerance,
    tally: &mut Tally,
) -> f64 {
    let r = integrate(
        |t| osc.at(C * q * t) * bracket(model, beta, q, t),
        &inner_points(osc.omega0, q),
        tol,
    );
    if !r.converged {
        tally.inner_failures += 1;
    }
    r.value
}

fn ensure_converged(res: C3Result) -> Result<C3Result> {
    if res.converged {
        Ok(res)
    } else {
        Err(Error::NonConvergence {
            best: res.c3,
            achieved_rel: res.est_rel_error,
        })
    }
}

/// C3 at zero temperature, or [`Error::NonConvergence`] carrying the best estimate.
pub fn c3_zero_temperature(req: &LifshitzRequest) -> Result<C3Result> {
    ensure_converged(zero_temperature_flagged(req)?)
}

/// C3 from the Matsubara sum at `req.temperature > 0`.
pub fn c3_thermal(req: &LifshitzRequest) -> Result<C3Result> {
    ensure_converged(thermal_flagged(req)?)
}

/// Dispatches on the request temperature.
pub fn c3(req: &LifshitzRequest) -> Result<C3Result> {
    ensure_converged(c3_flagged(req)?)
}

/// Like [`c3`] but returns non-converged results with `converged == false`
/// instead of an error.
pub fn c3_flagged(req: &LifshitzRequest) -> Result<C3Result> {
    if req.temperature > 0.0 {
        thermal_flagged(req)
    } else {
        zero_temperature_flagged(req)
    }
}

fn zero_temperature_flagged(req: &LifshitzRequest) -> Result<C3Result> {
    req.validate()?;
    if req.temperature != 0.0 {
        return Err(Error::Validation(format!(
            "zero-temperature evaluation requested at T = {} K",
            req.temperature
        )));
    }
    let a = req.separation;
    let osc = req.atom.oscillator();
    let model = req.model;
    let beta = model.beta();
    let cfg = req.quadrature;
    let inner_tol = cfg.inner_tol();
    let mut tally = Tally::default();

    let outer = integrate(
        |y| {
            if y == 0.0 {
                return 0.0;
            }
            let q = y / (2.0 * a);
            (-y).exp() * y * y * y * inner_integral(&osc, &model, beta, q, inner_tol, &mut tally)
        },
        &outer_points(cfg.y_max),
        cfg.outer_tol(),
    );

    let prefactor = HBAR_C / (32.0 * PI * a);
    let c3_ev = prefactor * outer.value;
    let c3 = c3_ev / C3_AU_EV_NM3;
    Ok(C3Result {
        c3,
        energy: energy(c3, a),
        est_rel_error: outer.rel_err(),
        converged: outer.converged && tally.inner_failures == 0,
        warnings: req.warnings(),
        atom: req.atom.name.clone(),
        model,
        separation: a,
        temperature: 0.0,
        matsubara_terms: None,
    })
}

fn thermal_flagged(req: &LifshitzRequest) -> Result<C3Result> {
    req.validate()?;
    let temperature = req.temperature;
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "thermal evaluation needs T > 0, got {temperature} K"
        )));
    }
    let a = req.separation;
    let osc = req.atom.oscillator();
    let model = req.model;
    let beta = model.beta();
    let cfg = req.quadrature;
    let tol = cfg.inner_tol();

    let mut sum = 0.0;
    let mut err = 0.0;
    let mut all_converged = true;
    let mut quiet_run = 0;
    let mut l: u64 = 0;
    let mut truncated = false;
    loop {
        let xi = matsubara_frequency(l, temperature)?;
        let y_l = 2.0 * a * xi / C;
        // y = y_l + u
        let r = integrate(
            |u| {
                let y = y_l + u;
                if y == 0.0 {
                    return 0.0;
                }
                let t = y_l / y;
                (-y).exp() * y * y * bracket(&model, beta, y / (2.0 * a), t)
            },
            &outer_points(cfg.y_max),
            tol,
        );
        all_converged &= r.converged;
        let weight = if l == 0 { 0.5 } else { 1.0 };
        let term = weight * osc.at(xi) * r.value;
        sum += term;
        err += weight * osc.at(xi) * r.abs_err;
        l += 1;

        if term.abs() < cfg.matsubara_term_rel_cutoff * sum.abs() {
            quiet_run += 1;
            if quiet_run >= 3 {
                break;
            }
        } else {
            quiet_run = 0;
        }
        if l as usize >= cfg.max_matsubara_terms {
            truncated = true;
            break;
        }
    }

    let prefactor = KB * temperature / 8.0;
    let c3 = prefactor * sum / C3_AU_EV_NM3;
    let mut warnings = req.warnings();
    if truncated {
        warnings.push(Warning::MatsubaraTruncated { terms: l as usize });
    }
    Ok(C3Result {
        c3,
        energy: energy(c3, a),
        est_rel_error: err / sum.abs(),
        converged: all_converged,
        warnings,
        atom: req.atom.name.clone(),
        model,
        separation: a,
        temperature,
        matsubara_terms: Some(l as usize),
    })
}
