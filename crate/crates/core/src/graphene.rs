//! TM/TE reflection coefficients of a graphene sheet along the imaginary
//! frequency axis.
//!
//! Two descriptions of the electronic structure are supported:
//!
//! * the hydrodynamic model, a charged two-dimensional fluid characterised
//!   by a single wave number `K`:
//!   `r_TM = c²qK / (c²qK + ξ²)`, `r_TE = −K / (K + q)`;
//! * the Dirac model, gapped or massless Dirac quasiparticles whose response
//!   enters through the polarization function Φ(q̃):
//!   `r_TM = αqΦ / (2q̃² + αqΦ)`, `r_TE = −αΦ / (2q + αΦ)`.
//!
//! Internal units: ξ in rad/s, wave numbers in nm⁻¹.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{C, FINE_STRUCTURE, HBAR_C, NM_PER_M};

/// Default sheet wave number (1/m).
pub const DEFAULT_SHEET_WAVE_NUMBER: f64 = 6.75e5;
/// Default Fermi velocity (m/s).
pub const DEFAULT_FERMI_VELOCITY: f64 = 1.0e6;
/// Default fermion multiplicity.
pub const DEFAULT_MULTIPLICITY: u32 = 4;
/// Upper bound on the gap parameter (eV).
pub const MAX_GAP: f64 = 0.1;
/// Smallest gap used in gap sweeps (eV).
pub const MIN_GAP: f64 = 1e-15;

/// Below this value of q̃/(2Δ̃) Φ is evaluated from its Taylor series.
pub const PHI_SERIES_THRESHOLD: f64 = 1e-2;

/// Speed of light in m/s.
const C_SI: f64 = C / NM_PER_M;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydrodynamicParams {
    /// Wave number of the graphene sheet (1/m).
    pub k: f64,
}

impl HydrodynamicParams {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Validation(format!(
                "sheet wave number must be positive, got {k}"
            )));
        }
        Ok(HydrodynamicParams { k })
    }

    /// K in nm⁻¹.
    #[inline]
    pub fn k_nm(&self) -> f64 {
        self.k / NM_PER_M
    }
}

impl Default for HydrodynamicParams {
    fn default() -> Self {
        HydrodynamicParams {
            k: DEFAULT_SHEET_WAVE_NUMBER,
        }
    }
}

/// How Φ enters the Dirac reflection coefficients.
///
/// `Double` multiplies the one-loop Φ by two before it is inserted into
/// `r_TM`/`r_TE`. The published reference tables for H, He* and Na near
/// graphene (C3 ratios, thermal check, potential fits) are reproduced with
/// this normalization. `Single` inserts Φ unchanged; its static limit is the
/// textbook `r_TM(0) = (πα c/2v_F) / (1 + πα c/2v_F)` for massless fermions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiNormalization {
    #[default]
    Double,
    Single,
}

impl PhiNormalization {
    #[inline]
    pub fn factor(self) -> f64 {
        match self {
            PhiNormalization::Double => 2.0,
            PhiNormalization::Single => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracParams {
    /// Gap parameter Δ (eV).
    pub delta: f64,
    /// Fermi velocity (m/s).
    pub v_f: f64,
    /// Number of fermion species.
    pub n: u32,
    #[serde(default)]
    pub normalization: PhiNormalization,
}

impl DiracParams {
    /// Graphene defaults with gap `delta`, which must lie in `[0, 0.1]` eV.
    pub fn new(delta: f64) -> Result<Self> {
        Self::with_gap_bounds(delta, 0.0, MAX_GAP)
    }

    /// Like [`DiracParams::new`] with caller-supplied gap bounds.
    pub fn with_gap_bounds(delta: f64, min: f64, max: f64) -> Result<Self> {
        let p = DiracParams {
            delta,
            v_f: DEFAULT_FERMI_VELOCITY,
            n: DEFAULT_MULTIPLICITY,
            normalization: PhiNormalization::default(),
        };
        p.validate(min, max)?;
        Ok(p)
    }

    pub fn validate(&self, min_gap: f64, max_gap: f64) -> Result<()> {
        if !(self.delta >= min_gap && self.delta <= max_gap) {
            return Err(Error::Validation(format!(
                "gap parameter {} eV outside [{min_gap}, {max_gap}] eV",
                self.delta
            )));
        }
        if !(self.v_f > 0.0 && self.v_f < C_SI) {
            return Err(Error::Validation(format!(
                "Fermi velocity must lie in (0, c), got {} m/s",
                self.v_f
            )));
        }
        if self.n == 0 {
            return Err(Error::Validation("fermion multiplicity must be >= 1".into()));
        }
        Ok(())
    }

    /// Δ̃ = Δ/ħc in nm⁻¹.
    #[inline]
    pub fn delta_tilde(&self) -> f64 {
        self.delta / HBAR_C
    }

    /// v_F / c.
    #[inline]
    pub fn beta(&self) -> f64 {
        self.v_f / C_SI
    }
}

impl Default for DiracParams {
    fn default() -> Self {
        DiracParams {
            delta: MAX_GAP,
            v_f: DEFAULT_FERMI_VELOCITY,
            n: DEFAULT_MULTIPLICITY,
            normalization: PhiNormalization::default(),
        }
    }
}

/// Reflection model of the graphene sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GrapheneModel {
    Hydrodynamic(HydrodynamicParams),
    Dirac(DiracParams),
}

impl GrapheneModel {
    pub fn hydrodynamic() -> Self {
        GrapheneModel::Hydrodynamic(HydrodynamicParams::default())
    }

    pub fn dirac(delta: f64) -> Result<Self> {
        DiracParams::new(delta).map(GrapheneModel::Dirac)
    }

    /// Gap parameter for the Dirac model.
    pub fn gap(&self) -> Option<f64> {
        match self {
            GrapheneModel::Dirac(p) => Some(p.delta),
            GrapheneModel::Hydrodynamic(_) => None,
        }
    }

    /// v_F/c used to build q̃; irrelevant for the hydrodynamic model.
    pub fn beta(&self) -> f64 {
        match self {
            GrapheneModel::Dirac(p) => p.beta(),
            GrapheneModel::Hydrodynamic(_) => DEFAULT_FERMI_VELOCITY / C_SI,
        }
    }

    /// Short label such as `hydrodynamic` or `dirac(delta=0.1 eV)`.
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GrapheneModel::Hydrodynamic(p) => HydrodynamicParams::new(p.k).map(|_| ()),
            GrapheneModel::Dirac(p) => p.validate(0.0, MAX_GAP),
        }
    }

    /// Reflection pair at `kin`.
    #[inline]
    pub fn reflection(&self, kin: &Kinematics) -> ReflectionPair {
        match self {
            GrapheneModel::Hydrodynamic(p) => reflection_hydrodynamic(kin, p),
            GrapheneModel::Dirac(p) => reflection_dirac(kin, p),
        }
    }
}

impl fmt::Display for GrapheneModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrapheneModel::Hydrodynamic(_) => write!(f, "hydrodynamic"),
            GrapheneModel::Dirac(p) => write!(f, "dirac(delta={:e} eV)", p.delta),
        }
    }
}

/// Reflection coefficients at one point (ξ, k⊥).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_tm: f64,
    pub r_te: f64,
    /// Set at ξ = k⊥ = 0, where the coefficients are fixed by convention.
    pub boundary: bool,
}

/// ξ (rad/s), q = √(k⊥² + ξ²/c²) and q̃ = √((v_F²k⊥² + ξ²)/c²), both in nm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub xi: f64,
    pub q: f64,
    pub q_tilde: f64,
}

impl Kinematics {
    /// From the transverse wave number `k_perp` (nm⁻¹).
    pub fn new(xi: f64, k_perp: f64, v_f: f64) -> Result<Self> {
        if !(xi >= 0.0 && k_perp >= 0.0) {
            return Err(Error::Domain(format!(
                "need xi >= 0 and k_perp >= 0, got ({xi}, {k_perp})"
            )));
        }
        let beta = v_f / C_SI;
        let w = xi / C;
        Ok(Kinematics {
            xi,
            q: (k_perp * k_perp + w * w).sqrt(),
            q_tilde: (beta * beta * k_perp * k_perp + w * w).sqrt(),
        })
    }

    /// Point at wave number `q` with ξ = c·q·t, `t ∈ [0, 1]`.
    ///
    /// This is the parameterization used inside the Lifshitz integrals; it
    /// guarantees k⊥² = q²(1 − t²) ≥ 0 without checks.
    #[inline]
    pub fn from_fraction(q: f64, t: f64, beta: f64) -> Self {
        let b2 = beta * beta;
        Kinematics {
            xi: C * q * t,
            q,
            q_tilde: q * (b2 + (1.0 - b2) * t * t).sqrt(),
        }
    }

    /// k⊥ in nm⁻¹ (clamped at zero against rounding).
    pub fn k_perp(&self) -> f64 {
        let w = self.xi / C;
        (self.q * self.q - w * w).max(0.0).sqrt()
    }
}

/// Kinematics in terms of y = 2qa at separation `a` (nm).
pub fn kinematics_from_y(y: f64, xi: f64, a: f64, v_f: f64) -> Result<Kinematics> {
    if !(y >= 0.0) || !(a > 0.0) || !(xi >= 0.0) {
        return Err(Error::Domain(format!(
            "need y >= 0, a > 0, xi >= 0; got y={y}, a={a}, xi={xi}"
        )));
    }
    let q = y / (2.0 * a);
    let xi_max = C * q;
    if xi > xi_max {
        return Err(Error::Domain(format!(
            "xi = {xi:e} exceeds c*y/(2a) = {xi_max:e}"
        )));
    }
    let b2 = (v_f / C_SI).powi(2);
    let w = xi / C;
    let q_tilde = (b2 * q * q + (1.0 - b2) * w * w).sqrt();
    Ok(Kinematics { xi, q, q_tilde })
}

/// Polarization function Φ(q̃) in nm⁻¹.
pub fn phi(q_tilde: f64, params: &DiracParams) -> Result<f64> {
    if q_tilde.is_nan() || q_tilde < 0.0 {
        return Err(Error::Domain(format!(
            "q_tilde must be non-negative, got {q_tilde}"
        )));
    }
    Ok(phi_unchecked(q_tilde, params.delta_tilde(), params.n as f64))
}

#[inline]
pub(crate) fn phi_unchecked(q_tilde: f64, delta_tilde: f64, n: f64) -> f64 {
    if delta_tilde == 0.0 {
        return n * PI * q_tilde / 4.0;
    }
    let x = q_tilde / (2.0 * delta_tilde);
    if x < PHI_SERIES_THRESHOLD {
        n * delta_tilde * phi_series(x)
    } else {
        phi_direct(q_tilde, delta_tilde, n)
    }
}

/// Φ from the closed form, without branch selection.
#[inline]
pub(crate) fn phi_direct(q_tilde: f64, delta_tilde: f64, n: f64) -> f64 {
    let x = q_tilde / (2.0 * delta_tilde);
    n * (delta_tilde
        + (q_tilde * q_tilde - 4.0 * delta_tilde * delta_tilde) / (2.0 * q_tilde) * x.atan())
}

/// `1 + (x² − 1)·arctan(x)/x` expanded around x = 0:
/// Σ_k (−1)^{k+1} 4k/(4k² − 1) x^{2k}. Six terms are exact in f64 for
/// x below [`PHI_SERIES_THRESHOLD`].
#[inline]
pub(crate) fn phi_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut acc = 0.0;
    for k in (1..=6).rev() {
        let kf = k as f64;
        let coeff = 4.0 * kf / (4.0 * kf * kf - 1.0);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc = acc * x2 + sign * coeff;
    }
    acc * x2
}

/// Hydrodynamic-model reflection coefficients.
#[inline]
pub fn reflection_hydrodynamic(kin: &Kinematics, params: &HydrodynamicParams) -> ReflectionPair {
    let k = params.k_nm();
    if kin.q == 0.0 {
        // ξ ≤ cq forces ξ = 0; limit along ξ = 0
        return ReflectionPair {
            r_tm: 1.0,
            r_te: -1.0,
            boundary: true,
        };
    }
    let cqk = C * C * kin.q * k;
    ReflectionPair {
        r_tm: cqk / (cqk + kin.xi * kin.xi),
        r_te: -k / (k + kin.q),
        boundary: false,
    }
}

/// Dirac-model reflection coefficients.
#[inline]
pub fn reflection_dirac(kin: &Kinematics, params: &DiracParams) -> ReflectionPair {
    reflection_dirac_scaled(kin, params, FINE_STRUCTURE)
}

/// Dirac reflection with an explicit coupling in place of α; `coupling → 0`
/// switches the sheet off.
#[inline]
pub(crate) fn reflection_dirac_scaled(
    kin: &Kinematics,
    params: &DiracParams,
    coupling: f64,
) -> ReflectionPair {
    if kin.q == 0.0 && kin.q_tilde == 0.0 {
        return ReflectionPair {
            r_tm: 0.0,
            r_te: 0.0,
            boundary: true,
        };
    }
    let a_phi = coupling
        * params.normalization.factor()
        * phi_unchecked(kin.q_tilde, params.delta_tilde(), params.n as f64);
    let tm_num = kin.q * a_phi;
    ReflectionPair {
        r_tm: tm_num / (2.0 * kin.q_tilde * kin.q_tilde + tm_num),
        r_te: -a_phi / (2.0 * kin.q + a_phi),
        boundary: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(delta: f64) -> DiracParams {
        DiracParams::new(delta).unwrap()
    }

    /// 1 − arctan(x)/x = (1/x)∫₀ˣ t²/(1+t²) dt by composite 8-point
    /// Gauss–Legendre; independent of both Φ branches.
    fn one_minus_atan_ratio(x: f64) -> f64 {
        const NODES: [f64; 4] = [
            0.183_434_642_495_649_8,
            0.525_532_409_916_329_0,
            0.796_666_477_413_626_7,
            0.960_289_856_497_536_3,
        ];
        const WEIGHTS: [f64; 4] = [
            0.362_683_783_378_362_0,
            0.313_706_645_877_887_3,
            0.222_381_034_453_374_5,
            0.101_228_536_290_376_3,
        ];
        let panels = (4.0 * x).ceil().max(4.0) as usize;
        let h = x / panels as f64;
        let f = |t: f64| t * t / (1.0 + t * t);
        let mut s = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (n, w) in NODES.iter().zip(WEIGHTS) {
                s += w * (f(mid - n * h / 2.0) + f(mid + n * h / 2.0)) * h / 2.0;
            }
        }
        s / x
    }

    /// Φ/(NΔ̃) = x² + (1 − x²)(1 − arctan(x)/x), cancellation-free.
    fn phi_oracle_ratio(x: f64) -> f64 {
        x * x + (1.0 - x * x) * one_minus_atan_ratio(x)
    }

    #[test]
    fn phi_limits() {
        let p = params(0.1);
        assert_eq!(phi(0.0, &p).unwrap(), 0.0);
        let dt = p.delta_tilde();
        assert_relative_eq!(phi(2.0 * dt, &p).unwrap(), 4.0 * dt, max_relative = 1e-14);
        let m = params(0.0);
        assert_relative_eq!(phi(0.37, &m).unwrap(), PI * 0.37, max_relative = 1e-15);
        assert!(phi(-1.0, &p).is_err());
    }

    #[test]
    fn phi_tiny_gap_has_massless_limit() {
        let p = params(MIN_GAP);
        for qt in [1e-6, 1e-3, 1.0] {
            assert_relative_eq!(phi(qt, &p).unwrap(), PI * qt, max_relative = 1e-9);
        }
    }

    #[test]
    fn phi_series_matches_oracle() {
        for x in [1e-6, 1e-4, 1e-3, 5e-3, 9.9e-3] {
            assert_relative_eq!(phi_series(x), phi_oracle_ratio(x), max_relative = 1e-12);
        }
    }

    #[test]
    fn phi_branches_agree_at_threshold() {
        let dt = params(0.1).delta_tilde();
        let qt = 2.0 * dt * PHI_SERIES_THRESHOLD;
        let series = 4.0 * dt * phi_series(PHI_SERIES_THRESHOLD);
        let direct = phi_direct(qt, dt, 4.0);
        assert_relative_eq!(series, direct, max_relative = 1e-10);
    }

    #[test]
    fn phi_direct_formula_agrees_with_oracle_above_threshold() {
        for x in [1e-2, 0.1, 0.5, 1.0, 3.0, 100.0] {
            let dt = 1.0;
            assert_relative_eq!(
                phi_direct(2.0 * x * dt, dt, 1.0),
                phi_oracle_ratio(x),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn phi_monotone_on_log_grid() {
        let p = params(0.1);
        let dt = p.delta_tilde();
        let mut prev = 0.0;
        for i in 0..=240 {
            let qt = dt * 10f64.powf(-12.0 + 0.1 * i as f64);
            let v = phi(qt, &p).unwrap();
            assert!(v >= 0.0);
            assert!(v >= prev, "phi decreased at q~={qt}");
            prev = v;
        }
    }

    #[test]
    fn phi_nonincreasing_in_gap() {
        for qt in [1e-6, 1e-4, 1e-3, 1e-2, 1.0] {
            let mut prev = f64::INFINITY;
            for e in 0..=14 {
                let delta = 10f64.powf(-15.0 + e as f64);
                let v = phi(qt, &params(delta)).unwrap();
                assert!(v <= prev * (1.0 + 1e-14), "q~={qt}, delta={delta}");
                prev = v;
            }
        }
    }

    #[test]
    fn hydrodynamic_examples() {
        let p = HydrodynamicParams::default();
        let kin = Kinematics {
            xi: 0.0,
            q: 0.3,
            q_tilde: 0.001,
        };
        assert_eq!(reflection_hydrodynamic(&kin, &p).r_tm, 1.0);
        let kin = Kinematics {
            xi: 1e13,
            q: p.k_nm(),
            q_tilde: 0.0,
        };
        assert_eq!(reflection_hydrodynamic(&kin, &p).r_te, -0.5);
        let tiny = HydrodynamicParams::new(1e-30).unwrap();
        let kin = Kinematics::from_fraction(0.1, 0.5, 0.0033);
        let r = reflection_hydrodynamic(&kin, &tiny);
        assert!(r.r_tm.abs() < 1e-20 && r.r_te.abs() < 1e-20);
        assert!(HydrodynamicParams::new(0.0).is_err());
    }

    #[test]
    fn dirac_vanishing_coupling() {
        let p = params(0.1);
        let kin = Kinematics::from_fraction(0.05, 0.3, p.beta());
        let r = reflection_dirac_scaled(&kin, &p, 1e-300);
        assert!(r.r_tm.abs() < 1e-290 && r.r_te.abs() < 1e-290);
        let r = reflection_dirac_scaled(&kin, &p, 0.0);
        assert_eq!((r.r_tm, r.r_te), (0.0, 0.0));
    }

    #[test]
    fn dirac_boundary_point() {
        let kin = Kinematics::new(0.0, 0.0, DEFAULT_FERMI_VELOCITY).unwrap();
        let r = reflection_dirac(&kin, &params(0.1));
        assert!(r.boundary);
        assert_eq!((r.r_tm, r.r_te), (0.0, 0.0));
    }

    #[test]
    fn dirac_massless_static_limit() {
        // r_TM(ξ=0) = g/(1+g) with g = s·(N π/4)·α/(2β) for normalization factor s
        for (norm, s) in [(PhiNormalization::Single, 1.0), (PhiNormalization::Double, 2.0)] {
            let mut p = params(0.0);
            p.normalization = norm;
            let kin = Kinematics::new(0.0, 0.02, p.v_f).unwrap();
            let g = s * PI * FINE_STRUCTURE / (2.0 * p.beta());
            assert_relative_eq!(
                reflection_dirac(&kin, &p).r_tm,
                g / (1.0 + g),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn dirac_oracle_point() {
        // ξ = 1e15 rad/s, k⊥ = 1e8 1/m = 0.1 nm⁻¹, Δ = 0.1 eV, N = 4, doubled Φ.
        // Reference values computed with mpmath at 50 digits from the closed forms.
        let mut p = params(0.1);
        let kin = Kinematics::new(1e15, 0.1, p.v_f).unwrap();
        let r = reflection_dirac(&kin, &p);
        assert_relative_eq!(r.r_tm, DIRAC_ORACLE_TM, max_relative = 1e-12);
        assert_relative_eq!(r.r_te, DIRAC_ORACLE_TE, max_relative = 1e-12);
        p.normalization = PhiNormalization::Single;
        let r = reflection_dirac(&kin, &p);
        assert_relative_eq!(r.r_tm, DIRAC_ORACLE_TM_SINGLE, max_relative = 1e-12);
        assert_relative_eq!(r.r_te, DIRAC_ORACLE_TE_SINGLE, max_relative = 1e-12);
    }

    const DIRAC_ORACLE_TM: f64 = 0.389_201_619_969_625_69;
    const DIRAC_ORACLE_TE: f64 = -7.147_649_569_267_827_9e-4;
    const DIRAC_ORACLE_TM_SINGLE: f64 = 0.241_620_319_957_291_39;
    const DIRAC_ORACLE_TE_SINGLE: f64 = -3.575_102_463_613_120_6e-4;

    #[test]
    fn kinematics_examples() {
        let v = DEFAULT_FERMI_VELOCITY;
        let k = kinematics_from_y(2.0, 0.0, 1.0, v).unwrap();
        assert_eq!(k.q, 1.0);
        assert_relative_eq!(k.q_tilde, v / C_SI, max_relative = 1e-15);

        let (y, a) = (3.7, 12.0);
        let xi_max = C * y / (2.0 * a);
        let k = kinematics_from_y(y, xi_max, a, v).unwrap();
        assert_eq!(k.q, y / (2.0 * a));
        assert_relative_eq!(k.q_tilde, k.q, max_relative = 1e-15);
        assert!(kinematics_from_y(y, xi_max * 1.000001, a, v).is_err());
        assert!(kinematics_from_y(-1.0, 0.0, a, v).is_err());
        assert!(kinematics_from_y(1.0, 0.0, 0.0, v).is_err());
    }

    proptest::proptest! {
        #[test]
        fn q_tilde_identity(y in 0.0f64..80.0, t in 0.0f64..1.0, a in 1.0f64..2000.0) {
            let v = DEFAULT_FERMI_VELOCITY;
            let xi = C * y / (2.0 * a) * t;
            let k = kinematics_from_y(y, xi, a, v).unwrap();
            let kp2 = k.q * k.q - (xi / C).powi(2);
            let beta = v / C_SI;
            let alt = ((beta * beta * kp2 + (xi / C).powi(2)).max(0.0)).sqrt();
            proptest::prop_assert!((k.q_tilde - alt).abs() <= 1e-12 * k.q.max(1e-300));
            proptest::prop_assert!(k.q_tilde <= k.q * (1.0 + 1e-15));
            proptest::prop_assert!(k.q >= xi / C * (1.0 - 1e-15));
            let f = Kinematics::from_fraction(k.q, t, beta);
            proptest::prop_assert!((f.q_tilde - k.q_tilde).abs() <= 1e-13 * k.q.max(1e-300));
        }
    }
}
