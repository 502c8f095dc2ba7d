//! Physical constants and unit conversions.
//!
//! Everything inside the crate is computed in (eV, nm, s). Atomic units only
//! appear at the I/O boundary: polarizabilities are catalogued in a.u. and
//! C3/C4 coefficients are reported in a.u.
//!
//! Constant values are CODATA 2018.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reduced Planck constant (eV s).
pub const HBAR: f64 = 6.582_119_569e-16;

/// Speed of light (nm/s).
pub const C: f64 = 2.997_924_58e17;

/// Boltzmann constant (eV/K).
pub const KB: f64 = 8.617_333_262e-5;

/// ħc (eV nm).
pub const HBAR_C: f64 = HBAR * C;

/// Fine-structure constant e²/ħc.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// One atomic unit of C3 (eV nm³).
pub const C3_AU_EV_NM3: f64 = 4.032e-3;

/// One atomic unit of C4 (eV nm⁴).
pub const C4_AU_EV_NM4: f64 = 4.032e-3;

/// One atomic unit of polarizability (m³).
pub const POLARIZABILITY_AU_M3: f64 = 1.482e-31;

/// One atomic unit of polarizability (nm³).
pub const POLARIZABILITY_AU_NM3: f64 = POLARIZABILITY_AU_M3 * 1e27;

/// Metres to nanometres.
pub const NM_PER_M: f64 = 1e9;

/// The fundamental constants used by the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// eV s
    pub hbar: f64,
    /// nm/s
    pub c: f64,
    /// eV/K
    pub kb: f64,
    /// eV nm
    pub hbar_c: f64,
    pub fine_structure: f64,
}

impl Constants {
    pub const fn codata() -> Self {
        Constants {
            hbar: HBAR,
            c: C,
            kb: KB,
            hbar_c: HBAR_C,
            fine_structure: FINE_STRUCTURE,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Conversion factors between the internal system and atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub c3_au_in_ev_nm3: f64,
    pub c4_au_in_ev_nm4: f64,
    pub polarizability_au_in_m3: f64,
}

impl UnitSystem {
    pub const fn standard() -> Self {
        UnitSystem {
            c3_au_in_ev_nm3: C3_AU_EV_NM3,
            c4_au_in_ev_nm4: C4_AU_EV_NM4,
            polarizability_au_in_m3: POLARIZABILITY_AU_M3,
        }
    }

    fn factor(&self, kind: QuantityKind) -> f64 {
        match kind {
            QuantityKind::C3 => self.c3_au_in_ev_nm3,
            QuantityKind::C4 => self.c4_au_in_ev_nm4,
            QuantityKind::Polarizability => self.polarizability_au_in_m3,
        }
    }

    /// Converts a value given in eV nm³ (C3), eV nm⁴ (C4) or m³
    /// (polarizability) to atomic units.
    pub fn to_atomic_units(&self, value: f64, kind: QuantityKind) -> Result<f64> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("non-finite {kind} value {value}")));
        }
        Ok(value / self.factor(kind))
    }

    /// Inverse of [`UnitSystem::to_atomic_units`].
    pub fn from_atomic_units(&self, value: f64, kind: QuantityKind) -> Result<f64> {
        if !value.is_finite() {
            return Err(Error::Domain(format!("non-finite {kind} value {value}")));
        }
        Ok(value * self.factor(kind))
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::standard()
    }
}

/// Quantities that have an atomic-unit representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantityKind {
    C3,
    C4,
    Polarizability,
}

impl fmt::Display for QuantityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuantityKind::C3 => "C3",
            QuantityKind::C4 => "C4",
            QuantityKind::Polarizability => "polarizability",
        })
    }
}

impl FromStr for QuantityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c3" => Ok(QuantityKind::C3),
            "c4" => Ok(QuantityKind::C4),
            "polarizability" | "alpha" => Ok(QuantityKind::Polarizability),
            other => Err(Error::Config(format!("unknown quantity kind `{other}`"))),
        }
    }
}

/// Shorthand for [`UnitSystem::standard`]`.to_atomic_units`.
pub fn to_atomic_units(value: f64, kind: QuantityKind) -> Result<f64> {
    UnitSystem::standard().to_atomic_units(value, kind)
}

/// Shorthand for [`UnitSystem::standard`]`.from_atomic_units`.
pub fn from_atomic_units(value: f64, kind: QuantityKind) -> Result<f64> {
    UnitSystem::standard().from_atomic_units(value, kind)
}

/// Matsubara frequency ξ_l = 2π k_B T l / ħ in rad/s.
pub fn matsubara_frequency(l: u64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(l as f64 * (temperature * (2.0 * PI * KB / HBAR)))
}

/// Converts an energy in eV to an angular frequency in rad/s.
pub fn ev_to_rad_per_s(energy: f64) -> f64 {
    energy / HBAR
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constants_are_consistent() {
        let k = Constants::codata();
        assert_eq!(k.hbar_c, k.hbar * k.c);
        assert!(((k.fine_structure - 1.0 / 137.036) / (1.0 / 137.036)).abs() < 1e-3);
        assert_relative_eq!(k.hbar_c, 197.326_980_4, max_relative = 1e-9);
        assert_eq!(Constants::codata(), Constants::default());
    }

    #[test]
    fn atomic_unit_conversions() {
        assert_relative_eq!(
            to_atomic_units(4.032e-3, QuantityKind::C3).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_eq!(to_atomic_units(0.0, QuantityKind::C4).unwrap(), 0.0);
        assert_relative_eq!(
            to_atomic_units(1.482e-31, QuantityKind::Polarizability).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert!(to_atomic_units(f64::NAN, QuantityKind::C3).is_err());
    }

    #[test]
    fn unknown_kind_is_config_error() {
        assert!(matches!("c5".parse::<QuantityKind>(), Err(Error::Config(_))));
        assert_eq!("C4".parse::<QuantityKind>().unwrap(), QuantityKind::C4);
    }

    #[test]
    fn matsubara_frequencies() {
        assert_eq!(matsubara_frequency(0, 300.0).unwrap(), 0.0);
        let xi1 = matsubara_frequency(1, 300.0).unwrap();
        // 2π kB T / ħ evaluated by hand: 2π · 0.025852 eV / 6.5821e-16 eV s
        assert_relative_eq!(xi1, 2.4678e14, max_relative = 1e-4);
        assert_eq!(matsubara_frequency(2, 300.0).unwrap(), 2.0 * xi1);
        assert_eq!(matsubara_frequency(1, 600.0).unwrap(), 2.0 * xi1);
        assert!(matsubara_frequency(1, 0.0).is_err());
        assert!(matsubara_frequency(1, -3.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn round_trip_is_identity(v in -1e6f64..1e6, k in 0usize..3) {
            let kind = [QuantityKind::C3, QuantityKind::C4, QuantityKind::Polarizability][k];
            let back = from_atomic_units(to_atomic_units(v, kind).unwrap(), kind).unwrap();
            proptest::prop_assert!((back - v).abs() <= 1e-14 * v.abs());
        }

        #[test]
        fn matsubara_linear_in_index(l in 0u64..1_000_000, t in 0.01f64..1e4) {
            let one = matsubara_frequency(1, t).unwrap();
            let xl = matsubara_frequency(l, t).unwrap();
            proptest::prop_assert_eq!(xl, l as f64 * one);
        }
    }
}
