//! Published reference values and the tolerances they are checked against.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Separations (nm) of the model-ratio listings.
pub const RATIO_SEPARATIONS: [f64; 6] = [3.0, 5.0, 10.0, 20.0, 50.0, 100.0];

/// C3 hydrodynamic / C3 Dirac (Δ = 0.1 eV) at [`RATIO_SEPARATIONS`].
pub const MODEL_RATIOS: [(&str, [f64; 6]); 4] = [
    ("H", [1.065, 1.19, 1.44, 1.85, 2.85, 4.21]),
    ("H2", [1.045, 1.18, 1.45, 1.89, 3.00, 4.63]),
    ("He*", [1.33, 1.47, 1.76, 2.23, 3.33, 4.78]),
    ("Na", [1.40, 1.55, 1.87, 2.39, 3.61, 5.29]),
];
pub const MODEL_RATIO_REL_TOL: f64 = 0.02;

/// Gap used for the Dirac curves of the ratio listings and the main fits.
pub const REFERENCE_GAP: f64 = 0.1;
/// Lower gap bound of the alternative fits and gap sweeps.
pub const SMALL_GAP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalReference {
    pub atom: &'static str,
    /// Assumed; the listing does not state the gap.
    pub delta: f64,
    pub separation: f64,
    pub temperature: f64,
    pub c3_zero: f64,
    pub c3_thermal: f64,
    /// Relative difference in percent.
    pub difference_pct: f64,
}

pub const THERMAL: ThermalReference = ThermalReference {
    atom: "He*",
    delta: 0.1,
    separation: 500.0,
    temperature: 300.0,
    c3_zero: 0.0183505,
    c3_thermal: 0.0183565,
    difference_pct: 0.033,
};
pub const THERMAL_VALUE_REL_TOL: f64 = 0.005;
/// Percentage points.
pub const THERMAL_DIFFERENCE_TOL: f64 = 0.015;

/// `None` selects the hydrodynamic model, `Some(Δ)` the Dirac model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReference {
    pub atom: &'static str,
    pub delta: Option<f64>,
    /// a.u.
    pub c4: f64,
    /// nm
    pub l: f64,
}

pub const FITS: [FitReference; 6] = [
    FitReference { atom: "He*", delta: None, c4: 85.11, l: 72.77 },
    FitReference { atom: "He*", delta: Some(0.1), c4: 12.59, l: 11.18 },
    FitReference { atom: "Na", delta: None, c4: 50.82, l: 66.92 },
    FitReference { atom: "Na", delta: Some(0.1), c4: 7.11, l: 9.77 },
    FitReference { atom: "He*", delta: Some(1e-15), c4: 18.04, l: 18.22 },
    FitReference { atom: "Na", delta: Some(1e-15), c4: 9.74, l: 15.45 },
];
pub const FIT_REL_TOL: f64 = 0.05;

/// Quality of the Δ = 0.1 eV and hydrodynamic fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowReference {
    pub atom: &'static str,
    pub delta: Option<f64>,
    /// Residuals must stay below 1% on this interval (nm).
    pub window: (f64, f64),
    /// (separation nm, deviation %) pairs.
    pub deviations: &'static [(f64, f64)],
    /// Percentage points.
    pub deviation_tol: f64,
}

pub const WINDOWS: [WindowReference; 4] = [
    WindowReference {
        atom: "He*",
        delta: None,
        window: (10.0, 60.0),
        deviations: &[(3.0, 10.0), (100.0, 10.0)],
        deviation_tol: 3.0,
    },
    WindowReference {
        atom: "Na",
        delta: None,
        window: (10.0, 60.0),
        deviations: &[(3.0, 11.0), (100.0, 11.0)],
        deviation_tol: 3.0,
    },
    WindowReference {
        atom: "He*",
        delta: Some(0.1),
        window: (6.0, 100.0),
        deviations: &[(3.0, 5.0)],
        deviation_tol: 2.0,
    },
    WindowReference {
        atom: "Na",
        delta: Some(0.1),
        window: (6.0, 100.0),
        deviations: &[(3.0, 5.7)],
        deviation_tol: 2.0,
    },
];

/// Separations (nm) of the gap sweeps.
pub const GAP_SEPARATIONS: [f64; 3] = [5.0, 50.0, 100.0];

/// (C3max − C3min)/C3min in percent at [`GAP_SEPARATIONS`], with tolerance in
/// percentage points.
pub const GAP_SPREADS: [(&str, [f64; 3], f64); 3] = [
    ("H", [6.6, 16.4, 31.3], 2.0),
    ("He*", [3.7, 28.0, 46.0], 3.0),
    ("Na", [3.2, 25.6, 42.0], 3.0),
];

/// Gap (eV) below which C3 of H stops changing, at [`GAP_SEPARATIONS`].
pub const H_PLATEAUS: [f64; 3] = [0.01, 0.004, 0.001];
/// Allowed distance in decades between computed and listed plateau edges.
pub const PLATEAU_LOG10_TOL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesReference {
    pub numerator: &'static str,
    pub denominator: &'static str,
    pub delta: Option<f64>,
    pub separation: f64,
    pub ratio: f64,
}

const fn species(n: &'static str, delta: Option<f64>, a: f64, ratio: f64) -> SpeciesReference {
    SpeciesReference {
        numerator: n,
        denominator: "H",
        delta,
        separation: a,
        ratio,
    }
}

pub const SPECIES_RATIOS: [SpeciesReference; 8] = [
    species("He*", Some(0.1), 3.0, 18.0),
    species("He*", Some(0.1), 100.0, 46.0),
    species("He*", None, 3.0, 23.0),
    species("He*", None, 100.0, 52.0),
    species("Na", Some(0.1), 3.0, 11.6),
    species("Na", Some(0.1), 100.0, 26.0),
    species("Na", None, 3.0, 15.0),
    species("Na", None, 100.0, 33.0),
];
pub const SPECIES_REL_TOL: f64 = 0.05;

/// How a computed value is compared with its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Comparison {
    Relative { expected: f64, tol: f64 },
    Absolute { expected: f64, tol: f64 },
    Log10 { expected: f64, tol: f64 },
    AtMost { limit: f64 },
}

impl Comparison {
    pub fn passes(&self, computed: f64) -> bool {
        if !computed.is_finite() {
            return false;
        }
        match *self {
            Comparison::Relative { expected, tol } => {
                ((computed - expected) / expected).abs() <= tol
            }
            Comparison::Absolute { expected, tol } => (computed - expected).abs() <= tol,
            Comparison::Log10 { expected, tol } => {
                computed > 0.0 && (computed / expected).log10().abs() <= tol
            }
            Comparison::AtMost { limit } => computed <= limit,
        }
    }
}

/// Fixed notation for ordinary magnitudes, scientific for tiny ones.
struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        if v != 0.0 && v.abs() < 1e-3 {
            write!(f, "{v:.3e}")
        } else if let Some(p) = f.precision() {
            write!(f, "{v:.p$}")
        } else {
            write!(f, "{v}")
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Comparison::Relative { expected, tol } => {
                write!(f, "{expected} ±{}%", tol * 100.0)
            }
            Comparison::Absolute { expected, tol } => {
                write!(f, "{} ±{}", Num(expected), Num(tol))
            }
            Comparison::Log10 { expected, tol } => {
                write!(f, "{expected} within {tol} decades")
            }
            Comparison::AtMost { limit } => write!(f, "<= {}", Num(limit)),
        }
    }
}

/// One reference comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub computed: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn new(criterion: u8, name: impl Into<String>, computed: f64, comparison: Comparison) -> Self {
        Check {
            criterion,
            name: name.into(),
            computed,
            pass: comparison.passes(computed),
            comparison,
        }
    }

    pub fn relative(criterion: u8, name: impl Into<String>, computed: f64, expected: f64, tol: f64) -> Self {
        Self::new(criterion, name, computed, Comparison::Relative { expected, tol })
    }

    pub fn absolute(criterion: u8, name: impl Into<String>, computed: f64, expected: f64, tol: f64) -> Self {
        Self::new(criterion, name, computed, Comparison::Absolute { expected, tol })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: computed {:.6} vs {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            Num(self.computed),
            self.comparison
        )
    }
}
