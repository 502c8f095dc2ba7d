//! Separation sweeps, gap sweeps and ratio tables.
//!
//! Sweep points are evaluated in parallel on the current rayon pool and
//! assembled in grid order, so results do not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atoms::AtomSpec;
use crate::error::{Error, Result};
use crate::graphene::{DiracParams, GrapheneModel, MAX_GAP, MIN_GAP};
use crate::lifshitz::{c3, c3_flagged, LifshitzRequest, QuadratureConfig};

/// Separations (nm) at which reference ratios are tabulated.
pub const REFERENCE_SEPARATIONS: [f64; 6] = [3.0, 5.0, 10.0, 20.0, 50.0, 100.0];

/// Relative change per decade of Δ below which C3 counts as flat.
pub const PLATEAU_THRESHOLD: f64 = 0.01;

/// One evaluated point of a separation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// nm
    pub a: f64,
    /// a.u.
    pub c3: f64,
    /// eV
    pub energy: f64,
    pub rel_err: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C3Curve {
    pub atom: String,
    pub model: String,
    /// Gap parameter (eV) for Dirac-model curves.
    pub delta: Option<f64>,
    /// K
    pub temperature: f64,
    pub points: Vec<CurvePoint>,
}

impl C3Curve {
    pub fn from_points(
        atom: impl Into<String>,
        model: impl Into<String>,
        temperature: f64,
        points: Vec<CurvePoint>,
    ) -> Self {
        C3Curve {
            atom: atom.into(),
            model: model.into(),
            delta: None,
            temperature,
            points,
        }
    }

    /// Checks that separations increase strictly and C3 is positive.
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Validation("curve has no points".into()));
        }
        for w in self.points.windows(2) {
            if !(w[1].a > w[0].a) {
                return Err(Error::Validation(format!(
                    "separations not strictly increasing at {} nm",
                    w[1].a
                )));
            }
        }
        if let Some(p) = self.points.iter().find(|p| !(p.c3 > 0.0)) {
            return Err(Error::Validation(format!("C3 = {} at a = {} nm", p.c3, p.a)));
        }
        Ok(())
    }

    pub fn separations(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.a).collect()
    }

    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.converged)
    }
}

/// Hydrodynamic vs Dirac comparison at a list of separations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub a: f64,
    pub c3_numerator: f64,
    pub c3_denominator: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub atom: String,
    pub numerator: String,
    pub denominator: String,
    pub rows: Vec<RatioRow>,
}

impl RatioTable {
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    /// eV
    pub delta: f64,
    /// a.u.
    pub c3: f64,
    /// C3 at delta/10 (a.u.), used for the plateau criterion.
    pub c3_tenth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSweep {
    pub atom: String,
    /// nm
    pub separation: f64,
    pub points: Vec<GapPoint>,
    /// (C3max − C3min)/C3min as a fraction.
    pub spread: f64,
    /// Largest grid Δ at and below which C3 changes by less than
    /// `plateau_threshold` per decade.
    pub plateau_delta: Option<f64>,
    pub plateau_threshold: f64,
}

/// `n` log-spaced points from `lo` to `hi` with exact endpoints.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let r = (hi / lo).ln();
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        lo * (r * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// 40 log-spaced separations in [3, 100] nm merged with [`REFERENCE_SEPARATIONS`].
pub fn default_separation_grid() -> Vec<f64> {
    let mut g = log_grid(3.0, 100.0, 40);
    g.extend_from_slice(&REFERENCE_SEPARATIONS);
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a / *b - 1.0).abs() < 1e-9);
    g
}

/// One point per decade from 1e-15 to 1e-4 eV, four per decade up to 0.1 eV.
pub fn default_gap_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..12).map(|k| 10f64.powi(k - 15)).collect();
    g.extend((1..=12).map(|k| 10f64.powf(-4.0 + 0.25 * k as f64)));
    *g.last_mut().expect("non-empty") = MAX_GAP;
    g
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Validation("empty separation grid".into()));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Validation(format!(
                "separation grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    if let Some(a) = grid.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::Validation(format!("invalid separation {a}")));
    }
    Ok(())
}

fn at_index<T>(index: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Sweep {
        index,
        source: Box::new(e),
    })
}

/// Evaluates C3 at every separation in `grid` (nm).
///
/// Points that fail to converge are kept and marked `converged == false`.
pub fn sweep_separation(
    atom: &AtomSpec,
    model: &GrapheneModel,
    grid: &[f64],
    temperature: f64,
    quadrature: &QuadratureConfig,
) -> Result<C3Curve> {
    check_grid(grid)?;
    let points = grid
        .par_iter()
        .enumerate()
        .map(|(i, &a)| {
            let req = LifshitzRequest::new(atom.clone(), *model, a)
                .at_temperature(temperature)
                .with_quadrature(*quadrature);
            at_index(i, c3_flagged(&req)).map(|r| CurvePoint {
                a,
                c3: r.c3,
                energy: r.energy,
                rel_err: r.est_rel_error,
                converged: r.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(C3Curve {
        atom: atom.name.clone(),
        model: model.label(),
        delta: model.gap(),
        temperature,
        points,
    })
}

/// Pointwise ratio C3(numerator)/C3(denominator) over `grid`.
pub fn ratio_table(
    atom: &AtomSpec,
    numerator: &GrapheneModel,
    denominator: &GrapheneModel,
    grid: &[f64],
    quadrature: &QuadratureConfig,
) -> Result<RatioTable> {
    let (num, den) = rayon::join(
        || sweep_separation(atom, numerator, grid, 0.0, quadrature),
        || sweep_separation(atom, denominator, grid, 0.0, quadrature),
    );
    let (num, den) = (num?, den?);
    let rows = num
        .points
        .iter()
        .zip(&den.points)
        .map(|(n, d)| RatioRow {
            a: n.a,
            c3_numerator: n.c3,
            c3_denominator: d.c3,
            ratio: n.c3 / d.c3,
        })
        .collect();
    Ok(RatioTable {
        atom: atom.name.clone(),
        numerator: numerator.label(),
        denominator: denominator.label(),
        rows,
    })
}

/// C3^(hydrodynamic) / C3^(Dirac, Δ) over `grid`.
pub fn model_ratio_table(
    atom: &AtomSpec,
    delta: f64,
    grid: &[f64],
    quadrature: &QuadratureConfig,
) -> Result<RatioTable> {
    ratio_table(
        atom,
        &GrapheneModel::hydrodynamic(),
        &GrapheneModel::dirac(delta)?,
        grid,
        quadrature,
    )
}

/// C3(atom_a)/C3(atom_b) at separation `a` for one model.
pub fn species_ratio(
    atom_a: &AtomSpec,
    atom_b: &AtomSpec,
    model: &GrapheneModel,
    a: f64,
    quadrature: &QuadratureConfig,
) -> Result<f64> {
    let req = |atom: &AtomSpec| {
        LifshitzRequest::new(atom.clone(), *model, a).with_quadrature(*quadrature)
    };
    let (x, y) = rayon::join(|| c3(&req(atom_a)), || c3(&req(atom_b)));
    Ok(x?.c3 / y?.c3)
}

/// Dirac-model C3 at separation `a` for each Δ in `delta_grid` (eV).
pub fn sweep_gap(
    atom: &AtomSpec,
    a: f64,
    delta_grid: &[f64],
    quadrature: &QuadratureConfig,
) -> Result<GapSweep> {
    if delta_grid.is_empty() {
        return Err(Error::Validation("empty gap grid".into()));
    }
    for w in delta_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Validation("gap grid must be strictly increasing".into()));
        }
    }
    let lo = MIN_GAP * (1.0 - 1e-12);
    if let Some(d) = delta_grid.iter().find(|&&d| !(d >= lo && d <= MAX_GAP)) {
        return Err(Error::Validation(format!(
            "gap {d} eV outside [{MIN_GAP}, {MAX_GAP}] eV"
        )));
    }
    let eval = |delta: f64| -> Result<f64> {
        let model = GrapheneModel::Dirac(DiracParams::with_gap_bounds(delta, 0.0, MAX_GAP)?);
        let req = LifshitzRequest::new(atom.clone(), model, a).with_quadrature(*quadrature);
        Ok(c3(&req)?.c3)
    };
    let points = delta_grid
        .par_iter()
        .enumerate()
        .map(|(i, &delta)| {
            let (c, ct) = rayon::join(|| eval(delta), || eval(delta / 10.0));
            Ok(GapPoint {
                delta,
                c3: at_index(i, c)?,
                c3_tenth: at_index(i, ct)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let max = points.iter().map(|p| p.c3).fold(f64::NEG_INFINITY, f64::max);
    let min = points.iter().map(|p| p.c3).fold(f64::INFINITY, f64::min);
    let plateau_delta = points
        .iter()
        .take_while(|p| ((p.c3 - p.c3_tenth) / p.c3_tenth).abs() < PLATEAU_THRESHOLD)
        .last()
        .map(|p| p.delta);
    Ok(GapSweep {
        atom: atom.name.clone(),
        separation: a,
        points,
        spread: (max - min) / min,
        plateau_delta,
        plateau_threshold: PLATEAU_THRESHOLD,
    })
}
