//! Recomputes every published table and compares it with [`crate::reference`].

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::atoms::{AtomCatalog, AtomSpec};
use crate::error::Result;
use crate::fit::{default_fit_grid, fit, FitReport, FIT_GRID_POINTS};
use crate::graphene::GrapheneModel;
use crate::lifshitz::{c3, LifshitzRequest, QuadratureConfig};
use crate::reference::{self as r, Check, Comparison};
use crate::report::{
    write_curve_csv, write_file, write_gap_csv, write_json, write_plot_data, write_ratio_csv,
    Provenance,
};
use crate::sweep::{
    default_gap_grid, default_separation_grid, model_ratio_table, species_ratio,
    sweep_gap, sweep_separation, C3Curve, GapSweep, RatioTable,
};

/// Hydrodynamic model for `None`, Dirac with gap Δ for `Some(Δ)`.
pub fn model_for(delta: Option<f64>) -> Result<GrapheneModel> {
    match delta {
        None => Ok(GrapheneModel::hydrodynamic()),
        Some(d) => GrapheneModel::dirac(d),
    }
}

/// File-name friendly form of an atom name (`He*` becomes `He_star`).
pub fn file_stem(atom: &str) -> String {
    atom.replace('*', "_star")
}

fn model_stem(delta: Option<f64>) -> String {
    match delta {
        None => "hydro".into(),
        Some(d) => format!("dirac_delta{d:e}"),
    }
}

/// Criterion 1: hydrodynamic / Dirac (Δ = 0.1 eV) ratio tables.
pub fn model_ratio_tables(
    catalog: &AtomCatalog,
    quad: &QuadratureConfig,
) -> Result<(Vec<RatioTable>, Vec<Check>)> {
    let mut tables = Vec::new();
    let mut checks = Vec::new();
    for (atom, expected) in r::MODEL_RATIOS {
        let t = model_ratio_table(catalog.lookup(atom)?, r::REFERENCE_GAP, &r::RATIO_SEPARATIONS, quad)?;
        for (row, e) in t.rows.iter().zip(expected) {
            checks.push(Check::relative(
                1,
                format!("{atom} hydro/Dirac ratio at {} nm", row.a),
                row.ratio,
                e,
                r::MODEL_RATIO_REL_TOL,
            ));
        }
        tables.push(t);
    }
    Ok((tables, checks))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalOutcome {
    pub atom: String,
    pub delta: f64,
    pub separation: f64,
    pub temperature: f64,
    pub c3_zero: f64,
    pub c3_thermal: f64,
    pub difference_pct: f64,
    pub matsubara_terms: Option<usize>,
}

/// Criterion 2: C3 at T = 0 and at room temperature for He* at 500 nm.
pub fn thermal_check(catalog: &AtomCatalog, quad: &QuadratureConfig) -> Result<(ThermalOutcome, Vec<Check>)> {
    let t = r::THERMAL;
    let req = LifshitzRequest::new(catalog.lookup(t.atom)?.clone(), GrapheneModel::dirac(t.delta)?, t.separation)
        .with_quadrature(*quad);
    let zero = c3(&req)?;
    let warm = c3(&req.clone().at_temperature(t.temperature))?;
    let out = ThermalOutcome {
        atom: t.atom.into(),
        delta: t.delta,
        separation: t.separation,
        temperature: t.temperature,
        c3_zero: zero.c3,
        c3_thermal: warm.c3,
        difference_pct: 100.0 * (warm.c3 - zero.c3) / zero.c3,
        matsubara_terms: warm.matsubara_terms,
    };
    let checks = vec![
        Check::relative(2, "He* C3 at T = 0, 500 nm", out.c3_zero, t.c3_zero, r::THERMAL_VALUE_REL_TOL),
        Check::relative(2, "He* C3 at 300 K, 500 nm", out.c3_thermal, t.c3_thermal, r::THERMAL_VALUE_REL_TOL),
        Check::absolute(
            2,
            "He* thermal correction (%) at 500 nm",
            out.difference_pct,
            t.difference_pct,
            r::THERMAL_DIFFERENCE_TOL,
        ),
    ];
    Ok((out, checks))
}

/// One fitted curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitCase {
    pub atom: String,
    pub delta: Option<f64>,
    pub curve: C3Curve,
    pub report: FitReport,
}

/// Fits the phenomenological potential to every curve listed in [`r::FITS`].
pub fn fit_cases(catalog: &AtomCatalog, quad: &QuadratureConfig) -> Result<Vec<FitCase>> {
    let grid = default_fit_grid(FIT_GRID_POINTS);
    r::FITS
        .iter()
        .map(|f| {
            let curve = sweep_separation(catalog.lookup(f.atom)?, &model_for(f.delta)?, &grid, 0.0, quad)?;
            let report = fit(&curve)?;
            Ok(FitCase {
                atom: f.atom.into(),
                delta: f.delta,
                curve,
                report,
            })
        })
        .collect()
}

fn find_case<'a>(cases: &'a [FitCase], atom: &str, delta: Option<f64>) -> Option<&'a FitCase> {
    cases.iter().find(|c| c.atom == atom && c.delta == delta)
}

fn case_label(atom: &str, delta: Option<f64>) -> String {
    match delta {
        None => format!("{atom} hydro"),
        Some(d) => format!("{atom} Dirac Δ={d:e} eV"),
    }
}

/// Criterion 3: fitted (C4, l).
pub fn fit_checks(cases: &[FitCase]) -> Vec<Check> {
    let mut out = Vec::new();
    for f in r::FITS {
        let label = case_label(f.atom, f.delta);
        let (c4, l) = find_case(cases, f.atom, f.delta)
            .map(|c| (c.report.potential.c4, c.report.potential.l))
            .unwrap_or((f64::NAN, f64::NAN));
        out.push(Check::relative(3, format!("{label} C4 (a.u.)"), c4, f.c4, r::FIT_REL_TOL));
        out.push(Check::relative(3, format!("{label} l (nm)"), l, f.l, r::FIT_REL_TOL));
    }
    out
}

/// Largest residual (%) among grid points inside `[lo, hi]`.
pub fn max_deviation_within(report: &FitReport, lo: f64, hi: f64) -> f64 {
    report
        .grid
        .iter()
        .zip(&report.residuals)
        .filter(|(&a, _)| a >= lo && a <= hi)
        .map(|(_, &res)| 100.0 * res)
        .fold(f64::NAN, f64::max)
}

/// Residual (%) at the grid point nearest to `a`.
pub fn deviation_at(report: &FitReport, a: f64) -> f64 {
    report
        .grid
        .iter()
        .zip(&report.residuals)
        .min_by(|x, y| (x.0 - a).abs().total_cmp(&(y.0 - a).abs()))
        .map(|(_, &res)| 100.0 * res)
        .unwrap_or(f64::NAN)
}

/// Criterion 4: agreement windows and end-point deviations.
pub fn window_checks(cases: &[FitCase]) -> Vec<Check> {
    let mut out = Vec::new();
    for w in r::WINDOWS {
        let label = case_label(w.atom, w.delta);
        let case = find_case(cases, w.atom, w.delta);
        let worst = case
            .map(|c| max_deviation_within(&c.report, w.window.0, w.window.1))
            .unwrap_or(f64::NAN);
        out.push(Check::new(
            4,
            format!("{label} max deviation (%) on [{}, {}] nm", w.window.0, w.window.1),
            worst,
            Comparison::AtMost { limit: 1.0 },
        ));
        for &(a, dev) in w.deviations {
            let got = case.map(|c| deviation_at(&c.report, a)).unwrap_or(f64::NAN);
            out.push(Check::absolute(
                4,
                format!("{label} deviation (%) at {a} nm"),
                got,
                dev,
                w.deviation_tol,
            ));
        }
    }
    out
}

/// Criterion 5 data: Dirac gap sweeps for H, He* and Na.
pub fn gap_sweeps(catalog: &AtomCatalog, quad: &QuadratureConfig) -> Result<Vec<GapSweep>> {
    let grid = default_gap_grid();
    let mut out = Vec::new();
    for (atom, _, _) in r::GAP_SPREADS {
        for a in r::GAP_SEPARATIONS {
            out.push(sweep_gap(catalog.lookup(atom)?, a, &grid, quad)?);
        }
    }
    Ok(out)
}

/// Criterion 5: spreads and H plateau edges.
pub fn gap_checks(sweeps: &[GapSweep]) -> Vec<Check> {
    let find = |atom: &str, a: f64| sweeps.iter().find(|s| s.atom == atom && s.separation == a);
    let mut out = Vec::new();
    for (atom, spreads, tol) in r::GAP_SPREADS {
        for (a, expected) in r::GAP_SEPARATIONS.into_iter().zip(spreads) {
            let got = find(atom, a).map(|s| 100.0 * s.spread).unwrap_or(f64::NAN);
            out.push(Check::absolute(5, format!("{atom} gap spread (%) at {a} nm"), got, expected, tol));
        }
    }
    for (a, expected) in r::GAP_SEPARATIONS.into_iter().zip(r::H_PLATEAUS) {
        let got = find("H", a).and_then(|s| s.plateau_delta).unwrap_or(f64::NAN);
        out.push(Check::new(
            5,
            format!("H plateau edge (eV) at {a} nm"),
            got,
            Comparison::Log10 {
                expected,
                tol: r::PLATEAU_LOG10_TOL,
            },
        ));
    }
    out
}

/// Criterion 6: C3 ratios between species.
pub fn species_checks(catalog: &AtomCatalog, quad: &QuadratureConfig) -> Result<Vec<Check>> {
    r::SPECIES_RATIOS
        .iter()
        .map(|s| {
            let got = species_ratio(
                catalog.lookup(s.numerator)?,
                catalog.lookup(s.denominator)?,
                &model_for(s.delta)?,
                s.separation,
                quad,
            )?;
            Ok(Check::relative(
                6,
                format!(
                    "{}/{} {} at {} nm",
                    s.numerator,
                    s.denominator,
                    if s.delta.is_some() { "Dirac" } else { "hydro" },
                    s.separation
                ),
                got,
                s.ratio,
                r::SPECIES_REL_TOL,
            ))
        })
        .collect()
}

/// Figure panels versus separation: figure number and atom.
pub const SEPARATION_FIGURES: [(&str, &str); 4] =
    [("fig1a", "H"), ("fig2", "H2"), ("fig3", "He*"), ("fig4", "Na")];

fn write_separation_figures(dir: &Path, catalog: &AtomCatalog, quad: &QuadratureConfig) -> Result<()> {
    let grid = default_separation_grid();
    for (fig, atom) in SEPARATION_FIGURES {
        let spec: &AtomSpec = catalog.lookup(atom)?;
        for delta in [None, Some(r::REFERENCE_GAP), Some(r::SMALL_GAP)] {
            let curve = sweep_separation(spec, &model_for(delta)?, &grid, 0.0, quad)?;
            let pts: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.a, p.c3)).collect();
            let prov = Provenance::for_curve(&curve, *quad).with("figure", fig);
            write_file(dir.join(format!("{fig}_{}.dat", model_stem(delta))), |w| {
                write_plot_data(w, ("a_nm", "c3_au"), &pts, &prov)
            })?;
        }
    }
    Ok(())
}

fn write_gap_figure(dir: &Path, sweeps: &[GapSweep], quad: &QuadratureConfig) -> Result<()> {
    for s in sweeps.iter().filter(|s| s.atom == "H") {
        let pts: Vec<(f64, f64)> = s.points.iter().map(|p| (p.delta.log10(), p.c3)).collect();
        let mut prov = Provenance::new(*quad).with("figure", "fig1b").with("separation_nm", s.separation);
        prov.atom = Some(s.atom.clone());
        prov.model = Some("dirac".into());
        write_file(dir.join(format!("fig1b_a{}nm.dat", s.separation)), |w| {
            write_plot_data(w, ("log10_delta_eV", "c3_au"), &pts, &prov)
        })?;
    }
    Ok(())
}

/// Runs criteria 1–6, writes tables, fits, figure data and a PASS/FAIL
/// summary into `dir`, and returns the checks.
pub fn reproduce(dir: &Path, catalog: &AtomCatalog, quad: &QuadratureConfig) -> Result<Vec<Check>> {
    std::fs::create_dir_all(dir)?;
    let mut checks = Vec::new();
    let base = Provenance::new(*quad);

    let (tables, c) = model_ratio_tables(catalog, quad)?;
    checks.extend(c);
    for t in &tables {
        let mut prov = base.clone();
        prov.atom = Some(t.atom.clone());
        prov.delta_ev = Some(r::REFERENCE_GAP);
        write_file(dir.join(format!("ratio_{}.csv", file_stem(&t.atom))), |w| {
            write_ratio_csv(w, t, &prov)
        })?;
    }

    let (thermal, c) = thermal_check(catalog, quad)?;
    checks.extend(c);
    let mut prov = base.clone().with("assumption", "gap of the Dirac model taken as 0.1 eV");
    prov.atom = Some(thermal.atom.clone());
    prov.delta_ev = Some(thermal.delta);
    prov.temperature_k = Some(thermal.temperature);
    write_file(dir.join("thermal.json"), |w| write_json(w, &thermal, &prov))?;

    let cases = fit_cases(catalog, quad)?;
    checks.extend(fit_checks(&cases));
    checks.extend(window_checks(&cases));
    for case in &cases {
        let stem = format!("{}_{}", file_stem(&case.atom), model_stem(case.delta));
        let prov = Provenance::for_curve(&case.curve, *quad);
        write_file(dir.join(format!("curve_{stem}.csv")), |w| write_curve_csv(w, &case.curve, &prov))?;
        write_file(dir.join(format!("fit_{stem}.json")), |w| write_json(w, &case.report, &prov))?;
    }

    let sweeps = gap_sweeps(catalog, quad)?;
    checks.extend(gap_checks(&sweeps));
    for s in &sweeps {
        let mut prov = base.clone();
        prov.atom = Some(s.atom.clone());
        prov.model = Some("dirac".into());
        write_file(dir.join(format!("gap_{}_a{}nm.csv", file_stem(&s.atom), s.separation)), |w| {
            write_gap_csv(w, s, &prov)
        })?;
    }
    write_gap_figure(dir, &sweeps, quad)?;

    checks.extend(species_checks(catalog, quad)?);
    write_separation_figures(dir, catalog, quad)?;

    write_file(dir.join("summary.json"), |w| write_json(w, &checks, &base))?;
    let text = summary_text(&checks);
    write_file(dir.join("summary.txt"), |w| {
        base.write_comments(w)?;
        w.write_all(text.as_bytes())?;
        Ok(())
    })?;
    Ok(checks)
}

/// One PASS/FAIL line per check followed by a count.
pub fn summary_text(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(s, "{c}");
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(s, "{passed}/{} reference comparisons passed", checks.len());
    s
}
