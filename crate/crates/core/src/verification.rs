//! Post-solve checks and artifact export.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::barriers::{Barrier, BarrierKind, BarrierMetadata};
use crate::elliptic::{achieved_curvature, nonlinear_residual};
use crate::error::{Error, Result};
use crate::geometry::{GridFunction, RadialModel};
use crate::hypotheses::CaseReport;
use crate::iteration::{LocalBoundReport, Solution};
use crate::profile::RadialProfile;

/// Fraction of the ball radius excluded from residual reports.
pub const BOUNDARY_MARGIN: f64 = 0.05;
/// Slack on the ordering `u >= u_-`.
pub const ORDERING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrescribedReport {
    pub sup_error: f64,
    pub l2_error: f64,
    pub worst_radius: f64,
    pub nodes_checked: usize,
    pub r_cut: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compares the achieved curvature `e^{-(2/n) u} (-L u + s)` with `S` on the
/// nodes with `r <= 0.95 R`, never including the Dirichlet node.
pub fn verify_prescribed(
    model: &RadialModel,
    u: &GridFunction,
    target: &RadialProfile,
    tol: f64,
) -> Result<PrescribedReport> {
    let achieved = achieved_curvature(model, u)?;
    let grid = *u.grid();
    let r_cut = (1.0 - BOUNDARY_MARGIN) * grid.last_node();
    let last = grid
        .last_index_within(r_cut)
        .map_or(0, |i| i.min(grid.len() - 2) + 1);
    let (mut sup, mut sq, mut worst) = (0.0f64, 0.0, 0.0);
    for (r, s_hat) in achieved.nodes_and_values().take(last) {
        let e = (s_hat - target.eval(r)).abs();
        sq += e * e;
        if e > sup {
            sup = e;
            worst = r;
        }
    }
    Ok(PrescribedReport {
        sup_error: sup,
        l2_error: (grid.spacing() * sq).sqrt(),
        worst_radius: worst,
        nodes_checked: last,
        r_cut,
        tol,
        pass: last > 0 && sup < tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub r_start: f64,
    pub nodes_checked: usize,
    /// `min 2 r^2 e^{(2/n) u}` over the checked nodes; the bound holds iff
    /// this is at least 1.
    pub min_ratio: f64,
    pub worst_radius: f64,
    /// `sum e^{u/n} h` over the checked nodes.
    pub length_integral: f64,
    /// `sum h / (sqrt(2) r)`, the divergent minorant.
    pub minorant_integral: f64,
    pub metric_constant: Option<f64>,
    pub note: Option<String>,
    pub pass: bool,
}

/// Pointwise check of `e^{(2/n) u} >= 1 / (2 r^2)` at the nodes with
/// `r >= r_start`.
pub fn completeness_bound(n: usize, u: &GridFunction, r_start: f64) -> Result<CompletenessReport> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "complex dimension must be >= 1".into(),
        ));
    }
    let p = 2.0 / n as f64;
    let h = u.grid().spacing();
    let (mut count, mut min_ratio, mut worst) = (0usize, f64::INFINITY, r_start);
    let (mut length, mut minorant) = (0.0, 0.0);
    for (r, v) in u.nodes_and_values().filter(|(r, _)| *r >= r_start) {
        count += 1;
        let ratio = 2.0 * r * r * (p * v).exp();
        if ratio < min_ratio {
            min_ratio = ratio;
            worst = r;
        }
        length += (v / n as f64).exp() * h;
        minorant += h / (std::f64::consts::SQRT_2 * r);
    }
    let note = (count == 0).then(|| format!("no node beyond r = {r_start:e}"));
    Ok(CompletenessReport {
        r_start,
        nodes_checked: count,
        min_ratio,
        worst_radius: worst,
        length_integral: length,
        minorant_integral: minorant,
        metric_constant: None,
        note,
        pass: count > 0 && min_ratio >= 1.0 - 1e-12,
    })
}

/// Certifies completeness of `e^{(2/n) u} omega` from the lower solution.
///
/// Log and glued barriers use the bound `1/(2 r^2)` beyond
/// `max(r0, sqrt a)`; constant-type barriers give `e^{(2/n) u} >= C` with
/// `C = e^{(2/n) min u_-}`.
pub fn verify_completeness(
    n: usize,
    u: &GridFunction,
    u_minus: &Barrier,
) -> Result<CompletenessReport> {
    let lower = u_minus.values.restrict(u.len().min(u_minus.values.len()))?;
    if lower.len() != u.len() || !lower.grid().shares_nodes_with(u.grid()) {
        return Err(Error::Domain(
            "solution and lower solution live on different grids".into(),
        ));
    }
    if let Some((r, gap)) = u
        .nodes_and_values()
        .zip(lower.values())
        .map(|((r, v), l)| (r, l - v))
        .find(|(_, gap)| *gap > ORDERING_TOL)
    {
        return Err(Error::InvalidParameter(format!(
            "solution lies {gap:e} below the lower solution at r = {r:e}"
        )));
    }
    match u_minus.kind {
        BarrierKind::LogBarrier | BarrierKind::Glued | BarrierKind::InnerDirichlet => {
            let a = u_minus.a.ok_or_else(|| {
                Error::InvalidParameter("log-type barrier carries no offset a".into())
            })?;
            let r0 = u_minus.r0.unwrap_or(0.0);
            completeness_bound(n, u, r0.max(a.sqrt()))
        }
        BarrierKind::ConstantBump | BarrierKind::ConstantUpper | BarrierKind::Constant => {
            let p = 2.0 / n as f64;
            let c = (p * lower.min()).exp();
            let above = u
                .values()
                .iter()
                .all(|v| (p * v).exp() >= c * (1.0 - 1e-12));
            let mut rep = completeness_bound(n, u, 1.0 / (2.0 * c).sqrt())?;
            rep.metric_constant = Some(c);
            rep.note = Some(format!("metric >= C omega with C = {c:e}"));
            rep.pass = above && rep.pass;
            Ok(rep)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    pub case_report: Option<CaseReport>,
    pub route: String,
    pub r0: Option<f64>,
    pub a: Option<f64>,
    pub shift: Option<f64>,
    pub barrier: BarrierMetadata,
    pub radii: Vec<f64>,
    pub cells: usize,
    pub b_k: f64,
    pub iterations: Vec<usize>,
    pub residual_sup: f64,
    pub compact_trace: Vec<f64>,
    pub settled: bool,
    pub monotone: bool,
    pub local_bound: Option<LocalBoundReport>,
    pub prescribed: PrescribedReport,
    pub completeness: CompletenessReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportedFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub svg: Option<PathBuf>,
}

/// `prefix` with `suffix` appended to its final component.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `<prefix>.csv`, `<prefix>.json` and, when `plot` is set,
/// `<prefix>.svg`.
pub fn export_solution(
    prefix: &Path,
    model: &RadialModel,
    target: &RadialProfile,
    solution: &Solution,
    barrier: &Barrier,
    summary: &RunSummary,
    plot: bool,
) -> Result<ExportedFiles> {
    let u = &solution.u;
    let lower = barrier.values.restrict(u.len())?;
    let achieved = achieved_curvature(model, u)?;
    let residual = nonlinear_residual(model, u, target)?;

    let csv_path = with_suffix(prefix, ".csv");
    let csv_err = |e: csv::Error| Error::io(&csv_path, e.into());
    let mut w = csv::Writer::from_path(&csv_path).map_err(csv_err)?;
    w.write_record(["r", "u", "u_minus", "S_achieved", "S_target", "residual"])
        .map_err(csv_err)?;
    for (i, r) in u.grid().nodes().enumerate() {
        let row = [
            r,
            u.values()[i],
            lower.values()[i],
            achieved.values()[i],
            target.eval(r),
            residual.values()[i],
        ];
        w.write_record(row.iter().map(|x| format!("{x:e}")))
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let json_path = with_suffix(prefix, ".json");
    let text =
        serde_json::to_string_pretty(summary).map_err(|e| Error::Serialization(e.to_string()))?;
    fs::write(&json_path, text).map_err(|e| Error::io(&json_path, e))?;

    let svg = if plot {
        let path = with_suffix(prefix, ".svg");
        fs::write(&path, svg_plot(u, &lower)).map_err(|e| Error::io(&path, e))?;
        Some(path)
    } else {
        None
    };
    Ok(ExportedFiles {
        csv: csv_path,
        json: json_path,
        svg,
    })
}

/// Writes `iteration,sup_change,residual` for every iterate.
pub fn export_trace(path: &Path, solution: &Solution) -> Result<()> {
    let err = |e: csv::Error| Error::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["iteration", "sup_change", "residual"])
        .map_err(err)?;
    for (j, (c, r)) in solution
        .trace
        .iter()
        .zip(&solution.residual_trace)
        .enumerate()
    {
        w.write_record([(j + 1).to_string(), format!("{c:e}"), format!("{r:e}")])
            .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Line chart of `u` and `u_-` against `r`.
pub fn svg_plot(u: &GridFunction, lower: &GridFunction) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 40.0;
    let r_max = u.grid().last_node();
    let lo = u.min().min(lower.min());
    let hi = u.max().max(lower.max());
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x = |r: f64| PAD + (W - 2.0 * PAD) * r / r_max;
    let y = |v: f64| H - PAD - (H - 2.0 * PAD) * (v - lo) / span;
    let polyline = |f: &GridFunction, colour: &str| {
        let mut pts = String::new();
        for (r, v) in f.nodes_and_values() {
            let _ = write!(pts, "{:.2},{:.2} ", x(r), y(v));
        }
        format!(
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.trim_end()
        )
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    );
    let _ = writeln!(
        out,
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>",
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    out.push_str(&polyline(u, "#1f77b4"));
    out.push_str(&polyline(lower, "#d62728"));
    let _ = writeln!(
        out,
        "<text x=\"{PAD}\" y=\"{}\" font-size=\"12\">r in [0, {r_max:.3}], value in [{lo:.3}, {hi:.3}]; blue u, red u_minus</text>",
        PAD - 10.0
    );
    out.push_str("</svg>\n");
    out
}
