use std::fs;
use std::path::{Path, PathBuf};

use ccl_core::verification::with_suffix;
use ccl_core::{
    certify_lower_solution, classify, comparison_bound_matched, constant_bump_barrier,
    exhaustion_solve, export_solution, export_trace, find_r0, glued_lower_solution, monotone_solve,
    scaling_shift, verify_completeness, verify_prescribed, Barrier, BarrierKind, Case, CaseReport,
    Error, Grid, GridFunction, HypothesisSet, LocalBoundReport, RadialModel, RadialProfile,
    RunSummary, ShiftCondition, Solution, SolveOptions,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{BarrierConfig, Config, SchemaError};

const MONOTONE_SLACK: f64 = 1e-12;

/// Command-line overrides of the config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub radii: Option<Vec<f64>>,
    pub cells: Option<usize>,
    pub tol: Option<f64>,
    pub plot: bool,
}

#[derive(Debug)]
pub enum Failure {
    Schema(SchemaError),
    Solver { stage: &'static str, error: Error },
    Check { stage: &'static str, reason: String },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Schema(_) => 2,
            Self::Solver { .. } => 3,
            Self::Check { .. } => 4,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Self::Schema(e) => json!({
                "status": "error",
                "exit_code": 2,
                "stage": "config",
                "error": e.message,
                "line": e.line,
                "column": e.column,
            }),
            Self::Solver { stage, error } => json!({
                "status": "error",
                "exit_code": 3,
                "stage": stage,
                "error": error.to_string(),
            }),
            Self::Check { stage, reason } => json!({
                "status": "fail",
                "exit_code": 4,
                "stage": stage,
                "error": reason,
            }),
        }
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Self::Schema(e)
    }
}

fn schema(error: Error) -> Failure {
    Failure::Schema(SchemaError {
        message: error.to_string(),
        line: None,
        column: None,
    })
}

fn solver(stage: &'static str) -> impl Fn(Error) -> Failure {
    move |error| Failure::Solver { stage, error }
}

/// Config resolved against the overrides.
pub struct Setup {
    pub cfg: Config,
    pub model: RadialModel,
    pub target: RadialProfile,
    pub grid: Grid,
    pub radii: Vec<f64>,
    pub opts: SolveOptions,
    pub hyp: Option<HypothesisSet>,
}

pub fn setup(cfg: Config, ov: &Overrides) -> Result<Setup, Failure> {
    let radii = ov.radii.clone().unwrap_or_else(|| cfg.grid.radii.clone());
    if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(schema(Error::InvalidParameter(format!(
            "radii must be positive, got {radii:?}"
        ))));
    }
    let cells = ov.cells.unwrap_or(cfg.grid.n);
    let r_top = radii.iter().copied().fold(0.0, f64::max);
    let grid = Grid::ball(r_top, cells).map_err(schema)?;
    let model = cfg.model.build(grid.r_max()).map_err(schema)?;
    let target = cfg.target_s.build().map_err(schema)?;
    let tol = ov.tol.unwrap_or(cfg.tolerances.solve);
    if !(tol > 0.0) {
        return Err(schema(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        ))));
    }
    let opts = SolveOptions {
        tol,
        max_iter: cfg.tolerances.max_iter,
    };
    let hyp = cfg.hypotheses.map(|h| h.build(cfg.model.n()));
    if let Some(h) = &hyp {
        h.validate().map_err(schema)?;
    }
    Ok(Setup {
        cfg,
        model,
        target,
        grid,
        radii,
        opts,
        hyp,
    })
}

/// Case report with `r0` filled in when a case matched.
pub fn classify_stage(s: &Setup) -> Result<CaseReport, Failure> {
    let hyp = s.hyp.as_ref().ok_or_else(|| Failure::Check {
        stage: "classify",
        reason: "config has no hypotheses section".into(),
    })?;
    let mut rep = classify(hyp);
    if rep.matched_case != Case::None {
        let (a, r_max) = match s.cfg.barrier {
            BarrierConfig::Glued { a, r_search_max } => (a, r_search_max),
            _ => (1.0, 1e4),
        };
        rep.r0 = find_r0(hyp, a, r_max).ok();
    }
    Ok(rep)
}

pub struct Lower {
    pub barrier: Barrier,
    /// Target the solver sees; differs from the configured one after a shift.
    pub target: RadialProfile,
    pub shift: Option<f64>,
    pub case_report: Option<CaseReport>,
    pub route: &'static str,
}

pub fn lower_stage(s: &Setup) -> Result<Lower, Failure> {
    let tol = s.cfg.tolerances.barrier;
    match s.cfg.barrier {
        BarrierConfig::Glued { a, r_search_max } => {
            let hyp = s.hyp.expect("validated: glued route has hypotheses");
            let mut report = classify(&hyp);
            let (hyp_used, target, shift) = if report.matched_case != Case::None {
                (hyp, s.target.clone(), None)
            } else if report.shift_condition != ShiftCondition::None {
                let sh = scaling_shift(&s.target, &hyp).map_err(|e| Failure::Check {
                    stage: "classify",
                    reason: format!("no case matched: {e}"),
                })?;
                let shifted = HypothesisSet { c: sh.c, ..hyp };
                report = classify(&shifted);
                if report.matched_case == Case::None {
                    return Err(no_case());
                }
                (shifted, sh.profile, Some(sh.shift))
            } else {
                return Err(no_case());
            };
            let r0 = find_r0(&hyp_used, a, r_search_max).map_err(solver("find_r0"))?;
            report.r0 = Some(r0);
            let (barrier, _) = glued_lower_solution(&s.model, &target, &s.grid, a, r0, tol)
                .map_err(solver("barrier"))?;
            Ok(Lower {
                barrier,
                target,
                shift,
                case_report: Some(report),
                route: "glued",
            })
        }
        BarrierConfig::Bump { .. } => {
            let params = s.cfg.barrier.bump_params().expect("bump route");
            let bump = constant_bump_barrier(&s.model, &s.target, &s.grid, &params)
                .map_err(solver("barrier"))?;
            Ok(Lower {
                barrier: bump.barrier,
                target: s.target.clone(),
                shift: None,
                case_report: s.hyp.as_ref().map(classify),
                route: "bump",
            })
        }
        BarrierConfig::Constant { value } => {
            let values = GridFunction::constant(s.grid, value).map_err(solver("barrier"))?;
            let mut barrier = Barrier::new(values, BarrierKind::Constant);
            let cert = certify_lower_solution(&s.model, &s.target, &mut barrier, tol)
                .map_err(solver("barrier"))?;
            if !cert.ok {
                return Err(Failure::Solver {
                    stage: "barrier",
                    error: Error::InvalidBarrier {
                        iteration: 0,
                        radius: cert.worst_radius,
                        deficit: cert.max_residual,
                    },
                });
            }
            Ok(Lower {
                barrier,
                target: s.target.clone(),
                shift: None,
                case_report: s.hyp.as_ref().map(classify),
                route: "constant",
            })
        }
    }
}

fn no_case() -> Failure {
    Failure::Check {
        stage: "classify",
        reason: "no case matched".into(),
    }
}

pub struct Solved {
    pub solutions: Vec<Solution>,
    pub compact_trace: Vec<f64>,
    pub settled: bool,
    pub local_bound: Option<LocalBoundReport>,
}

pub fn solve_stage(s: &Setup, lower: &Lower) -> Result<Solved, Failure> {
    if s.radii.len() == 1 {
        let sol = monotone_solve(
            &s.model,
            &lower.target,
            s.radii[0],
            &lower.barrier.values,
            &s.opts,
        )
        .map_err(solver("solve"))?;
        return Ok(Solved {
            solutions: vec![sol],
            compact_trace: vec![],
            settled: true,
            local_bound: None,
        });
    }
    let ex = exhaustion_solve(
        &s.model,
        &lower.target,
        &s.radii,
        &lower.barrier.values,
        &s.opts,
    )
    .map_err(solver("solve"))?;
    Ok(Solved {
        solutions: ex.solutions,
        compact_trace: ex.compact_trace,
        settled: ex.settled,
        local_bound: Some(ex.local_bound),
    })
}

/// Outcome of the full pipeline: the summary and which checks failed.
pub struct Verified {
    pub summary: RunSummary,
    pub failed: Vec<String>,
    /// Final solution and lower solution for the configured target.
    pub solution: Solution,
    pub barrier: Barrier,
}

pub fn verify_stage(s: &Setup, lower: &Lower, solved: &Solved) -> Result<Verified, Failure> {
    let last = solved.solutions.last().expect("at least one solve");
    let n = s.model.n();
    let completeness = verify_completeness(n, &last.u, &lower.barrier).map_err(solver("verify"))?;

    // undo the rescaling: u + a solves the problem for the configured target
    let (solution, barrier) = match lower.shift {
        Some(a) => {
            let mut sol = last.clone();
            sol.u = sol.u.map(|_, v| v + a).map_err(solver("verify"))?;
            let mut b = lower.barrier.clone();
            b.values = b.values.map(|_, v| v + a).map_err(solver("verify"))?;
            (sol, b)
        }
        None => (last.clone(), lower.barrier.clone()),
    };
    let prescribed = verify_prescribed(
        &s.model,
        &solution.u,
        &s.target,
        s.cfg.tolerances.prescribed,
    )
    .map_err(solver("verify"))?;
    let monotone = solved
        .solutions
        .iter()
        .all(|x| x.is_monotone(MONOTONE_SLACK));

    let checks = s.cfg.checks;
    let mut failed = Vec::new();
    if checks.prescribed && !prescribed.pass {
        failed.push(format!(
            "prescribed curvature: sup error {:e} >= {:e}",
            prescribed.sup_error, prescribed.tol
        ));
    }
    if checks.completeness && !completeness.pass {
        failed.push(format!(
            "completeness: bound fails at r = {:e}",
            completeness.worst_radius
        ));
    }
    if checks.monotone && !monotone {
        failed.push("monotone iteration invariants violated".into());
    }
    if checks.settled && !solved.settled {
        failed.push(format!(
            "exhaustion not settled: compact trace {:?}",
            solved.compact_trace
        ));
    }
    let summary = RunSummary {
        n,
        case_report: lower.case_report.clone(),
        route: lower.route.into(),
        r0: lower.barrier.r0,
        a: lower.barrier.a,
        shift: lower.shift,
        barrier: barrier.metadata(),
        radii: s.radii.clone(),
        cells: s.grid.len(),
        b_k: last.b_k,
        iterations: solved.solutions.iter().map(|x| x.iterations).collect(),
        residual_sup: last.residual_sup,
        compact_trace: solved.compact_trace.clone(),
        settled: solved.settled,
        monotone,
        local_bound: solved.local_bound.clone(),
        prescribed,
        completeness,
        passed: failed.is_empty(),
    };
    Ok(Verified {
        summary,
        failed,
        solution,
        barrier,
    })
}

#[derive(Debug, Serialize)]
pub struct Written {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub svg: Option<PathBuf>,
    pub trace: PathBuf,
}

pub fn export_stage(
    s: &Setup,
    v: &Verified,
    prefix: &Path,
    plot: bool,
) -> Result<Written, Failure> {
    let files = export_solution(
        prefix,
        &s.model,
        &s.target,
        &v.solution,
        &v.barrier,
        &v.summary,
        plot,
    )
    .map_err(solver("export"))?;
    let trace = with_suffix(prefix, ".trace.csv");
    export_trace(&trace, &v.solution).map_err(solver("export"))?;
    Ok(Written {
        csv: files.csv,
        json: files.json,
        svg: files.svg,
        trace,
    })
}

/// CSV of the matched comparison bound against the model's drift at every
/// node; returns the smallest margin over nodes with `r >= h`.
pub fn compare_laplacian(s: &Setup, path: Option<&Path>) -> Result<(String, f64), Failure> {
    let hyp = s.hyp.as_ref().ok_or_else(|| Failure::Check {
        stage: "compare-laplacian",
        reason: "config has no hypotheses section".into(),
    })?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Solver {
        stage: "compare-laplacian",
        error: Error::Serialization(e.to_string()),
    };
    w.write_record(["r", "drift", "bound", "margin"])
        .map_err(io)?;
    let h = s.grid.spacing();
    let mut worst = f64::INFINITY;
    for r in s.grid.nodes() {
        let drift = s.model.effective_drift(r);
        let bound = comparison_bound_matched(hyp, r).map_err(solver("compare-laplacian"))?;
        let margin = bound - drift;
        if r >= h {
            worst = worst.min(margin);
        }
        w.write_record([r, drift, bound, margin].iter().map(|x| format!("{x:e}")))
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| io(e.into_error().into()))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    if let Some(p) = path {
        fs::write(p, &text).map_err(|e| Failure::Solver {
            stage: "compare-laplacian",
            error: Error::Io {
                path: p.to_path_buf(),
                source: e,
            },
        })?;
    }
    Ok((text, worst))
}
