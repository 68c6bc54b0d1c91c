//! Monotone iteration between a lower solution and the constant upper
//! solution on a ball, and the exhaustion driver over nested balls.

use serde::{Deserialize, Serialize};

use crate::barriers::upper_constant;
use crate::elliptic::{nonlinear_residual, DirichletOperator};
use crate::error::{Error, Result};
use crate::geometry::{GridFunction, RadialModel};
use crate::profile::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Stop once the sup-change drops below `tol` and the interior residual
    /// below `10 tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub u: GridFunction,
    pub iterations: usize,
    /// Sup of the nonlinear residual over all nodes but the Dirichlet one.
    pub residual_sup: f64,
    /// Sup-change of each iterate.
    pub trace: Vec<f64>,
    /// Interior residual of each iterate.
    pub residual_trace: Vec<f64>,
    pub b_k: f64,
    pub c_it: f64,
    /// `max(u_- - u)`.
    pub lower_gap: f64,
    /// `max(u - b_k)`.
    pub upper_gap: f64,
    /// Largest pointwise increase `max(w_{j+1} - w_j)` over the run.
    pub max_increase: f64,
    /// Smallest `min(w_j - u_-)` over the run.
    pub min_lower_margin: f64,
}

impl Solution {
    pub fn radius(&self) -> f64 {
        self.u.grid().last_node()
    }

    /// Iterates nonincreasing and above the lower solution, both within
    /// `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.max_increase <= slack && self.min_lower_margin >= -slack
    }
}

/// Decreasing monotone iteration from the constant upper solution `b_k`
/// on the ball of nodes of `u_minus` with `r <= radius`.
pub fn monotone_solve(
    model: &RadialModel,
    target: &RadialProfile,
    radius: f64,
    u_minus: &GridFunction,
    opts: &SolveOptions,
) -> Result<Solution> {
    if opts.max_iter == 0 {
        return Err(Error::NonConvergence {
            iterations: 0,
            last_change: f64::INFINITY,
            trace: Vec::new(),
        });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let lower = u_minus.restrict_to_radius(radius)?;
    let grid = *lower.grid();
    let n = grid.len();
    let target_vals = target.sample(&grid);
    if let Some((r, v)) = grid.nodes().zip(&target_vals).find(|(_, v)| **v >= 0.0) {
        return Err(Error::Sign {
            radius: r,
            reason: format!("target curvature {v:e} is not negative"),
        });
    }
    let b_k = upper_constant(model, target, radius, u_minus)?;
    let p = model.conformal_exponent();
    let max_neg = target_vals.iter().fold(0.0, |m: f64, v| m.max(-v));
    let c_it = p * max_neg * (p * b_k).exp();
    let op = DirichletOperator::new(model, grid, c_it)?;
    let s_vals: Vec<f64> = grid.nodes().map(|r| model.s(r)).collect();
    let lo = lower.values();

    let mut w = vec![b_k; n];
    let mut exp_w: Vec<f64> = w.iter().map(|v| (p * v).exp()).collect();
    let mut rhs = vec![0.0; n];
    let mut trace = Vec::new();
    let mut residual_trace = Vec::new();
    let mut max_increase = f64::NEG_INFINITY;
    let mut min_lower_margin = w
        .iter()
        .zip(lo)
        .fold(f64::INFINITY, |m, (a, b)| m.min(a - b));

    for j in 1..=opts.max_iter {
        for i in 0..n {
            rhs[i] = c_it * w[i] + target_vals[i] * exp_w[i] - s_vals[i];
        }
        let next = op.solve(&rhs, b_k)?;
        let exp_next: Vec<f64> = next.iter().map(|v| (p * v).exp()).collect();
        let mut change = 0.0f64;
        let mut residual = 0.0f64;
        for i in 0..n {
            let d = next[i] - w[i];
            change = change.max(d.abs());
            max_increase = max_increase.max(d);
            let margin = next[i] - lo[i];
            min_lower_margin = min_lower_margin.min(margin);
            if margin < -10.0 * opts.tol {
                return Err(Error::InvalidBarrier {
                    iteration: j,
                    radius: grid.node(i),
                    deficit: -margin,
                });
            }
            if i + 1 < n {
                // interior rows of the linear solve give this identity exactly
                let r = -c_it * d + target_vals[i] * (exp_w[i] - exp_next[i]);
                residual = residual.max(r.abs());
            }
        }
        trace.push(change);
        residual_trace.push(residual);
        w = next;
        exp_w = exp_next;
        if change < opts.tol && residual < 10.0 * opts.tol {
            let u = GridFunction::new(grid, w)?;
            let res = nonlinear_residual(model, &u, target)?;
            let residual_sup = res.values()[..n - 1]
                .iter()
                .fold(0.0, |m: f64, v| m.max(v.abs()));
            let lower_gap = lo
                .iter()
                .zip(u.values())
                .fold(f64::NEG_INFINITY, |m, (a, b)| m.max(a - b));
            let upper_gap = u.max() - b_k;
            return Ok(Solution {
                u,
                iterations: j,
                residual_sup,
                trace,
                residual_trace,
                b_k,
                c_it,
                lower_gap,
                upper_gap,
                max_increase,
                min_lower_margin,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        last_change: trace.last().copied().unwrap_or(f64::INFINITY),
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalBoundReport {
    pub r_compact: f64,
    pub sup_norms: Vec<f64>,
    pub l2_norms: Vec<f64>,
    /// `sup / max(l2, 1)` per solution.
    pub ratios: Vec<f64>,
    pub c_loc: f64,
    pub max_l2: f64,
    pub max_ratio: f64,
    /// Least-squares slope of the ratios against the solution index.
    pub slope: f64,
    pub bounded: bool,
}

/// Largest trend per index tolerated in [`LocalBoundReport::slope`].
pub const RATIO_SLOPE_TOL: f64 = 0.01;

/// Sup norm on `[0, r_compact]` against the discrete L^2 norm on
/// `[0, 2 r_compact]` for each solution.
pub fn local_bound_report(solutions: &[GridFunction], r_compact: f64) -> Result<LocalBoundReport> {
    if solutions.is_empty() {
        return Err(Error::InvalidParameter("no solutions to report on".into()));
    }
    let mut sup_norms = Vec::with_capacity(solutions.len());
    let mut l2_norms = Vec::with_capacity(solutions.len());
    for u in solutions {
        sup_norms.push(u.restrict_to_radius(r_compact)?.sup_norm());
        let wide = u.grid().last_index_within(2.0 * r_compact).unwrap_or(0);
        let h = u.grid().spacing();
        let sq: f64 = u.values()[..=wide].iter().map(|v| v * v).sum();
        l2_norms.push((h * sq).sqrt());
    }
    let ratios: Vec<f64> = sup_norms
        .iter()
        .zip(&l2_norms)
        .map(|(s, l)| s / l.max(1.0))
        .collect();
    let slope = trend(&ratios);
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(LocalBoundReport {
        r_compact,
        c_loc: max(&sup_norms),
        max_l2: max(&l2_norms),
        max_ratio: max(&ratios),
        bounded: slope <= RATIO_SLOPE_TOL,
        slope,
        sup_norms,
        l2_norms,
        ratios,
    })
}

fn trend(y: &[f64]) -> f64 {
    let m = y.len();
    if m < 2 {
        return 0.0;
    }
    let xbar = (m - 1) as f64 / 2.0;
    let ybar = y.iter().sum::<f64>() / m as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dx = i as f64 - xbar;
        sxy += dx * (v - ybar);
        sxx += dx * dx;
    }
    sxy / sxx
}

#[derive(Debug, Clone)]
pub struct Exhaustion {
    pub radii: Vec<f64>,
    pub solutions: Vec<Solution>,
    /// `sup_{r <= radii[0]} |u_{k+1} - u_k|`.
    pub compact_trace: Vec<f64>,
    pub trace_nonincreasing: bool,
    /// Whether the last compact difference fell below the tolerance.
    pub settled: bool,
    pub local_bound: LocalBoundReport,
}

impl Exhaustion {
    pub fn last(&self) -> &Solution {
        self.solutions
            .last()
            .expect("exhaustion holds at least two solutions")
    }
}

/// Solves on every ball `B_{radii[k]}` (concurrently) and compares
/// consecutive solutions on the innermost ball.
pub fn exhaustion_solve(
    model: &RadialModel,
    target: &RadialProfile,
    radii: &[f64],
    u_minus: &GridFunction,
    opts: &SolveOptions,
) -> Result<Exhaustion> {
    if radii.len() < 2 {
        return Err(Error::InvalidParameter(
            "exhaustion needs at least two radii".into(),
        ));
    }
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(format!(
            "radii must be positive and nondecreasing, got {radii:?}"
        )));
    }
    let outer = u_minus.grid().r_max();
    if radii[radii.len() - 1] > outer * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "largest radius {:e} exceeds the grid ({outer:e})",
            radii[radii.len() - 1]
        )));
    }

    let results: Vec<Result<Solution>> = std::thread::scope(|scope| {
        let handles: Vec<_> = radii
            .iter()
            .map(|&r| scope.spawn(move || monotone_solve(model, target, r, u_minus, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let mut solutions = Vec::with_capacity(radii.len());
    for (index, res) in results.into_iter().enumerate() {
        solutions.push(res.map_err(|e| Error::Exhaustion {
            index,
            source: Box::new(e),
        })?);
    }

    let last_inner = u_minus
        .grid()
        .last_index_within(radii[0])
        .ok_or_else(|| Error::Domain(format!("no node inside radius {:e}", radii[0])))?;
    let compact_trace: Vec<f64> = solutions
        .windows(2)
        .map(|pair| {
            let (a, b) = (pair[0].u.values(), pair[1].u.values());
            (0..=last_inner).fold(0.0, |m: f64, i| m.max((b[i] - a[i]).abs()))
        })
        .collect();
    let trace_nonincreasing = compact_trace.windows(2).all(|w| w[1] <= w[0]);
    let settled = compact_trace.last().is_some_and(|&d| d < opts.tol);
    let family: Vec<GridFunction> = solutions.iter().map(|s| s.u.clone()).collect();
    let local_bound = local_bound_report(&family, radii[0])?;
    Ok(Exhaustion {
        radii: radii.to_vec(),
        solutions,
        compact_trace,
        trace_nonincreasing,
        settled,
        local_bound,
    })
}
