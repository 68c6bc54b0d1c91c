//! Lower and upper solutions: the logarithmic barrier, inner Dirichlet
//! pieces and their gluing, the constant-plus-bump construction and the
//! constant upper solution.

use serde::{Deserialize, Serialize};

use crate::elliptic::nonlinear_residual;
use crate::elliptic::DirichletOperator;
use crate::error::{Error, Result};
use crate::geometry::{chern_laplacian_radial, Grid, GridFunction, RadialModel};
use crate::profile::RadialProfile;

/// Tolerance on the value mismatch of two glued pieces.
pub const CONTINUITY_TOL: f64 = 1e-10;
/// Most negative derivative jump accepted at a gluing radius.
pub const JUMP_TOL: f64 = 1e-10;
/// Default residual tolerance when certifying a lower solution.
pub const LOWER_RESIDUAL_TOL: f64 = 1e-8;

/// Glue radii tried by [`glued_lower_solution`], as multiples of
/// `max(r0, r_D + h, 1)`.
pub const GLUE_MULTIPLIERS: [f64; 5] = [1.25, 1.5, 2.0, 3.0, 4.0];

const SAFETY: f64 = 1.25;
const MAX_INNER_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BarrierKind {
    LogBarrier,
    InnerDirichlet,
    Glued,
    ConstantBump,
    ConstantUpper,
    /// A constant supplied by the caller.
    Constant,
}

#[derive(Debug, Clone)]
pub struct Barrier {
    pub values: GridFunction,
    pub kind: BarrierKind,
    /// Offset in `-(n/2) log(r^2 + a)`.
    pub a: Option<f64>,
    pub r0: Option<f64>,
    pub r_glue: Option<f64>,
    pub weak_residual_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierMetadata {
    pub kind: BarrierKind,
    pub a: Option<f64>,
    pub r0: Option<f64>,
    pub r_glue: Option<f64>,
    pub weak_residual_ok: bool,
    pub min: f64,
    pub max: f64,
}

impl Barrier {
    pub fn new(values: GridFunction, kind: BarrierKind) -> Self {
        Self {
            values,
            kind,
            a: None,
            r0: None,
            r_glue: None,
            weak_residual_ok: false,
        }
    }

    pub fn metadata(&self) -> BarrierMetadata {
        BarrierMetadata {
            kind: self.kind,
            a: self.a,
            r0: self.r0,
            r_glue: self.r_glue,
            weak_residual_ok: self.weak_residual_ok,
            min: self.values.min(),
            max: self.values.max(),
        }
    }
}

/// `-(n/2) log(r^2 + a)` at every node.
pub fn log_barrier(n: usize, a: f64, grid: &Grid) -> Result<GridFunction> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "barrier offset must be positive, got {a}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "complex dimension must be >= 1".into(),
        ));
    }
    let half_n = 0.5 * n as f64;
    GridFunction::from_fn(*grid, |r| -half_n * (r * r + a).ln())
}

fn negative_target(target: &RadialProfile, grid: &Grid) -> Result<Vec<f64>> {
    let values = target.sample(grid);
    if let Some((r, v)) = grid.nodes().zip(&values).find(|(_, v)| **v >= 0.0) {
        return Err(Error::Sign {
            radius: r,
            reason: format!("target curvature {v:e} is not negative"),
        });
    }
    Ok(values)
}

/// Solves `L u = C` on the ball whose boundary is the last node of `grid`,
/// with `u = -(n/2) log(r_omega^2 + a)` there and
/// `C = (-min S) / (r_omega^2 + a)`.
pub fn inner_dirichlet_barrier(
    model: &RadialModel,
    target: &RadialProfile,
    grid: &Grid,
    a: f64,
) -> Result<GridFunction> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "barrier offset must be positive, got {a}"
        )));
    }
    let s_vals = negative_target(target, grid)?;
    let r_omega = grid.last_node();
    let min_s = s_vals.iter().copied().fold(f64::INFINITY, f64::min);
    let c = -min_s / (r_omega * r_omega + a);
    let boundary = -0.5 * model.n() as f64 * (r_omega * r_omega + a).ln();
    let op = DirichletOperator::new(model, *grid, 0.0)?;
    let u = GridFunction::new(*grid, op.solve(&vec![-c; grid.len()], boundary)?)?;
    let excess = u.max() - boundary;
    if excess > CONTINUITY_TOL * boundary.abs().max(1.0) {
        let i = u
            .values()
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(Error::Construction {
            radius: grid.node(i),
            reason: format!("interior maximum exceeds boundary value by {excess:e}"),
        });
    }
    Ok(u)
}

fn left_derivative(v: &[f64], h: f64) -> f64 {
    let j = v.len() - 1;
    (3.0 * v[j] - 4.0 * v[j - 1] + v[j - 2]) / (2.0 * h)
}

fn right_derivative(v: &[f64], j: usize, h: f64) -> f64 {
    (-3.0 * v[j] + 4.0 * v[j + 1] - v[j + 2]) / (2.0 * h)
}

/// Glues `u2` (on a sub-grid ending at `r_glue`) to `u1` beyond `r_glue`.
///
/// The one-sided derivative jump `u1'(r_glue+) - u2'(r_glue-)` must be
/// nonnegative; `weak_residual_ok` records that the kink condition holds and
/// is refined by [`certify_lower_solution`].
pub fn glue_barrier(u1: &GridFunction, u2: &GridFunction, r_glue: f64) -> Result<Barrier> {
    let g1 = *u1.grid();
    let g2 = *u2.grid();
    if !g1.shares_nodes_with(&g2) {
        return Err(Error::Domain("glued pieces live on different grids".into()));
    }
    let j = u2.len() - 1;
    if u2.len() < 3 || u1.len() < j + 3 {
        return Err(Error::Domain(format!(
            "gluing needs 3 nodes on each side, have {} inside and {} outside",
            u2.len(),
            u1.len().saturating_sub(j)
        )));
    }
    if (g2.last_node() - r_glue).abs() > 1e-9 * r_glue.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "gluing radius {r_glue:e} is not the last inner node {:e}",
            g2.last_node()
        )));
    }
    let (v1, v2) = (u1.values(), u2.values());
    let mismatch = (v1[j] - v2[j]).abs();
    if mismatch > CONTINUITY_TOL * v1[j].abs().max(1.0) {
        return Err(Error::Continuity { r_glue, mismatch });
    }
    let h = g1.spacing();
    let jump = right_derivative(v1, j, h) - left_derivative(v2, h);
    if jump < -JUMP_TOL {
        return Err(Error::InvalidGluing { r_glue, jump });
    }
    let mut values = v2.to_vec();
    values.extend_from_slice(&v1[j + 1..]);
    Ok(Barrier {
        values: GridFunction::new(g1, values)?,
        kind: BarrierKind::Glued,
        a: None,
        r0: None,
        r_glue: Some(r_glue),
        weak_residual_ok: true,
    })
}

/// Inner piece that bends down to meet `u1` with a convex kink.
///
/// Solves `L u2 = C` on `r <= r_D` and `L u2 = -gamma` on the annulus out to
/// node `j` of `u1`'s grid, with `u2 = u1` at node `j`. `gamma` makes the
/// derivative jump positive; `C` dominates `s^+ + |S| e^{(2/n) u2}` on the
/// inner disc.
pub fn matched_inner_barrier(
    model: &RadialModel,
    target: &RadialProfile,
    u1: &GridFunction,
    j: usize,
) -> Result<GridFunction> {
    let grid = u1.grid().truncated(j + 1)?;
    if u1.len() < j + 3 {
        return Err(Error::Domain(format!(
            "node {j} leaves no room outside the glue radius"
        )));
    }
    let s_vals = negative_target(target, &grid)?;
    let h = grid.spacing();
    let r_d = model.r_d();
    let op = DirichletOperator::new(model, grid, 0.0)?;
    let in_disc: Vec<bool> = grid.nodes().map(|r| r <= r_d).collect();
    let disc_rhs: Vec<f64> = in_disc
        .iter()
        .map(|&d| if d { -1.0 } else { 0.0 })
        .collect();
    let ring_rhs: Vec<f64> = in_disc
        .iter()
        .map(|&d| if d { 0.0 } else { -1.0 })
        .collect();
    let p_fn = op.solve(&disc_rhs, 0.0)?;
    let q_fn = op.solve(&ring_rhs, 0.0)?;
    let dp = left_derivative(&p_fn, h);
    let dq = left_derivative(&q_fn, h);
    if !(dq > 0.0) {
        return Err(Error::Construction {
            radius: grid.last_node(),
            reason: "annulus too thin to bend the inner piece".into(),
        });
    }
    let base = u1.values()[j];
    let du1 = right_derivative(u1.values(), j, h);
    let exponent = model.conformal_exponent();
    let demand = |u: &[f64]| {
        grid.nodes()
            .zip(u)
            .zip(&s_vals)
            .zip(&in_disc)
            .filter(|(_, &d)| d)
            .map(|(((r, &v), &s_t), _)| model.s(r).max(0.0) - s_t * (exponent * v).exp())
            .fold(0.0, f64::max)
    };
    let assemble = |c: f64| -> Vec<f64> {
        let gamma = (SAFETY * (c * dp - du1) / dq).max(0.0);
        p_fn.iter()
            .zip(&q_fn)
            .map(|(p, q)| base + c * p - gamma * q)
            .collect()
    };
    let flat = vec![base; grid.len()];
    let mut c = SAFETY * demand(&flat);
    for _ in 0..MAX_INNER_ITER {
        let u2 = assemble(c);
        let need = demand(&u2);
        if c >= need {
            return GridFunction::new(grid, u2);
        }
        c = SAFETY * need;
    }
    Err(Error::Construction {
        radius: r_d,
        reason: format!("inner constant did not settle after {MAX_INNER_ITER} updates"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerCertificate {
    pub max_residual: f64,
    pub worst_radius: f64,
    pub nodes_checked: usize,
    pub tol: f64,
    pub ok: bool,
}

/// Checks `-L u + s - S e^{(2/n) u} <= tol` at every node but the last and
/// folds the outcome into `barrier.weak_residual_ok`.
pub fn certify_lower_solution(
    model: &RadialModel,
    target: &RadialProfile,
    barrier: &mut Barrier,
    tol: f64,
) -> Result<LowerCertificate> {
    let res = nonlinear_residual(model, &barrier.values, target)?;
    let interior = res.len() - 1;
    let (worst, max_residual) =
        res.values()[..interior]
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
    let ok = max_residual <= tol;
    barrier.weak_residual_ok &= ok;
    Ok(LowerCertificate {
        max_residual,
        worst_radius: res.grid().node(worst),
        nodes_checked: interior,
        tol,
        ok,
    })
}

/// Log barrier glued to a [`matched_inner_barrier`], trying the radii in
/// [`GLUE_MULTIPLIERS`] until the glued function certifies as a lower
/// solution.
pub fn glued_lower_solution(
    model: &RadialModel,
    target: &RadialProfile,
    grid: &Grid,
    a: f64,
    r0: f64,
    tol: f64,
) -> Result<(Barrier, LowerCertificate)> {
    let u1 = log_barrier(model.n(), a, grid)?;
    let h = grid.spacing();
    let base = r0.max(model.r_d() + h).max(1.0);
    let mut last_err = None;
    for m in GLUE_MULTIPLIERS {
        let Some(j) = grid.last_index_within(m * base) else {
            continue;
        };
        if j + 3 > grid.len() || j < 16 {
            continue;
        }
        let attempt = matched_inner_barrier(model, target, &u1, j).and_then(|u2| {
            let mut b = glue_barrier(&u1, &u2, grid.node(j))?;
            b.a = Some(a);
            b.r0 = Some(r0);
            let cert = certify_lower_solution(model, target, &mut b, tol)?;
            if cert.ok {
                Ok((b, cert))
            } else {
                Err(Error::Construction {
                    radius: cert.worst_radius,
                    reason: format!(
                        "lower-solution residual {:e} above {tol:e}",
                        cert.max_residual
                    ),
                })
            }
        });
        match attempt {
            Ok(found) => return Ok(found),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Construction {
        radius: base,
        reason: "no admissible glue radius inside the grid".into(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpParams {
    pub b: f64,
    pub c: f64,
    pub delta: f64,
    pub r_d1: f64,
    pub r_d2: f64,
}

#[derive(Debug, Clone)]
pub struct BumpBarrier {
    pub phi: GridFunction,
    /// `e^{-(2/n) phi} (-L phi + s)`, the curvature after the bump.
    pub shifted_s: GridFunction,
    pub epsilon: f64,
    /// Constant lower solution for the bumped metric.
    pub a: f64,
    /// Rescaled `delta`, the value of `L phi` on the inner disc.
    pub delta: f64,
    /// `phi + a`, the lower solution for the original metric.
    pub barrier: Barrier,
}

impl BumpBarrier {
    pub fn shifted_profile(&self) -> Result<RadialProfile> {
        RadialProfile::tabulated(self.shifted_s.nodes_and_values().collect())
    }
}

fn smoothstep_cutoff(r: f64, r1: f64, r2: f64) -> f64 {
    let t = ((r - r1) / (r2 - r1)).clamp(0.0, 1.0);
    1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// Conformal bump `phi` making the curvature uniformly negative, and the
/// constant `a` with `phi + a` a lower solution.
pub fn constant_bump_barrier(
    model: &RadialModel,
    target: &RadialProfile,
    grid: &Grid,
    params: &BumpParams,
) -> Result<BumpBarrier> {
    let BumpParams {
        b,
        c,
        delta,
        r_d1,
        r_d2,
    } = *params;
    if !(b > 0.0 && c > 0.0 && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need b, c, delta > 0, got {b}, {c}, {delta}"
        )));
    }
    model.check_grid(grid)?;
    let n = model.n() as f64;
    let exponent = model.conformal_exponent();
    let b2 = b * b;
    let r_d = model.r_d();
    for r in grid.nodes() {
        let s = model.s(r);
        if s > 0.0 || (r >= r_d && s > -b2) {
            return Err(Error::Sign {
                radius: r,
                reason: format!(
                    "background curvature {s:e} violates s <= 0 and s <= -b^2 outside D"
                ),
            });
        }
    }

    let (phi, lphi, delta_scaled, epsilon) = if r_d == 0.0 {
        let zero = GridFunction::constant(*grid, 0.0)?;
        (zero.clone(), zero, delta, b2)
    } else {
        let last = grid.last_node() - 3.0 * grid.spacing();
        if !(r_d < r_d1 && r_d1 < r_d2 && r_d2 <= last) {
            return Err(Error::InvalidParameter(format!(
                "need r_D < r_D1 < r_D2 <= {last:e}, got {r_d}, {r_d1}, {r_d2}"
            )));
        }
        let j2 = grid.last_index_within(r_d2).unwrap_or(0);
        let inner = grid.truncated(j2 + 1)?;
        let op = DirichletOperator::new(model, inner, 0.0)?;
        let phi0 = op.solve(&vec![-delta; inner.len()], delta)?;
        let mut phi1 = vec![0.0; grid.len()];
        for (i, v) in phi0.iter().enumerate() {
            phi1[i] = smoothstep_cutoff(grid.node(i), r_d1, r_d2) * v;
        }
        let phi1 = GridFunction::new(*grid, phi1)?;
        let l1 = chern_laplacian_radial(model, &phi1)?;
        let dip = (-l1.min()).max(0.0);
        let scale = if dip > 0.0 { b2 / (2.0 * dip) } else { 1.0 };
        let phi = phi1.map(|_, v| scale * v)?;
        let lphi = l1.map(|_, v| scale * v)?;
        let delta_scaled = scale * delta;
        let epsilon = (-exponent * phi.sup_norm()).exp() * delta_scaled.min(0.5 * b2);
        (phi, lphi, delta_scaled, epsilon)
    };

    if let Some((r, v)) = lphi.nodes_and_values().find(|(_, v)| *v < -0.5 * b2 - 1e-8) {
        return Err(Error::Construction {
            radius: r,
            reason: format!("cutoff drives L phi to {v:e} below -b^2/2"),
        });
    }
    let shifted: Vec<f64> = grid
        .nodes()
        .zip(phi.values())
        .zip(lphi.values())
        .map(|((r, &p), &l)| (-exponent * p).exp() * (-l + model.s(r)))
        .collect();
    if let Some((r, v)) = grid
        .nodes()
        .zip(&shifted)
        .find(|(_, v)| **v > -epsilon + 1e-8)
    {
        return Err(Error::Construction {
            radius: r,
            reason: format!(
                "bumped curvature {v:e} is not below -epsilon = {:e}",
                -epsilon
            ),
        });
    }
    let a = 0.5 * n * (epsilon / (c * c)).ln() - 1.0;
    let lift = (exponent * a).exp();
    let weak_residual_ok = grid
        .nodes()
        .zip(&shifted)
        .all(|(r, &s1)| s1 - target.eval(r) * lift <= 0.0);
    let mut barrier = Barrier::new(phi.map(|_, v| v + a)?, BarrierKind::ConstantBump);
    barrier.weak_residual_ok = weak_residual_ok;
    Ok(BumpBarrier {
        phi,
        shifted_s: GridFunction::new(*grid, shifted)?,
        epsilon,
        a,
        delta: delta_scaled,
        barrier,
    })
}

/// Constant upper solution `b_k = max{(n/2) log(C_k / C'_k), max u_-} + 1`
/// on the nodes of `u_minus` with `r <= radius`, where
/// `C_k = max(-min s, 0) + 1` and `C'_k = -max S`.
pub fn upper_constant(
    model: &RadialModel,
    target: &RadialProfile,
    radius: f64,
    u_minus: &GridFunction,
) -> Result<f64> {
    let ball = u_minus.restrict_to_radius(radius)?;
    let (mut min_s, mut max_target) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst = 0.0;
    for r in ball.grid().nodes() {
        min_s = min_s.min(model.s(r));
        let t = target.eval(r);
        if t > max_target {
            max_target = t;
            worst = r;
        }
    }
    if max_target >= 0.0 {
        return Err(Error::Sign {
            radius: worst,
            reason: format!("target curvature reaches {max_target:e}"),
        });
    }
    let c_k = (-min_s).max(0.0) + 1.0;
    let c_k_prime = -max_target;
    let n = model.n() as f64;
    Ok((0.5 * n * (c_k / c_k_prime).ln()).max(ball.max()) + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_barrier_values() {
        let g = Grid::new(4.0, 4).unwrap(); // nodes 0.5, 1.5, 2.5, 3.5
        let u = log_barrier(1, 1.0, &g).unwrap();
        assert!((u.values()[0] + 0.5 * 1.25f64.ln()).abs() < 1e-15);
        assert!(log_barrier(2, 0.0, &g).is_err());
    }

    #[test]
    fn inner_barrier_constant_and_maximum() {
        let m = RadialModel::euclidean(1, 1.0, RadialProfile::constant(-1.0)).unwrap();
        let g = Grid::ball(1.0, 400).unwrap();
        let u = inner_dirichlet_barrier(&m, &RadialProfile::constant(-1.0), &g, 1.0).unwrap();
        let boundary = -0.5 * 2f64.ln();
        assert!((u.max() - boundary).abs() < 1e-10);
        let err = u
            .nodes_and_values()
            .map(|(r, v)| (v - (boundary + 0.125 * (r * r - 1.0))).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "err {err}");
    }

    #[test]
    fn inner_barrier_needs_negative_target() {
        let m = RadialModel::hyperbolic(1, 2.0).unwrap();
        let g = Grid::ball(2.0, 64).unwrap();
        assert!(matches!(
            inner_dirichlet_barrier(&m, &RadialProfile::constant(0.0), &g, 1.0),
            Err(Error::Sign { .. })
        ));
    }

    #[test]
    fn gluing_identical_quadratics_has_no_kink() {
        let g = Grid::new(4.0, 40).unwrap();
        let u = GridFunction::from_fn(g, |r| 1.0 - r * r).unwrap();
        let inner = u.restrict(20).unwrap();
        let b = glue_barrier(&u, &inner, g.node(19)).unwrap();
        assert!(b.weak_residual_ok);
        assert_eq!(b.values.values(), u.values());
    }

    #[test]
    fn steeper_inner_piece_is_rejected() {
        let g = Grid::new(4.0, 40).unwrap();
        let u1 = GridFunction::from_fn(g, |r| -r).unwrap();
        let u2 = GridFunction::from_fn(g, |r| 2.0 * r - 3.0 * g.node(19))
            .unwrap()
            .restrict(20)
            .unwrap();
        assert!(matches!(
            glue_barrier(&u1, &u2, g.node(19)),
            Err(Error::InvalidGluing { .. })
        ));
        let shifted = u2.map(|_, v| v + 1.0).unwrap();
        assert!(matches!(
            glue_barrier(&u1, &shifted, g.node(19)),
            Err(Error::Continuity { .. })
        ));
    }

    #[test]
    fn literal_inner_piece_leaves_a_concave_kink() {
        let m = RadialModel::hyperbolic(1, 20.0).unwrap();
        let target = RadialProfile::constant(-1.0);
        let g = Grid::new(20.0, 2000).unwrap();
        let u1 = log_barrier(1, 1.0, &g).unwrap();
        let j = g.last_index_within(5.0).unwrap();
        let u2 = inner_dirichlet_barrier(&m, &target, &g.truncated(j + 1).unwrap(), 1.0).unwrap();
        assert!(matches!(
            glue_barrier(&u1, &u2, g.node(j)),
            Err(Error::InvalidGluing { .. })
        ));
    }

    #[test]
    fn matched_inner_piece_glues_and_certifies() {
        let m = RadialModel::hyperbolic(1, 20.0).unwrap();
        let target = RadialProfile::constant(-1.0);
        let g = Grid::new(20.0, 2000).unwrap();
        let (b, cert) = glued_lower_solution(&m, &target, &g, 1.0, 1.0, 1e-8).unwrap();
        assert!(cert.ok && b.weak_residual_ok);
        assert_eq!(b.kind, BarrierKind::Glued);
        assert!(b.r_glue.unwrap() > 1.0);
    }

    #[test]
    fn bump_without_defect_is_constant() {
        let m = RadialModel::hyperbolic(1, 10.0).unwrap();
        let g = Grid::new(10.0, 200).unwrap();
        let p = BumpParams {
            b: 1.0,
            c: 1.0,
            delta: 1.0,
            r_d1: 1.0,
            r_d2: 2.0,
        };
        let bump = constant_bump_barrier(&m, &RadialProfile::constant(-1.0), &g, &p).unwrap();
        assert!((bump.a + 1.0).abs() < 1e-15);
        assert_eq!(bump.epsilon, 1.0);
        assert!(bump.barrier.weak_residual_ok);
        assert!(bump.barrier.values.values().iter().all(|&v| v == -1.0));
    }

    #[test]
    fn bump_over_flat_core() {
        let m = RadialModel::hyperbolic(1, 10.0)
            .unwrap()
            .with_curvature(
                RadialProfile::from_fn("flat core", |r| -(r * r).min(1.0)),
                1.0,
            )
            .unwrap();
        let g = Grid::new(10.0, 1000).unwrap();
        let p = BumpParams {
            b: 1.0,
            c: 1.0,
            delta: 1.0,
            r_d1: 1.5,
            r_d2: 2.5,
        };
        let bump = constant_bump_barrier(&m, &RadialProfile::constant(-1.0), &g, &p).unwrap();
        assert!(bump.epsilon > 0.0);
        assert!(bump
            .shifted_s
            .values()
            .iter()
            .all(|&s| s <= -bump.epsilon + 1e-8));
        assert!(bump.barrier.weak_residual_ok);
    }

    #[test]
    fn bump_rejects_positive_background() {
        let m = RadialModel::hyperbolic(1, 10.0)
            .unwrap()
            .with_curvature(RadialProfile::constant(0.5), 1.0)
            .unwrap();
        let g = Grid::new(10.0, 200).unwrap();
        let p = BumpParams {
            b: 1.0,
            c: 1.0,
            delta: 1.0,
            r_d1: 1.5,
            r_d2: 2.5,
        };
        assert!(matches!(
            constant_bump_barrier(&m, &RadialProfile::constant(-1.0), &g, &p),
            Err(Error::Sign { .. })
        ));
    }

    #[test]
    fn upper_constant_examples() {
        let m = RadialModel::hyperbolic(1, 10.0).unwrap();
        let g = Grid::new(10.0, 100).unwrap();
        let low = GridFunction::constant(g, -1.0).unwrap();
        let bk = upper_constant(&m, &RadialProfile::constant(-1.0), 8.0, &low).unwrap();
        assert!((bk - (0.5 * 2f64.ln() + 1.0)).abs() < 1e-15);

        let m2 = RadialModel::hyperbolic(2, 10.0).unwrap();
        let e = std::f64::consts::E;
        let bk2 = upper_constant(&m2, &RadialProfile::constant(-e), 8.0, &low).unwrap();
        assert!((bk2 - ((2.0 / e).ln().max(-1.0) + 1.0)).abs() < 1e-15);

        let high = GridFunction::constant(g, 5.0).unwrap();
        assert_eq!(
            upper_constant(&m, &RadialProfile::constant(-1.0), 8.0, &high).unwrap(),
            6.0
        );

        assert!(matches!(
            upper_constant(&m, &RadialProfile::constant(0.0), 8.0, &low),
            Err(Error::Sign { .. })
        ));
    }
}
