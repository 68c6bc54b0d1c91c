//! Linear radial kernel `(-L + c) u = f` with a symmetric pole and a
//! Dirichlet outer node, plus the nonlinear residual of the curvature
//! equation.

mod tridiag;

pub use tridiag::{relative_residual, Factorization, Tridiagonal};

use crate::error::{Error, Result};
use crate::geometry::{chern_laplacian_radial, stencil_row, Grid, GridFunction, RadialModel};
use crate::profile::RadialProfile;

/// Smallest grid accepted by the linear solver.
pub const MIN_CELLS: usize = 16;

/// Bound on the relative residual of every discrete linear solve.
pub const LINEAR_RTOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LinearRadialProblem {
    pub model: RadialModel,
    pub c_coeff: f64,
    /// Right side `f`; its grid fixes the ball, whose radius is the last node.
    pub rhs: GridFunction,
    pub boundary_value: f64,
}

/// `-L + c` on a grid, with the last row replaced by the Dirichlet
/// condition. Factored once and reused across right sides.
#[derive(Debug, Clone)]
pub struct DirichletOperator {
    grid: Grid,
    c_coeff: f64,
    matrix: Tridiagonal,
    factor: Factorization,
}

impl DirichletOperator {
    pub fn new(model: &RadialModel, grid: Grid, c_coeff: f64) -> Result<Self> {
        model.check_grid(&grid)?;
        if grid.len() < MIN_CELLS {
            return Err(Error::Domain(format!(
                "linear solve needs at least {MIN_CELLS} nodes, got {}",
                grid.len()
            )));
        }
        if !(c_coeff >= 0.0 && c_coeff.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "zeroth-order coefficient must be nonnegative, got {c_coeff}"
            )));
        }
        let n = grid.len();
        let h = grid.spacing();
        let mut lower = vec![0.0; n - 1];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n - 1];
        for i in 0..n - 1 {
            let (lo, mid, up) = stencil_row(i, h, model.effective_drift(grid.node(i)));
            if i > 0 {
                lower[i - 1] = -lo;
            }
            diag[i] = c_coeff - mid;
            upper[i] = -up;
        }
        diag[n - 1] = 1.0;
        let matrix = Tridiagonal::new(lower, diag, upper)?;
        let factor = matrix.factor()?;
        Ok(Self {
            grid,
            c_coeff,
            matrix,
            factor,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn c_coeff(&self) -> f64 {
        self.c_coeff
    }

    pub fn is_pivoted(&self) -> bool {
        self.factor.is_pivoted()
    }

    /// Solves with right side `rhs` on the interior rows and `boundary` on
    /// the last node.
    pub fn solve(&self, rhs: &[f64], boundary: f64) -> Result<Vec<f64>> {
        let n = self.grid.len();
        if rhs.len() != n {
            return Err(Error::Domain(format!(
                "right side has {} entries, operator has {n}",
                rhs.len()
            )));
        }
        let mut b = rhs.to_vec();
        b[n - 1] = boundary;
        let mut x = b.clone();
        self.factor.solve_in_place(&mut x);
        let mut res = relative_residual(&self.matrix, &x, &b);
        if res > LINEAR_RTOL {
            // one step of iterative refinement
            let mut ax = vec![0.0; n];
            self.matrix.apply(&x, &mut ax);
            let mut corr: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
            self.factor.solve_in_place(&mut corr);
            for (xi, ci) in x.iter_mut().zip(&corr) {
                *xi += ci;
            }
            res = relative_residual(&self.matrix, &x, &b);
        }
        if !(res <= LINEAR_RTOL) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem {
                row: n - 1,
                pivot: res,
            });
        }
        Ok(x)
    }
}

/// Solves `(-L + c) u = f` on the ball given by the right side's grid.
pub fn solve_linear(problem: &LinearRadialProblem) -> Result<GridFunction> {
    let grid = *problem.rhs.grid();
    let op = DirichletOperator::new(&problem.model, grid, problem.c_coeff)?;
    let x = op.solve(problem.rhs.values(), problem.boundary_value)?;
    GridFunction::new(grid, x)
}

/// `-L u + s - S e^{(2/n) u}` at every node.
pub fn nonlinear_residual(
    model: &RadialModel,
    u: &GridFunction,
    target: &RadialProfile,
) -> Result<GridFunction> {
    let lu = chern_laplacian_radial(model, u)?;
    let p = model.conformal_exponent();
    let values = u
        .nodes_and_values()
        .zip(lu.values())
        .map(|((r, v), &l)| -l + model.s(r) - target.eval(r) * (p * v).exp())
        .collect();
    GridFunction::new(*u.grid(), values)
}

/// Chern scalar curvature of `e^{(2/n) u} omega`: `e^{-(2/n) u} (-L u + s)`.
pub fn achieved_curvature(model: &RadialModel, u: &GridFunction) -> Result<GridFunction> {
    let lu = chern_laplacian_radial(model, u)?;
    let p = model.conformal_exponent();
    let values = u
        .nodes_and_values()
        .zip(lu.values())
        .map(|((r, v), &l)| (-p * v).exp() * (-l + model.s(r)))
        .collect();
    GridFunction::new(*u.grid(), values)
}
