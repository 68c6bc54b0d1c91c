//! Fixtures shared by the benchmarks.

use ccl_core::{
    find_r0, glued_lower_solution, Barrier, Grid, HypothesisSet, RadialModel, RadialProfile,
};

/// Hyperbolic plane with `s = S = -1` on `B_radius`.
pub fn hyperbolic_plane(radius: f64, cells: usize) -> (RadialModel, RadialProfile, Grid) {
    let grid = Grid::ball(radius, cells).expect("valid grid");
    let model = RadialModel::hyperbolic(1, grid.r_max()).expect("valid model");
    (model, RadialProfile::constant(-1.0), grid)
}

pub fn plane_hypotheses() -> HypothesisSet {
    HypothesisSet::matched(1, 4.0, 0.0, 0.0, 1.0, 0.0, 0.5f64.sqrt(), 0.0)
}

/// Certified glued lower solution for [`hyperbolic_plane`].
pub fn plane_barrier(model: &RadialModel, target: &RadialProfile, grid: &Grid) -> Barrier {
    let r0 = find_r0(&plane_hypotheses(), 1.0, 1e4).expect("case 1 is feasible");
    glued_lower_solution(model, target, grid, 1.0, r0, 1e-8)
        .expect("glued barrier certifies")
        .0
}
