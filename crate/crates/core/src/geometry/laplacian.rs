use crate::error::{Error, Result};

use super::{GridFunction, RadialModel};

/// Second-order finite-difference Chern Laplacian of a radial function.
///
/// Interior nodes use centered differences. The first node reflects across
/// the pole (ghost value equal to the first node value, i.e. `u'(0) = 0`).
/// The last node uses one-sided second-order differences.
pub fn chern_laplacian_radial(model: &RadialModel, u: &GridFunction) -> Result<GridFunction> {
    let grid = *u.grid();
    model.check_grid(&grid)?;
    let n = grid.len();
    if n < 4 {
        return Err(Error::Domain(format!(
            "need at least 4 nodes for the radial Laplacian, got {n}"
        )));
    }
    let h = grid.spacing();
    let (inv_h2, inv_2h) = (1.0 / (h * h), 0.5 / h);
    let v = u.values();
    let mut out = Vec::with_capacity(n);

    let d0 = model.effective_drift(grid.node(0));
    let jump = v[1] - v[0];
    out.push(jump * inv_h2 + d0 * jump * inv_2h);

    for i in 1..n - 1 {
        let d = model.effective_drift(grid.node(i));
        let second = ((v[i + 1] - v[i]) - (v[i] - v[i - 1])) * inv_h2;
        let first = (v[i + 1] - v[i - 1]) * inv_2h;
        out.push(second + d * first);
    }

    let k = n - 1;
    let d = model.effective_drift(grid.node(k));
    let (d1, d2, d3) = (v[k] - v[k - 1], v[k - 1] - v[k - 2], v[k - 2] - v[k - 3]);
    let second = (2.0 * d1 - 3.0 * d2 + d3) * inv_h2;
    let first = (3.0 * d1 - d2) * inv_2h;
    out.push(second + d * first);

    GridFunction::new(grid, out)
}

/// Coefficients `(lower, centre, upper)` such that the discrete Laplacian at
/// an interior node `i` is `lower u[i-1] + centre u[i] + upper u[i+1]`; at
/// `i = 0` the ghost reflection is folded into `centre` and `lower = 0`.
#[inline]
pub(crate) fn stencil_row(i: usize, h: f64, drift: f64) -> (f64, f64, f64) {
    let (inv_h2, half) = (1.0 / (h * h), 0.5 * drift / h);
    if i == 0 {
        (0.0, -(inv_h2 + half), inv_h2 + half)
    } else {
        (inv_h2 - half, -2.0 * inv_h2, inv_h2 + half)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Grid;
    use crate::profile::RadialProfile;

    #[test]
    fn constants_are_annihilated_exactly() {
        let m = RadialModel::hyperbolic(2, 10.0).unwrap();
        let g = Grid::new(10.0, 64).unwrap();
        let u = GridFunction::constant(g, 3.7).unwrap();
        let lu = chern_laplacian_radial(&m, &u).unwrap();
        assert!(lu.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn quadratic_on_flat_space() {
        for n in 1..=3 {
            let m = RadialModel::euclidean(n, 2.0, RadialProfile::constant(0.0)).unwrap();
            let g = Grid::new(2.0, 40).unwrap();
            let u = GridFunction::from_fn(g, |r| r * r).unwrap();
            let lu = chern_laplacian_radial(&m, &u).unwrap();
            for (&x, r) in lu.values().iter().zip(g.nodes()) {
                assert!((x - 4.0 * n as f64).abs() < 1e-9, "n={n} r={r} Lu={x}");
            }
        }
    }

    #[test]
    fn cosh_on_hyperbolic_plane() {
        let m = RadialModel::hyperbolic(1, 4.0).unwrap();
        let mut errs = Vec::new();
        for cells in [200, 400] {
            let g = Grid::new(4.0, cells).unwrap();
            let u = GridFunction::from_fn(g, f64::cosh).unwrap();
            let lu = chern_laplacian_radial(&m, &u).unwrap();
            let err = lu
                .nodes_and_values()
                .map(|(r, x)| (x - 2.0 * r.cosh()).abs())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[0] < 0.05);
        let ratio = errs[0] / errs[1];
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn lee_drift_enters_with_minus_sign() {
        let m = RadialModel::euclidean(1, 2.0, RadialProfile::constant(0.0))
            .unwrap()
            .with_lee_drift(RadialProfile::constant(1.0))
            .unwrap();
        let g = Grid::new(2.0, 40).unwrap();
        let u = GridFunction::from_fn(g, |r| r * r).unwrap();
        let lu = chern_laplacian_radial(&m, &u).unwrap();
        // 4 - 2r from the extra -u' term
        for (r, x) in lu.nodes_and_values() {
            assert!((x - (4.0 - 2.0 * r)).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_beyond_model_is_rejected() {
        let m = RadialModel::hyperbolic(1, 1.0).unwrap();
        let u = GridFunction::constant(Grid::new(2.0, 8).unwrap(), 0.0).unwrap();
        assert!(matches!(
            chern_laplacian_radial(&m, &u),
            Err(Error::Domain(_))
        ));
    }
}
