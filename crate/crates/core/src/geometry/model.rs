use crate::error::{Error, Result};
use crate::profile::RadialProfile;

use super::Grid;

/// A Hermitian manifold with a pole, reduced to the data that act on radial
/// functions.
///
/// The Chern Laplacian of a radial `u` is `u'' + (d(r) - tau(r)) u'`, where
/// `d` is the Laplace-Beltrami drift and `tau` the radial Lee-form component
/// (zero for balanced metrics).
#[derive(Debug, Clone)]
pub struct RadialModel {
    n: usize,
    drift: RadialProfile,
    lee_drift: RadialProfile,
    s_profile: RadialProfile,
    r_max: f64,
    r_d: f64,
}

impl RadialModel {
    pub fn new(
        n: usize,
        drift: RadialProfile,
        lee_drift: RadialProfile,
        s_profile: RadialProfile,
        r_max: f64,
        r_d: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "complex dimension must be >= 1".into(),
            ));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "model radius must be positive, got {r_max}"
            )));
        }
        if !(r_d >= 0.0 && r_d < r_max) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= r_D < r_max, got r_D = {r_d}, r_max = {r_max}"
            )));
        }
        Ok(Self {
            n,
            drift,
            lee_drift,
            s_profile,
            r_max,
            r_d,
        })
    }

    /// Constant curvature -1 space form in geodesic polar coordinates,
    /// `d(r) = (2n - 1) coth r`, balanced, with `s = -1`.
    pub fn hyperbolic(n: usize, r_max: f64) -> Result<Self> {
        let m = check_dimension(n)?;
        Self::new(
            n,
            RadialProfile::from_fn(format!("({m}) coth r"), move |r| m / r.tanh()),
            RadialProfile::constant(0.0),
            RadialProfile::constant(-1.0),
            r_max,
            0.0,
        )
    }

    /// Flat space, `d(r) = (2n - 1) / r`.
    pub fn euclidean(n: usize, r_max: f64, s_profile: RadialProfile) -> Result<Self> {
        let m = check_dimension(n)?;
        Self::new(
            n,
            RadialProfile::from_fn(format!("({m}) / r"), move |r| m / r),
            RadialProfile::constant(0.0),
            s_profile,
            r_max,
            0.0,
        )
    }

    /// Model given by a table of `(r, d, tau, s)` rows, interpolated linearly.
    pub fn tabulated(n: usize, rows: &[[f64; 4]], r_max: f64, r_d: f64) -> Result<Self> {
        let column = |k: usize| -> Result<RadialProfile> {
            RadialProfile::tabulated(rows.iter().map(|row| (row[0], row[k])).collect())
        };
        Self::new(n, column(1)?, column(2)?, column(3)?, r_max, r_d)
    }

    /// Replaces the background curvature and the radius of the compact set
    /// outside which its decay bound holds.
    pub fn with_curvature(self, s_profile: RadialProfile, r_d: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.drift,
            self.lee_drift,
            s_profile,
            self.r_max,
            r_d,
        )
    }

    pub fn with_lee_drift(self, lee_drift: RadialProfile) -> Result<Self> {
        Self::new(
            self.n,
            self.drift,
            lee_drift,
            self.s_profile,
            self.r_max,
            self.r_d,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2 / n`, the exponent of the conformal factor.
    pub fn conformal_exponent(&self) -> f64 {
        2.0 / self.n as f64
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn r_d(&self) -> f64 {
        self.r_d
    }

    pub fn drift(&self, r: f64) -> f64 {
        self.drift.eval(r)
    }

    pub fn lee_drift(&self, r: f64) -> f64 {
        self.lee_drift.eval(r)
    }

    /// First-order coefficient of the Chern Laplacian, `d - tau`.
    pub fn effective_drift(&self, r: f64) -> f64 {
        self.drift.eval(r) - self.lee_drift.eval(r)
    }

    pub fn s(&self, r: f64) -> f64 {
        self.s_profile.eval(r)
    }

    pub fn s_profile(&self) -> &RadialProfile {
        &self.s_profile
    }

    /// `|r d(r) - (2n - 1)|`; small near the pole for a smooth model.
    pub fn pole_defect(&self, r: f64) -> f64 {
        (r * self.drift(r) - (2 * self.n - 1) as f64).abs()
    }

    /// Whether `s <= 0` at every node of `grid`.
    pub fn has_nonpositive_curvature(&self, grid: &Grid) -> bool {
        grid.nodes().all(|r| self.s(r) <= 0.0)
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if grid.last_node() > self.r_max * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "grid node {:e} lies beyond model radius {:e}",
                grid.last_node(),
                self.r_max
            )));
        }
        Ok(())
    }
}

fn check_dimension(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "complex dimension must be >= 1".into(),
        ));
    }
    Ok((2 * n - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_drift_is_coth() {
        let m = RadialModel::hyperbolic(1, 10.0).unwrap();
        // coth 1 = (e^2 + 1) / (e^2 - 1), evaluated independently
        let e2 = std::f64::consts::E.powi(2);
        assert!((m.drift(1.0) - (e2 + 1.0) / (e2 - 1.0)).abs() < 1e-14);
        assert!((m.drift(1.0) - 1.313_035_285_499_331).abs() < 1e-12);
        assert_eq!(m.s(5.0), -1.0);
        assert_eq!(m.lee_drift(3.0), 0.0);
    }

    #[test]
    fn hyperbolic_is_pole_regular() {
        let m = RadialModel::hyperbolic(2, 10.0).unwrap();
        let g = Grid::new(10.0, 8192).unwrap();
        assert!(m.pole_defect(g.node(0)) < 1e-6);
        assert!((1e-4 * m.drift(1e-4) - 3.0).abs() < 1e-7);
    }

    #[test]
    fn euclidean_drift() {
        let m = RadialModel::euclidean(1, 5.0, RadialProfile::constant(0.0)).unwrap();
        assert_eq!(m.drift(2.0), 0.5);
        let m3 = RadialModel::euclidean(3, 5.0, RadialProfile::constant(0.0)).unwrap();
        assert_eq!(m3.drift(1.0), 5.0);
        assert_eq!(m3.pole_defect(0.3), 0.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(RadialModel::hyperbolic(0, 1.0).is_err());
        assert!(RadialModel::hyperbolic(1, 0.0).is_err());
        assert!(RadialModel::euclidean(1, -1.0, RadialProfile::constant(0.0)).is_err());
        let m = RadialModel::hyperbolic(1, 2.0).unwrap();
        assert!(m
            .with_curvature(RadialProfile::constant(-1.0), 2.0)
            .is_err());
    }

    #[test]
    fn tabulated_model() {
        let rows = [[0.0, 1.0, 0.5, -1.0], [2.0, 3.0, 0.5, -3.0]];
        let m = RadialModel::tabulated(1, &rows, 2.0, 0.0).unwrap();
        assert_eq!(m.drift(1.0), 2.0);
        assert_eq!(m.effective_drift(1.0), 1.5);
        assert_eq!(m.s(1.0), -2.0);
    }

    #[test]
    fn sign_hypothesis_check() {
        let g = Grid::new(3.0, 30).unwrap();
        let m = RadialModel::hyperbolic(1, 3.0).unwrap();
        assert!(m.has_nonpositive_curvature(&g));
        let flat = RadialModel::euclidean(1, 3.0, RadialProfile::constant(0.0)).unwrap();
        assert!(flat.has_nonpositive_curvature(&g));
        let bad = m.with_curvature(RadialProfile::constant(0.1), 0.0).unwrap();
        assert!(!bad.has_nonpositive_curvature(&g));
    }
}
