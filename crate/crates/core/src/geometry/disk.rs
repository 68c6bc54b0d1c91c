//! Discrete Chern scalar curvature of a conformally flat metric on the unit
//! disk, used to calibrate the curvature normalization in complex dimension
//! one.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Polar grid on the disk of radius `rho_max < 1`: rings at `(i + 1/2) h_r`,
/// rays at `2 pi j / n_phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_phi: usize,
    pub rho_max: f64,
}

impl PolarGrid {
    pub fn new(n_r: usize, n_phi: usize, rho_max: f64) -> Result<Self> {
        if n_r < 3 || n_phi < 4 || !n_phi.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "polar grid needs n_r >= 3 and even n_phi >= 4, got {n_r} x {n_phi}"
            )));
        }
        if !(rho_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "polar grid radius must be positive, got {rho_max}"
            )));
        }
        if rho_max >= 1.0 {
            return Err(Error::SingularMetric(format!(
                "polar grid reaches |z| = {rho_max}, the metric blows up at |z| = 1"
            )));
        }
        Ok(Self {
            n_r,
            n_phi,
            rho_max,
        })
    }

    pub fn dr(&self) -> f64 {
        self.rho_max / self.n_r as f64
    }

    pub fn dphi(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr()
    }

    pub fn angle(&self, j: usize) -> f64 {
        j as f64 * self.dphi()
    }
}

/// Conformal exponent `f` of the metric `e^{2f} |dz|^2`, sampled ring by ring
/// (`values[i * n_phi + j]`).
#[derive(Debug, Clone)]
pub struct DiskField {
    grid: PolarGrid,
    values: Vec<f64>,
}

impl DiskField {
    pub fn new(grid: PolarGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_r * grid.n_phi {
            return Err(Error::Domain(format!(
                "expected {} samples, got {}",
                grid.n_r * grid.n_phi,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularMetric(
                "non-finite conformal exponent".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: PolarGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.n_r * grid.n_phi);
        for i in 0..grid.n_r {
            let r = grid.radius(i);
            for j in 0..grid.n_phi {
                let phi = grid.angle(j);
                values.push(f(r * phi.cos(), r * phi.sin()));
            }
        }
        Self::new(grid, values)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_phi + j % self.grid.n_phi]
    }
}

/// Angular mean and spread of the curvature on each ring.
#[derive(Debug, Clone)]
pub struct DiskCurvatureProfile {
    pub radii: Vec<f64>,
    pub mean: Vec<f64>,
    pub std_dev: Vec<f64>,
}

impl DiskCurvatureProfile {
    /// Largest `std / |mean|` over rings with radius `<= r_cut`.
    pub fn max_relative_spread(&self, r_cut: f64) -> f64 {
        self.rings_within(r_cut)
            .map(|k| self.std_dev[k] / self.mean[k].abs())
            .fold(0.0, f64::max)
    }

    /// Average of the ring means over rings with radius `<= r_cut`.
    pub fn mean_within(&self, r_cut: f64) -> f64 {
        let (sum, count) = self
            .rings_within(r_cut)
            .fold((0.0, 0usize), |(s, c), k| (s + self.mean[k], c + 1));
        sum / count as f64
    }

    fn rings_within(&self, r_cut: f64) -> impl Iterator<Item = usize> + '_ {
        (0..self.radii.len()).filter(move |&k| self.radii[k] <= r_cut)
    }
}

/// `tr_omega (i dbar d log omega)` for `omega = (i/2) e^{2f} dz ^ dzbar`.
///
/// The flat Laplacian of `log(volume density) = 2f` uses the five-point polar
/// stencil; the innermost ring borrows its inward neighbour from the opposite
/// ray. The outermost ring has no outer neighbour and is not reported.
pub fn chern_scalar_disk(field: &DiskField) -> Result<DiskCurvatureProfile> {
    let g = field.grid;
    let (dr, dphi) = (g.dr(), g.dphi());
    let half_turn = g.n_phi / 2;
    let rings = g.n_r - 1;
    let mut profile = DiskCurvatureProfile {
        radii: Vec::with_capacity(rings),
        mean: Vec::with_capacity(rings),
        std_dev: Vec::with_capacity(rings),
    };
    let mut ring = vec![0.0; g.n_phi];
    for i in 0..rings {
        let r = g.radius(i);
        for (j, slot) in ring.iter_mut().enumerate() {
            let centre = 2.0 * field.at(i, j);
            let outer = 2.0 * field.at(i + 1, j);
            let inner = if i == 0 {
                2.0 * field.at(0, j + half_turn)
            } else {
                2.0 * field.at(i - 1, j)
            };
            let next = 2.0 * field.at(i, j + 1);
            let prev = 2.0 * field.at(i, j + g.n_phi - 1);
            let flat_laplacian = (outer - 2.0 * centre + inner) / (dr * dr)
                + (outer - inner) / (2.0 * dr * r)
                + (next - 2.0 * centre + prev) / (dphi * dphi * r * r);
            // i dbar d (log lambda) = -(i/4) Lap(log lambda) dz ^ dzbar,
            // and tr_omega (i a dz ^ dzbar) = 2a / lambda.
            let coefficient = -0.25 * flat_laplacian;
            let density = centre.exp();
            *slot = 2.0 * coefficient / density;
        }
        let mean = ring.iter().sum::<f64>() / g.n_phi as f64;
        let var = ring.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / g.n_phi as f64;
        profile.radii.push(r);
        profile.mean.push(mean);
        profile.std_dev.push(var.sqrt());
    }
    Ok(profile)
}
