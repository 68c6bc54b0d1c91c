use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Grid, GridFunction};

/// A real function of the geodesic radius.
///
/// Cheap to clone; the closure is shared.
#[derive(Clone)]
pub struct RadialProfile {
    label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialProfile {
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::from_fn(format!("constant({value})"), move |_| value)
    }

    /// Piecewise-linear interpolation through `(r, value)` samples, held
    /// constant outside the tabulated range.
    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty profile table".into()));
        }
        if points.iter().any(|(r, v)| !r.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite profile table entry".into(),
            ));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidParameter(
                "profile table radii must be strictly increasing".into(),
            ));
        }
        let label = format!("tabulated({} points)", points.len());
        Ok(Self::from_fn(label, move |r| interpolate(&points, r)))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.nodes().map(|r| self.eval(r)).collect()
    }

    pub fn on_grid(&self, grid: &Grid) -> Result<GridFunction> {
        GridFunction::new(*grid, self.sample(grid))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let inner = self.clone();
        Self::from_fn(format!("{factor} * {}", self.label), move |r| {
            factor * inner.eval(r)
        })
    }
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("label", &self.label)
            .finish()
    }
}

fn interpolate(points: &[(f64, f64)], r: f64) -> f64 {
    let (first, last) = (points[0], points[points.len() - 1]);
    if r <= first.0 {
        return first.1;
    }
    if r >= last.0 {
        return last.1;
    }
    let j = points.partition_point(|p| p.0 <= r);
    let (r0, v0) = points[j - 1];
    let (r1, v1) = points[j];
    v0 + (v1 - v0) * (r - r0) / (r1 - r0)
}
