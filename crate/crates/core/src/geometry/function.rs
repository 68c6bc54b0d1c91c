use crate::error::{Error, Result};

use super::Grid;

/// Values of a radial function at the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!(
                "{} values supplied for a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value at r = {:e}",
                grid.node(i)
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn constant(grid: Grid, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Keeps the first `cells` nodes.
    pub fn restrict(&self, cells: usize) -> Result<Self> {
        let grid = self.grid.truncated(cells)?;
        Ok(Self {
            grid,
            values: self.values[..cells].to_vec(),
        })
    }

    /// Restriction to the nodes with `r <= radius`.
    pub fn restrict_to_radius(&self, radius: f64) -> Result<Self> {
        let last = self
            .grid
            .last_index_within(radius)
            .ok_or_else(|| Error::Domain(format!("no grid node inside radius {radius:e}")))?;
        self.restrict(last + 1)
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = self
            .grid
            .nodes()
            .zip(&self.values)
            .map(|(r, &v)| f(r, v))
            .collect();
        Self::new(self.grid, values)
    }

    /// `a * self + b * other` on a shared grid.
    pub fn axpby(&self, a: f64, other: &GridFunction, b: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| a * x + b * y)
            .collect();
        Self::new(self.grid, values)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn nodes_and_values(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.nodes().zip(self.values.iter().copied())
    }

    pub(crate) fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.len() != other.len() || !self.grid.shares_nodes_with(&other.grid) {
            return Err(Error::Domain(format!(
                "grid mismatch: {} nodes (h = {:e}) vs {} nodes (h = {:e})",
                self.len(),
                self.grid.spacing(),
                other.len(),
                other.grid.spacing()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_and_finiteness_are_enforced() {
        let g = Grid::new(1.0, 4).unwrap();
        assert!(GridFunction::new(g, vec![0.0; 3]).is_err());
        assert!(GridFunction::new(g, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(GridFunction::new(g, vec![0.0; 4]).is_ok());
    }

    #[test]
    fn restriction_by_radius() {
        let g = Grid::new(1.0, 10).unwrap();
        let u = GridFunction::from_fn(g, |r| r).unwrap();
        let sub = u.restrict_to_radius(0.5).unwrap();
        assert_eq!(sub.len(), 5);
        assert_eq!(sub.values()[4], u.values()[4]);
    }

    #[test]
    fn norms() {
        let g = Grid::new(1.0, 3).unwrap();
        let u = GridFunction::new(g, vec![-3.0, 1.0, 2.0]).unwrap();
        assert_eq!(u.max(), 2.0);
        assert_eq!(u.min(), -3.0);
        assert_eq!(u.sup_norm(), 3.0);
    }
}
