use crate::error::{Error, Result};

/// Staggered radial grid on `(0, r_max]`: node `i` sits at `(i + 1/2) h`
/// with `h = r_max / cells`, so the pole itself is never a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    r_max: f64,
    cells: usize,
    h: f64,
}

impl Grid {
    pub fn new(r_max: f64, cells: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid radius must be positive, got {r_max}"
            )));
        }
        if cells == 0 {
            return Err(Error::InvalidParameter(
                "grid needs at least one cell".into(),
            ));
        }
        Ok(Self {
            r_max,
            cells,
            h: r_max / cells as f64,
        })
    }

    /// Grid whose last node lies exactly on `radius`, used for Dirichlet
    /// problems on the ball `B_radius`.
    pub fn ball(radius: f64, cells: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        if cells == 0 {
            return Err(Error::InvalidParameter(
                "grid needs at least one cell".into(),
            ));
        }
        let h = radius / (cells as f64 - 0.5);
        Ok(Self {
            r_max: h * cells as f64,
            cells,
            h,
        })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells == 0
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.h
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.cells).map(move |i| self.node(i))
    }

    pub fn last_node(&self) -> f64 {
        self.node(self.cells - 1)
    }

    /// Index of the last node with `r <= radius` (relative slack 1e-12).
    pub fn last_index_within(&self, radius: f64) -> Option<usize> {
        let x = radius * (1.0 + 1e-12) / self.h - 0.5;
        if x < 0.0 {
            return None;
        }
        Some((x.floor() as usize).min(self.cells - 1))
    }

    /// Sub-grid made of the first `cells` nodes; node positions are unchanged.
    pub fn truncated(&self, cells: usize) -> Result<Self> {
        if cells == 0 || cells > self.cells {
            return Err(Error::Domain(format!(
                "cannot truncate a {}-node grid to {cells} nodes",
                self.cells
            )));
        }
        Ok(Self {
            r_max: self.h * cells as f64,
            cells,
            h: self.h,
        })
    }

    /// True when both grids share spacing, so node `i` coincides in each.
    pub fn shares_nodes_with(&self, other: &Grid) -> bool {
        (self.h - other.h).abs() <= 1e-12 * self.h.max(other.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_staggered_and_increasing() {
        let g = Grid::new(2.0, 8).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.node(0), 0.125);
        assert!((g.last_node() - 1.875).abs() < 1e-15);
        let v: Vec<f64> = g.nodes().collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert!(v.iter().all(|&r| r > 0.0 && r < 2.0));
        assert!((g.spacing() * g.len() as f64 - g.r_max()).abs() < 1e-14);
    }

    #[test]
    fn ball_grid_ends_on_radius() {
        let g = Grid::ball(3.0, 100).unwrap();
        assert!((g.last_node() - 3.0).abs() < 1e-14);
        assert_eq!(g.last_index_within(3.0), Some(99));
        assert_eq!(g.last_index_within(1e-9), None);
    }

    #[test]
    fn truncation_keeps_positions() {
        let g = Grid::new(10.0, 100).unwrap();
        let t = g.truncated(40).unwrap();
        assert_eq!(t.node(39), g.node(39));
        assert!(t.shares_nodes_with(&g));
        assert!(g.truncated(101).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(0.0, 4).is_err());
        assert!(Grid::new(1.0, 0).is_err());
        assert!(Grid::ball(-1.0, 4).is_err());
    }
}
