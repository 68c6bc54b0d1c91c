use crate::error::{Error, Result};

/// Tridiagonal matrix stored by diagonals; `lower[i]` couples row `i + 1`
/// to column `i`, `upper[i]` couples row `i` to column `i + 1`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Relative pivot size below which the Thomas sweep hands over to partial
/// pivoting.
const PIVOT_RTOL: f64 = 1e-13;

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal shape mismatch: {} / {} / {}",
                lower.len(),
                n,
                upper.len()
            )));
        }
        Ok(Self { lower, diag, upper })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.upper[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }

    fn row_scale(&self, i: usize) -> f64 {
        let mut s = self.diag[i].abs();
        if i > 0 {
            s += self.lower[i - 1].abs();
        }
        if i + 1 < self.len() {
            s += self.upper[i].abs();
        }
        s
    }

    pub fn inf_norm(&self) -> f64 {
        (0..self.len())
            .map(|i| self.row_scale(i))
            .fold(0.0, f64::max)
    }

    pub fn factor(&self) -> Result<Factorization> {
        match self.thomas() {
            Some(f) => Ok(f),
            None => self.pivoted(),
        }
    }

    fn thomas(&self) -> Option<Factorization> {
        let n = self.len();
        let mut upper = vec![0.0; n.saturating_sub(1)];
        let mut inv = vec![0.0; n];
        let mut pivot = self.diag[0];
        for i in 0..n {
            if i > 0 {
                pivot = self.diag[i] - self.lower[i - 1] * upper[i - 1];
            }
            if !(pivot.abs() > PIVOT_RTOL * self.row_scale(i)) {
                return None;
            }
            inv[i] = 1.0 / pivot;
            if i + 1 < n {
                upper[i] = self.upper[i] * inv[i];
            }
        }
        Some(Factorization::Thomas {
            lower: self.lower.clone(),
            upper,
            inv,
        })
    }

    /// LU with partial pivoting; the pivoted factor gains a second
    /// superdiagonal.
    fn pivoted(&self) -> Result<Factorization> {
        let n = self.len();
        let mut dl = self.lower.clone();
        let mut d = self.diag.clone();
        let mut du = self.upper.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swap[i] = true;
            }
        }
        let scale = self.inf_norm();
        for (row, &p) in d.iter().enumerate() {
            if !(p.abs() > f64::EPSILON * scale) {
                return Err(Error::SingularSystem { row, pivot: p });
            }
        }
        Ok(Factorization::Pivoted {
            dl,
            d,
            du,
            du2,
            swap,
        })
    }
}

#[derive(Debug, Clone)]
pub enum Factorization {
    Thomas {
        lower: Vec<f64>,
        upper: Vec<f64>,
        inv: Vec<f64>,
    },
    Pivoted {
        dl: Vec<f64>,
        d: Vec<f64>,
        du: Vec<f64>,
        du2: Vec<f64>,
        swap: Vec<bool>,
    },
}

impl Factorization {
    pub fn is_pivoted(&self) -> bool {
        matches!(self, Factorization::Pivoted { .. })
    }

    /// Overwrites `b` with the solution.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        match self {
            Factorization::Thomas { lower, upper, inv } => {
                let n = b.len();
                b[0] *= inv[0];
                for i in 1..n {
                    b[i] = (b[i] - lower[i - 1] * b[i - 1]) * inv[i];
                }
                for i in (0..n - 1).rev() {
                    b[i] -= upper[i] * b[i + 1];
                }
            }
            Factorization::Pivoted {
                dl,
                d,
                du,
                du2,
                swap,
            } => {
                let n = b.len();
                for i in 0..n - 1 {
                    if swap[i] {
                        let temp = b[i] - dl[i] * b[i + 1];
                        b[i] = b[i + 1];
                        b[i + 1] = temp;
                    } else {
                        b[i + 1] -= dl[i] * b[i];
                    }
                }
                b[n - 1] /= d[n - 1];
                if n > 1 {
                    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
                }
                for i in (0..n.saturating_sub(2)).rev() {
                    b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
                }
            }
        }
    }
}

/// `||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf)`.
pub fn relative_residual(a: &Tridiagonal, x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; x.len()];
    a.apply(x, &mut ax);
    let num = ax
        .iter()
        .zip(b)
        .fold(0.0, |m: f64, (p, q)| m.max((p - q).abs()));
    let xn = x.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let bn = b.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let den = a.inf_norm() * xn + bn;
    if den == 0.0 {
        num
    } else {
        num / den
    }
}
