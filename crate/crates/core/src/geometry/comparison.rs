//! Upper bounds for the Chern Laplacian of the distance function under
//! polynomial growth of the second Chern Ricci curvature and the torsion.

use crate::error::{Error, Result};
use crate::hypotheses::HypothesisSet;

/// Growth constants of the curvature and torsion bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBounds {
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl GrowthBounds {
    /// `F(r) = C1/(4n) (1+r)^alpha + (n C2^2 / 2) (1+r)^(2 beta)`.
    pub fn model_function(&self, n: usize, r: f64) -> f64 {
        let n = n as f64;
        self.c1 / (4.0 * n) * (1.0 + r).powf(self.alpha)
            + 0.5 * n * self.c2 * self.c2 * (1.0 + r).powf(2.0 * self.beta)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "complex dimension must be >= 1".into(),
            ));
        }
        if !(self.c1 > 0.0 && self.c2 >= 0.0 && self.alpha >= 0.0 && self.beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need C1 > 0, C2 >= 0, alpha >= 0, beta >= 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

const QUADRATURE_RTOL: f64 = 1e-10;
const MAX_HALVINGS: u32 = 24;

/// `\int_0^t sqrt(F(s)) ds` by composite Simpson, halving the step until two
/// successive estimates agree to a relative 1e-10.
pub fn integrated_root(bounds: &GrowthBounds, n: usize, t: f64) -> f64 {
    let f = |s: f64| bounds.model_function(n, s).sqrt();
    let mut panels = 2usize;
    let mut previous = simpson(&f, t, panels);
    for _ in 0..MAX_HALVINGS {
        panels *= 2;
        let current = simpson(&f, t, panels);
        if (current - previous).abs() <= QUADRATURE_RTOL * current.abs() {
            return current;
        }
        previous = current;
    }
    previous
}

fn simpson(f: &impl Fn(f64) -> f64, t: f64, panels: usize) -> f64 {
    let h = t / panels as f64;
    let mut acc = f(0.0) + f(t);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// `4n h'(t) / h(t)` with `h(t) = F(0)^{-1/2} (exp(\int_0^t sqrt F) - 1)`.
pub fn comparison_bound_general(bounds: &GrowthBounds, n: usize, t: f64) -> Result<f64> {
    bounds.validate(n)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "comparison bound needs t > 0, got {t}"
        )));
    }
    let integral = integrated_root(bounds, n, t);
    let root = bounds.model_function(n, t).sqrt();
    // h'/h = sqrt(F(t)) e^I / (e^I - 1) = sqrt(F(t)) / (1 - e^{-I})
    Ok(4.0 * n as f64 * root / -(-integral).exp_m1())
}

/// Matched-exponent bound `2n(alpha+2)/r + 4n sqrt(C3) (1+r)^{alpha/2}`,
/// valid when `beta = alpha / 2`.
pub fn comparison_bound_matched(hyp: &HypothesisSet, r: f64) -> Result<f64> {
    if (hyp.beta - 0.5 * hyp.alpha).abs() > 1e-12 {
        return Err(Error::InvalidHypothesis(format!(
            "matched bound needs beta = alpha/2, got alpha = {}, beta = {}",
            hyp.alpha, hyp.beta
        )));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("matched bound needs r > 0, got {r}")));
    }
    let n = hyp.n as f64;
    Ok(2.0 * n * (hyp.alpha + 2.0) / r
        + 4.0 * n * hyp.c3().sqrt() * (1.0 + r).powf(0.5 * hyp.alpha))
}
