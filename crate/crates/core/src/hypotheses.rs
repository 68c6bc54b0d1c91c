//! Growth/decay constants for the existence results, their case analysis and
//! the feasibility inequality for the logarithmic barrier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::RadialProfile;

/// Absolute tolerance for equalities between exponents.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Number of log-spaced radii scanned by [`find_r0`].
pub const R0_SAMPLES: usize = 10_000;

/// Constants of the curvature, torsion and target-curvature bounds.
///
/// `b` and `c` are the positive roots of the squared constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSet {
    pub n: usize,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub b: f64,
    pub l: f64,
    pub c: f64,
    pub k: f64,
}

impl HypothesisSet {
    /// Hypotheses with torsion exponent `beta = alpha / 2`.
    #[allow(clippy::too_many_arguments)]
    pub fn matched(n: usize, c1: f64, c2: f64, alpha: f64, b: f64, l: f64, c: f64, k: f64) -> Self {
        Self {
            n,
            c1,
            c2,
            alpha,
            beta: 0.5 * alpha,
            b,
            l,
            c,
            k,
        }
    }

    /// `C3 = C1 / (4n) + n C2^2 / 2`.
    pub fn c3(&self) -> f64 {
        let n = self.n as f64;
        self.c1 / (4.0 * n) + 0.5 * n * self.c2 * self.c2
    }

    /// `4 n^2 sqrt(C3)`, the torsion/curvature contribution to the leading
    /// coefficient in the boundary cases.
    pub fn comparison_weight(&self) -> f64 {
        let n = self.n as f64;
        4.0 * n * n * self.c3().sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.c1, self.c2, self.alpha, self.beta, self.b, self.l, self.c, self.k,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidHypothesis("non-finite constant".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidHypothesis("n must be >= 1".into()));
        }
        if !(self.c1 > 0.0 && self.c2 >= 0.0) {
            return Err(Error::InvalidHypothesis(format!(
                "need C1 > 0 and C2 >= 0, got C1 = {}, C2 = {}",
                self.c1, self.c2
            )));
        }
        if !(self.b > 0.0 && self.c > 0.0) {
            return Err(Error::InvalidHypothesis(format!(
                "need b > 0 and c > 0, got b = {}, c = {}",
                self.b, self.c
            )));
        }
        if self.alpha < 0.0 || self.beta < 0.0 || self.l < 0.0 || self.k < 0.0 {
            return Err(Error::InvalidHypothesis(
                "exponents must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    Case1,
    Case2,
    Case3,
    Case4,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftCondition {
    Cond1,
    Cond2,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    #[serde(rename = "case")]
    pub matched_case: Case,
    pub shift_condition: ShiftCondition,
    #[serde(rename = "C3")]
    pub c3: f64,
    /// Coefficient of the leading power of the feasibility polynomial;
    /// negative means the barrier inequality holds for large radii.
    pub margin: f64,
    pub r0: Option<f64>,
    /// Set when the case passes with weight `4 n^2 sqrt(C3)` but would fail
    /// with the stricter `8 n^2 sqrt(C3)`.
    pub weight_discrepancy: bool,
    /// Set when `alpha > 2`, which no case admits.
    pub alpha_out_of_range: bool,
}

fn eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= EXPONENT_TOL
}

fn lt(x: f64, y: f64) -> bool {
    x < y - EXPONENT_TOL
}

fn le(x: f64, y: f64) -> bool {
    x <= y + EXPONENT_TOL
}

/// Case whose exponent conditions hold, ignoring the sign conditions on the
/// constants.
pub fn exponent_case(hyp: &HypothesisSet) -> Case {
    let (a, l, k) = (hyp.alpha, hyp.l, hyp.k);
    let half = 0.5 * a;
    if lt(a, 2.0) && lt(l, 1.0 - half) {
        if lt(k, 2.0 - l) {
            return Case::Case1;
        }
        if eq(k, 2.0 - l) {
            return Case::Case2;
        }
    }
    if le(a, 2.0) && eq(l, 1.0 - half) {
        if eq(k, 1.0 + half) {
            return Case::Case3;
        }
        if lt(k, 1.0 + half) {
            return Case::Case4;
        }
    }
    Case::None
}

fn sign_condition(hyp: &HypothesisSet, case: Case, weight: f64) -> bool {
    let (b2, c2) = (hyp.b * hyp.b, hyp.c * hyp.c);
    match case {
        Case::Case1 => true,
        Case::Case2 => -b2 + c2 < 0.0,
        Case::Case3 => -b2 + c2 + weight < 0.0,
        Case::Case4 => -b2 + weight < 0.0,
        Case::None => false,
    }
}

/// Coefficient of the dominant power of the feasibility polynomial as
/// `r -> infinity`: powers `4 - l`, `2 + k`, `3 + alpha/2` carry `-b^2`,
/// `c^2` and `4 n^2 sqrt(C3)`.
pub fn leading_margin(hyp: &HypothesisSet) -> f64 {
    let terms = [
        (4.0 - hyp.l, -hyp.b * hyp.b),
        (2.0 + hyp.k, hyp.c * hyp.c),
        (3.0 + 0.5 * hyp.alpha, hyp.comparison_weight()),
    ];
    let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    terms.iter().filter(|t| eq(t.0, top)).map(|t| t.1).sum()
}

pub fn classify(hyp: &HypothesisSet) -> CaseReport {
    let weight = hyp.comparison_weight();
    let structural = exponent_case(hyp);
    let matched_case = if sign_condition(hyp, structural, weight) {
        structural
    } else {
        Case::None
    };
    let weight_discrepancy = matches!(matched_case, Case::Case3 | Case::Case4)
        && !sign_condition(hyp, matched_case, 2.0 * weight);

    let (a, l, k) = (hyp.alpha, hyp.l, hyp.k);
    let half = 0.5 * a;
    let shift_condition = if lt(a, 2.0) && lt(l, 1.0 - half) && le(k, 2.0 - l) {
        ShiftCondition::Cond1
    } else if le(a, 2.0) && eq(l, 1.0 - half) && le(k, 1.0 + half) && hyp.b * hyp.b > weight {
        ShiftCondition::Cond2
    } else {
        ShiftCondition::None
    };

    CaseReport {
        matched_case,
        shift_condition,
        c3: hyp.c3(),
        margin: leading_margin(hyp),
        r0: None,
        weight_discrepancy,
        alpha_out_of_range: a > 2.0 + EXPONENT_TOL,
    }
}

/// Right side of the feasibility inequality for the barrier
/// `-(n/2) log(r^2 + a)`; the barrier is a lower solution wherever it is
/// `<= 0`.
pub fn inequality_rhs(hyp: &HypothesisSet, a: f64, r: f64) -> f64 {
    let n = hyp.n as f64;
    let (b2, c2) = (hyp.b * hyp.b, hyp.c * hyp.c);
    let r_l = r.powf(-hyp.l);
    let r_k = r.powf(hyp.k);
    let r2 = r * r;
    let growth = 2.0 * n * n * (hyp.alpha + 2.0);
    -b2 * r2 * r2 * r_l - 2.0 * a * b2 * r2 * r_l - a * a * b2 * r_l
        + c2 * r2 * r_k
        + a * c2 * r_k
        + hyp.comparison_weight() * (1.0 + r).powf(0.5 * hyp.alpha) * (r2 * r + a * r)
        + (growth + c2 - n) * r2
        + (n * a + growth * a + a * c2)
}

/// [`find_r0_from`] with the floor `sqrt(machine epsilon)`.
pub fn find_r0(hyp: &HypothesisSet, a: f64, r_search_max: f64) -> Result<f64> {
    find_r0_from(hyp, a, f64::EPSILON.sqrt(), r_search_max)
}

/// Smallest of [`R0_SAMPLES`] log-spaced radii in `[floor, r_search_max]`
/// beyond which every sampled value of [`inequality_rhs`] is `<= 0`.
///
/// The asymptotic margin must also be negative so the inequality keeps
/// holding past the window.
pub fn find_r0_from(hyp: &HypothesisSet, a: f64, floor: f64, r_search_max: f64) -> Result<f64> {
    hyp.validate()?;
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "barrier offset must be positive, got {a}"
        )));
    }
    if !(floor > 0.0 && r_search_max > floor) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < floor < r_search_max, got [{floor}, {r_search_max}]"
        )));
    }
    if exponent_case(hyp) == Case::None {
        return Err(Error::Precondition(
            "exponents (alpha, l, k) match none of the four cases".into(),
        ));
    }
    let infeasible = |reason: String| Error::InfeasibleWindow {
        floor,
        r_search_max,
        reason,
    };
    let margin = leading_margin(hyp);
    if margin >= 0.0 {
        return Err(infeasible(format!(
            "asymptotic margin {margin:e} is not negative"
        )));
    }
    let log_lo = floor.ln();
    let step = (r_search_max.ln() - log_lo) / (R0_SAMPLES - 1) as f64;
    let sample = |j: usize| {
        if j == R0_SAMPLES - 1 {
            r_search_max
        } else {
            (log_lo + step * j as f64).exp()
        }
    };
    let mut r0 = None;
    for j in (0..R0_SAMPLES).rev() {
        let r = sample(j);
        if inequality_rhs(hyp, a, r) > 0.0 {
            break;
        }
        r0 = Some(r);
    }
    r0.ok_or_else(|| infeasible("inequality fails at the top of the window".into()))
}

/// Result of rescaling the target curvature in a boundary case.
#[derive(Debug, Clone)]
pub struct ScalingShift {
    /// Constant `a` with `S = e^{(2/n) a} S_target`.
    pub shift: f64,
    /// The rescaled target `S`.
    pub profile: RadialProfile,
    /// Rescaled growth constant `c = e^{a/n} c_target`.
    pub c: f64,
}

/// Rescales the target so that a boundary case (`k = 2 - l` or
/// `k = 1 + alpha/2`) becomes a strict case.
///
/// The shift sits one unit below the admissible strict upper bound.
pub fn scaling_shift(target: &RadialProfile, hyp: &HypothesisSet) -> Result<ScalingShift> {
    hyp.validate()?;
    let n = hyp.n as f64;
    let (a, l, k) = (hyp.alpha, hyp.l, hyp.k);
    let half = 0.5 * a;
    let c_sq = hyp.c * hyp.c;
    let bound = if lt(a, 2.0) && lt(l, 1.0 - half) && eq(k, 2.0 - l) {
        0.5 * n * (hyp.b * hyp.b / c_sq).ln()
    } else if le(a, 2.0) && eq(l, 1.0 - half) && eq(k, 1.0 + half) {
        let room = hyp.b * hyp.b - hyp.comparison_weight();
        if room <= 0.0 {
            return Err(Error::Infeasible(format!(
                "b^2 - 4 n^2 sqrt(C3) = {room:e} must be positive"
            )));
        }
        0.5 * n * (room / c_sq).ln()
    } else {
        return Err(Error::Precondition(
            "scaling applies only when k = 2 - l or k = 1 + alpha/2".into(),
        ));
    };
    let shift = bound - 1.0;
    let factor = (2.0 / n * shift).exp();
    Ok(ScalingShift {
        shift,
        profile: target.scaled(factor),
        c: hyp.c * (shift / n).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case1_example() {
        let h = HypothesisSet::matched(1, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0);
        let rep = classify(&h);
        assert_eq!(rep.matched_case, Case::Case1);
        assert!(rep.margin < 0.0);
        assert!((rep.c3 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn case4_example() {
        let h = HypothesisSet::matched(1, 4.0, 0.0, 2.0, 3.0, 0.0, 1.0, 0.0);
        let rep = classify(&h);
        assert_eq!(rep.matched_case, Case::Case4);
        assert!((rep.margin - (-9.0 + 4.0)).abs() < 1e-12);
        assert!(!rep.weight_discrepancy);
    }

    #[test]
    fn exponent_mismatch_matches_nothing() {
        let h = HypothesisSet::matched(1, 4.0, 0.0, 2.0, 3.0, 0.5, 1.0, 0.0);
        assert_eq!(classify(&h).matched_case, Case::None);
    }

    #[test]
    fn alpha_above_two_is_flagged() {
        let h = HypothesisSet::matched(1, 4.0, 0.0, 2.5, 3.0, 0.0, 1.0, 0.0);
        let rep = classify(&h);
        assert_eq!(rep.matched_case, Case::None);
        assert!(rep.alpha_out_of_range);
        assert!(rep.margin > 0.0);
    }

    #[test]
    fn case3_discrepancy_flag() {
        // -9 + 1 + 4 < 0 but -9 + 1 + 8 = 0
        let h = HypothesisSet::matched(1, 4.0, 0.0, 0.0, 3.0, 1.0, 1.0, 1.0);
        let rep = classify(&h);
        assert_eq!(rep.matched_case, Case::Case3);
        assert!(rep.weight_discrepancy);
    }

    #[test]
    fn rhs_hand_arithmetic() {
        let h = HypothesisSet::matched(1, 4.0, 0.0, 0.0, 2.0, 0.0, 1.0, 0.0);
        assert!((inequality_rhs(&h, 1.0, 10.0) + 36257.0).abs() < 1e-8);
        assert!((inequality_rhs(&h, 1.0, 1e-12) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn rhs_without_decay_or_target_is_positive() {
        let mut h = HypothesisSet::matched(2, 1e-300, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0);
        h.b = 0.0;
        h.c = 0.0;
        for r in [0.1, 1.0, 10.0] {
            let n = 2.0;
            let expected = (2.0 * n * n * 3.0 - n) * r * r + (n + 2.0 * n * n * 3.0);
            assert!((inequality_rhs(&h, 1.0, r) - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn r0_for_case1() {
        let h = HypothesisSet::matched(1, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0);
        let r0 = find_r0(&h, 1.0, 1e4).unwrap();
        assert!(r0.is_finite() && r0 > 0.0);
        assert!(inequality_rhs(&h, 1.0, r0 + 1.0) < 0.0);
    }

    #[test]
    fn r0_precondition_and_infeasibility() {
        let none = HypothesisSet::matched(1, 4.0, 0.0, 2.0, 3.0, 0.5, 1.0, 0.0);
        assert!(matches!(
            find_r0(&none, 1.0, 1e4),
            Err(Error::Precondition(_))
        ));
        let weak = HypothesisSet::matched(1, 4.0, 0.0, 2.0, 1e-6, 0.0, 1.0, 0.0);
        assert!(matches!(
            find_r0(&weak, 1.0, 1e4),
            Err(Error::InfeasibleWindow { .. })
        ));
    }

    #[test]
    fn scaling_shift_examples() {
        let target = RadialProfile::constant(-1.0);
        let h = HypothesisSet::matched(1, 4.0, 0.0, 0.0, 2.0, 0.0, 1.0, 2.0);
        let s = scaling_shift(&target, &h).unwrap();
        assert!((s.shift - (2f64.ln() - 1.0)).abs() < 1e-14);

        let h2 = HypothesisSet::matched(2, 8.0, 0.0, 0.0, 1.5, 0.0, 1.5, 2.0);
        let s2 = scaling_shift(&target, &h2).unwrap();
        assert!((s2.shift + 1.0).abs() < 1e-14);
        assert!((s2.profile.eval(3.0) + (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn scaling_shift_boundary_excluded() {
        // 4 n^2 sqrt(C3) = 4 with C1 = 4, n = 1; b^2 = 4 exactly
        let h = HypothesisSet::matched(1, 4.0, 0.0, 0.0, 2.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            scaling_shift(&RadialProfile::constant(-1.0), &h),
            Err(Error::Infeasible(_))
        ));
    }
}
