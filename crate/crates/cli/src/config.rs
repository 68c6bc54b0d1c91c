use std::path::Path;

use ccl_core::{BumpParams, Error, HypothesisSet, RadialModel, RadialProfile};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: ModelConfig,
    #[serde(default)]
    pub hypotheses: Option<HypothesesConfig>,
    #[serde(rename = "target_S")]
    pub target_s: ProfileConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub barrier: BarrierConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Hyperbolic {
        n: usize,
        #[serde(default = "minus_one")]
        s: ProfileConfig,
        #[serde(default)]
        r_d: f64,
        #[serde(default)]
        lee_drift: Option<ProfileConfig>,
    },
    Euclidean {
        n: usize,
        #[serde(default = "minus_one")]
        s: ProfileConfig,
        #[serde(default)]
        r_d: f64,
    },
    /// Rows `(r, d, tau, s)`, linearly interpolated.
    Tabulated {
        n: usize,
        rows: Vec<[f64; 4]>,
        #[serde(default)]
        r_d: f64,
    },
}

fn minus_one() -> ProfileConfig {
    ProfileConfig::Constant { value: -1.0 }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    Constant {
        value: f64,
    },
    /// `-b^2 max(r, r_d)^(-l)`.
    Decay {
        b: f64,
        l: f64,
        #[serde(default = "one")]
        r_d: f64,
    },
    /// `-c^2 (1 + r^k)`.
    Growth {
        c: f64,
        k: f64,
    },
    /// `value / (1 + r^2)`.
    InverseSquare {
        value: f64,
    },
    /// `value min(1, (r / r_d)^2)`.
    FlatCore {
        value: f64,
        r_d: f64,
    },
    Tabulated {
        points: Vec<[f64; 2]>,
    },
}

fn one() -> f64 {
    1.0
}

impl ProfileConfig {
    pub fn build(&self) -> Result<RadialProfile, Error> {
        Ok(match *self {
            Self::Constant { value } => RadialProfile::constant(value),
            Self::Decay { b, l, r_d } => {
                positive("decay r_d", r_d)?;
                let b2 = b * b;
                RadialProfile::from_fn("decay", move |r: f64| -b2 * r.max(r_d).powf(-l))
            }
            Self::Growth { c, k } => {
                let c2 = c * c;
                RadialProfile::from_fn("growth", move |r: f64| -c2 * (1.0 + r.powf(k)))
            }
            Self::InverseSquare { value } => {
                RadialProfile::from_fn("inverse square", move |r: f64| value / (1.0 + r * r))
            }
            Self::FlatCore { value, r_d } => {
                positive("flat_core r_d", r_d)?;
                RadialProfile::from_fn("flat core", move |r: f64| {
                    value * (r / r_d).powi(2).min(1.0)
                })
            }
            Self::Tabulated { ref points } => {
                RadialProfile::tabulated(points.iter().map(|p| (p[0], p[1])).collect())?
            }
        })
    }
}

fn positive(what: &str, x: f64) -> Result<(), Error> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must be positive, got {x}"
        )))
    }
}

impl ModelConfig {
    pub fn n(&self) -> usize {
        match *self {
            Self::Hyperbolic { n, .. } | Self::Euclidean { n, .. } | Self::Tabulated { n, .. } => n,
        }
    }

    pub fn build(&self, r_max: f64) -> Result<RadialModel, Error> {
        match self {
            Self::Hyperbolic {
                n,
                s,
                r_d,
                lee_drift,
            } => {
                let m = RadialModel::hyperbolic(*n, r_max)?.with_curvature(s.build()?, *r_d)?;
                match lee_drift {
                    Some(p) => m.with_lee_drift(p.build()?),
                    None => Ok(m),
                }
            }
            Self::Euclidean { n, s, r_d } => {
                let s = s.build()?;
                RadialModel::euclidean(*n, r_max, s.clone())?.with_curvature(s, *r_d)
            }
            Self::Tabulated { n, rows, r_d } => RadialModel::tabulated(*n, rows, r_max, *r_d),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesesConfig {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub alpha: f64,
    pub b: f64,
    pub l: f64,
    pub c: f64,
    pub k: f64,
}

impl HypothesesConfig {
    pub fn build(&self, n: usize) -> HypothesisSet {
        HypothesisSet::matched(
            n, self.c1, self.c2, self.alpha, self.b, self.l, self.c, self.k,
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub solve: f64,
    pub max_iter: usize,
    /// Pointwise residual allowed when certifying a lower solution.
    pub barrier: f64,
    pub prescribed: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            solve: 1e-8,
            max_iter: 500,
            barrier: 1e-8,
            prescribed: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Checks {
    pub prescribed: bool,
    pub completeness: bool,
    pub monotone: bool,
    /// Require the last compact difference of the exhaustion to fall below
    /// the solve tolerance.
    pub settled: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Self {
            prescribed: true,
            completeness: true,
            monotone: true,
            settled: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case", deny_unknown_fields)]
pub enum BarrierConfig {
    /// Log barrier glued to an inner Dirichlet piece; needs `hypotheses`.
    Glued {
        #[serde(default = "one")]
        a: f64,
        #[serde(default = "search_max")]
        r_search_max: f64,
    },
    Bump {
        b: f64,
        c: f64,
        #[serde(default = "one")]
        delta: f64,
        r_d1: f64,
        r_d2: f64,
    },
    /// A user-supplied constant, certified before use.
    Constant { value: f64 },
}

fn search_max() -> f64 {
    1e4
}

impl Default for BarrierConfig {
    fn default() -> Self {
        Self::Glued {
            a: 1.0,
            r_search_max: search_max(),
        }
    }
}

impl BarrierConfig {
    pub fn bump_params(&self) -> Option<BumpParams> {
        match *self {
            Self::Bump {
                b,
                c,
                delta,
                r_d1,
                r_d2,
            } => Some(BumpParams {
                b,
                c,
                delta,
                r_d1,
                r_d2,
            }),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub struct SchemaError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

pub fn load(path: &Path) -> Result<Config, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| SchemaError {
        message: format!("cannot read {}: {e}", path.display()),
        line: None,
        column: None,
    })?;
    let cfg: Config = serde_json::from_str(&text).map_err(|e| SchemaError {
        message: e.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl Config {
    fn validate(&self) -> Result<(), SchemaError> {
        let fail = |message: String| SchemaError {
            message,
            line: None,
            column: None,
        };
        if self.model.n() == 0 {
            return Err(fail("model.n must be >= 1".into()));
        }
        if self.grid.radii.is_empty() {
            return Err(fail("grid.radii must not be empty".into()));
        }
        if self.grid.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(fail(format!(
                "grid.radii must be positive, got {:?}",
                self.grid.radii
            )));
        }
        if !(self.tolerances.solve > 0.0
            && self.tolerances.prescribed > 0.0
            && self.tolerances.barrier > 0.0)
        {
            return Err(fail("tolerances must be positive".into()));
        }
        if matches!(self.barrier, BarrierConfig::Glued { .. }) && self.hypotheses.is_none() {
            return Err(fail(
                "barrier route `glued` needs a `hypotheses` section".into(),
            ));
        }
        Ok(())
    }
}
