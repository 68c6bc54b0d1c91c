//! Radial finite-difference laboratory for the prescribed Chern scalar
//! curvature equation `-L u + s = S e^{(2/n) u}` on rotationally symmetric
//! Hermitian manifolds with a pole.

pub mod barriers;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod hypotheses;
pub mod iteration;
pub mod profile;
pub mod verification;

pub use barriers::{
    certify_lower_solution, constant_bump_barrier, glue_barrier, glued_lower_solution,
    inner_dirichlet_barrier, log_barrier, matched_inner_barrier, upper_constant, Barrier,
    BarrierKind, BarrierMetadata, BumpBarrier, BumpParams, LowerCertificate,
};
pub use elliptic::{
    achieved_curvature, nonlinear_residual, solve_linear, DirichletOperator, LinearRadialProblem,
};
pub use error::{Error, Result};
pub use geometry::{
    chern_laplacian_radial, chern_scalar_disk, comparison_bound_general, comparison_bound_matched,
    DiskCurvatureProfile, DiskField, Grid, GridFunction, GrowthBounds, PolarGrid, RadialModel,
};
pub use hypotheses::{
    classify, find_r0, find_r0_from, inequality_rhs, scaling_shift, Case, CaseReport,
    HypothesisSet, ScalingShift, ShiftCondition,
};
pub use iteration::{
    exhaustion_solve, local_bound_report, monotone_solve, Exhaustion, LocalBoundReport, Solution,
    SolveOptions,
};
pub use profile::RadialProfile;
pub use verification::{
    completeness_bound, export_solution, export_trace, verify_completeness, verify_prescribed,
    CompletenessReport, ExportedFiles, PrescribedReport, RunSummary,
};
