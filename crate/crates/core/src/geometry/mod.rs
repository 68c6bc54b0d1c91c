//! Radial model manifolds and the operators acting on radial functions.

mod comparison;
mod disk;
mod function;
mod grid;
mod laplacian;
mod model;

pub use comparison::{
    comparison_bound_general, comparison_bound_matched, integrated_root, GrowthBounds,
};
pub use disk::{chern_scalar_disk, DiskCurvatureProfile, DiskField, PolarGrid};
pub use function::GridFunction;
pub use grid::Grid;
pub use laplacian::chern_laplacian_radial;
pub(crate) use laplacian::stencil_row;
pub use model::RadialModel;
