//! Piecewise-constant Galerkin discretisation of the logarithmic potential
//! operator on planar domains.

mod assemble;
mod checks;
mod domain;
mod mesh;
mod spectrum;

pub use assemble::{assemble, disc_self_integral, log_kernel, OperatorMatrix, NEAR_FACTOR};
pub use checks::{
    extension_check, monotonicity_check, refinement_check, ExtensionReport, ModeComparison, MonotonicityReport,
    RefinementReport, DEFAULT_TAU,
};
pub use domain::{Circle, Domain2D, Point};
pub use mesh::{build_mesh, nested_disc_meshes, Cell, CellShape, Mesh2D, NestedMeshes, MIN_CELLS};
pub use spectrum::{eigfun_integral, spectrum, SpectrumResult};
