//! Eigenvalues of the logarithmic and Newtonian potential operators.
//!
//! Closed forms for discs ([`disc`]) and balls ([`ball`]), a piecewise
//! constant Galerkin discretisation for general planar domains
//! ([`galerkin`]), and radius sweeps with log-space regression
//! ([`scaling`]). Everything is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

// `!(x > 0)` is used on purpose to reject NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod specfun;

pub mod linalg;
pub mod disc;
pub mod ball;
pub mod galerkin;
pub mod scaling;

pub type DiscSpecF64 = disc::DiscSpec<f64>;
pub type DiscEigenpairF64 = disc::DiscEigenpair<f64>;
pub type BallEigenpairF64 = ball::BallEigenpair<f64>;
pub type Domain2DF64 = galerkin::Domain2D<f64>;
pub type Mesh2DF64 = galerkin::Mesh2D<f64>;
pub type OperatorMatrixF64 = galerkin::OperatorMatrix<f64>;
pub type SpectrumResultF64 = galerkin::SpectrumResult<f64>;
pub type SweepConfigF64 = scaling::SweepConfig<f64>;
pub type ScalingFitF64 = scaling::ScalingFit<f64>;
pub type RescaledSpectrumF64 = scaling::RescaledSpectrum<f64>;

pub use error::{Error, Result};
pub use scalar::Real;
