//! Radius sweeps, log-space fits and the rescaling identities that tie a
//! domain's spectrum to its unit-scale shape.

mod fit;
mod kernel;
mod report;
mod rescale;
mod sweep;

pub use fit::{fit_both, fit_series, FitModel, FitPair, ScalingFit, MIN_FIT_POINTS};
pub use kernel::{kernel_rescale_check_2d, kernel_rescale_check_3d, newton_kernel, KernelRescaleReport};
pub use report::{
    disc_monotonicity, disc_spectrum_expanded, ball_report, small_radius_report, DiscModeComparison, DiscMonotonicityReport,
    ExponentCheck, BallBound, BallRatio, BallReport, SandwichMode, SmallRadiusReport, SmallRadiusTolerances, BALL_DRIFT_TOL,
    BALL_RATIO_TOL,
};
pub use rescale::{
    first_mode_check, galerkin_rescaled, integral_bound_check, rescaled_identity_check, rescaled_identity_disc, FirstModePoint, FirstModeReport,
    IntegralBoundMode, RescaledSpectrum, FIRST_MODE_MAX_A,
};
pub use sweep::{
    default_a_values, fit_points, fit_scaling, run_sweep, series, sweep_rows, Backend, Family, Quantity, SweepConfig,
    SweepPoint, SweepRow, DEFAULT_CELLS, GALERKIN_MIN_A,
};
