//! Bessel J, Gamma, associated Legendre functions and Bessel zeros.

mod bessel;
mod gamma;
mod legendre;
mod zeros;

pub use bessel::{
    bessel_j, bessel_j_prime, bessel_j_series, bessel_j_with, crossover, half_integer_family, int_r_j0, BesselMethod,
    BesselOrder, MAX_ORDER,
};
pub use gamma::{gamma_fn, ln_gamma};
pub use legendre::legendre_p;
pub use zeros::{bessel_zero, bessel_zeros, BesselZero};
