use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{refine_root, scan_brackets};
use crate::scalar::Real;

use super::bessel::{bessel_j, bessel_j_prime, BesselOrder};

/// A zero of J_ν located inside a sign-change bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselZero<T> {
    pub order: BesselOrder,
    /// 1-based index among the positive zeros.
    pub index: usize,
    pub value: T,
    /// |J_ν(value)|
    pub residual: T,
    pub bracket: (T, T),
}

/// The first `count` positive zeros of J_ν.
///
/// Sign changes are found by a π/16 scan starting just below the first
/// zero's lower bound ν; each is refined by bisection and a Newton polish.
pub fn bessel_zeros<T: Real>(order: BesselOrder, count: usize) -> Result<Vec<BesselZero<T>>> {
    if count == 0 {
        return Err(Error::domain("zero index must be positive"));
    }
    let nu = order.nu();
    let start = T::lit(nu.max(0.5));
    let limit = T::lit(nu + 10.0 + (count as f64 + 2.0) * std::f64::consts::PI);
    let step = T::PI() / T::lit(16.0);
    let j = |x: T| bessel_j(order, x).unwrap_or_else(|_| T::nan());
    let brackets = scan_brackets(j, start, step, limit, count, &format!("zeros of J_{order}"))?;
    brackets
        .into_iter()
        .enumerate()
        .map(|(i, (lo, hi))| {
            let value = refine_root(j, |x| bessel_j_prime(order, x).unwrap_or_else(|_| T::nan()), lo, hi, "bessel zero")?;
            Ok(BesselZero { order, index: i + 1, value, residual: bessel_j(order, value)?.abs(), bracket: (lo, hi) })
        })
        .collect()
}

/// The j-th positive zero of J_ν (j ≥ 1).
pub fn bessel_zero<T: Real>(order: BesselOrder, j: usize) -> Result<BesselZero<T>> {
    let mut all = bessel_zeros(order, j)?;
    Ok(all.pop().expect("non-empty"))
}
