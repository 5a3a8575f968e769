use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::gamma::gamma_fn;

/// Largest order the recurrences are allowed to reach.
pub const MAX_ORDER: f64 = 200.0;

/// Order of a Bessel function of the first kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BesselOrder {
    /// ν = n
    Integer(u32),
    /// ν = l + 1/2
    HalfInteger(u32),
}

impl BesselOrder {
    pub fn nu(self) -> f64 {
        match self {
            BesselOrder::Integer(n) => n as f64,
            BesselOrder::HalfInteger(l) => l as f64 + 0.5,
        }
    }
}

impl std::fmt::Display for BesselOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BesselOrder::Integer(n) => write!(f, "{n}"),
            BesselOrder::HalfInteger(l) => write!(f, "{l}+1/2"),
        }
    }
}

/// Evaluation path used by [`bessel_j_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselMethod {
    /// Power series (integer orders).
    Series,
    /// Backward recurrence for integer orders, trigonometric recurrence for
    /// half-integer orders.
    Recurrence,
    /// Hankel expansion for large arguments (integer orders), upward
    /// trigonometric recurrence (half-integer orders).
    Asymptotic,
}

/// Argument beyond which integer orders switch to the Hankel expansion and
/// half-integer orders to upward recurrence.
pub fn crossover(order: BesselOrder) -> f64 {
    match order {
        BesselOrder::Integer(n) => 25f64.max((n as f64) * (n as f64)),
        BesselOrder::HalfInteger(l) => l as f64 + 0.5,
    }
}

const SERIES_LIMIT: f64 = 10.0;

fn check<T: Real>(order: BesselOrder, x: T) -> Result<()> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("Bessel J needs finite x >= 0, got {x}")));
    }
    if order.nu() > MAX_ORDER {
        return Err(Error::UnsupportedOrder { order: order.nu(), max: MAX_ORDER });
    }
    Ok(())
}

/// J_ν(x) for integer or half-integer ν and x ≥ 0.
pub fn bessel_j<T: Real>(order: BesselOrder, x: T) -> Result<T> {
    check(order, x)?;
    let method = match order {
        BesselOrder::Integer(n) => {
            let xf = x.to_f64_lossy();
            if xf >= crossover(order) {
                BesselMethod::Asymptotic
            } else if xf < SERIES_LIMIT || xf * xf < 4.0 * (n as f64 + 1.0) {
                BesselMethod::Series
            } else {
                BesselMethod::Recurrence
            }
        }
        BesselOrder::HalfInteger(_) => {
            if x.to_f64_lossy() > crossover(order) {
                BesselMethod::Asymptotic
            } else {
                BesselMethod::Recurrence
            }
        }
    };
    bessel_j_with(order, x, method)
}

/// J_ν(x) along a forced evaluation path. Useful for checking that the
/// branches agree where [`bessel_j`] switches between them.
pub fn bessel_j_with<T: Real>(order: BesselOrder, x: T, method: BesselMethod) -> Result<T> {
    check(order, x)?;
    match order {
        BesselOrder::Integer(n) => {
            if x == T::zero() {
                return Ok(if n == 0 { T::one() } else { T::zero() });
            }
            Ok(match method {
                BesselMethod::Series => series(T::lit(n as f64), x, T::one() / gamma_fn(T::lit(n as f64 + 1.0))?),
                BesselMethod::Recurrence => miller(n, x),
                BesselMethod::Asymptotic => hankel(T::lit(n as f64), x),
            })
        }
        BesselOrder::HalfInteger(l) => {
            if x == T::zero() {
                return Ok(T::zero());
            }
            let fam = match method {
                BesselMethod::Asymptotic => half_upward(l, x),
                _ => half_downward(l, x),
            };
            Ok(fam[l as usize + 1])
        }
    }
}

/// Power series Σ (-1)^k (x/2)^{2k+ν} / (k! Γ(k+ν+1)) for real ν ≥ 0.
pub fn bessel_j_series<T: Real>(nu: T, x: T) -> Result<T> {
    if !(nu >= T::zero()) || nu.to_f64_lossy() > MAX_ORDER {
        return Err(Error::UnsupportedOrder { order: nu.to_f64_lossy(), max: MAX_ORDER });
    }
    if !(x >= T::zero()) {
        return Err(Error::domain(format!("Bessel J needs x >= 0, got {x}")));
    }
    if x == T::zero() {
        return Ok(if nu == T::zero() { T::one() } else { T::zero() });
    }
    Ok(series(nu, x, T::one() / gamma_fn(nu + T::one())?))
}

fn series<T: Real>(nu: T, x: T, inv_gamma: T) -> T {
    let h = x / T::lit(2.0);
    let q = h * h;
    let mut term = h.powf(nu) * inv_gamma;
    let mut sum = term;
    let tiny = T::lit(1e-17);
    for k in 1..200 {
        let kf = T::from_count(k);
        term = -term * q / (kf * (kf + nu));
        sum = sum + term;
        if term.abs() < tiny * sum.abs() {
            break;
        }
    }
    sum
}

/// Backward recurrence normalised with J₀ + 2ΣJ_{2k} = 1.
fn miller<T: Real>(n: u32, x: T) -> T {
    let m = (n as f64).max(x.to_f64_lossy());
    let mut start = (m + 20.0 + (40.0 * m).sqrt()) as usize;
    start += start % 2;
    let two_over_x = T::lit(2.0) / x;
    let big = T::lit(1e10);
    let mut jp1 = T::zero();
    let mut j = T::epsilon();
    let mut sum = T::zero();
    let mut result = T::zero();
    for k in (1..=start).rev() {
        let jm1 = T::from_count(k) * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx == n as usize {
            result = j;
        }
        if idx == 0 {
            sum = sum + j;
        } else if idx % 2 == 0 {
            sum = sum + T::lit(2.0) * j;
        }
        if j.abs() > big {
            j = j / big;
            jp1 = jp1 / big;
            sum = sum / big;
            result = result / big;
        }
    }
    result / sum
}

fn hankel<T: Real>(nu: T, x: T) -> T {
    let mu = T::lit(4.0) * nu * nu;
    let eight_x = T::lit(8.0) * x;
    let mut p = T::one();
    let mut q = T::zero();
    let mut t = T::one();
    let mut last = T::infinity();
    for k in 1..120usize {
        let odd = T::from_count(2 * k - 1);
        let next = t * (mu - odd * odd) / (T::from_count(k) * eight_x);
        if next.abs() >= last || next == T::zero() {
            break;
        }
        t = next;
        last = t.abs();
        // t_k enters P with sign (-1)^{k/2} for even k and Q with (-1)^{(k-1)/2} for odd k
        let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
        if k % 2 == 0 {
            p = p + sign * t;
        } else {
            q = q + sign * t;
        }
        if t.abs() < T::epsilon() * T::lit(1e-2) {
            break;
        }
    }
    let chi = x - (nu / T::lit(2.0) + T::lit(0.25)) * T::PI();
    (T::lit(2.0) / (T::PI() * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Values J_{-1/2}(x), J_{1/2}(x), …, J_{l_max+1/2}(x) (length `l_max + 2`).
pub fn half_integer_family<T: Real>(l_max: u32, x: T) -> Result<Vec<T>> {
    check(BesselOrder::HalfInteger(l_max), x)?;
    if x == T::zero() {
        let mut v = vec![T::zero(); l_max as usize + 2];
        v[0] = T::infinity();
        return Ok(v);
    }
    Ok(if x.to_f64_lossy() > l_max as f64 + 0.5 { half_upward(l_max, x) } else { half_downward(l_max, x) })
}

fn half_upward<T: Real>(l_max: u32, x: T) -> Vec<T> {
    let s = (T::lit(2.0) / (T::PI() * x)).sqrt();
    let mut v = Vec::with_capacity(l_max as usize + 2);
    v.push(s * x.cos());
    v.push(s * x.sin());
    for i in 1..=l_max as usize {
        let nu = T::from_count(i) - T::lit(0.5);
        let next = T::lit(2.0) * nu / x * v[i] - v[i - 1];
        v.push(next);
    }
    v
}

fn half_downward<T: Real>(l_max: u32, x: T) -> Vec<T> {
    let len = l_max as usize + 2;
    let m = (l_max as f64).max(x.to_f64_lossy());
    let start = len + 20 + (40.0 * m).sqrt() as usize;
    let big = T::lit(1e10);
    let mut v = vec![T::zero(); len];
    // index i holds order i - 1/2
    let mut jp1 = T::zero();
    let mut j = T::epsilon();
    for i in (1..=start).rev() {
        let nu = T::from_count(i) - T::lit(0.5);
        let jm1 = T::lit(2.0) * nu / x * j - jp1;
        jp1 = j;
        j = jm1;
        if i - 1 < len {
            v[i - 1] = j;
        }
        if j.abs() > big {
            j = j / big;
            jp1 = jp1 / big;
            for e in v.iter_mut() {
                *e = *e / big;
            }
        }
    }
    let s = (T::lit(2.0) / (T::PI() * x)).sqrt();
    let (sn, cs) = x.sin_cos();
    let scale = if sn.abs() >= cs.abs() { s * sn / v[1] } else { s * cs / v[0] };
    v.iter().map(|&e| e * scale).collect()
}

/// dJ_ν/dx = (J_{ν-1} − J_{ν+1}) / 2.
pub fn bessel_j_prime<T: Real>(order: BesselOrder, x: T) -> Result<T> {
    match order {
        BesselOrder::Integer(0) => Ok(-bessel_j(BesselOrder::Integer(1), x)?),
        BesselOrder::Integer(n) => Ok((bessel_j(BesselOrder::Integer(n - 1), x)?
            - bessel_j(BesselOrder::Integer(n + 1), x)?)
            / T::lit(2.0)),
        BesselOrder::HalfInteger(l) => {
            let f = half_integer_family(l + 1, x)?;
            Ok((f[l as usize] - f[l as usize + 2]) / T::lit(2.0))
        }
    }
}

/// ∫₀^x r J₀(r) dr = x J₁(x).
pub fn int_r_j0<T: Real>(x: T) -> Result<T> {
    Ok(x * bessel_j(BesselOrder::Integer(1), x)?)
}
