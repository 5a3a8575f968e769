use crate::error::{Error, Result};
use crate::scalar::Real;

/// Associated Legendre function P_l^m(x) with the Condon-Shortley phase.
///
/// Negative `m` uses P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
pub fn legendre_p<T: Real>(l: u32, m: i32, x: T) -> Result<T> {
    if m.unsigned_abs() > l {
        return Err(Error::domain(format!("legendre_p needs |m| <= l, got l={l}, m={m}")));
    }
    if x.abs() > T::one() {
        return Err(Error::domain(format!("legendre_p needs |x| <= 1, got {x}")));
    }
    let mu = m.unsigned_abs();
    let p = legendre_nonneg(l, mu, x);
    if m >= 0 {
        return Ok(p);
    }
    let mut ratio = T::one();
    for k in (l - mu + 1)..=(l + mu) {
        ratio = ratio / T::lit(k as f64);
    }
    let sign = if mu.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(sign * ratio * p)
}

fn legendre_nonneg<T: Real>(l: u32, m: u32, x: T) -> T {
    let s = ((T::one() - x) * (T::one() + x)).max(T::zero()).sqrt();
    let mut pmm = T::one();
    let mut odd = T::one();
    for _ in 0..m {
        pmm = -pmm * odd * s;
        odd = odd + T::lit(2.0);
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * T::lit(2.0 * m as f64 + 1.0) * pmm;
    for ll in (m + 2)..=l {
        let next = (x * T::lit(2.0 * ll as f64 - 1.0) * cur - T::lit((ll + m - 1) as f64) * prev)
            / T::lit((ll - m) as f64);
        prev = cur;
        cur = next;
    }
    cur
}
