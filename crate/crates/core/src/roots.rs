//! Bracketing scans and certified root refinement.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scans [start, limit] with a fixed step and returns the first `count`
/// intervals on which f changes sign.
pub fn scan_brackets<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    start: T,
    step: T,
    limit: T,
    count: usize,
    what: &str,
) -> Result<Vec<(T, T)>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let mut a = start;
    let mut fa = f(a);
    let mut sa = fa.signum();
    while a < limit {
        let b = (a + step).min(limit);
        let fb = f(b);
        if !fb.is_finite() || !fa.is_finite() {
            return Err(Error::domain(format!("{what}: non-finite value near x = {b}")));
        }
        if fb == T::zero() {
            out.push((a, b));
            sa = -sa;
        } else if fb.signum() != sa {
            out.push((a, b));
            sa = fb.signum();
        }
        if out.len() == count {
            return Ok(out);
        }
        a = b;
        fa = fb;
    }
    Err(Error::Bracket { what: what.to_string(), lo: start.to_f64_lossy(), hi: limit.to_f64_lossy() })
}

/// Root of f inside a sign-change bracket.
///
/// Bisects until the bracket is narrow, polishes with at most five Newton
/// steps that must stay inside the bracket, and falls back to bisection if
/// the polish misbehaves.
pub fn refine_root<T: Real, F, D>(mut f: F, mut df: D, lo: T, hi: T, what: &str) -> Result<T>
where
    F: FnMut(T) -> T,
    D: FnMut(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { what: what.to_string(), lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    let coarse = T::lit(1e-6);
    let fine = T::epsilon() * T::lit(4.0);
    let bisect = |a: &mut T, b: &mut T, fa: &mut T, f: &mut F, stop: T| -> Option<T> {
        for _ in 0..400 {
            let m = (*a + *b) / T::lit(2.0);
            if (*b - *a) <= stop * m.abs().max(T::one()) || m <= *a || m >= *b {
                return None;
            }
            let fm = f(m);
            if fm == T::zero() {
                return Some(m);
            }
            if fm.signum() == fa.signum() {
                *a = m;
                *fa = fm;
            } else {
                *b = m;
            }
        }
        None
    };
    if let Some(r) = bisect(&mut a, &mut b, &mut fa, &mut f, coarse) {
        return Ok(r);
    }
    let mut x = (a + b) / T::lit(2.0);
    for _ in 0..5 {
        let fx = f(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let d = df(x);
        if d == T::zero() || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next > a && next < b) {
            break;
        }
        let moved = (next - x).abs();
        x = next;
        if moved <= fine * x.abs().max(T::one()) {
            return Ok(x);
        }
    }
    if let Some(r) = bisect(&mut a, &mut b, &mut fa, &mut f, fine) {
        return Ok(r);
    }
    let fa_abs = fa.abs();
    let fb_abs = f(b).abs();
    Ok(if fa_abs <= fb_abs { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sine_roots() {
        let br = scan_brackets(|x: f64| x.sin(), 0.5, 0.2, 20.0, 5, "sin").unwrap();
        assert_eq!(br.len(), 5);
        for (k, (lo, hi)) in br.into_iter().enumerate() {
            let r = refine_root(|x: f64| x.sin(), |x: f64| x.cos(), lo, hi, "sin").unwrap();
            assert!((r - (k + 1) as f64 * std::f64::consts::PI).abs() < 1e-14);
        }
    }

    #[test]
    fn reports_window_on_exhaustion() {
        let err = scan_brackets(|x: f64| x * x + 1.0, 0.0, 0.1, 3.0, 1, "never").unwrap_err();
        assert!(matches!(err, Error::Bracket { lo, hi, .. } if lo == 0.0 && hi == 3.0));
    }

    #[test]
    fn bad_derivative_falls_back_to_bisection() {
        let r = refine_root(|x: f64| x.powi(3) - 2.0, |_| 1e-30, 1.0, 2.0, "cbrt").unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }
}
