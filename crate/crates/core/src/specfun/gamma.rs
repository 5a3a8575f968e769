use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0.
///
/// Integers and half-integers are evaluated by exact products; everything
/// else goes through a Lanczos approximation (g = 7, nine terms).
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    let two = T::lit(2.0);
    let twice = x * two;
    if twice.fract() == T::zero() && x <= T::lit(171.0) {
        return Ok(if x.fract() == T::zero() {
            let mut acc = T::one();
            let mut k = T::lit(2.0);
            while k < x {
                acc = acc * k;
                k = k + T::one();
            }
            acc
        } else {
            // Γ(n + 1/2) = √π · Π_{k=1..n} (k − 1/2)
            let mut acc = T::PI().sqrt();
            let mut k = T::lit(0.5);
            while k < x {
                acc = acc * k;
                k = k + T::one();
            }
            acc
        });
    }
    if x < T::lit(0.5) {
        let pi = T::PI();
        return Ok(pi / ((pi * x).sin() * lanczos(T::one() - x)));
    }
    Ok(lanczos(x))
}

fn lanczos<T: Real>(x: T) -> T {
    let x = x - T::one();
    let mut a = T::lit(LANCZOS[0]);
    let t = x + T::lit(LANCZOS_G + 0.5);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::lit(*c) / (x + T::from_count(i));
    }
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + T::lit(0.5)) * (-t).exp() * a
}

/// ln Γ(x) for x > 0, usable far beyond the range where Γ overflows.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < T::lit(0.5) {
        let pi = T::PI();
        return Ok((pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x)?);
    }
    if x <= T::lit(20.0) {
        return Ok(gamma_fn(x)?.ln());
    }
    let y = x - T::one();
    let mut a = T::lit(LANCZOS[0]);
    let t = y + T::lit(LANCZOS_G + 0.5);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::lit(*c) / (y + T::from_count(i));
    }
    Ok(T::lit(0.5) * (T::lit(2.0) * T::PI()).ln() + (y + T::lit(0.5)) * t.ln() - t + a.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    #[test]
    fn integer_and_half_integer_values() {
        assert_eq!(gamma_fn(1.0_f64).unwrap(), 1.0);
        assert_eq!(gamma_fn(5.0_f64).unwrap(), 24.0);
        assert_eq!(gamma_fn(11.0_f64).unwrap(), 3_628_800.0);
        let rp = std::f64::consts::PI.sqrt();
        assert!((gamma_fn(0.5_f64).unwrap() - rp).abs() < 1e-15);
        assert!((gamma_fn(2.5_f64).unwrap() - 0.75 * rp).abs() < 1e-15);
    }

    #[test]
    fn half_matches_quadrature_of_euler_integral() {
        // t = s² turns ∫ t^{-1/2} e^{-t} dt into 2∫ e^{-s²} ds
        let q = integrate(|s: f64| 2.0 * (-s * s).exp(), 0.0, 12.0, 1e-14, &[]).unwrap();
        assert!((gamma_fn(0.5_f64).unwrap() - q).abs() < 1e-12);
        assert!((q - 1.772_453_850_9).abs() < 1e-10);
    }

    #[test]
    fn generic_points_satisfy_recurrence() {
        for &x in &[0.1_f64, 0.37, 1.3, 2.71, 7.9, 33.3] {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs(), "x={x}");
        }
    }

    #[test]
    fn ln_gamma_consistent() {
        for &x in &[0.2_f64, 1.5, 3.7, 19.5, 25.0, 60.25] {
            let g = gamma_fn(x).unwrap().ln();
            assert!((ln_gamma(x).unwrap() - g).abs() < 1e-11 * g.abs().max(1.0), "x={x}");
        }
        // ln 200! from a direct sum
        let direct: f64 = (1..=200).map(|k| (k as f64).ln()).sum();
        assert!((ln_gamma(201.0_f64).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(gamma_fn(0.0_f64), Err(Error::Domain(_))));
        assert!(matches!(gamma_fn(-1.5_f64), Err(Error::Domain(_))));
        assert!(ln_gamma(0.0_f64).is_err());
    }

    #[test]
    fn single_precision() {
        assert!((gamma_fn(4.5_f32).unwrap() - 11.631_728).abs() < 1e-4);
    }
}
