use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{dot, norm, SymMatrix};

struct Reflector<T> {
    v: Vec<T>,
    beta: T,
}

/// Householder reduction A = Q T Qᵀ. Returns (diagonal, off-diagonal, Q as reflectors).
fn tridiagonalize<T: Real>(m: &SymMatrix<T>) -> (Vec<T>, Vec<T>, Vec<Reflector<T>>) {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut refl = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(2) {
        d[k] = a[k * n + k];
        let mut v: Vec<T> = ((k + 1)..n).map(|i| a[i * n + k]).collect();
        let xnorm = norm(&v);
        if xnorm == T::zero() {
            e[k] = T::zero();
            refl.push(Reflector { v, beta: T::zero() });
            continue;
        }
        let alpha = if v[0] > T::zero() { -xnorm } else { xnorm };
        v[0] = v[0] - alpha;
        let beta = T::lit(2.0) / dot(&v, &v);
        e[k] = alpha;
        let off = k + 1;
        // p = β S v on the trailing block
        let mut p: Vec<T> = a
            .par_chunks(n)
            .skip(off)
            .map(|row| beta * dot(&row[off..], &v))
            .collect();
        let kk = beta * dot(&v, &p) / T::lit(2.0);
        for (pi, &vi) in p.iter_mut().zip(&v) {
            *pi = *pi - kk * vi;
        }
        let w = p;
        a.par_chunks_mut(n).skip(off).enumerate().for_each(|(i, row)| {
            let (vi, wi) = (v[i], w[i]);
            for (j, x) in row[off..].iter_mut().enumerate() {
                *x = *x - vi * w[j] - wi * v[j];
            }
        });
        refl.push(Reflector { v, beta });
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        d[n - 1] = a[(n - 1) * n + n - 1];
    }
    (d, e, refl)
}

/// Eigenvalues of the symmetric tridiagonal (d, e) by implicit QL, decreasing.
fn tql_values<T: Real>(d: &[T], e: &[T]) -> Result<Vec<T>> {
    let n = d.len();
    let mut d = d.to_vec();
    let mut e = e.to_vec();
    if n > 0 {
        e[n - 1] = T::zero();
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Solver { message: "implicit QL did not converge".into(), residual: e[l].to_f64_lossy() });
            }
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(d)
}

/// Solves (T − σ I) x = b for tridiagonal T with partial pivoting.
fn shifted_solve<T: Real>(d: &[T], e: &[T], sigma: T, b: &mut [T], floor: T) {
    let n = d.len();
    // rows hold (diag, super, super2) after elimination
    let mut u0: Vec<T> = d.iter().map(|&x| x - sigma).collect();
    let mut u1: Vec<T> = (0..n).map(|i| if i + 1 < n { e[i] } else { T::zero() }).collect();
    let mut u2 = vec![T::zero(); n];
    let mut lower: Vec<T> = (0..n).map(|i| if i + 1 < n { e[i] } else { T::zero() }).collect();
    for i in 0..n.saturating_sub(1) {
        // candidate rows: i (u0[i], u1[i], u2[i]) and i+1 (lower[i], u0[i+1], u1[i+1])
        if lower[i].abs() > u0[i].abs() {
            let (a0, a1, a2) = (u0[i], u1[i], u2[i]);
            u0[i] = lower[i];
            u1[i] = u0[i + 1];
            u2[i] = u1[i + 1];
            lower[i] = a0;
            u0[i + 1] = a1;
            u1[i + 1] = a2;
            b.swap(i, i + 1);
        }
        if u0[i].abs() < floor {
            u0[i] = floor;
        }
        let f = lower[i] / u0[i];
        u0[i + 1] = u0[i + 1] - f * u1[i];
        u1[i + 1] = u1[i + 1] - f * u2[i];
        b[i + 1] = b[i + 1] - f * b[i];
        lower[i] = f;
    }
    if n > 0 && u0[n - 1].abs() < floor {
        u0[n - 1] = floor;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s = s - u1[i] * b[i + 1];
        }
        if i + 2 < n {
            s = s - u2[i] * b[i + 2];
        }
        b[i] = s / u0[i];
    }
}

fn tridiag_residual<T: Real>(d: &[T], e: &[T], lambda: T, x: &[T]) -> T {
    let n = d.len();
    let mut s = T::zero();
    for i in 0..n {
        let mut y = (d[i] - lambda) * x[i];
        if i > 0 {
            y = y + e[i - 1] * x[i - 1];
        }
        if i + 1 < n {
            y = y + e[i] * x[i + 1];
        }
        s = s + y * y;
    }
    s.sqrt()
}

pub(super) fn leading_eigen<T: Real>(m: &SymMatrix<T>, count: usize, want_vectors: bool) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = m.n();
    let (d, e, refl) = tridiagonalize(m);
    let all = tql_values(&d, &e)?;
    let values: Vec<T> = all[..count].to_vec();
    if !want_vectors {
        return Ok((values, Vec::new()));
    }
    let tnorm = d.iter().zip(&e).fold(T::zero(), |s, (&x, &y)| s.max(x.abs() + T::lit(2.0) * y.abs()));
    let floor = T::epsilon() * tnorm.max(T::min_positive_value());
    let cluster = T::lit(1e-7) * tnorm;
    let mut vecs: Vec<Vec<T>> = Vec::with_capacity(count);
    for (k, &lambda) in values.iter().enumerate() {
        // deterministic, non-degenerate start
        let mut x: Vec<T> = (0..n)
            .map(|i| T::one() + T::lit(0.5) * (T::lit(0.618_033_988_75) * T::from_count(i * (k + 3) + 1)).sin())
            .collect();
        let members: Vec<usize> = (0..k).filter(|&j| (values[j] - lambda).abs() <= cluster).collect();
        let mut best = T::infinity();
        for _ in 0..4 {
            shifted_solve(&d, &e, lambda, &mut x, floor);
            for &j in &members {
                let c = dot(&vecs[j], &x);
                for (xi, &vj) in x.iter_mut().zip(&vecs[j]) {
                    *xi = *xi - c * vj;
                }
            }
            let nx = norm(&x);
            if nx == T::zero() || !nx.is_finite() {
                return Err(Error::Solver { message: "inverse iteration collapsed".into(), residual: f64::NAN });
            }
            for xi in x.iter_mut() {
                *xi = *xi / nx;
            }
            best = tridiag_residual(&d, &e, lambda, &x);
            if best <= T::epsilon() * T::lit(16.0) * tnorm {
                break;
            }
        }
        if best > T::tol(1e-9) * tnorm {
            return Err(Error::Solver { message: format!("inverse iteration for eigenvalue {k}"), residual: best.to_f64_lossy() });
        }
        vecs.push(x);
    }
    let back: Vec<Vec<T>> = vecs
        .into_par_iter()
        .map(|mut z| {
            for (k, r) in refl.iter().enumerate().rev() {
                if r.beta == T::zero() {
                    continue;
                }
                let tail = &mut z[k + 1..];
                let c = r.beta * dot(&r.v, tail);
                for (t, &vi) in tail.iter_mut().zip(&r.v) {
                    *t = *t - c * vi;
                }
            }
            z
        })
        .collect();
    Ok((values, back))
}
