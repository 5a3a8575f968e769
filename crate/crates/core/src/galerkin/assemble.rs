
use crate::error::{Error, Result};
use crate::linalg::{dot, SymMatrix};
use crate::scalar::Real;

use super::domain::{dist, Point};
use super::mesh::Mesh2D;

/// φ₀(d) = −log(d) / 2π
#[inline]
pub fn log_kernel<T: Real>(d: T) -> T {
    -d.ln() / (T::lit(2.0) * T::PI())
}

/// ∬_{D_r × D_r} φ₀(|x − y|) dx dy = (π r⁴ / 2)(1/4 − log r).
pub fn disc_self_integral<T: Real>(r: T) -> T {
    T::PI() * r.powi(4) / T::lit(2.0) * (T::lit(0.25) - r.ln())
}

/// Centroid distances below this multiple of the summed cell radii use the
/// 4 × 4 sub-cell rule.
pub const NEAR_FACTOR: f64 = 3.0;

/// Galerkin matrix A_ij = ∬_{cell_i × cell_j} φ₀ on piecewise constants,
/// together with the mesh it lives on.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<T> {
    pub matrix: SymMatrix<T>,
    pub mesh: Mesh2D<T>,
}

struct Sub<T> {
    c: Point<T>,
    w: T,
}

/// Assembles the log-kernel Galerkin matrix of a mesh.
///
/// Well separated pairs use the centroid rule; near pairs are integrated
/// over the 16 products of their children; diagonal entries use the exact
/// self-integral of the disc of equal area.
pub fn assemble<T: Real>(mesh: &Mesh2D<T>) -> Result<OperatorMatrix<T>> {
    let n = mesh.len();
    let cells = &mesh.cells;
    let subs: Vec<[Sub<T>; 4]> = cells
        .iter()
        .map(|c| c.split().map(|k| Sub { c: k.centroid, w: k.area }))
        .collect();
    let near = T::lit(NEAR_FACTOR);
    let entry = |i: usize, j: usize| -> T {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            return disc_self_integral((cells[i].area / T::PI()).sqrt());
        }
        let d = dist(cells[i].centroid, cells[j].centroid);
        if d < near * (cells[i].radius + cells[j].radius) {
            let mut s = T::zero();
            for a in &subs[i] {
                for b in &subs[j] {
                    s = s + a.w * b.w * log_kernel(dist(a.c, b.c));
                }
            }
            s
        } else {
            cells[i].area * cells[j].area * log_kernel(d)
        }
    };
    let matrix = SymMatrix::from_fn(n, entry);
    if let Some(k) = matrix.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(Error::Assembly(format!(
            "cells {} and {} overlap (coincident quadrature points)",
            k / n,
            k % n
        )));
    }
    Ok(OperatorMatrix { matrix, mesh: mesh.clone() })
}

impl<T: Real> OperatorMatrix<T> {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn areas(&self) -> Vec<T> {
        self.mesh.areas()
    }

    /// vᵀ A v / vᵀ M v, with M the diagonal of cell areas.
    pub fn rayleigh_quotient(&self, v: &[T]) -> T {
        let m: T = v.iter().zip(&self.mesh.cells).map(|(&x, c)| x * x * c.area).sum();
        self.matrix.quadratic_form(v) / m
    }

    /// Operator on the sub-mesh formed by the listed cells.
    pub fn principal(&self, idx: &[usize]) -> Result<Self> {
        Ok(OperatorMatrix { matrix: self.matrix.principal(idx), mesh: self.mesh.subset(idx)? })
    }

    /// Restriction to a coarser mesh: entries of cells sharing a parent are
    /// summed (Pᵀ A P for the piecewise-constant prolongation P).
    pub fn aggregate(&self, coarse: &Mesh2D<T>, parent: &[usize]) -> Result<Self> {
        if parent.len() != self.n() || parent.iter().any(|&p| p >= coarse.len()) {
            return Err(Error::Precondition("parent map does not match the meshes".into()));
        }
        let nc = coarse.len();
        let mut children = vec![Vec::new(); nc];
        for (i, &p) in parent.iter().enumerate() {
            children[p].push(i);
        }
        let matrix = SymMatrix::from_fn(nc, |a, b| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let mut s = T::zero();
            for &i in &children[a] {
                for &j in &children[b] {
                    s = s + self.matrix.get(i, j);
                }
            }
            s
        });
        Ok(OperatorMatrix { matrix, mesh: coarse.clone() })
    }

    /// Operator on the image of the mesh under x ↦ a·x.
    ///
    /// Uses φ₀(a x, a y) = φ₀(x, y) − log(a)/2π, so
    /// A(a) = a⁴ (A − log(a)/2π · w wᵀ) with w the cell areas.
    pub fn rescaled(&self, a: T) -> Self {
        let w = self.areas();
        let shift = a.ln() / (T::lit(2.0) * T::PI());
        let a4 = a.powi(4);
        let matrix = SymMatrix::from_fn(self.n(), |i, j| a4 * (self.matrix.get(i, j) - shift * w[i] * w[j]));
        OperatorMatrix { matrix, mesh: self.mesh.scaled(a) }
    }

    /// Cell averages of N(1): (A·1)_i / |cell_i|.
    pub fn potential_of_one(&self) -> Vec<T> {
        let ones = vec![T::one(); self.n()];
        self.matrix.matvec(&ones).into_iter().zip(&self.mesh.cells).map(|(x, c)| x / c.area).collect()
    }

    /// ‖N(1)‖ in L²(Ω) for the piecewise-constant representation.
    pub fn potential_of_one_norm(&self) -> T {
        let u = self.potential_of_one();
        u.iter().zip(&self.mesh.cells).map(|(&x, c)| x * x * c.area).sum::<T>().sqrt()
    }

    /// ⟨u, A u⟩ with u given by cell values; equals ⟨u, N u⟩ for piecewise constants.
    pub fn quadratic_form(&self, u: &[T]) -> T {
        dot(u, &self.matrix.matvec(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    type D = crate::galerkin::Domain2D<f64>;
    use crate::galerkin::mesh::{build_mesh, Cell, CellShape};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_square_at(x: f64, y: f64) -> Vec<Cell<f64>> {
        let p = |a: f64, b: f64| [x + a, y + b];
        vec![
            Cell::new(CellShape::Triangle([p(-0.5, -0.5), p(0.5, -0.5), p(0.5, 0.5)])),
            Cell::new(CellShape::Triangle([p(-0.5, -0.5), p(0.5, 0.5), p(-0.5, 0.5)])),
        ]
    }

    // Mandatory check of the diagonal closed form: Monte-Carlo estimate of
    // the double integral over a disc of radius 0.1 with 10⁷ point pairs.
    #[test]
    fn self_integral_matches_monte_carlo() {
        let r = 0.1_f64;
        let mut rng = ChaCha8Rng::seed_from_u64(20240611);
        let n = 10_000_000usize;
        let mut sample = || {
            let rho = r * rng.gen::<f64>().sqrt();
            let t = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            [rho * t.cos(), rho * t.sin()]
        };
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let (x, y) = (sample(), sample());
            let v = log_kernel(dist(x, y));
            s += v;
            s2 += v * v;
        }
        let area2 = (std::f64::consts::PI * r * r).powi(2);
        let mean = s / n as f64;
        let sigma = ((s2 / n as f64 - mean * mean) / n as f64).sqrt() * area2;
        let mc = mean * area2;
        let exact = disc_self_integral(r);
        assert!((mc - exact).abs() <= 3.0 * sigma, "mc {mc} exact {exact} sigma {sigma}");
    }

    #[test]
    fn far_cells_follow_kernel() {
        for d in [10.0, 40.0] {
            let mut cells = unit_square_at(0.0, 0.0);
            cells.extend(unit_square_at(d, 0.0));
            let m = Mesh2D::from_cells(cells).unwrap();
            let op = assemble(&m).unwrap();
            // two triangles per square: sum the 2 × 2 block
            let v = op.matrix.get(0, 2) + op.matrix.get(0, 3) + op.matrix.get(1, 2) + op.matrix.get(1, 3);
            let want = log_kernel(d);
            assert!((v / want - 1.0).abs() <= 1e-3, "d={d}");
        }
    }

    #[test]
    fn symmetric_and_rescaling_exact() {
        let m = build_mesh(&D::ellipse([0.1, 0.0], [1.0, 0.5]), 64).unwrap();
        let op = assemble(&m).unwrap();
        assert!(op.matrix.asymmetry() <= 1e-13 * op.matrix.max_abs());
        let a = 0.05;
        let direct = assemble(&m.scaled(a)).unwrap();
        let viar = op.rescaled(a);
        for i in 0..op.n() {
            for j in 0..op.n() {
                let (x, y) = (direct.matrix.get(i, j), viar.matrix.get(i, j));
                assert!((x - y).abs() <= 1e-12 * x.abs(), "{i},{j}");
            }
        }
    }

    #[test]
    fn potential_of_one_on_unit_disc() {
        // N(1) = (1 − r²)/4, ‖N(1)‖² = π/48
        let m = build_mesh(&D::disc([0.0, 0.0], 1.0), 400).unwrap();
        let op = assemble(&m).unwrap();
        let norm = op.potential_of_one_norm();
        assert!((norm / (std::f64::consts::PI / 48.0).sqrt() - 1.0).abs() < 0.02);
    }

    #[test]
    fn overlapping_cells_rejected() {
        let mut cells = unit_square_at(0.0, 0.0);
        cells.extend(unit_square_at(0.0, 0.0));
        let m = Mesh2D::from_cells(cells).unwrap();
        assert!(matches!(assemble(&m), Err(Error::Assembly(_))));
    }

    #[test]
    fn aggregation_sums_blocks() {
        let m = build_mesh(&D::square([0.0, 0.0], 1.0), 16).unwrap();
        let (fine, parent) = m.refine();
        let op = assemble(&fine).unwrap();
        let agg = op.aggregate(&m, &parent).unwrap();
        let ones = vec![1.0; fine.len()];
        let onesc = vec![1.0; m.len()];
        assert!((op.quadratic_form(&ones) - agg.quadratic_form(&onesc)).abs() < 1e-14);
        assert!(agg.matrix.asymmetry() == 0.0);
    }
}
