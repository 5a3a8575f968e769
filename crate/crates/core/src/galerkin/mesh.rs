use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::domain::{dist, Domain2D, Point};

/// Geometry of a mesh cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CellShape<T> {
    /// Annular sector r ∈ [r0, r1], θ ∈ [t0, t1] of the unit disc, mapped by
    /// (x, y) ↦ center + (stretch₀ x, stretch₁ y).
    Sector { r: [T; 2], theta: [T; 2], center: Point<T>, stretch: [T; 2] },
    Triangle([Point<T>; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell<T> {
    pub centroid: Point<T>,
    pub area: T,
    /// Largest distance from the centroid to the cell (sampled for sectors).
    pub radius: T,
    pub shape: CellShape<T>,
}

impl<T: Real> Cell<T> {
    pub fn new(shape: CellShape<T>) -> Self {
        match shape {
            CellShape::Triangle(p) => {
                let third = T::lit(3.0);
                let centroid = [(p[0][0] + p[1][0] + p[2][0]) / third, (p[0][1] + p[1][1] + p[2][1]) / third];
                let area = ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])).abs()
                    / T::lit(2.0);
                let radius = p.iter().map(|&q| dist(q, centroid)).fold(T::zero(), T::max);
                Cell { centroid, area, radius, shape }
            }
            CellShape::Sector { r, theta, center, stretch } => {
                let (r0, r1) = (r[0], r[1]);
                let span = theta[1] - theta[0];
                let two = T::lit(2.0);
                let area = stretch[0] * stretch[1] * (r1 * r1 - r0 * r0) * span / two;
                let half = span / two;
                let rc = T::lit(2.0 / 3.0) * (r1 * r1 * r1 - r0 * r0 * r0) / (r1 * r1 - r0 * r0) * half.sin() / half;
                let tm = (theta[0] + theta[1]) / two;
                let map = |x: T, y: T| [center[0] + stretch[0] * x, center[1] + stretch[1] * y];
                let centroid = map(rc * tm.cos(), rc * tm.sin());
                let mut radius = T::zero();
                for i in 0..=8 {
                    let t = theta[0] + span * T::from_count(i) / T::lit(8.0);
                    for rr in [r0, r1] {
                        radius = radius.max(dist(map(rr * t.cos(), rr * t.sin()), centroid));
                    }
                }
                Cell { centroid, area, radius, shape }
            }
        }
    }

    /// Four children of equal area (sectors) or congruent midpoint triangles.
    pub fn split(&self) -> [Cell<T>; 4] {
        let two = T::lit(2.0);
        match self.shape {
            CellShape::Triangle(p) => {
                let mid = |a: Point<T>, b: Point<T>| [(a[0] + b[0]) / two, (a[1] + b[1]) / two];
                let (m01, m12, m02) = (mid(p[0], p[1]), mid(p[1], p[2]), mid(p[0], p[2]));
                [
                    Cell::new(CellShape::Triangle([p[0], m01, m02])),
                    Cell::new(CellShape::Triangle([m01, p[1], m12])),
                    Cell::new(CellShape::Triangle([m02, m12, p[2]])),
                    Cell::new(CellShape::Triangle([m01, m12, m02])),
                ]
            }
            CellShape::Sector { r, theta, center, stretch } => {
                let rm = ((r[0] * r[0] + r[1] * r[1]) / two).sqrt();
                let tm = (theta[0] + theta[1]) / two;
                let s = |r: [T; 2], theta: [T; 2]| Cell::new(CellShape::Sector { r, theta, center, stretch });
                [s([r[0], rm], [theta[0], tm]), s([r[0], rm], [tm, theta[1]]), s([rm, r[1]], [theta[0], tm]), s([rm, r[1]], [tm, theta[1]])]
            }
        }
    }

    pub fn scaled(&self, f: T) -> Self {
        let s = |p: Point<T>| [p[0] * f, p[1] * f];
        let shape = match self.shape {
            CellShape::Triangle(p) => CellShape::Triangle([s(p[0]), s(p[1]), s(p[2])]),
            CellShape::Sector { r, theta, center, stretch } => {
                CellShape::Sector { r, theta, center: s(center), stretch: [stretch[0] * f, stretch[1] * f] }
            }
        };
        Cell { centroid: s(self.centroid), area: self.area * f * f, radius: self.radius * f, shape }
    }
}

/// Cell decomposition of a planar domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mesh2D<T> {
    pub cells: Vec<Cell<T>>,
    pub total_area: T,
}

impl<T: Real> Mesh2D<T> {
    pub fn from_cells(cells: Vec<Cell<T>>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Mesh("empty mesh".into()));
        }
        if let Some(i) = cells.iter().position(|c| !(c.area > T::zero()) || !c.area.is_finite()) {
            return Err(Error::Mesh(format!("cell {i} has non-positive area")));
        }
        let total_area = cells.iter().map(|c| c.area).sum();
        Ok(Mesh2D { cells, total_area })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn areas(&self) -> Vec<T> {
        self.cells.iter().map(|c| c.area).collect()
    }

    pub fn scaled(&self, f: T) -> Self {
        let cells: Vec<Cell<T>> = self.cells.iter().map(|c| c.scaled(f)).collect();
        Mesh2D { total_area: self.total_area * f * f, cells }
    }

    /// Splits every cell in four. Returns the fine mesh and, for each fine
    /// cell, the index of its parent.
    pub fn refine(&self) -> (Self, Vec<usize>) {
        let mut cells = Vec::with_capacity(4 * self.len());
        let mut parent = Vec::with_capacity(4 * self.len());
        for (i, c) in self.cells.iter().enumerate() {
            cells.extend(c.split());
            parent.extend([i; 4]);
        }
        (Mesh2D { cells, total_area: self.total_area }, parent)
    }

    /// Mesh made of the listed cells.
    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        Mesh2D::from_cells(idx.iter().map(|&i| self.cells[i]).collect())
    }
}

/// Minimum accepted target cell count.
pub const MIN_CELLS: usize = 16;

fn ring_cells<T: Real>(center: Point<T>, stretch: [T; 2], rings: usize, rings_total: usize) -> Vec<Cell<T>> {
    let mut out = Vec::with_capacity(rings * rings);
    let tau = T::lit(2.0) * T::PI();
    for i in 0..rings {
        let r = [T::from_count(i) / T::from_count(rings_total), T::from_count(i + 1) / T::from_count(rings_total)];
        let ns = 2 * i + 1;
        for s in 0..ns {
            let theta = [tau * T::from_count(s) / T::from_count(ns), tau * T::from_count(s + 1) / T::from_count(ns)];
            out.push(Cell::new(CellShape::Sector { r, theta, center, stretch }));
        }
    }
    out
}

fn subdivide<T: Real>(p: [Point<T>; 3], s: usize, out: &mut Vec<Cell<T>>) {
    let at = |i: usize, j: usize| {
        let (u, v) = (T::from_count(i) / T::from_count(s), T::from_count(j) / T::from_count(s));
        [p[0][0] + (p[1][0] - p[0][0]) * u + (p[2][0] - p[0][0]) * v, p[0][1] + (p[1][1] - p[0][1]) * u + (p[2][1] - p[0][1]) * v]
    };
    for i in 0..s {
        for j in 0..(s - i) {
            out.push(Cell::new(CellShape::Triangle([at(i, j), at(i + 1, j), at(i, j + 1)])));
            if j + 1 < s - i {
                out.push(Cell::new(CellShape::Triangle([at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)])));
            }
        }
    }
}

fn ear_clip<T: Real>(v: &[Point<T>]) -> Result<Vec<[Point<T>; 3]>> {
    let cross = |a: Point<T>, b: Point<T>, c: Point<T>| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let inside = |p: Point<T>, a: Point<T>, b: Point<T>, c: Point<T>| {
        cross(a, b, p) >= T::zero() && cross(b, c, p) >= T::zero() && cross(c, a, p) >= T::zero()
    };
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len() - 2);
    while idx.len() > 3 {
        let n = idx.len();
        let ear = (0..n).find(|&k| {
            let (a, b, c) = (v[idx[(k + n - 1) % n]], v[idx[k]], v[idx[(k + 1) % n]]);
            cross(a, b, c) > T::zero()
                && idx.iter().all(|&o| {
                    let p = v[o];
                    p == a || p == b || p == c || !inside(p, a, b, c)
                })
        });
        let k = ear.ok_or_else(|| Error::Mesh("polygon could not be triangulated".into()))?;
        tris.push([v[idx[(k + n - 1) % n]], v[idx[k]], v[idx[(k + 1) % n]]]);
        idx.remove(k);
    }
    tris.push([v[idx[0]], v[idx[1]], v[idx[2]]]);
    Ok(tris)
}

/// Quasi-uniform mesh with roughly `target_cells` cells.
///
/// Discs and ellipses use m rings of equal width, ring i cut into 2i + 1
/// equal sectors (m² equal-area cells). Convex polygons are fanned from the
/// area centroid, other polygons ear-clipped, and every triangle is cut into
/// s² congruent copies.
pub fn build_mesh<T: Real>(domain: &Domain2D<T>, target_cells: usize) -> Result<Mesh2D<T>> {
    domain.validate()?;
    if target_cells < MIN_CELLS {
        return Err(Error::Mesh(format!("target_cells must be at least {MIN_CELLS}, got {target_cells}")));
    }
    let cells = match domain {
        Domain2D::Disc { center, radius } => {
            let m = ((target_cells as f64).sqrt().round() as usize).max(2);
            ring_cells(*center, [*radius, *radius], m, m)
        }
        Domain2D::Ellipse { center, axes } => {
            let m = ((target_cells as f64).sqrt().round() as usize).max(2);
            ring_cells(*center, *axes, m, m)
        }
        Domain2D::Polygon { .. } => {
            let v = domain.vertices();
            let tris: Vec<[Point<T>; 3]> = if domain.is_convex() {
                let c = polygon_centroid(&v);
                (0..v.len()).map(|i| [c, v[i], v[(i + 1) % v.len()]]).collect()
            } else {
                ear_clip(&v)?
            };
            let per = target_cells as f64 / tris.len() as f64;
            let s = (per.sqrt().round() as usize).max(1);
            let mut out = Vec::with_capacity(tris.len() * s * s);
            for t in tris {
                subdivide(t, s, &mut out);
            }
            out
        }
    };
    Mesh2D::from_cells(cells)
}

fn polygon_centroid<T: Real>(v: &[Point<T>]) -> Point<T> {
    let n = v.len();
    let (mut a, mut cx, mut cy) = (T::zero(), T::zero(), T::zero());
    for i in 0..n {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let c = p[0] * q[1] - q[0] * p[1];
        a = a + c;
        cx = cx + (p[0] + q[0]) * c;
        cy = cy + (p[1] + q[1]) * c;
    }
    let six_a = T::lit(3.0) * a;
    [cx / six_a, cy / six_a]
}

/// Concentric disc meshes whose inner mesh is literally a subset of the
/// outer one.
#[derive(Debug, Clone)]
pub struct NestedMeshes<T> {
    pub inner: Mesh2D<T>,
    pub outer: Mesh2D<T>,
    /// Positions of the inner cells inside the outer mesh.
    pub inner_indices: Vec<usize>,
    /// Radius actually covered by the inner mesh (rounded to a ring boundary).
    pub inner_radius: T,
}

/// Ring meshes of Disc(center, r_outer) with `rings` rings, and of the inner
/// disc made of its first rings up to (about) r_inner.
pub fn nested_disc_meshes<T: Real>(center: Point<T>, r_inner: T, r_outer: T, rings: usize) -> Result<NestedMeshes<T>> {
    if !(r_inner > T::zero() && r_inner <= r_outer) {
        return Err(Error::Mesh(format!("need 0 < r_inner <= r_outer, got {r_inner} and {r_outer}")));
    }
    if rings < 2 {
        return Err(Error::Mesh("at least two rings are needed".into()));
    }
    let inner_rings = ((r_inner / r_outer * T::from_count(rings)).round().to_f64_lossy() as usize).clamp(1, rings);
    let outer_cells = ring_cells(center, [r_outer, r_outer], rings, rings);
    let n_inner = inner_rings * inner_rings;
    let inner = Mesh2D::from_cells(outer_cells[..n_inner].to_vec())?;
    let outer = Mesh2D::from_cells(outer_cells)?;
    Ok(NestedMeshes {
        inner,
        outer,
        inner_indices: (0..n_inner).collect(),
        inner_radius: r_outer * T::from_count(inner_rings) / T::from_count(rings),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    type D = crate::galerkin::Domain2D<f64>;
    use std::f64::consts::PI;

    #[test]
    fn areas_match_domains() {
        let d = build_mesh(&D::disc([0.0, 0.0], 1.0), 100).unwrap();
        assert_eq!(d.len(), 100);
        assert!((d.total_area / PI - 1.0).abs() < 1e-6);
        let s = build_mesh(&D::square([0.0, 0.0], 1.0), 64).unwrap();
        assert_eq!(s.len(), 64);
        assert!((s.total_area - 1.0).abs() < 1e-14);
        let e = build_mesh(&D::ellipse([0.0, 0.0], [2.0, 1.0]), 200).unwrap();
        assert!((e.total_area / (2.0 * PI) - 1.0).abs() < 1e-6);
        assert!(e.len() >= 100 && e.len() <= 400);
    }

    #[test]
    fn ring_cells_have_equal_area() {
        let d = build_mesh(&D::disc([0.3, -0.1], 0.5), 400).unwrap();
        let a0 = d.cells[0].area;
        for c in &d.cells {
            assert!((c.area / a0 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cells_are_disjoint_by_centroid_containment() {
        // each child centroid lies in exactly its own parent: no overlap
        let m = build_mesh(&D::square([0.0, 0.0], 1.0), 64).unwrap();
        let (fine, parent) = m.refine();
        assert_eq!(fine.len(), 4 * m.len());
        for (i, c) in fine.cells.iter().enumerate() {
            let p = &m.cells[parent[i]];
            let CellShape::Triangle(t) = p.shape else { panic!() };
            let tri = D::polygon(t.to_vec());
            assert!(tri.contains(c.centroid, 0.0));
        }
        assert!((fine.total_area - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nonconvex_polygon() {
        let l = D::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]);
        let m = build_mesh(&l, 100).unwrap();
        assert!((m.total_area - 3.0).abs() < 1e-13);
        for c in &m.cells {
            assert!(l.contains(c.centroid, 0.0));
        }
    }

    #[test]
    fn sector_split_preserves_area_and_centroid() {
        let m = build_mesh(&D::ellipse([0.0, 0.0], [1.0, 0.5]), 25).unwrap();
        for c in &m.cells {
            let kids = c.split();
            let a: f64 = kids.iter().map(|k| k.area).sum();
            assert!((a / c.area - 1.0).abs() < 1e-13);
            let cx: f64 = kids.iter().map(|k| k.area * k.centroid[0]).sum::<f64>() / a;
            let cy: f64 = kids.iter().map(|k| k.area * k.centroid[1]).sum::<f64>() / a;
            assert!((cx - c.centroid[0]).abs() < 1e-13 && (cy - c.centroid[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn nested_meshes_share_cells() {
        let n = nested_disc_meshes([0.0, 0.0], 0.5_f64, 1.0, 10).unwrap();
        assert_eq!(n.inner.len(), 25);
        assert_eq!(n.outer.len(), 100);
        assert!((n.inner_radius - 0.5).abs() < 1e-15);
        assert!((n.inner.total_area / (PI * 0.25) - 1.0).abs() < 1e-12);
        for (k, &i) in n.inner_indices.iter().enumerate() {
            assert_eq!(n.inner.cells[k], n.outer.cells[i]);
        }
    }

    #[test]
    fn rejects_tiny_targets_and_bad_domains() {
        assert!(build_mesh(&D::disc([0.0, 0.0], 1.0), 8).is_err());
        assert!(build_mesh(&D::disc([0.0, 0.0], 0.0), 100).is_err());
    }
}
