use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Point<T> = [T; 2];

/// A bounded planar region.
///
/// JSON form: `{"shape": "disc", "center": [x, y], "radius": r}`,
/// `{"shape": "ellipse", "center": [x, y], "axes": [a, b]}` (semi-axes along
/// x and y) or `{"shape": "polygon", "vertices": [[x, y], ...]}` with
/// counterclockwise vertices and an optional `center` offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub enum Domain2D<T> {
    Disc { center: Point<T>, radius: T },
    Ellipse { center: Point<T>, axes: [T; 2] },
    Polygon {
        #[serde(default = "origin", skip_serializing_if = "is_origin")]
        center: Point<T>,
        vertices: Vec<Point<T>>,
    },
}

fn origin<T: Real>() -> Point<T> {
    [T::zero(), T::zero()]
}

fn is_origin<T: Real>(p: &Point<T>) -> bool {
    p[0] == T::zero() && p[1] == T::zero()
}

/// A disc given by center and radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle<T> {
    pub center: Point<T>,
    pub radius: T,
}

impl<T: Real> Circle<T> {
    pub fn to_domain(self) -> Domain2D<T> {
        Domain2D::Disc { center: self.center, radius: self.radius }
    }
}

pub(crate) fn sub<T: Real>(a: Point<T>, b: Point<T>) -> Point<T> {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn dist<T: Real>(a: Point<T>, b: Point<T>) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn cross<T: Real>(a: Point<T>, b: Point<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

fn seg_dist<T: Real>(p: Point<T>, a: Point<T>, b: Point<T>) -> T {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > T::zero() { ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).max(T::zero()).min(T::one()) } else { T::zero() };
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

fn segments_cross<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> bool {
    let d1 = cross(sub(b, a), sub(c, a));
    let d2 = cross(sub(b, a), sub(d, a));
    let d3 = cross(sub(d, c), sub(a, c));
    let d4 = cross(sub(d, c), sub(b, c));
    ((d1 > T::zero() && d2 < T::zero()) || (d1 < T::zero() && d2 > T::zero()))
        && ((d3 > T::zero() && d4 < T::zero()) || (d3 < T::zero() && d4 > T::zero()))
}

impl<T: Real> Domain2D<T> {
    pub fn disc(center: Point<T>, radius: T) -> Self {
        Domain2D::Disc { center, radius }
    }

    pub fn ellipse(center: Point<T>, axes: [T; 2]) -> Self {
        Domain2D::Ellipse { center, axes }
    }

    pub fn polygon(vertices: Vec<Point<T>>) -> Self {
        Domain2D::Polygon { center: origin(), vertices }
    }

    /// Axis-aligned square with the given center and side length.
    pub fn square(center: Point<T>, side: T) -> Self {
        let h = side / T::lit(2.0);
        let [x, y] = center;
        Domain2D::polygon(vec![[x - h, y - h], [x + h, y - h], [x + h, y + h], [x - h, y + h]])
    }

    /// Polygon vertices in absolute coordinates.
    pub fn vertices(&self) -> Vec<Point<T>> {
        match self {
            Domain2D::Polygon { center, vertices } => vertices.iter().map(|v| [v[0] + center[0], v[1] + center[1]]).collect(),
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |p: &Point<T>| p[0].is_finite() && p[1].is_finite();
        match self {
            Domain2D::Disc { center, radius } => {
                if !finite(center) || !(*radius > T::zero()) || !radius.is_finite() {
                    return Err(Error::Mesh(format!("disc needs a finite center and positive radius, got {radius}")));
                }
            }
            Domain2D::Ellipse { center, axes } => {
                if !finite(center) || !axes.iter().all(|a| *a > T::zero() && a.is_finite()) {
                    return Err(Error::Mesh("ellipse needs a finite center and positive semi-axes".into()));
                }
            }
            Domain2D::Polygon { center, .. } => {
                let v = self.vertices();
                if !finite(center) || v.len() < 3 || !v.iter().all(finite) {
                    return Err(Error::Mesh("polygon needs at least three finite vertices".into()));
                }
                if !(self.signed_area() > T::zero()) {
                    return Err(Error::Mesh("polygon vertices must be counterclockwise with positive area".into()));
                }
                let n = v.len();
                for i in 0..n {
                    if dist(v[i], v[(i + 1) % n]) == T::zero() {
                        return Err(Error::Mesh(format!("repeated polygon vertex {i}")));
                    }
                    for j in (i + 2)..n {
                        if i == 0 && j == n - 1 {
                            continue;
                        }
                        if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                            return Err(Error::Mesh(format!("polygon edges {i} and {j} intersect")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn signed_area(&self) -> T {
        let v = self.vertices();
        let n = v.len();
        (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<T>() / T::lit(2.0)
    }

    pub fn area(&self) -> T {
        match self {
            Domain2D::Disc { radius, .. } => T::PI() * *radius * *radius,
            Domain2D::Ellipse { axes, .. } => T::PI() * axes[0] * axes[1],
            Domain2D::Polygon { .. } => self.signed_area().abs(),
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            Domain2D::Polygon { .. } => {
                let v = self.vertices();
                let n = v.len();
                (0..n).all(|i| cross(sub(v[(i + 1) % n], v[i]), sub(v[(i + 2) % n], v[(i + 1) % n])) >= T::zero())
            }
            _ => true,
        }
    }

    /// Closed containment test with absolute slack `tol`.
    pub fn contains(&self, p: Point<T>, tol: T) -> bool {
        match self {
            Domain2D::Disc { center, radius } => dist(p, *center) <= *radius + tol,
            Domain2D::Ellipse { center, axes } => {
                let u = (p[0] - center[0]) / axes[0];
                let w = (p[1] - center[1]) / axes[1];
                let r = u.hypot(w);
                // radial distance to the boundary along the ray, scaled back
                r <= T::one() || (r - T::one()) * axes[0].min(axes[1]) <= tol
            }
            Domain2D::Polygon { .. } => {
                let v = self.vertices();
                let n = v.len();
                if (0..n).any(|i| seg_dist(p, v[i], v[(i + 1) % n]) <= tol) {
                    return true;
                }
                let mut inside = false;
                for i in 0..n {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                        if p[0] < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    /// `n` points on the boundary (polygon vertices are always included).
    pub fn boundary_points(&self, n: usize) -> Vec<Point<T>> {
        let n = n.max(8);
        match self {
            Domain2D::Disc { center, radius } => (0..n)
                .map(|i| {
                    let t = T::lit(2.0) * T::PI() * T::from_count(i) / T::from_count(n);
                    [center[0] + *radius * t.cos(), center[1] + *radius * t.sin()]
                })
                .collect(),
            Domain2D::Ellipse { center, axes } => (0..n)
                .map(|i| {
                    let t = T::lit(2.0) * T::PI() * T::from_count(i) / T::from_count(n);
                    [center[0] + axes[0] * t.cos(), center[1] + axes[1] * t.sin()]
                })
                .collect(),
            Domain2D::Polygon { .. } => {
                let v = self.vertices();
                let per = (n / v.len()).max(1);
                let mut out = Vec::with_capacity(per * v.len());
                for i in 0..v.len() {
                    let (a, b) = (v[i], v[(i + 1) % v.len()]);
                    for s in 0..per {
                        let t = T::from_count(s) / T::from_count(per);
                        out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
                    }
                }
                out
            }
        }
    }

    /// Largest distance from the origin to a point of the domain.
    pub fn max_radius(&self) -> T {
        match self {
            Domain2D::Disc { center, radius } => center[0].hypot(center[1]) + *radius,
            _ => self.boundary_points(4096).iter().fold(T::zero(), |m, p| m.max(p[0].hypot(p[1]))),
        }
    }

    /// Smallest length scale, used to set containment slack.
    pub fn scale(&self) -> T {
        match self {
            Domain2D::Disc { radius, .. } => *radius,
            Domain2D::Ellipse { axes, .. } => axes[0].max(axes[1]),
            Domain2D::Polygon { .. } => self.circumscribed_disc().radius,
        }
    }

    /// True when every boundary sample of `inner` lies in `self`.
    pub fn contains_domain(&self, inner: &Domain2D<T>) -> bool {
        let tol = T::tol(1e-9) * self.scale().max(inner.scale());
        inner.boundary_points(2048).into_iter().all(|p| self.contains(p, tol))
    }

    /// Image under x ↦ factor · x.
    pub fn scaled(&self, factor: T) -> Self {
        let s = |p: &Point<T>| [p[0] * factor, p[1] * factor];
        match self {
            Domain2D::Disc { center, radius } => Domain2D::Disc { center: s(center), radius: *radius * factor },
            Domain2D::Ellipse { center, axes } => Domain2D::Ellipse { center: s(center), axes: [axes[0] * factor, axes[1] * factor] },
            Domain2D::Polygon { center, vertices } => {
                Domain2D::Polygon { center: s(center), vertices: vertices.iter().map(s).collect() }
            }
        }
    }

    /// The largest disc contained in the domain (a disc D₁ ⊂ Ω).
    ///
    /// Exact for discs and ellipses; for polygons the center maximising the
    /// distance to the boundary is found by a grid search followed by a
    /// shrinking compass search.
    pub fn inscribed_disc(&self) -> Circle<T> {
        match self {
            Domain2D::Disc { center, radius } => Circle { center: *center, radius: *radius },
            Domain2D::Ellipse { center, axes } => Circle { center: *center, radius: axes[0].min(axes[1]) },
            Domain2D::Polygon { .. } => {
                let v = self.vertices();
                let n = v.len();
                let depth = |p: Point<T>| -> T {
                    if !self.contains(p, T::zero()) {
                        return -T::one();
                    }
                    (0..n).map(|i| seg_dist(p, v[i], v[(i + 1) % n])).fold(T::infinity(), T::min)
                };
                let (lo, hi) = bbox(&v);
                let g = 64;
                let mut best = v[0];
                let mut best_d = -T::one();
                for i in 0..=g {
                    for j in 0..=g {
                        let p = [
                            lo[0] + (hi[0] - lo[0]) * T::from_count(i) / T::from_count(g),
                            lo[1] + (hi[1] - lo[1]) * T::from_count(j) / T::from_count(g),
                        ];
                        let d = depth(p);
                        if d > best_d {
                            best_d = d;
                            best = p;
                        }
                    }
                }
                let mut step = (hi[0] - lo[0]).max(hi[1] - lo[1]) / T::from_count(g);
                let stop = T::epsilon() * T::lit(64.0) * step.max(T::min_positive_value());
                while step > stop {
                    let mut moved = false;
                    for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (0.7, 0.7), (-0.7, 0.7), (0.7, -0.7), (-0.7, -0.7)] {
                        let p = [best[0] + step * T::lit(dx), best[1] + step * T::lit(dy)];
                        let d = depth(p);
                        if d > best_d {
                            best_d = d;
                            best = p;
                            moved = true;
                        }
                    }
                    if !moved {
                        step = step / T::lit(2.0);
                    }
                }
                Circle { center: best, radius: best_d }
            }
        }
    }

    /// The smallest disc containing the domain (a disc D₂ ⊃ Ω).
    pub fn circumscribed_disc(&self) -> Circle<T> {
        match self {
            Domain2D::Disc { center, radius } => Circle { center: *center, radius: *radius },
            Domain2D::Ellipse { center, axes } => Circle { center: *center, radius: axes[0].max(axes[1]) },
            Domain2D::Polygon { .. } => min_enclosing_circle(&self.vertices()),
        }
    }
}

fn bbox<T: Real>(v: &[Point<T>]) -> (Point<T>, Point<T>) {
    let mut lo = v[0];
    let mut hi = v[0];
    for p in v {
        lo = [lo[0].min(p[0]), lo[1].min(p[1])];
        hi = [hi[0].max(p[0]), hi[1].max(p[1])];
    }
    (lo, hi)
}

fn circumcircle<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> Option<Circle<T>> {
    let d = T::lit(2.0) * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d == T::zero() {
        return None;
    }
    let sq = |p: Point<T>| p[0] * p[0] + p[1] * p[1];
    let ux = (sq(a) * (b[1] - c[1]) + sq(b) * (c[1] - a[1]) + sq(c) * (a[1] - b[1])) / d;
    let uy = (sq(a) * (c[0] - b[0]) + sq(b) * (a[0] - c[0]) + sq(c) * (b[0] - a[0])) / d;
    let center = [ux, uy];
    Some(Circle { center, radius: dist(center, a) })
}

/// Exhaustive minimal enclosing circle; polygons here have few vertices.
fn min_enclosing_circle<T: Real>(v: &[Point<T>]) -> Circle<T> {
    let slack = T::one() + T::lit(1e-12);
    let covers = |c: &Circle<T>| v.iter().all(|p| dist(*p, c.center) <= c.radius * slack);
    let mut best: Option<Circle<T>> = None;
    let mut consider = |c: Circle<T>| {
        if best.is_none_or(|b| c.radius < b.radius) && covers(&c) {
            best = Some(c);
        }
    };
    let n = v.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let center = [(v[i][0] + v[j][0]) / T::lit(2.0), (v[i][1] + v[j][1]) / T::lit(2.0)];
            consider(Circle { center, radius: dist(center, v[i]) });
            for k in (j + 1)..n {
                if let Some(c) = circumcircle(v[i], v[j], v[k]) {
                    consider(c);
                }
            }
        }
    }
    best.expect("a polygon with at least two vertices has an enclosing circle")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas() {
        assert!((Domain2D::disc([0.0, 0.0], 1.0).area() - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(Domain2D::square([0.0, 0.0], 1.0_f64).area(), 1.0);
        assert!((Domain2D::ellipse([0.0, 0.0], [2.0, 1.0]).area() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn square_discs() {
        let sq = Domain2D::square([0.0, 0.0], 1.0_f64);
        let ins = sq.inscribed_disc();
        assert!((ins.radius - 0.5).abs() < 1e-9 && ins.center[0].abs() < 1e-9 && ins.center[1].abs() < 1e-9);
        let out = sq.circumscribed_disc();
        assert!((out.radius - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(sq.contains_domain(&ins.to_domain()));
        assert!(out.to_domain().contains_domain(&sq));
        assert!(!Domain2D::disc([0.0, 0.0], 0.6).contains_domain(&sq));
        assert!(Domain2D::disc([0.0, 0.0], 0.75).contains_domain(&sq));
    }

    #[test]
    fn validation() {
        let cw = Domain2D::polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]);
        assert!(cw.validate().is_err());
        let bowtie = Domain2D::polygon(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(bowtie.validate().is_err());
        assert!(Domain2D::disc([0.0, 0.0], -1.0).validate().is_err());
        let l_shape = Domain2D::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]);
        assert!(l_shape.validate().is_ok());
        assert!(!l_shape.is_convex());
        assert!(!l_shape.contains([1.5, 1.5], 0.0));
        assert!(l_shape.contains([0.5, 1.5], 0.0));
    }

    #[test]
    fn json_schema() {
        let d: Domain2D<f64> = serde_json::from_str(r#"{"shape":"disc","center":[0,0],"radius":0.5}"#).unwrap();
        assert_eq!(d, Domain2D::disc([0.0, 0.0], 0.5));
        let e: Domain2D<f64> = serde_json::from_str(r#"{"shape":"ellipse","center":[1,0],"axes":[2,1]}"#).unwrap();
        assert_eq!(e, Domain2D::ellipse([1.0, 0.0], [2.0, 1.0]));
        let p: Domain2D<f64> = serde_json::from_str(r#"{"shape":"polygon","vertices":[[0,0],[1,0],[0,1]]}"#).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert!(serde_json::from_str::<Domain2D<f64>>(r#"{"shape":"disc","center":[0,0],"radius":1,"extra":2}"#).is_err());
        let back: Domain2D<f64> = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
