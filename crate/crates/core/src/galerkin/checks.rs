use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::assemble::{assemble, OperatorMatrix};
use super::domain::Domain2D;
use super::mesh::{build_mesh, Mesh2D, NestedMeshes};
use super::spectrum::spectrum;

/// Default relative slack for comparing eigenvalues from different meshes.
pub const DEFAULT_TAU: f64 = 0.02;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeComparison<T> {
    pub k: usize,
    pub inner: T,
    pub outer: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonicityReport<T> {
    pub tau: T,
    pub inner_cells: usize,
    pub outer_cells: usize,
    pub modes: Vec<ModeComparison<T>>,
    pub all_pass: bool,
}

fn compare<T: Real>(inner: &[T], outer: &[T], tau: T) -> (Vec<ModeComparison<T>>, bool) {
    let modes: Vec<ModeComparison<T>> = inner
        .iter()
        .zip(outer)
        .enumerate()
        .map(|(k, (&i, &o))| ModeComparison { k, inner: i, outer: o, pass: i <= o * (T::one() + tau) })
        .collect();
    let all = modes.iter().all(|m| m.pass);
    (modes, all)
}

/// Checks λ_k(inner) ≤ λ_k(outer)(1 + τ) for k < count with both domains
/// meshed at the same target cell count.
pub fn monotonicity_check<T: Real>(
    inner: &Domain2D<T>,
    outer: &Domain2D<T>,
    count: usize,
    cells: usize,
    tau: T,
) -> Result<MonotonicityReport<T>> {
    inner.validate()?;
    outer.validate()?;
    if !outer.contains_domain(inner) {
        return Err(Error::Precondition("inner domain is not contained in the outer domain".into()));
    }
    let mi = build_mesh(inner, cells)?;
    let mo = build_mesh(outer, cells)?;
    let (si, so) = rayon::join(
        || assemble(&mi).and_then(|op| spectrum(&op, count, false)),
        || assemble(&mo).and_then(|op| spectrum(&op, count, false)),
    );
    let (si, so) = (si?, so?);
    let (modes, all_pass) = compare(&si.eigenvalues, &so.eigenvalues, tau);
    Ok(MonotonicityReport { tau, inner_cells: mi.len(), outer_cells: mo.len(), modes, all_pass })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionReport<T> {
    pub modes: Vec<ModeComparison<T>>,
    /// Rayleigh quotient on the outer mesh of each zero-padded inner eigenvector.
    pub padded_quotients: Vec<T>,
    pub all_pass: bool,
}

/// Extension by zero on nested meshes: every inner eigenvector, padded with
/// zeros on the annulus cells, keeps its Rayleigh quotient in the outer
/// operator, and λ_k(inner) ≤ λ_k(outer)(1 + τ).
pub fn extension_check<T: Real>(nested: &NestedMeshes<T>, count: usize, tau: T) -> Result<ExtensionReport<T>> {
    let outer = assemble(&nested.outer)?;
    let inner = outer.principal(&nested.inner_indices)?;
    let si = spectrum(&inner, count, true)?;
    let so = spectrum(&outer, count, false)?;
    let mut padded_quotients = Vec::with_capacity(count);
    for k in 0..count {
        let v = si.vector(k)?;
        let mut big = vec![T::zero(); outer.n()];
        for (&i, &x) in nested.inner_indices.iter().zip(v) {
            big[i] = x;
        }
        padded_quotients.push(outer.rayleigh_quotient(&big));
    }
    let (modes, mut all_pass) = compare(&si.eigenvalues, &so.eigenvalues, tau);
    let tol = T::tol(1e-10);
    for (q, l) in padded_quotients.iter().zip(&si.eigenvalues) {
        all_pass &= (*q - *l).abs() <= tol * l.abs();
    }
    Ok(ExtensionReport { modes, padded_quotients, all_pass })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementReport<T> {
    pub cells: Vec<usize>,
    pub lambda0: Vec<T>,
    /// λ₀ never decreases from one level to the next.
    pub monotone: bool,
}

/// λ₀ on a hierarchy of nested meshes (each cell split in four per level).
///
/// Only the finest operator is assembled; coarser ones are its exact
/// restrictions to the coarser piecewise-constant spaces, so the spaces are
/// nested and min-max makes λ₀ non-decreasing.
pub fn refinement_check<T: Real>(domain: &Domain2D<T>, base_cells: usize, levels: usize) -> Result<RefinementReport<T>> {
    if levels < 2 {
        return Err(Error::Precondition("need at least two refinement levels".into()));
    }
    let mut meshes: Vec<Mesh2D<T>> = vec![build_mesh(domain, base_cells)?];
    let mut parents = Vec::new();
    for _ in 1..levels {
        let (fine, parent) = meshes.last().expect("non-empty").refine();
        meshes.push(fine);
        parents.push(parent);
    }
    let mut ops: Vec<OperatorMatrix<T>> = vec![assemble(meshes.last().expect("non-empty"))?];
    for lvl in (0..levels - 1).rev() {
        let coarser = ops.last().expect("non-empty").aggregate(&meshes[lvl], &parents[lvl])?;
        ops.push(coarser);
    }
    ops.reverse();
    let lambda0 = ops.iter().map(|op| spectrum(op, 1, false).map(|s| s.eigenvalues[0])).collect::<Result<Vec<T>>>()?;
    let slack = T::one() - T::tol(1e-12);
    let monotone = lambda0.windows(2).all(|w| w[1] >= w[0] * slack);
    Ok(RefinementReport { cells: meshes.iter().map(|m| m.len()).collect(), lambda0, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    type D = crate::galerkin::Domain2D<f64>;
    use crate::galerkin::mesh::nested_disc_meshes;

    #[test]
    fn square_inside_disc() {
        let sq = D::square([0.0, 0.0], 1.0);
        let d = D::disc([0.0, 0.0], 0.75);
        let r = monotonicity_check(&sq, &d, 10, 400, DEFAULT_TAU).unwrap();
        assert!(r.all_pass, "{r:?}");
        assert!(matches!(monotonicity_check(&d, &sq, 4, 64, DEFAULT_TAU), Err(Error::Precondition(_))));
    }

    #[test]
    fn identical_domains_pass() {
        let sq = D::square([0.0, 0.0], 0.3);
        let r = monotonicity_check(&sq, &sq, 5, 100, 0.0).unwrap();
        assert!(r.all_pass);
        for m in &r.modes {
            assert_eq!(m.inner, m.outer);
        }
    }

    #[test]
    fn zero_padding_keeps_quotients() {
        let nested = nested_disc_meshes([0.0, 0.0], 0.25, 0.5, 12).unwrap();
        let r = extension_check(&nested, 6, 0.0).unwrap();
        assert!(r.all_pass, "{r:?}");
    }

    #[test]
    fn nested_refinement_is_monotone() {
        let r = refinement_check(&D::disc([0.0, 0.0], 0.1), 25, 3).unwrap();
        assert_eq!(r.cells, vec![25, 100, 400]);
        assert!(r.monotone, "{:?}", r.lambda0);
    }
}
