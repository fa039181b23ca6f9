//! The matroid base polytope `P_M = conv{e_B}` in V- and H-representation:
//! dimension, membership, relative interior, geometric edge detection and
//! boundary classification.
//!
//! Edge detection is deliberately geometric (an exact midpoint-in-hull
//! feasibility test) so that the combinatorial edge characterization can be
//! asserted against it rather than assumed.

use crate::linalg::{affine_dim, QVector};
use crate::matroid::{indicator_rationals, IndexSet, LinearMatroid};
use crate::scalar::{Rational, Scalar};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("vector length {got} does not match ambient dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("point lies outside the polytope")]
    OutsidePolytope,
    #[error("vertex count {count} exceeds cap {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

/// Default vertex cap for geometric edge enumeration.
pub const EDGE_VERTEX_CAP: usize = 500;

/// Vertex representation: one 0/1 indicator per basis, in basis order.
#[derive(Debug, Clone)]
pub struct VRep {
    ambient: usize,
    vertices: Vec<IndexSet>,
}

impl VRep {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> IndexSet {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[IndexSet] {
        &self.vertices
    }

    pub fn vertex_floats(&self, i: usize) -> Vec<f64> {
        (0..self.ambient)
            .map(|j| if self.vertices[i].contains(j) { 1.0 } else { 0.0 })
            .collect()
    }

    pub fn vertex_rationals(&self, i: usize) -> Vec<Rational> {
        indicator_rationals(self.vertices[i], self.ambient)
    }

    /// Average of all vertices (always in the relative interior).
    pub fn barycenter_floats(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.ambient];
        for v in &self.vertices {
            for j in v.iter() {
                acc[j] += 1.0;
            }
        }
        let count = self.vertices.len() as f64;
        acc.iter_mut().for_each(|x| *x /= count);
        acc
    }
}

/// Halfspace representation: `sum x_i = n`, one `sum_{i in F} x_i <= rank F`
/// per flat, and `x_i >= 0`. No redundancy elimination.
#[derive(Debug, Clone)]
pub struct HRep {
    ambient: usize,
    target_sum: usize,
    rows: Vec<(IndexSet, usize)>,
}

impl HRep {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Right-hand side of the equality constraint (the rank n).
    pub fn target_sum(&self) -> usize {
        self.target_sum
    }

    /// Flat inequality rows `(indicator, rank bound)`.
    pub fn rows(&self) -> &[(IndexSet, usize)] {
        &self.rows
    }

    fn check_len<S>(&self, x: &[S]) -> Result<(), PolytopeError> {
        if x.len() != self.ambient {
            return Err(PolytopeError::LengthMismatch { expected: self.ambient, got: x.len() });
        }
        Ok(())
    }

    /// Membership within an absolute per-constraint tolerance (use
    /// [`Rational`] scalars for an exact decision).
    pub fn contains<S: Scalar>(&self, x: &[S], tol: f64) -> Result<bool, PolytopeError> {
        self.check_len(x)?;
        let band = S::equality_band(tol);
        let zero = S::zero();
        for v in x {
            if *v < zero.clone() - band.clone() {
                return Ok(false);
            }
        }
        let total = S::sum_iter(x.iter().cloned());
        let target = S::from_int(self.target_sum as i64);
        if (total - target).abs_val() > band {
            return Ok(false);
        }
        for (mask, bound) in &self.rows {
            let s = S::sum_iter(mask.iter().map(|i| x[i].clone()));
            if s > S::from_int(*bound as i64) + band.clone() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of flat rows tight at `x`, and coordinates tight at zero.
    pub fn tight_at<S: Scalar>(
        &self,
        x: &[S],
        tol: f64,
    ) -> Result<(Vec<usize>, Vec<usize>), PolytopeError> {
        self.check_len(x)?;
        let band = S::equality_band(tol);
        let mut rows = Vec::new();
        for (idx, (mask, bound)) in self.rows.iter().enumerate() {
            let s = S::sum_iter(mask.iter().map(|i| x[i].clone()));
            if (s - S::from_int(*bound as i64)).abs_val() <= band {
                rows.push(idx);
            }
        }
        let zeros = x
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs_val() <= band)
            .map(|(i, _)| i)
            .collect();
        Ok((rows, zeros))
    }
}

/// Classification of a point relative to the base polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryTag {
    Infeasible,
    Interior,
    Vertex,
    EdgeInterior,
    OtherFace,
}

#[derive(Debug, Clone)]
pub struct BoundaryClass {
    pub tag: BoundaryTag,
    /// Flats whose inequality is tight at the point.
    pub active_flats: Vec<IndexSet>,
}

/// Indicator vertices of all bases, in basis order.
pub fn vrep(m: &LinearMatroid) -> VRep {
    VRep { ambient: m.ground_size(), vertices: m.bases().to_vec() }
}

/// The flat-inequality halfspace description, straight from the flat list.
pub fn hrep(m: &LinearMatroid) -> HRep {
    HRep {
        ambient: m.ground_size(),
        target_sum: m.n(),
        rows: m.flats().iter().map(|f| (f.indices, f.rank)).collect(),
    }
}

/// Dimension of the base polytope: `N - c(M)`, cross-checked against the
/// affine dimension of the vertex set.
pub fn dimension(m: &LinearMatroid) -> Result<usize, PolytopeError> {
    let combinatorial = m.ground_size() - m.components().count();
    let points: Vec<QVector> = m
        .bases()
        .iter()
        .map(|b| QVector::new(indicator_rationals(*b, m.ground_size())))
        .collect();
    let geometric = affine_dim(&points)
        .map_err(|e| PolytopeError::Inconsistency(format!("affine_dim failed: {e}")))?;
    if combinatorial != geometric {
        return Err(PolytopeError::Inconsistency(format!(
            "dimension mismatch: N - c(M) = {combinatorial}, affine dim = {geometric}"
        )));
    }
    Ok(combinatorial)
}

/// Decides whether a flat inequality is tight on the whole polytope by
/// scanning all vertices, and cross-checks the separator criterion.
fn flat_is_polytope_wide(
    m: &LinearMatroid,
    flat: IndexSet,
    bound: usize,
) -> Result<bool, PolytopeError> {
    let by_scan = m.bases().iter().all(|b| b.intersection(flat).len() == bound);
    let by_separator = m.components().is_separator(flat);
    if by_scan != by_separator {
        return Err(PolytopeError::Inconsistency(format!(
            "flat {flat}: vertex scan says {by_scan}, separator criterion says {by_separator}"
        )));
    }
    Ok(by_scan)
}

/// Relative-interior membership: every inequality tight at `x` must be tight
/// on the whole polytope. Nonnegativity is never polytope-wide (no loops).
pub fn in_relint<S: Scalar>(
    m: &LinearMatroid,
    h: &HRep,
    x: &[S],
    tol: f64,
) -> Result<bool, PolytopeError> {
    if !h.contains(x, tol)? {
        return Err(PolytopeError::OutsidePolytope);
    }
    let (tight_rows, tight_zeros) = h.tight_at(x, tol)?;
    if !tight_zeros.is_empty() {
        return Ok(false);
    }
    for idx in tight_rows {
        let (flat, bound) = h.rows()[idx];
        if !flat_is_polytope_wide(m, flat, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact LP feasibility: does `target` lie in the convex hull of `points`?
/// Phase-one simplex over rationals with Bland's rule; the decision is exact.
fn in_convex_hull(points: &[Vec<Rational>], target: &[Rational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = target.len();
    let rows = dim + 1; // coordinate rows plus the convexity row
    let real = points.len();
    let total = real + rows; // real variables plus one artificial per row
    let rhs = total; // RHS column index
    // Rows: sum_j lambda_j p_j = target and sum_j lambda_j = 1, with an
    // artificial identity block; minimize the artificial sum.
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row: Vec<Rational> = Vec::with_capacity(total + 1);
        for p in points {
            row.push(if r < dim { p[r].clone() } else { Rational::one() });
        }
        for k in 0..rows {
            row.push(if k == r { Rational::one() } else { Rational::zero() });
        }
        row.push(if r < dim { target[r].clone() } else { Rational::one() });
        // Flip rows with negative RHS so the artificial start is feasible.
        if row[rhs] < Rational::zero() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        a.push(row);
    }
    let mut basis: Vec<usize> = (real..total).collect();
    // Reduced-cost row d_j = z_j - c_j with c = (0,...,0, 1,...,1); the RHS
    // slot carries the current objective value.
    let mut d: Vec<Rational> = (0..=total)
        .map(|j| {
            let z: Rational = a.iter().map(|row| row[j].clone()).sum();
            if (real..total).contains(&j) {
                z - Rational::one()
            } else {
                z
            }
        })
        .collect();
    loop {
        // Bland: entering = smallest index with positive reduced cost.
        let Some(e) = (0..total).find(|&j| d[j] > Rational::zero()) else {
            break;
        };
        // Ratio test with Bland tie-break on the leaving basis index.
        let mut pivot: Option<(usize, Rational)> = None;
        for (r, row) in a.iter().enumerate() {
            if row[e] > Rational::zero() {
                let ratio = &row[rhs] / &row[e];
                let better = match &pivot {
                    None => true,
                    Some((br, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*br]),
                };
                if better {
                    pivot = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = pivot else {
            // Phase one is bounded below by zero, so this cannot happen.
            return false;
        };
        let piv = a[pr][e].clone();
        for v in a[pr].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..rows {
            if r != pr && !a[r][e].is_zero() {
                let factor = a[r][e].clone();
                for j in 0..=total {
                    let delta = &factor * &a[pr][j];
                    a[r][j] = &a[r][j] - &delta;
                }
            }
        }
        if !d[e].is_zero() {
            let factor = d[e].clone();
            for j in 0..=total {
                let delta = &factor * &a[pr][j];
                d[j] = &d[j] - &delta;
            }
        }
        basis[pr] = e;
    }
    d[rhs].is_zero()
}

/// All geometric edges as vertex-index pairs `(i, j)`, `i < j`.
///
/// A pair is an edge iff its midpoint cannot be written as a convex
/// combination of vertices on the smallest face containing the midpoint,
/// excluding the pair itself. Every returned difference is checked to be of
/// the form `±(e_i - e_j)`.
pub fn edges_smallcase(
    m: &LinearMatroid,
    cap: usize,
) -> Result<Vec<(usize, usize)>, PolytopeError> {
    let v = vrep(m);
    if v.len() > cap {
        return Err(PolytopeError::CapExceeded { count: v.len(), cap });
    }
    let h = hrep(m);
    let half = Rational::new(1.into(), 2.into());
    let mut edges = Vec::new();
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            let (bi, bj) = (v.vertex(i), v.vertex(j));
            // Constraints tight at the midpoint are those tight at both
            // endpoints; any convex representation of the midpoint is
            // supported on vertices satisfying all of them.
            let common_support = bi.union(bj);
            let candidates: Vec<Vec<Rational>> = v
                .vertices()
                .iter()
                .enumerate()
                .filter(|(k, b)| {
                    *k != i && *k != j && b.is_subset_of(common_support) && {
                        h.rows().iter().all(|(flat, bound)| {
                            let ti = bi.intersection(*flat).len() == *bound;
                            let tj = bj.intersection(*flat).len() == *bound;
                            !(ti && tj) || b.intersection(*flat).len() == *bound
                        })
                    }
                })
                .map(|(k, _)| v.vertex_rationals(k))
                .collect();
            let midpoint: Vec<Rational> = v
                .vertex_rationals(i)
                .iter()
                .zip(v.vertex_rationals(j).iter())
                .map(|(a, b)| (a + b) * &half)
                .collect();
            if !in_convex_hull(&candidates, &midpoint) {
                edges.push((i, j));
            }
        }
    }
    // Basis-exchange (GGMS) property: every edge difference is e_i - e_j.
    for &(i, j) in &edges {
        let diff = v.vertex(i).bits() ^ v.vertex(j).bits();
        if diff.count_ones() != 2 {
            return Err(PolytopeError::Inconsistency(format!(
                "edge ({i}, {j}) differs in {} coordinates, expected 2",
                diff.count_ones()
            )));
        }
    }
    Ok(edges)
}

/// Classifies `x` as infeasible, interior, a vertex, interior to an edge, or
/// on some higher face.
///
/// Edge classification enumerates geometric edges and therefore assumes the
/// vertex count is within [`EDGE_VERTEX_CAP`]; above the cap non-vertex
/// boundary points fall back to `OtherFace`.
pub fn classify_boundary<S: Scalar>(
    m: &LinearMatroid,
    x: &[S],
    tol: f64,
) -> Result<BoundaryClass, PolytopeError> {
    let h = hrep(m);
    let v = vrep(m);
    if !h.contains(x, tol)? {
        return Ok(BoundaryClass { tag: BoundaryTag::Infeasible, active_flats: vec![] });
    }
    let (tight_rows, _) = h.tight_at(x, tol)?;
    let active_flats: Vec<IndexSet> = tight_rows.iter().map(|&r| h.rows()[r].0).collect();
    if in_relint(m, &h, x, tol)? {
        return Ok(BoundaryClass { tag: BoundaryTag::Interior, active_flats });
    }
    let band = S::equality_band(tol);
    let is_vertex = |b: IndexSet| {
        x.iter().enumerate().all(|(c, val)| {
            let target = if b.contains(c) { S::one() } else { S::zero() };
            (val.clone() - target).abs_val() <= band
        })
    };
    if v.vertices().iter().any(|&b| is_vertex(b)) {
        return Ok(BoundaryClass { tag: BoundaryTag::Vertex, active_flats });
    }
    if v.len() <= EDGE_VERTEX_CAP {
        let edges = edges_smallcase(m, EDGE_VERTEX_CAP)?;
        for (i, j) in edges {
            let (bi, bj) = (v.vertex(i), v.vertex(j));
            // On an edge, x agrees with both endpoints outside the two
            // swapped coordinates and splits strictly between them there.
            let diff = bi.bits() ^ bj.bits();
            let mut fits = true;
            let mut strict = false;
            for c in 0..x.len() {
                let on_diff = diff & (1u64 << c) != 0;
                if on_diff {
                    let inside = x[c] > S::zero() + band.clone()
                        && x[c] < S::one() - band.clone();
                    strict = strict || inside;
                    fits &= inside;
                } else {
                    let target = if bi.contains(c) { S::one() } else { S::zero() };
                    fits &= (x[c].clone() - target).abs_val() <= band;
                }
                if !fits {
                    break;
                }
            }
            if fits && strict {
                return Ok(BoundaryClass { tag: BoundaryTag::EdgeInterior, active_flats });
            }
        }
    }
    Ok(BoundaryClass { tag: BoundaryTag::OtherFace, active_flats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{build_matroid, VectorConfiguration};

    fn cfg_a() -> VectorConfiguration {
        VectorConfiguration::from_ints(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn cfg_c() -> VectorConfiguration {
        VectorConfiguration::from_ints(
            4,
            &[
                &[1, 0, 0, 0],
                &[0, 1, 0, 0],
                &[1, 1, 0, 0],
                &[0, 0, 1, 0],
                &[0, 0, 0, 1],
                &[0, 0, 1, 1],
                &[0, 0, 1, -1],
            ],
        )
        .unwrap()
    }

    fn cfg_d() -> VectorConfiguration {
        VectorConfiguration::from_ints(
            4,
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 1, 1]],
        )
        .unwrap()
    }

    fn octahedron() -> VectorConfiguration {
        VectorConfiguration::from_ints(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]).unwrap()
    }

    #[test]
    fn vrep_of_cfg_a() {
        let m = build_matroid(cfg_a());
        let v = vrep(&m);
        let pts: Vec<Vec<f64>> = (0..v.len()).map(|i| v.vertex_floats(i)).collect();
        assert_eq!(pts, vec![vec![1., 1., 0.], vec![1., 0., 1.], vec![0., 1., 1.]]);
    }

    #[test]
    fn every_vertex_satisfies_hrep_exactly() {
        for cfg in [cfg_a(), cfg_c(), cfg_d(), octahedron()] {
            let m = build_matroid(cfg);
            let h = hrep(&m);
            let v = vrep(&m);
            for i in 0..v.len() {
                let x = v.vertex_rationals(i);
                assert!(h.contains(&x, 0.0).unwrap());
            }
        }
    }

    #[test]
    fn dimension_matches_formula_and_geometry() {
        assert_eq!(dimension(&build_matroid(cfg_a())).unwrap(), 2);
        assert_eq!(dimension(&build_matroid(cfg_c())).unwrap(), 5);
        assert_eq!(dimension(&build_matroid(cfg_d())).unwrap(), 4);
        let parallelotope =
            build_matroid(VectorConfiguration::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap());
        assert_eq!(dimension(&parallelotope).unwrap(), 0);
        assert_eq!(dimension(&build_matroid(octahedron())).unwrap(), 3);
    }

    #[test]
    fn contains_examples() {
        let m = build_matroid(cfg_a());
        let h = hrep(&m);
        assert!(h.contains(&[2. / 3., 2. / 3., 2. / 3.], 1e-9).unwrap());
        assert!(!h.contains(&[1.0, 1.0, 1.0], 1e-9).unwrap());
        let m = build_matroid(cfg_c());
        let h = hrep(&m);
        let x = [2. / 3., 2. / 3., 2. / 3., 0.5, 0.5, 0.5, 0.5];
        assert!(h.contains(&x, 1e-9).unwrap());
        assert!(matches!(
            h.contains(&[0.5, 0.5], 1e-9),
            Err(PolytopeError::LengthMismatch { expected: 7, got: 2 })
        ));
    }

    #[test]
    fn relint_of_cfg_c_separator_point() {
        let m = build_matroid(cfg_c());
        let h = hrep(&m);
        let x = [2. / 3., 2. / 3., 2. / 3., 0.5, 0.5, 0.5, 0.5];
        assert!(in_relint(&m, &h, &x, 1e-9).unwrap());
    }

    #[test]
    fn relint_rejects_vertex_and_zero_coordinate() {
        let m = build_matroid(cfg_a());
        let h = hrep(&m);
        assert!(!in_relint(&m, &h, &[1.0, 1.0, 0.0], 1e-9).unwrap());
        let m = build_matroid(cfg_d());
        let h = hrep(&m);
        assert!(!in_relint(&m, &h, &[1.0, 1.0, 1.0, 0.5, 0.5], 1e-9).unwrap());
        // outside: error
        assert!(matches!(
            in_relint(&m, &h, &[2.0, 1.0, 1.0, 0.0, 0.0], 1e-9),
            Err(PolytopeError::OutsidePolytope)
        ));
    }

    #[test]
    fn single_vertex_polytope_relint_is_itself() {
        let m = build_matroid(VectorConfiguration::from_ints(2, &[&[1, 0], &[0, 1]]).unwrap());
        let h = hrep(&m);
        assert!(in_relint(&m, &h, &[1.0, 1.0], 1e-9).unwrap());
        assert!(edges_smallcase(&m, 500).unwrap().is_empty());
    }

    #[test]
    fn octahedron_has_twelve_edges() {
        let m = build_matroid(octahedron());
        let edges = edges_smallcase(&m, 500).unwrap();
        assert_eq!(edges.len(), 12);
    }

    #[test]
    fn triangle_has_three_edges() {
        let m = build_matroid(cfg_a());
        assert_eq!(edges_smallcase(&m, 500).unwrap().len(), 3);
    }

    #[test]
    fn edge_cap_is_enforced() {
        let m = build_matroid(octahedron());
        assert!(matches!(
            edges_smallcase(&m, 3),
            Err(PolytopeError::CapExceeded { count: 6, cap: 3 })
        ));
    }

    #[test]
    fn classify_boundary_examples() {
        let m = build_matroid(cfg_d());
        let vertex = classify_boundary(&m, &[1.0, 1.0, 1.0, 1.0, 0.0], 1e-9).unwrap();
        assert_eq!(vertex.tag, BoundaryTag::Vertex);
        let edge = classify_boundary(&m, &[1.0, 1.0, 1.0, 0.5, 0.5], 1e-9).unwrap();
        assert_eq!(edge.tag, BoundaryTag::EdgeInterior);
        let interior = classify_boundary(&m, &[0.8, 0.8, 0.8, 0.8, 0.8], 1e-9).unwrap();
        assert_eq!(interior.tag, BoundaryTag::Interior);
        let out = classify_boundary(&m, &[4.0, 0.0, 0.0, 0.0, 0.0], 1e-9).unwrap();
        assert_eq!(out.tag, BoundaryTag::Infeasible);
    }

    #[test]
    fn hull_test_basics() {
        let one = Rational::one;
        let zero = Rational::zero;
        // midpoint of square diagonal is in hull of the other two corners
        let pts = vec![vec![one(), zero()], vec![zero(), one()]];
        let mid = vec![Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into())];
        assert!(in_convex_hull(&pts, &mid));
        assert!(!in_convex_hull(&pts, &[one(), one()]));
        assert!(!in_convex_hull(&[], &[one()]));
    }
}
