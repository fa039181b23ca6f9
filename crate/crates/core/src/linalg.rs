//! Exact rational linear algebra: rank, span membership and affine dimension
//! via fraction-free-enough Gaussian elimination over [`Rational`].
//!
//! Matroid structure must never flip because of rounding, so everything here
//! is exact; floating point appears only far downstream in functional
//! evaluation.

use crate::scalar::{rational_string, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input")]
    EmptyInput,
}

/// Fixed-length vector of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        QVector(entries.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(rational_string).collect();
        format!("({})", parts.join(", "))
    }
}

/// Rectangular matrix as a list of rows; row reduction preserves row space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: Vec<QVector>,
}

impl QMatrix {
    pub fn new(rows: Vec<QVector>) -> Result<Self, LinalgError> {
        if let Some(first) = rows.first() {
            let d = first.dim();
            for r in &rows {
                if r.dim() != d {
                    return Err(LinalgError::DimensionMismatch { expected: d, got: r.dim() });
                }
            }
        }
        Ok(QMatrix { rows })
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        let dim = self.rows.first().map_or(0, QVector::dim);
        let mut space = RowSpace::new(dim);
        for r in &self.rows {
            space.insert(r);
        }
        space.rank()
    }

    /// Applies this (square) matrix to a vector.
    pub fn apply(&self, v: &QVector) -> Result<QVector, LinalgError> {
        let out: Result<Vec<Rational>, LinalgError> = self
            .rows
            .iter()
            .map(|row| {
                if row.dim() != v.dim() {
                    return Err(LinalgError::DimensionMismatch {
                        expected: row.dim(),
                        got: v.dim(),
                    });
                }
                Ok(row
                    .entries()
                    .iter()
                    .zip(v.entries())
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |acc, t| acc + t))
            })
            .collect();
        Ok(QVector(out?))
    }
}

/// Incrementally maintained row-echelon basis of a span.
///
/// `insert` reduces a vector against the current echelon rows and keeps the
/// remainder when nonzero, so rank queries and span-membership tests share
/// one elimination pass.
#[derive(Debug, Clone)]
pub struct RowSpace {
    dim: usize,
    // Echelon rows sorted by pivot column; pivots[i] is the pivot column of rows[i].
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &QVector) -> Vec<Rational> {
        let mut w: Vec<Rational> = v.entries().to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let factor = &w[p] / &row[p];
                for j in p..self.dim {
                    let delta = &factor * &row[j];
                    w[j] = &w[j] - &delta;
                }
            }
        }
        w
    }

    /// Adjoins `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: &QVector) -> bool {
        debug_assert_eq!(v.dim(), self.dim);
        let w = self.reduce(v);
        match w.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(p) => {
                let at = self.pivots.partition_point(|&q| q < p);
                self.rows.insert(at, w);
                self.pivots.insert(at, p);
                true
            }
        }
    }

    /// True iff `v` lies in the current span.
    pub fn contains(&self, v: &QVector) -> bool {
        debug_assert_eq!(v.dim(), self.dim);
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

fn check_common_dim(vectors: &[QVector]) -> Result<usize, LinalgError> {
    let mut dim = None;
    for v in vectors {
        match dim {
            None => dim = Some(v.dim()),
            Some(d) if d != v.dim() => {
                return Err(LinalgError::DimensionMismatch { expected: d, got: v.dim() })
            }
            _ => {}
        }
    }
    Ok(dim.unwrap_or(0))
}

/// Dimension of the linear span, by exact elimination.
pub fn rank_of(vectors: &[QVector]) -> Result<usize, LinalgError> {
    let dim = check_common_dim(vectors)?;
    let mut space = RowSpace::new(dim);
    for v in vectors {
        space.insert(v);
    }
    Ok(space.rank())
}

/// True iff `v` lies in the span of `basis`.
pub fn in_span(v: &QVector, basis: &[QVector]) -> Result<bool, LinalgError> {
    let dim = check_common_dim(basis)?;
    if !basis.is_empty() && v.dim() != dim {
        return Err(LinalgError::DimensionMismatch { expected: dim, got: v.dim() });
    }
    let mut space = RowSpace::new(v.dim());
    for b in basis {
        space.insert(b);
    }
    Ok(space.contains(v))
}

/// Dimension of the affine hull: rank of `{p_i - p_0}`. A single point has
/// affine dimension 0.
pub fn affine_dim(points: &[QVector]) -> Result<usize, LinalgError> {
    let first = points.first().ok_or(LinalgError::EmptyInput)?;
    check_common_dim(points)?;
    let diffs: Vec<QVector> = points[1..].iter().map(|p| p.sub(first)).collect();
    rank_of(&diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qv(entries: &[i64]) -> QVector {
        QVector::from_ints(entries)
    }

    #[test]
    fn rank_of_coordinate_vectors() {
        let vs = [qv(&[1, 0, 0, 0]), qv(&[0, 1, 0, 0])];
        assert_eq!(rank_of(&vs).unwrap(), 2);
    }

    #[test]
    fn rank_of_empty_is_zero() {
        assert_eq!(rank_of(&[]).unwrap(), 0);
    }

    #[test]
    fn rank_of_dependent_triple() {
        let vs = [qv(&[1, 0, 0, 0]), qv(&[0, 1, 0, 0]), qv(&[1, 1, 0, 0])];
        assert_eq!(rank_of(&vs).unwrap(), 2);
    }

    #[test]
    fn rank_dimension_mismatch_is_error() {
        let vs = [qv(&[1, 0]), qv(&[1, 0, 0])];
        assert!(matches!(rank_of(&vs), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn in_span_cases() {
        let basis = [qv(&[1, 0, 0, 0]), qv(&[0, 1, 0, 0])];
        assert!(in_span(&qv(&[1, 1, 0, 0]), &basis).unwrap());
        assert!(!in_span(&qv(&[0, 0, 1, 0]), &basis).unwrap());
        assert!(in_span(&qv(&[0, 0, 0, 0]), &basis).unwrap());
        assert!(in_span(&QVector::zeros(3), &[]).unwrap());
    }

    #[test]
    fn affine_dim_triangle_and_point() {
        let pts = [qv(&[1, 1, 0]), qv(&[1, 0, 1]), qv(&[0, 1, 1])];
        assert_eq!(affine_dim(&pts).unwrap(), 2);
        assert_eq!(affine_dim(&[qv(&[5, 7])]).unwrap(), 0);
        assert!(matches!(affine_dim(&[]), Err(LinalgError::EmptyInput)));
    }

    #[test]
    fn affine_dim_of_hypersimplex_vertices() {
        // Five 0/1 points in R^5 with four ones each.
        let mut pts = Vec::new();
        for skip in 0..5usize {
            let mut v = [1i64; 5];
            v[skip] = 0;
            pts.push(qv(&v));
        }
        assert_eq!(affine_dim(&pts).unwrap(), 4);
    }

    fn small_vec(dim: usize) -> impl Strategy<Value = QVector> {
        proptest::collection::vec(-6i64..=6, dim).prop_map(|v| QVector::from_ints(&v))
    }

    proptest! {
        // rank is invariant under an invertible change of coordinates
        #[test]
        fn rank_invariant_under_gl(vs in proptest::collection::vec(small_vec(3), 1..6)) {
            // A fixed unimodular matrix.
            let t = QMatrix::new(vec![
                qv(&[1, 1, 0]),
                qv(&[0, 1, 1]),
                qv(&[0, 0, 1]),
            ]).unwrap();
            let transformed: Vec<QVector> =
                vs.iter().map(|v| t.apply(v).unwrap()).collect();
            prop_assert_eq!(rank_of(&vs).unwrap(), rank_of(&transformed).unwrap());
        }

        // adjoining v leaves rank unchanged iff v is in the span
        #[test]
        fn in_span_matches_rank_definition(
            vs in proptest::collection::vec(small_vec(4), 0..5),
            v in small_vec(4),
        ) {
            let r0 = rank_of(&vs).unwrap();
            let mut with = vs.clone();
            with.push(v.clone());
            let r1 = rank_of(&with).unwrap();
            prop_assert_eq!(in_span(&v, &vs).unwrap(), r0 == r1);
        }

        // monotone under inclusion, bounded by min(|S|, dim)
        #[test]
        fn rank_monotone_and_bounded(vs in proptest::collection::vec(small_vec(3), 0..7)) {
            let full = rank_of(&vs).unwrap();
            prop_assert!(full <= vs.len().min(3));
            for cut in 0..vs.len() {
                prop_assert!(rank_of(&vs[..cut]).unwrap() <= full);
            }
        }
    }
}
