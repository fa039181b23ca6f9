//! Weight vectors as discrete even measures and the subspace concentration
//! condition, including the equivalence with relative-interior membership.
//!
//! A weight vector assigns `x_i >= 0` to the antipodal pair `{±u_i}`; its
//! total plays the role of the volume. The concentration check quantifies
//! over flats only: the measure of any subspace equals the measure of the
//! closure-flat of the directions it contains, so flats are sufficient.

use crate::matroid::{IndexSet, LinearMatroid};
use crate::polytope::{hrep, in_relint, vrep, PolytopeError};
use crate::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConcentrationError {
    #[error("weight vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("negative weight at position {0}")]
    NegativeWeight(usize),
    #[error("all weights are zero")]
    AllZero,
    #[error("index set {0} is not a basis")]
    NotABasis(IndexSet),
    #[error("SCC/relint equivalence violated: scc={scc}, relint={relint}")]
    EquivalenceViolated { scc: bool, relint: bool },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Nonnegative weights, one per direction pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<S: Scalar> {
    values: Vec<S>,
}

impl<S: Scalar> WeightVector<S> {
    pub fn new(values: Vec<S>) -> Result<Self, ConcentrationError> {
        if let Some(pos) = values.iter().position(|v| *v < S::zero()) {
            return Err(ConcentrationError::NegativeWeight(pos + 1));
        }
        Ok(WeightVector { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn total(&self) -> S {
        S::sum_iter(self.values.iter().cloned())
    }

    /// Sum of the weights indexed by `s`.
    pub fn mass(&self, s: IndexSet) -> S {
        S::sum_iter(s.iter().map(|i| self.values[i].clone()))
    }

    /// Rescales so the total equals `target` (usually n). Requires a
    /// positive total.
    pub fn normalized_to(&self, target: S) -> Result<Self, ConcentrationError>
    where
        S: std::ops::Div<Output = S>,
    {
        let total = self.total();
        if !(total > S::zero()) {
            return Err(ConcentrationError::AllZero);
        }
        let values = self.values.iter().map(|v| v.clone() * target.clone() / total.clone()).collect();
        Ok(WeightVector { values })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Scalar::to_f64).collect()
    }
}

/// Outcome of the subspace concentration check.
#[derive(Debug, Clone)]
pub struct SccReport {
    pub satisfied: bool,
    /// Flats violating the inequality `n * x(F) <= rank(F) * total`.
    pub inequality_violations: Vec<IndexSet>,
    /// Flats meeting the bound with equality (within the band).
    pub equality_flats: Vec<IndexSet>,
    /// Equality flats lacking the complementary equality flat.
    pub missing_complements: Vec<IndexSet>,
}

/// Checks the subspace concentration inequality over every proper flat and,
/// for each equality flat `F`, the existence of the complementary equality
/// flat `E \ F` of rank `n - rank(F)`.
///
/// The equality band is `tol * total` (exact scalars use a zero band).
pub fn scc_check<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
    tol: f64,
) -> Result<SccReport, ConcentrationError> {
    if w.len() != m.ground_size() {
        return Err(ConcentrationError::LengthMismatch {
            expected: m.ground_size(),
            got: w.len(),
        });
    }
    let total = w.total();
    if !(total > S::zero()) {
        return Err(ConcentrationError::AllZero);
    }
    let band = S::equality_band(tol) * total.clone();
    let n = S::from_int(m.n() as i64);
    let mut violations = Vec::new();
    let mut equality_flats = Vec::new();
    let mut missing = Vec::new();
    for flat in m.flats() {
        if flat.rank == 0 || flat.rank >= m.n() {
            continue;
        }
        // n * x(F) versus rank(F) * total, scale-invariant.
        let lhs = n.clone() * w.mass(flat.indices);
        let rhs = S::from_int(flat.rank as i64) * total.clone();
        let diff = lhs - rhs;
        if diff > band {
            violations.push(flat.indices);
        } else if diff.abs_val() <= band {
            equality_flats.push(flat.indices);
        }
    }
    for &f in &equality_flats {
        let complement = m.ground_set().difference(f);
        let rank_f = m.rank(f).expect("flat within ground set");
        let rank_c = m.rank(complement).expect("complement within ground set");
        let complement_ok = rank_c == m.n() - rank_f
            && m.closure(complement).expect("subset").indices == complement
            && {
                let lhs = n.clone() * w.mass(complement);
                let rhs = S::from_int(rank_c as i64) * total.clone();
                (lhs - rhs).abs_val() <= band
            };
        if !complement_ok {
            missing.push(f);
        }
    }
    Ok(SccReport {
        satisfied: violations.is_empty() && missing.is_empty(),
        inequality_violations: violations,
        equality_flats,
        missing_complements: missing,
    })
}

/// Relative-interior membership of the normalized weights, with the SCC
/// route asserted to agree (the concentration/relint equivalence).
///
/// Zero weights are rejected rather than dropped: the support must be the
/// full direction set, so any `x_i = 0` returns false on both routes.
pub fn relint_equiv<S: Scalar + std::ops::Div<Output = S>>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
    tol: f64,
) -> Result<bool, ConcentrationError> {
    if w.len() != m.ground_size() {
        return Err(ConcentrationError::LengthMismatch {
            expected: m.ground_size(),
            got: w.len(),
        });
    }
    let normalized = w.normalized_to(S::from_int(m.n() as i64))?;
    let band = S::equality_band(tol);
    let positive = normalized.values().iter().all(|v| *v > band);

    let h = hrep(m);
    let relint_route = positive
        && h.contains(normalized.values(), tol)?
        && in_relint(m, &h, normalized.values(), tol)?;
    let scc_route = positive && scc_check(m, &normalized, tol)?.satisfied;
    if relint_route != scc_route {
        return Err(ConcentrationError::EquivalenceViolated {
            scc: scc_route,
            relint: relint_route,
        });
    }
    Ok(relint_route)
}

/// Indicator weights of a basis: the cone-volume vector of an
/// origin-symmetric parallelotope with volume n.
pub fn vertex_measure<S: Scalar>(
    m: &LinearMatroid,
    basis: IndexSet,
) -> Result<WeightVector<S>, ConcentrationError> {
    if !m.bases().contains(&basis) {
        return Err(ConcentrationError::NotABasis(basis));
    }
    let values = (0..m.ground_size())
        .map(|i| if basis.contains(i) { S::one() } else { S::zero() })
        .collect();
    Ok(WeightVector { values })
}

/// Deterministic samples strictly inside the base polytope with total n:
/// convex combinations of the vertex barycenter with random vertex mixtures,
/// all coefficients strictly positive, verified by the relint test.
pub fn sample_relint(m: &LinearMatroid, count: usize, seed: u64) -> Vec<WeightVector<f64>> {
    let v = vrep(m);
    let h = hrep(m);
    let barycenter = v.barycenter_floats();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut point = barycenter.clone();
        // Up to a few attempts; the barycenter itself is always valid.
        for _attempt in 0..8 {
            let mut mix = vec![0.0; v.ambient()];
            let mut coeff_sum = 0.0;
            let mut coeffs = Vec::with_capacity(v.len());
            for _ in 0..v.len() {
                let c: f64 = rng.random::<f64>();
                coeffs.push(c);
                coeff_sum += c;
            }
            for (i, c) in coeffs.iter().enumerate() {
                let scale = c / coeff_sum;
                for j in v.vertex(i).iter() {
                    mix[j] += scale;
                }
            }
            let alpha = 0.05 + 0.9 * rng.random::<f64>();
            let candidate: Vec<f64> = barycenter
                .iter()
                .zip(&mix)
                .map(|(b, m)| alpha * b + (1.0 - alpha) * m)
                .collect();
            let ok = h.contains(&candidate, 1e-9).unwrap_or(false)
                && in_relint(m, &h, &candidate, 1e-9).unwrap_or(false);
            if ok {
                point = candidate;
                break;
            }
        }
        out.push(WeightVector { values: point });
    }
    out
}
