//! Maximization of the decomposition polynomials over the base polytope:
//! matroid-greedy linear oracle, edge-direction ascent, Frank-Wolfe,
//! projected gradient over the box-simplex, and exhaustive vertex search.
//!
//! The objectives are non-concave degree-n polynomials, so the local
//! optimizers certify nothing alone; global statements at desk scale come
//! from combining them with the exhaustive vertex oracle and dense
//! multistart.

use crate::linalg::RowSpace;
use crate::matroid::{indicator_rationals, IndexSet, LinearMatroid};
use crate::polytope::{classify_boundary, hrep, vrep, BoundaryClass, HRep, PolytopeError};
use crate::concentration::{sample_relint, WeightVector};
use crate::functionals::subspace_lattice;
use crate::scalar::{Rational, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OptimizeError {
    #[error("start point is infeasible")]
    InfeasibleStart,
    #[error("vertex count {count} exceeds cap {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("objective vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Default vertex cap for the exhaustive oracle.
pub const VERTEX_ORACLE_CAP: usize = 100_000;

#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// Convergence threshold on objective improvement.
    pub tolerance: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Coarse grid size for one-dimensional segment maximization; refined by
    /// bisection on the directional derivative.
    pub line_search_grid: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            tolerance: 1e-8,
            restarts: 32,
            max_iters: 10_000,
            seed: 0,
            line_search_grid: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    EdgeAscent,
    FrankWolfe,
    ProjectedGradient,
    VertexOracle,
}

/// Result of one maximization: the feasible argmax, its value, where it sits
/// on the polytope (when a matroid is in scope), and how it was found.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub boundary: Option<BoundaryClass>,
    pub method: Method,
    pub trajectory_len: usize,
}

/// A differentiable objective over weight vectors.
pub trait ObjectiveFn {
    fn value(&self, x: &[f64]) -> f64;
    fn grad(&self, x: &[f64]) -> Vec<f64>;
}

/// The named objectives from the sharp inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `X_2(x)^n` via the level-2 closed form.
    X2Pow,
    /// `X_3(x)^n` via the level-3 closed form.
    X3Pow,
    /// The degree-4 polynomial `f` over the box-simplex (4-general position).
    HypersimplexF,
}

/// Objective with precompiled lattice membership lists for fast evaluation.
#[derive(Debug, Clone)]
pub struct CompiledObjective {
    kind: Objective,
    n: usize,
    ambient: usize,
    /// Level-2 flats as member lists.
    planes: Vec<Vec<usize>>,
    /// Level-3 flats with the indices (into `planes`) they contain.
    spaces: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Objective {
    /// Compiles against a matroid (lattice lookups frozen into index lists).
    pub fn compile(self, m: &LinearMatroid) -> CompiledObjective {
        let lattice = subspace_lattice(m);
        let planes: Vec<Vec<usize>> = if m.n() >= 2 {
            lattice.level(2).iter().map(|f| f.indices.to_vec()).collect()
        } else {
            Vec::new()
        };
        let plane_sets: Vec<IndexSet> = if m.n() >= 2 {
            lattice.level(2).iter().map(|f| f.indices).collect()
        } else {
            Vec::new()
        };
        let spaces = if matches!(self, Objective::X3Pow) && m.n() >= 3 {
            lattice
                .level(3)
                .iter()
                .map(|t| {
                    let members = t.indices.to_vec();
                    let contained = plane_sets
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.is_subset_of(t.indices))
                        .map(|(i, _)| i)
                        .collect();
                    (members, contained)
                })
                .collect()
        } else {
            Vec::new()
        };
        CompiledObjective {
            kind: self,
            n: m.n(),
            ambient: m.ground_size(),
            planes,
            spaces,
        }
    }

    /// Compiles the hypersimplex objective without a matroid (`N` coords).
    pub fn compile_free(ambient: usize) -> CompiledObjective {
        CompiledObjective {
            kind: Objective::HypersimplexF,
            n: 4,
            ambient,
            planes: Vec::new(),
            spaces: Vec::new(),
        }
    }
}

impl CompiledObjective {
    pub fn kind(&self) -> Objective {
        self.kind
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Generic evaluation; use [`Rational`] scalars for exact values.
    pub fn value_s<S: Scalar>(&self, x: &[S]) -> S {
        let np = self.n as u32;
        match self.kind {
            Objective::X2Pow => S::sum_iter(self.planes.iter().map(|members| {
                let mass = S::sum_iter(members.iter().map(|&i| x[i].clone()));
                let singles = S::sum_iter(members.iter().map(|&i| x[i].clone().pow_u(np)));
                mass.pow_u(np) - singles
            })),
            Objective::X3Pow => S::sum_iter(self.spaces.iter().map(|(members, contained)| {
                let mass = S::sum_iter(members.iter().map(|&i| x[i].clone()));
                let singles = S::sum_iter(members.iter().map(|&i| x[i].clone().pow_u(np)));
                let planes = S::sum_iter(contained.iter().map(|&p| {
                    let pm = &self.planes[p];
                    let pmass = S::sum_iter(pm.iter().map(|&i| x[i].clone()));
                    let psingles = S::sum_iter(pm.iter().map(|&i| x[i].clone().pow_u(np)));
                    pmass.pow_u(np) - psingles
                }));
                mass.pow_u(np) - planes - singles
            })),
            Objective::HypersimplexF => {
                let len = x.len();
                let mut terms = Vec::new();
                for i in 0..len {
                    for j in (i + 1)..len {
                        for k in (j + 1)..len {
                            let (a, b, c) = (x[i].clone(), x[j].clone(), x[k].clone());
                            terms.push(
                                (a.clone() + b.clone() + c.clone()).pow_u(4)
                                    - (a.clone() + b.clone()).pow_u(4)
                                    - (a.clone() + c.clone()).pow_u(4)
                                    - (b.clone() + c.clone()).pow_u(4)
                                    + a.pow_u(4)
                                    + b.pow_u(4)
                                    + c.pow_u(4),
                            );
                        }
                    }
                }
                S::sum_iter(terms.into_iter())
                    * S::from_ratio(&Rational::new(1.into(), 256.into()))
            }
        }
    }

    pub fn value_exact(&self, x: &[Rational]) -> Rational {
        self.value_s(x)
    }
}

impl ObjectiveFn for CompiledObjective {
    fn value(&self, x: &[f64]) -> f64 {
        self.value_s(x)
    }

    fn grad(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n as i32;
        let nf = self.n as f64;
        let mut g = vec![0.0; x.len()];
        match self.kind {
            Objective::X2Pow => {
                for members in &self.planes {
                    let mass: f64 = members.iter().map(|&i| x[i]).sum();
                    let mp = mass.powi(n - 1);
                    for &i in members {
                        g[i] += nf * (mp - x[i].powi(n - 1));
                    }
                }
            }
            Objective::X3Pow => {
                for (members, contained) in &self.spaces {
                    let mass: f64 = members.iter().map(|&i| x[i]).sum();
                    let mp = mass.powi(n - 1);
                    for &i in members {
                        g[i] += nf * (mp - x[i].powi(n - 1));
                    }
                    for &p in contained {
                        let pm = &self.planes[p];
                        let pmass: f64 = pm.iter().map(|&i| x[i]).sum();
                        let pp = pmass.powi(n - 1);
                        for &i in pm {
                            g[i] -= nf * (pp - x[i].powi(n - 1));
                        }
                    }
                }
            }
            Objective::HypersimplexF => {
                let len = x.len();
                for p in 0..len {
                    let mut acc = 0.0;
                    for j in 0..len {
                        if j == p {
                            continue;
                        }
                        for k in (j + 1)..len {
                            if k == p {
                                continue;
                            }
                            let (a, b, c) = (x[p], x[j], x[k]);
                            acc += (a + b + c).powi(3) - (a + b).powi(3) - (a + c).powi(3)
                                + a.powi(3);
                        }
                    }
                    g[p] = acc / 64.0;
                }
            }
        }
        g
    }
}

/// Maximizes `t -> obj(x + t d)` on `[lo, hi]` by a coarse grid scan refined
/// with bisection on the directional derivative. Returns `(t, value)`; the
/// endpoints are always candidates and are returned exactly.
fn segment_max(
    obj: &dyn ObjectiveFn,
    x: &[f64],
    d: &[f64],
    lo: f64,
    hi: f64,
    grid: usize,
) -> (f64, f64) {
    debug_assert!(lo <= hi);
    let point = |t: f64| -> Vec<f64> {
        x.iter().zip(d).map(|(xi, di)| xi + t * di).collect()
    };
    let phi = |t: f64| obj.value(&point(t));
    let dphi = |t: f64| -> f64 {
        let g = obj.grad(&point(t));
        g.iter().zip(d).map(|(gi, di)| gi * di).sum()
    };
    if hi - lo < 1e-14 {
        return (lo, phi(lo));
    }
    let grid = grid.max(2);
    let mut best_t = lo;
    let mut best_v = phi(lo);
    let mut samples = Vec::with_capacity(grid + 1);
    for s in 0..=grid {
        let t = lo + (hi - lo) * (s as f64) / (grid as f64);
        let v = phi(t);
        samples.push((t, v));
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    // Refine around the best grid point: bisect the derivative sign change
    // inside the bracketing cell(s).
    let idx = samples
        .iter()
        .position(|&(t, _)| t == best_t)
        .unwrap_or(0);
    let left = if idx > 0 { samples[idx - 1].0 } else { best_t };
    let right = if idx + 1 < samples.len() { samples[idx + 1].0 } else { best_t };
    let (mut a, mut b) = (left, right);
    if a < b && dphi(a) > 0.0 && dphi(b) < 0.0 {
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if dphi(mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
            if b - a < 1e-12 {
                break;
            }
        }
        let t = 0.5 * (a + b);
        let v = phi(t);
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    (best_t, best_v)
}

/// Exact linear maximization over the bases: sort by objective coefficient
/// (descending, ties by ascending index) and greedily keep independent
/// elements. Returns the optimal vertex as an index set.
pub fn greedy_linear_max(m: &LinearMatroid, c: &[f64]) -> Result<IndexSet, OptimizeError> {
    if c.len() != m.ground_size() {
        return Err(OptimizeError::LengthMismatch { expected: m.ground_size(), got: c.len() });
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c[b].partial_cmp(&c[a]).expect("finite objective").then(a.cmp(&b)));
    let mut space = RowSpace::new(m.n());
    let mut basis = IndexSet::EMPTY;
    for i in order {
        if basis.len() == m.n() {
            break;
        }
        if space.insert(m.config().vector(i)) {
            basis.insert(i);
        }
    }
    Ok(basis)
}

/// Feasible interval of `t` for the move `x + t (e_i - e_j)` inside the
/// H-representation.
fn edge_interval(h: &HRep, x: &[f64], i: usize, j: usize) -> (f64, f64) {
    let mut lo = -x[i];
    let mut hi = x[j];
    for (mask, bound) in h.rows() {
        let coef = i32::from(mask.contains(i)) - i32::from(mask.contains(j));
        if coef == 0 {
            continue;
        }
        let sum: f64 = mask.iter().map(|s| x[s]).sum();
        let slack = *bound as f64 - sum;
        if coef > 0 {
            hi = hi.min(slack);
        } else {
            lo = lo.max(-slack);
        }
    }
    (lo, hi)
}

/// Ascends along coordinate-difference directions `±(e_i - e_j)` with exact
/// one-dimensional maximization on each feasible segment, until no direction
/// improves. These are exactly the edge directions of the base polytope, so
/// interior maxima of the decomposition polynomials are never terminal.
pub fn edge_ascent(
    m: &LinearMatroid,
    obj: &dyn ObjectiveFn,
    x0: &[f64],
    cfg: &OptimizerConfig,
) -> Result<OptResult, OptimizeError> {
    let h = hrep(m);
    if !h.contains(x0, 1e-7)? {
        return Err(OptimizeError::InfeasibleStart);
    }
    let ambient = m.ground_size();
    let mut x = x0.to_vec();
    let mut fx = obj.value(&x);
    let mut moves = 0usize;
    loop {
        let mut improved = false;
        'pairs: for i in 0..ambient {
            for j in (i + 1)..ambient {
                let (lo, hi) = edge_interval(&h, &x, i, j);
                if hi - lo < 1e-13 {
                    continue;
                }
                let mut d = vec![0.0; ambient];
                d[i] = 1.0;
                d[j] = -1.0;
                let (mut t, v) = segment_max(obj, &x, &d, lo, hi, cfg.line_search_grid);
                if v > fx + cfg.tolerance {
                    // snap to the endpoints so constraint hits are exact
                    if (t - lo).abs() < 1e-11 {
                        t = lo;
                    } else if (t - hi).abs() < 1e-11 {
                        t = hi;
                    }
                    x[i] += t;
                    x[j] -= t;
                    for idx in [i, j] {
                        if x[idx].abs() < 1e-12 {
                            x[idx] = 0.0;
                        } else if (x[idx] - 1.0).abs() < 1e-12 {
                            x[idx] = 1.0;
                        }
                    }
                    fx = obj.value(&x);
                    moves += 1;
                    improved = true;
                    if moves >= cfg.max_iters {
                        break 'pairs;
                    }
                }
            }
        }
        if !improved || moves >= cfg.max_iters {
            break;
        }
    }
    let boundary = classify_boundary(m, &x, 1e-7)?;
    Ok(OptResult {
        argmax: x,
        value: fx,
        boundary: Some(boundary),
        method: Method::EdgeAscent,
        trajectory_len: moves,
    })
}

/// Frank-Wolfe ascent: repeatedly move toward the greedy-optimal vertex of
/// the linearized objective, with exact line search on the segment; best
/// result over multistart. Only local maxima are guaranteed (the objectives
/// are not concave); pair with the vertex oracle for global checks.
pub fn frank_wolfe_max(
    m: &LinearMatroid,
    obj: &dyn ObjectiveFn,
    x0: &[f64],
    cfg: &OptimizerConfig,
) -> Result<OptResult, OptimizeError> {
    let h = hrep(m);
    if !h.contains(x0, 1e-7)? {
        return Err(OptimizeError::InfeasibleStart);
    }
    let mut starts: Vec<Vec<f64>> = vec![x0.to_vec()];
    if cfg.restarts > 1 {
        for w in sample_relint(m, cfg.restarts - 1, cfg.seed) {
            starts.push(w.values().to_vec());
        }
    }
    let mut best: Option<OptResult> = None;
    for start in starts {
        let mut x = start;
        let mut fx = obj.value(&x);
        let mut iters = 0usize;
        while iters < cfg.max_iters {
            iters += 1;
            let g = obj.grad(&x);
            let target = greedy_linear_max(m, &g)?;
            let d: Vec<f64> = (0..x.len())
                .map(|i| if target.contains(i) { 1.0 - x[i] } else { -x[i] })
                .collect();
            let (t, v) = segment_max(obj, &x, &d, 0.0, 1.0, cfg.line_search_grid);
            if v <= fx + cfg.tolerance {
                break;
            }
            for (xi, di) in x.iter_mut().zip(&d) {
                *xi += t * di;
            }
            fx = v;
        }
        let replace = best.as_ref().map_or(true, |b| fx > b.value);
        if replace {
            best = Some(OptResult {
                argmax: x,
                value: fx,
                boundary: None,
                method: Method::FrankWolfe,
                trajectory_len: iters,
            });
        }
    }
    let mut result = best.expect("at least one start");
    result.boundary = Some(classify_boundary(m, &result.argmax, 1e-7)?);
    Ok(result)
}

/// Euclidean projection onto `{0 <= x <= 1, sum x = target}` by bisection on
/// the dual shift.
pub fn project_box_simplex(y: &[f64], target: f64) -> Vec<f64> {
    let clamp_sum = |theta: f64| -> f64 {
        y.iter().map(|v| (v - theta).clamp(0.0, 1.0)).sum()
    };
    let mut lo = y.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // clamp_sum is nonincreasing in theta: clamp_sum(lo) = min(N, ...) >= target
    // for any feasible target, clamp_sum(hi) = 0.
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if clamp_sum(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    y.iter().map(|v| (v - theta).clamp(0.0, 1.0)).collect()
}

fn box_simplex_feasible(x: &[f64], target: f64, tol: f64) -> bool {
    x.iter().all(|&v| (-tol..=1.0 + tol).contains(&v))
        && (x.iter().sum::<f64>() - target).abs() <= tol * target.max(1.0)
}

/// Projected-gradient ascent over the box-simplex with Armijo-style step
/// halving; multistart from Dirichlet-type samples and random vertices.
pub fn projected_gradient_max(
    obj: &dyn ObjectiveFn,
    x0: &[f64],
    target_sum: f64,
    cfg: &OptimizerConfig,
) -> Result<OptResult, OptimizeError> {
    if !box_simplex_feasible(x0, target_sum, 1e-7) {
        return Err(OptimizeError::InfeasibleStart);
    }
    let ambient = x0.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = vec![x0.to_vec()];
    while starts.len() < cfg.restarts.max(1) {
        if starts.len() % 2 == 1 {
            // Dirichlet-type start: exponential draws scaled to the target
            // sum, projected into the box.
            let draws: Vec<f64> = (0..ambient)
                .map(|_| -(1.0 - rng.random::<f64>()).ln())
                .collect();
            let sum: f64 = draws.iter().sum();
            let scaled: Vec<f64> = draws.iter().map(|v| v / sum * target_sum).collect();
            starts.push(project_box_simplex(&scaled, target_sum));
        } else {
            // vertex start: a random 0/1 point with the right coordinate sum
            let ones = target_sum.round() as usize;
            let mut indices: Vec<usize> = (0..ambient).collect();
            indices.shuffle(&mut rng);
            let mut v = vec![0.0; ambient];
            for &i in indices.iter().take(ones.min(ambient)) {
                v[i] = 1.0;
            }
            starts.push(v);
        }
    }
    let mut best: Option<OptResult> = None;
    for start in starts {
        let mut x = start;
        let mut fx = obj.value(&x);
        let mut step = 1.0;
        let mut iters = 0usize;
        while iters < cfg.max_iters {
            iters += 1;
            let g = obj.grad(&x);
            let lifted: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + step * gi).collect();
            let proj = project_box_simplex(&lifted, target_sum);
            let d: Vec<f64> = proj.iter().zip(&x).map(|(p, xi)| p - xi).collect();
            let dmax = d.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if dmax < 1e-15 {
                break;
            }
            let slope: f64 = g.iter().zip(&d).map(|(gi, di)| gi * di).sum();
            let mut t = 1.0;
            let mut candidate: Vec<f64>;
            let mut fc;
            loop {
                candidate = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
                fc = obj.value(&candidate);
                if fc >= fx + 1e-4 * t * slope || t < 1e-16 {
                    break;
                }
                t *= 0.5;
            }
            if fc <= fx + cfg.tolerance {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
                continue;
            }
            x = candidate;
            fx = fc;
            if t == 1.0 {
                step *= 1.8;
            }
        }
        let replace = best.as_ref().map_or(true, |b| fx > b.value);
        if replace {
            best = Some(OptResult {
                argmax: x,
                value: fx,
                boundary: None,
                method: Method::ProjectedGradient,
                trajectory_len: iters,
            });
        }
    }
    Ok(best.expect("at least one start"))
}

/// Exhaustively evaluates the objective at every vertex.
pub fn vertex_oracle_max(
    m: &LinearMatroid,
    obj: &dyn ObjectiveFn,
    cap: usize,
) -> Result<OptResult, OptimizeError> {
    let v = vrep(m);
    if v.len() > cap {
        return Err(OptimizeError::CapExceeded { count: v.len(), cap });
    }
    let mut best: Option<(usize, f64)> = None;
    for i in 0..v.len() {
        let val = obj.value(&v.vertex_floats(i));
        if best.map_or(true, |(_, bv)| val > bv) {
            best = Some((i, val));
        }
    }
    let (idx, value) = best.expect("at least one basis");
    let argmax = v.vertex_floats(idx);
    let boundary = classify_boundary(m, &argmax, 1e-9)?;
    Ok(OptResult {
        argmax,
        value,
        boundary: Some(boundary),
        method: Method::VertexOracle,
        trajectory_len: v.len(),
    })
}

/// Exact-rational exhaustive vertex maximization of a compiled objective.
pub fn vertex_oracle_max_exact(
    m: &LinearMatroid,
    obj: &CompiledObjective,
    cap: usize,
) -> Result<(IndexSet, Rational), OptimizeError> {
    let v = vrep(m);
    if v.len() > cap {
        return Err(OptimizeError::CapExceeded { count: v.len(), cap });
    }
    let mut best: Option<(IndexSet, Rational)> = None;
    for i in 0..v.len() {
        let x = indicator_rationals(v.vertex(i), m.ground_size());
        let val = obj.value_exact(&x);
        if best.as_ref().map_or(true, |(_, bv)| val > *bv) {
            best = Some((v.vertex(i), val));
        }
    }
    Ok(best.expect("at least one basis"))
}

/// Weight vector view of an optimizer argmax.
pub fn argmax_weights(result: &OptResult) -> WeightVector<f64> {
    WeightVector::new(result.argmax.iter().map(|v| v.max(0.0)).collect())
        .expect("clamped nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{build_matroid, VectorConfiguration};
    use crate::polytope::BoundaryTag;

    fn cfg_a() -> LinearMatroid {
        build_matroid(VectorConfiguration::from_ints(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap())
    }

    fn cfg_c() -> LinearMatroid {
        build_matroid(
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
            .unwrap(),
        )
    }

    fn cfg_d() -> LinearMatroid {
        build_matroid(
            VectorConfiguration::from_ints(
                4,
                &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 1, 1]],
            )
            .unwrap(),
        )
    }

    struct SquareSum;
    impl ObjectiveFn for SquareSum {
        fn value(&self, x: &[f64]) -> f64 {
            x.iter().map(|v| v * v).sum()
        }
        fn grad(&self, x: &[f64]) -> Vec<f64> {
            x.iter().map(|v| 2.0 * v).collect()
        }
    }

    #[test]
    fn greedy_picks_top_weight_basis() {
        let m = cfg_a();
        let basis = greedy_linear_max(&m, &[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(basis, IndexSet::from_indices([0, 1]));
    }

    #[test]
    fn greedy_respects_rank_caps() {
        let m = cfg_c();
        let basis = greedy_linear_max(&m, &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        // at most two of {0,1,2} fit; ties break to low indices
        assert_eq!(basis, IndexSet::from_indices([0, 1, 3, 4]));
    }

    #[test]
    fn greedy_matches_exhaustive_on_random_objectives() {
        let m = cfg_c();
        let v = vrep(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let c: Vec<f64> = (0..7).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let basis = greedy_linear_max(&m, &c).unwrap();
            let greedy_val: f64 = basis.iter().map(|i| c[i]).sum();
            let best = (0..v.len())
                .map(|i| v.vertex(i).iter().map(|s| c[s]).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((greedy_val - best).abs() < 1e-12);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let m = cfg_c();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for objective in [Objective::X2Pow, Objective::X3Pow] {
            let obj = objective.compile(&m);
            let x: Vec<f64> = (0..7).map(|_| 0.2 + 0.6 * rng.random::<f64>()).collect();
            let g = obj.grad(&x);
            for p in 0..x.len() {
                let eps = 1e-6;
                let mut xp = x.clone();
                xp[p] += eps;
                let mut xm = x.clone();
                xm[p] -= eps;
                let fd = (obj.value(&xp) - obj.value(&xm)) / (2.0 * eps);
                assert!((g[p] - fd).abs() < 1e-4, "obj {objective:?} coord {p}: {} vs {fd}", g[p]);
            }
        }
        let obj = Objective::compile_free(5);
        let x = project_box_simplex(&[0.9, 0.7, 1.3, 0.2, 1.1], 4.0);
        let g = obj.grad(&x);
        for p in 0..x.len() {
            let eps = 1e-6;
            let mut xp = x.clone();
            xp[p] += eps;
            let mut xm = x.clone();
            xm[p] -= eps;
            let fd = (obj.value(&xp) - obj.value(&xm)) / (2.0 * eps);
            assert!((g[p] - fd).abs() < 1e-5);
        }
    }

    #[test]
    fn projection_examples() {
        let y = [0.8, 0.8, 0.8, 0.8, 0.8];
        let p = project_box_simplex(&y, 4.0);
        for (a, b) in y.iter().zip(&p) {
            assert!((a - b).abs() < 1e-9);
        }
        let p = project_box_simplex(&[2.0, 2.0, 0.0, 0.0, 0.0], 4.0);
        let expected = [1.0, 1.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        for (a, b) in expected.iter().zip(&p) {
            assert!((a - b).abs() < 1e-9, "{p:?}");
        }
        assert!((p.iter().sum::<f64>() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn edge_ascent_stays_at_hypersimplex_barycenter_for_f() {
        let m = cfg_d();
        let obj = Objective::compile_free(5);
        let cfg = OptimizerConfig { tolerance: 1e-10, ..Default::default() };
        let result = edge_ascent(&m, &obj, &[0.8; 5], &cfg).unwrap();
        assert!((result.value - 72.0 / 125.0).abs() < 1e-12);
        assert_eq!(result.trajectory_len, 0);
        assert_eq!(result.boundary.unwrap().tag, BoundaryTag::Interior);
    }

    #[test]
    fn edge_ascent_climbs_x2_to_a_vertex() {
        let m = cfg_c();
        let obj = Objective::X2Pow.compile(&m);
        let cfg = OptimizerConfig { line_search_grid: 64, ..Default::default() };
        let start = sample_relint(&m, 1, 5)[0].values().to_vec();
        let result = edge_ascent(&m, &obj, &start, &cfg).unwrap();
        assert_eq!(result.boundary.unwrap().tag, BoundaryTag::Vertex);
        // value at any vertex of a rank-4 matroid: C(4,2)(2^4 - 2) = 84
        assert!((result.value - 84.0).abs() < 1e-9, "value {}", result.value);
    }

    #[test]
    fn frank_wolfe_drives_convex_objective_to_vertex() {
        let m = cfg_a();
        let cfg = OptimizerConfig { restarts: 4, ..Default::default() };
        let result = frank_wolfe_max(&m, &SquareSum, &[2. / 3.; 3], &cfg).unwrap();
        assert!((result.value - 2.0).abs() < 1e-9);
        assert_eq!(result.boundary.unwrap().tag, BoundaryTag::Vertex);
    }

    #[test]
    fn projected_gradient_finds_the_sharp_maximum() {
        let obj = Objective::compile_free(5);
        let cfg = OptimizerConfig { tolerance: 1e-12, restarts: 8, ..Default::default() };
        let start = project_box_simplex(&[0.9, 0.9, 0.7, 0.8, 0.7], 4.0);
        let result = projected_gradient_max(&obj, &start, 4.0, &cfg).unwrap();
        assert!((result.value - 72.0 / 125.0).abs() < 1e-9, "value {}", result.value);
        for v in &result.argmax {
            assert!((v - 0.8).abs() < 1e-5);
        }
    }

    #[test]
    fn vertex_oracle_values_are_vertex_independent() {
        let m = cfg_c();
        let x2 = Objective::X2Pow.compile(&m);
        let r = vertex_oracle_max(&m, &x2, VERTEX_ORACLE_CAP).unwrap();
        assert!((r.value - 84.0).abs() < 1e-12);
        let (_, exact) = vertex_oracle_max_exact(&m, &x2, VERTEX_ORACLE_CAP).unwrap();
        assert_eq!(exact, Rational::from_integer(84.into()));
        let x3 = Objective::X3Pow.compile(&m);
        let (_, exact3) = vertex_oracle_max_exact(&m, &x3, VERTEX_ORACLE_CAP).unwrap();
        // C(4,3)(3^4 - 3*2^4 + 3) = 144
        assert_eq!(exact3, Rational::from_integer(144.into()));
    }

    #[test]
    fn vertex_oracle_f_on_hypersimplex_is_9_16() {
        let m = cfg_d();
        let obj = Objective::compile_free(5);
        let r = vertex_oracle_max(&m, &obj, VERTEX_ORACLE_CAP).unwrap();
        assert!((r.value - 9.0 / 16.0).abs() < 1e-12);
        assert!(r.value < 72.0 / 125.0);
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let m = cfg_a();
        let cfg = OptimizerConfig::default();
        let err = edge_ascent(&m, &SquareSum, &[1.0, 1.0, 1.0], &cfg);
        assert!(matches!(err, Err(OptimizeError::InfeasibleStart)));
    }

    #[test]
    fn determinism_of_multistart() {
        let obj = Objective::compile_free(6);
        let cfg = OptimizerConfig { restarts: 6, tolerance: 1e-12, ..Default::default() };
        let start = project_box_simplex(&[0.7; 6], 4.0);
        let a = projected_gradient_max(&obj, &start, 4.0, &cfg).unwrap();
        let b = projected_gradient_max(&obj, &start, 4.0, &cfg).unwrap();
        assert_eq!(a.argmax, b.argmax);
        assert_eq!(a.value, b.value);
    }
}
