//! Volume decomposition functionals `X_k` evaluated by three independent
//! routes: direct enumeration over n-tuples of directions, the subspace
//! recursion over the flat lattice, and the closed polynomial forms for
//! k = 2, 3. All routes are generic over [`Scalar`], so every value can be
//! reproduced bit-exactly in rational mode.
//!
//! `X_k(x)^n` sums the products `x_{i_1} ... x_{i_n}` over all ordered
//! n-tuples of direction indices whose vectors span exactly a k-dimensional
//! subspace. Pair weights already absorb the antipodal sign patterns: span
//! is sign-invariant and the 2^n signings of a tuple each carry the product
//! of half-weights.

use crate::concentration::WeightVector;
use crate::matroid::{Flat, IndexSet, LinearMatroid};
use crate::scalar::{Rational, Scalar};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FunctionalError {
    #[error("k = {k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("closed form available only for k in {{2, 3}}, got {0}")]
    UnsupportedK(usize),
    #[error("enumeration size {size} exceeds cap {cap}")]
    CostCapExceeded { size: u128, cap: u128 },
    #[error("weight vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coordinate sum {got} is not {expected} (within tolerance)")]
    WrongTotal { expected: f64, got: f64 },
    #[error("n = {n} out of range for k = {k} bound")]
    BadBoundArguments { n: usize, k: usize },
}

/// Default cap on enumeration size for brute-force evaluation.
pub const BRUTE_CAP: u128 = 10_000_000;

/// Rank-k flats grouped by level; level k lists exactly the k-dimensional
/// subspaces spanned by directions, each identified by its member set.
#[derive(Debug, Clone)]
pub struct SubspaceLattice {
    levels: Vec<Vec<Flat>>,
}

impl SubspaceLattice {
    /// Entries of level `k` (1-based rank).
    pub fn level(&self, k: usize) -> &[Flat] {
        &self.levels[k - 1]
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn iter_all(&self) -> impl Iterator<Item = &Flat> {
        self.levels.iter().flatten()
    }
}

/// Groups the flats by rank; level-k members are the rank-k flats.
pub fn subspace_lattice(m: &LinearMatroid) -> SubspaceLattice {
    let mut levels = vec![Vec::new(); m.n()];
    for f in m.flats() {
        levels[f.rank - 1].push(*f);
    }
    SubspaceLattice { levels }
}

fn check_weights<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
) -> Result<(), FunctionalError> {
    if w.len() != m.ground_size() {
        return Err(FunctionalError::LengthMismatch {
            expected: m.ground_size(),
            got: w.len(),
        });
    }
    Ok(())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product::<i64>().max(1)
}

/// Walks all multisets of size `n` over `indices` (values non-decreasing by
/// position in `indices`), calling `visit(chosen positions)`.
fn for_each_multiset(indices_len: usize, n: usize, mut visit: impl FnMut(&[usize])) {
    if indices_len == 0 {
        return;
    }
    let mut choice = vec![0usize; n];
    loop {
        visit(&choice);
        // advance to the next non-decreasing tuple
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if choice[pos] + 1 < indices_len {
                let v = choice[pos] + 1;
                for c in choice.iter_mut().skip(pos) {
                    *c = v;
                }
                break;
            }
        }
    }
}

/// Brute-force `X_k(x)^n` restricted to tuples drawn from `members`,
/// enumerating unordered multisets with multinomial multiplicity.
fn brute_xk_within<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
    k: usize,
    members: IndexSet,
    cap: u128,
) -> Result<S, FunctionalError> {
    let n = m.n();
    // Zero-weight indices contribute nothing to any product.
    let active: Vec<usize> = members
        .iter()
        .filter(|&i| !w.values()[i].is_zero())
        .collect();
    let size = binomial((active.len() + n - 1) as u128, n as u128);
    if size > cap {
        return Err(FunctionalError::CostCapExceeded { size, cap });
    }
    let n_fact = factorial(n);
    let mut terms: Vec<S> = Vec::new();
    for_each_multiset(active.len(), n, |choice| {
        let mut distinct = IndexSet::EMPTY;
        for &c in choice {
            distinct.insert(active[c]);
        }
        if m.rank(distinct).expect("subset of ground set") != k {
            return;
        }
        // multiplicity = n! / prod(multiplicities!)
        let mut mult = n_fact;
        let mut run = 1usize;
        for t in 1..=choice.len() {
            if t < choice.len() && choice[t] == choice[t - 1] {
                run += 1;
            } else {
                mult /= factorial(run);
                run = 1;
            }
        }
        let mut prod = S::from_int(mult);
        for &c in choice {
            prod = prod * w.values()[active[c]].clone();
        }
        terms.push(prod);
    });
    Ok(S::sum_iter(terms.into_iter()))
}

/// Brute-force `X_k(x)^n` by multiset enumeration (the primary brute path).
pub fn brute_xk<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
    k: usize,
    cap: u128,
) -> Result<S, FunctionalError> {
    check_weights(m, w)?;
    if k == 0 || k > m.n() {
        return Err(FunctionalError::KOutOfRange { k, n: m.n() });
    }
    brute_xk_within(m, w, k, m.ground_set(), cap)
}

/// Brute-force `X_k(x)^n` over all `N^n` ordered tuples; cross-check path
/// for the multiset enumeration.
pub fn brute_xk_ordered<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
    k: usize,
    cap: u128,
) -> Result<S, FunctionalError> {
    check_weights(m, w)?;
    let n = m.n();
    if k == 0 || k > n {
        return Err(FunctionalError::KOutOfRange { k, n });
    }
    let ground = m.ground_size();
    let size = (ground as u128).pow(n as u32);
    if size > cap {
        return Err(FunctionalError::CostCapExceeded { size, cap });
    }
    let mut acc = S::zero();
    let mut tuple = vec![0usize; n];
    'outer: loop {
        let mut distinct = IndexSet::EMPTY;
        for &i in &tuple {
            distinct.insert(i);
        }
        if m.rank(distinct).expect("subset") == k {
            let mut prod = S::one();
            for &i in &tuple {
                prod = prod * w.values()[i].clone();
            }
            acc = acc + prod;
        }
        for pos in (0..n).rev() {
            tuple[pos] += 1;
            if tuple[pos] < ground {
                continue 'outer;
            }
            tuple[pos] = 0;
        }
        break;
    }
    Ok(acc)
}

/// All `X_k(P)^n` plus the per-subspace recursion cache.
#[derive(Debug, Clone)]
pub struct FunctionalTable<S: Scalar> {
    n: usize,
    total: S,
    /// `xk_pow[k-1] = X_k(P)^n`.
    xk_pow: Vec<S>,
    /// Per flat: members, rank, and `X_l(P;ξ)^n` for `l = 1..=rank`.
    per_subspace: Vec<(IndexSet, usize, Vec<S>)>,
}

impl<S: Scalar> FunctionalTable<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> S {
        self.total.clone()
    }

    pub fn xk_pow(&self, k: usize) -> S {
        self.xk_pow[k - 1].clone()
    }

    pub fn all_xk_pow(&self) -> &[S] {
        &self.xk_pow
    }

    /// `X_k(P) = (X_k(P)^n)^{1/n}` as a float.
    pub fn xk(&self, k: usize) -> f64 {
        self.xk_pow(k).to_f64().max(0.0).powf(1.0 / self.n as f64)
    }

    pub fn per_subspace(&self) -> &[(IndexSet, usize, Vec<S>)] {
        &self.per_subspace
    }

    /// Exploratory per-subspace ratios `X_l(P;ξ)^n / V(ξ)^n` (no bound
    /// asserted; reported as data).
    pub fn subspace_ratios(&self, w: &WeightVector<S>) -> Vec<(IndexSet, usize, Vec<f64>)> {
        self.per_subspace
            .iter()
            .map(|(members, rank, values)| {
                let mass_pow = w.mass(*members).pow_u(self.n as u32).to_f64();
                let ratios = values
                    .iter()
                    .map(|v| if mass_pow > 0.0 { v.to_f64() / mass_pow } else { 0.0 })
                    .collect();
                (*members, *rank, ratios)
            })
            .collect()
    }
}

/// Evaluates every `X_k(P)^n` through the subspace recursion:
/// level-1 entries are weight powers, `X_l(P;ξ)^n` aggregates contained
/// level-l entries, and each level's own value is the local identity
/// remainder `V(ξ)^n - sum of lower levels`.
pub fn recursion_table<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
) -> Result<FunctionalTable<S>, FunctionalError> {
    check_weights(m, w)?;
    let n = m.n();
    let np = n as u32;
    let lattice = subspace_lattice(m);
    // cache[flat] = values of X_l(P;ξ)^n for l = 1..=rank(ξ)
    let mut per_subspace: Vec<(IndexSet, usize, Vec<S>)> = Vec::new();
    for k in 1..=n {
        for flat in lattice.level(k) {
            let mut values: Vec<S> = Vec::with_capacity(k);
            for l in 1..k {
                // X_l(P;ξ)^n = sum over level-l flats contained in ξ
                let contained = lattice
                    .level(l)
                    .iter()
                    .filter(|e| e.indices.is_subset_of(flat.indices))
                    .map(|e| {
                        per_subspace
                            .iter()
                            .find(|(idx, _, _)| *idx == e.indices)
                            .map(|(_, _, vals)| vals[l - 1].clone())
                            .expect("lower level already computed")
                    });
                values.push(S::sum_iter(contained));
            }
            let mass_pow = w.mass(flat.indices).pow_u(np);
            let lower = S::sum_iter(values.iter().cloned());
            values.push(mass_pow - lower);
            per_subspace.push((flat.indices, flat.rank, values));
        }
    }
    let xk_pow: Vec<S> = (1..=n)
        .map(|k| {
            S::sum_iter(
                per_subspace
                    .iter()
                    .filter(|(_, rank, _)| *rank == k)
                    .map(|(_, _, vals)| vals[k - 1].clone()),
            )
        })
        .collect();
    Ok(FunctionalTable { n, total: w.total(), xk_pow, per_subspace })
}

/// The displayed closed polynomial forms for `X_2(P)^n` and `X_3(P)^n` over
/// the level-2 (resp. level-3 with inner level-2) lattice entries.
pub fn closed_form_xk<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
    k: usize,
) -> Result<S, FunctionalError> {
    check_weights(m, w)?;
    let n = m.n();
    let np = n as u32;
    if k != 2 && k != 3 {
        return Err(FunctionalError::UnsupportedK(k));
    }
    if k > n {
        return Err(FunctionalError::KOutOfRange { k, n });
    }
    let lattice = subspace_lattice(m);
    let weight_pow =
        |i: usize| -> S { w.values()[i].clone().pow_u(np) };
    match k {
        2 => {
            let terms = lattice.level(2).iter().map(|f| {
                let mass_pow = w.mass(f.indices).pow_u(np);
                let singles = S::sum_iter(f.indices.iter().map(weight_pow));
                mass_pow - singles
            });
            Ok(S::sum_iter(terms))
        }
        _ => {
            let terms = lattice.level(3).iter().map(|t| {
                let mass_pow = w.mass(t.indices).pow_u(np);
                let planes = S::sum_iter(
                    lattice
                        .level(2)
                        .iter()
                        .filter(|f| f.indices.is_subset_of(t.indices))
                        .map(|f| {
                            let plane_pow = w.mass(f.indices).pow_u(np);
                            let singles = S::sum_iter(f.indices.iter().map(weight_pow));
                            plane_pow - singles
                        }),
                );
                let singles = S::sum_iter(t.indices.iter().map(weight_pow));
                mass_pow - planes - singles
            });
            Ok(S::sum_iter(terms))
        }
    }
}

/// Residuals of the decomposition identity.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    /// `|total^n - sum_k X_k(P)^n|` via the recursion table.
    pub global_residual: f64,
    /// Largest per-flat residual of the local identity, with `X_l(P;ξ)^n`
    /// recomputed by brute force inside each flat.
    pub max_local_residual: f64,
    pub lattice_entries: usize,
    /// Exactly zero residuals (rational mode).
    pub exact: bool,
}

/// Checks `total^n = sum_k X_k(P)^n` globally and the local identity
/// `V(ξ)^n = sum_{l<=dim ξ} X_l(P;ξ)^n` on every lattice entry, the local
/// sums recomputed by brute-force enumeration within the flat.
pub fn identity_check<S: Scalar>(
    m: &LinearMatroid,
    w: &WeightVector<S>,
    cap: u128,
) -> Result<IdentityReport, FunctionalError> {
    let table = recursion_table(m, w)?;
    let n = m.n() as u32;
    let total_pow = w.total().pow_u(n);
    let sum_pow = S::sum_iter(table.all_xk_pow().iter().cloned());
    let global_residual = (total_pow - sum_pow).abs_val().to_f64();

    let mut max_local = 0.0f64;
    let mut entries = 0usize;
    for flat in m.flats() {
        let mass_pow = w.mass(flat.indices).pow_u(n);
        let mut sum = S::zero();
        for l in 1..=flat.rank {
            sum = sum + brute_xk_within(m, w, l, flat.indices, cap)?;
        }
        let residual = (mass_pow - sum).abs_val().to_f64();
        max_local = max_local.max(residual);
        entries += 1;
    }
    Ok(IdentityReport {
        global_residual,
        max_local_residual: max_local,
        lattice_entries: entries,
        exact: S::EXACT,
    })
}

/// The degree-4 symmetric polynomial maximized in the 4-general-position
/// setting:
/// `f(x) = (1/256) * sum_{i<j<k} [(x_i+x_j+x_k)^4 - (x_i+x_j)^4
///  - (x_i+x_k)^4 - (x_j+x_k)^4 + x_i^4 + x_j^4 + x_k^4]`.
///
/// Coordinates must sum to 4 within `tol` (exactly, in rational mode).
pub fn hypersimplex_f<S: Scalar>(w: &WeightVector<S>, tol: f64) -> Result<S, FunctionalError> {
    let total = w.total();
    let four = S::from_int(4);
    if (total.clone() - four).abs_val() > S::equality_band(tol) {
        return Err(FunctionalError::WrongTotal { expected: 4.0, got: total.to_f64() });
    }
    let x = w.values();
    let len = x.len();
    let mut terms = Vec::with_capacity(len * (len - 1) * (len - 2) / 6);
    for i in 0..len {
        for j in (i + 1)..len {
            for k in (j + 1)..len {
                let (a, b, c) = (x[i].clone(), x[j].clone(), x[k].clone());
                let term = (a.clone() + b.clone() + c.clone()).pow_u(4)
                    - (a.clone() + b.clone()).pow_u(4)
                    - (a.clone() + c.clone()).pow_u(4)
                    - (b.clone() + c.clone()).pow_u(4)
                    + a.pow_u(4)
                    + b.pow_u(4)
                    + c.pow_u(4);
                terms.push(term);
            }
        }
    }
    let scale = S::from_ratio(&Rational::new(1.into(), 256.into()));
    Ok(S::sum_iter(terms.into_iter()) * scale)
}

/// Exact vertex value and n-th-power ratio bound for the sharp inequalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTable {
    /// Value of `X_k^n` at any basis vertex (parallelotope measure).
    pub vertex_value: Rational,
    /// `(X_k / V_n)^n` bound: `vertex_value / n^n`, except the 4-general
    /// position case for k = 3 in R^4 where the sharp bound is 72/125.
    pub ratio_bound_pow: Rational,
}

/// `C(n,2)(2^n - 2)` for k = 2 (n >= 3) and `C(n,3)(3^n - 3*2^n + 3)` for
/// k = 3 (n >= 5); `general_position_r4` admits n = 4, k = 3 with the
/// 72/125 ratio.
pub fn bound_table(n: usize, k: usize, general_position_r4: bool) -> Result<BoundTable, FunctionalError> {
    let bad = FunctionalError::BadBoundArguments { n, k };
    let big = |v: i128| Rational::from_integer(v.into());
    match k {
        2 => {
            if n < 3 {
                return Err(bad);
            }
            let vertex = big((binomial(n as u128, 2) as i128) * ((1i128 << n) - 2));
            let ratio = vertex.clone() / big((n as i128).pow(n as u32));
            Ok(BoundTable { vertex_value: vertex, ratio_bound_pow: ratio })
        }
        3 => {
            if n == 4 && general_position_r4 {
                let vertex = big(4 * (81 - 48 + 3));
                return Ok(BoundTable {
                    vertex_value: vertex,
                    ratio_bound_pow: Rational::new(72.into(), 125.into()),
                });
            }
            if n < 5 {
                return Err(bad);
            }
            let pow3 = 3i128.pow(n as u32);
            let vertex = big((binomial(n as u128, 3) as i128) * (pow3 - 3 * (1i128 << n) + 3));
            let ratio = vertex.clone() / big((n as i128).pow(n as u32));
            Ok(BoundTable { vertex_value: vertex, ratio_bound_pow: ratio })
        }
        _ => Err(bad),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{build_matroid, VectorConfiguration};

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

    fn parallelotope(n: usize) -> LinearMatroid {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        build_matroid(VectorConfiguration::from_ints(n, &refs).unwrap())
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn weights_35() -> WeightVector<Rational> {
        WeightVector::new(vec![
            rat(1, 6), rat(1, 6), rat(1, 6), rat(1, 8), rat(1, 8), rat(1, 8), rat(1, 8),
        ])
        .unwrap()
    }

    #[test]
    fn lattice_levels_of_cfg_c() {
        let m = cfg_c();
        let lat = subspace_lattice(&m);
        assert_eq!(lat.level(1).len(), 7);
        assert_eq!(lat.level(2).len(), 14);
        assert_eq!(lat.level(3).len(), 7);
        assert_eq!(lat.level(4).len(), 1);
    }

    #[test]
    fn parallelotope_brute_values() {
        let m = parallelotope(3);
        let w = WeightVector::new(vec![Rational::from_integer(1.into()); 3]).unwrap();
        assert_eq!(brute_xk(&m, &w, 3, BRUTE_CAP).unwrap(), rat(6, 1));
        assert_eq!(brute_xk(&m, &w, 2, BRUTE_CAP).unwrap(), rat(18, 1));
        assert_eq!(brute_xk(&m, &w, 1, BRUTE_CAP).unwrap(), rat(3, 1));
    }

    #[test]
    fn cfg_a_brute_values() {
        let m = cfg_a();
        let w = WeightVector::new(vec![rat(2, 3); 3]).unwrap();
        assert_eq!(brute_xk(&m, &w, 1, BRUTE_CAP).unwrap(), rat(4, 3));
        assert_eq!(brute_xk(&m, &w, 2, BRUTE_CAP).unwrap(), rat(8, 3));
    }

    #[test]
    fn ordered_and_multiset_paths_agree() {
        let m = cfg_c();
        let w = weights_35();
        for k in 1..=4 {
            let a = brute_xk(&m, &w, k, BRUTE_CAP).unwrap();
            let b = brute_xk_ordered(&m, &w, k, BRUTE_CAP).unwrap();
            assert_eq!(a, b, "paths disagree at k={k}");
        }
    }

    #[test]
    fn recursion_reproduces_reference_cylinder_values() {
        // Frozen reference values, independently derived by direct tuple
        // enumeration: X_1^4..X_4^4 for the two-cylinder configuration.
        let m = cfg_c();
        let w = weights_35();
        let table = recursion_table(&m, &w).unwrap();
        assert_eq!(table.xk_pow(1), rat(91, 27648));
        assert_eq!(table.xk_pow(2), rat(5429, 27648));
        assert_eq!(table.xk_pow(3), rat(353, 576));
        assert_eq!(table.xk_pow(4), rat(3, 16));
        assert!((table.xk_pow(3).to_f64() - 0.613).abs() < 1e-3);
    }

    #[test]
    fn recursion_matches_brute_on_all_levels() {
        for (m, w) in [
            (cfg_c(), weights_35()),
            (cfg_d(), WeightVector::new(vec![rat(4, 5); 5]).unwrap()),
            (cfg_a(), WeightVector::new(vec![rat(2, 3); 3]).unwrap()),
        ] {
            let table = recursion_table(&m, &w).unwrap();
            for k in 1..=m.n() {
                assert_eq!(
                    table.xk_pow(k),
                    brute_xk(&m, &w, k, BRUTE_CAP).unwrap(),
                    "k={k}"
                );
            }
        }
    }

    #[test]
    fn closed_forms_match_recursion() {
        let m = cfg_c();
        let w = weights_35();
        let table = recursion_table(&m, &w).unwrap();
        assert_eq!(closed_form_xk(&m, &w, 2).unwrap(), table.xk_pow(2));
        assert_eq!(closed_form_xk(&m, &w, 3).unwrap(), table.xk_pow(3));
        let m = parallelotope(3);
        let w = WeightVector::new(vec![Rational::from_integer(1.into()); 3]).unwrap();
        assert_eq!(closed_form_xk(&m, &w, 2).unwrap(), rat(18, 1));
        assert!(matches!(
            closed_form_xk(&m, &w, 4),
            Err(FunctionalError::UnsupportedK(4))
        ));
    }

    #[test]
    fn cfg_d_closed_form_x3_matches_lemma_value() {
        let m = cfg_d();
        let w = WeightVector::new(vec![rat(4, 5); 5]).unwrap();
        assert_eq!(closed_form_xk(&m, &w, 3).unwrap(), rat(18432, 125));
        assert_eq!(rat(18432, 125), rat(256 * 72, 125));
    }

    #[test]
    fn identity_holds_exactly_in_rational_mode() {
        let m = cfg_c();
        let report = identity_check(&m, &weights_35(), BRUTE_CAP).unwrap();
        assert_eq!(report.global_residual, 0.0);
        assert_eq!(report.max_local_residual, 0.0);
        assert!(report.exact);
        assert_eq!(report.lattice_entries, 29);
    }

    #[test]
    fn identity_small_in_float_mode() {
        let m = cfg_d();
        let w = WeightVector::new(vec![0.3, 0.9, 1.0, 0.8, 1.0]).unwrap();
        let report = identity_check(&m, &w, BRUTE_CAP).unwrap();
        let total: f64 = 4.0;
        assert!(report.global_residual <= 1e-9 * total.powi(4));
        assert!(report.max_local_residual <= 1e-9 * total.powi(4));
        assert!(!report.exact);
    }

    #[test]
    fn homogeneity_of_degree_n() {
        let m = cfg_a();
        let w = WeightVector::new(vec![rat(1, 2), rat(1, 3), rat(1, 5)]).unwrap();
        let scaled =
            WeightVector::new(w.values().iter().map(|v| v * rat(7, 2)).collect()).unwrap();
        for k in 1..=2 {
            let base = brute_xk(&m, &w, k, BRUTE_CAP).unwrap();
            let big = brute_xk(&m, &scaled, k, BRUTE_CAP).unwrap();
            assert_eq!(big, base * rat(7, 2).pow_u(2));
        }
    }

    #[test]
    fn hypersimplex_f_reference_points() {
        let w = WeightVector::new(vec![rat(4, 5); 5]).unwrap();
        assert_eq!(hypersimplex_f(&w, 0.0).unwrap(), rat(72, 125));
        let w = WeightVector::new(vec![
            rat(0, 1), rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1),
        ])
        .unwrap();
        assert_eq!(hypersimplex_f(&w, 0.0).unwrap(), rat(9, 16));
        let w = WeightVector::new(vec![rat(4, 6); 6]).unwrap();
        assert_eq!(hypersimplex_f(&w, 0.0).unwrap(), rat(5, 9));
        let w = WeightVector::new(vec![rat(1, 1); 5]).unwrap();
        assert!(matches!(
            hypersimplex_f(&w, 0.0),
            Err(FunctionalError::WrongTotal { .. })
        ));
    }

    #[test]
    fn hypersimplex_f_equals_x3_over_256_for_general_position() {
        let m = cfg_d();
        let w = WeightVector::new(vec![rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 2)])
            .unwrap();
        let x3 = recursion_table(&m, &w).unwrap().xk_pow(3);
        let f = hypersimplex_f(&w, 0.0).unwrap();
        assert_eq!(x3, f * Rational::from_integer(256.into()));
    }

    #[test]
    fn bound_table_values() {
        let b = bound_table(3, 2, false).unwrap();
        assert_eq!(b.vertex_value, rat(18, 1));
        assert_eq!(b.ratio_bound_pow, rat(2, 3));
        let b = bound_table(5, 3, false).unwrap();
        assert_eq!(b.vertex_value, rat(1500, 1));
        let b = bound_table(6, 3, false).unwrap();
        assert_eq!(b.vertex_value, rat(10800, 1));
        let b = bound_table(4, 3, true).unwrap();
        assert_eq!(b.ratio_bound_pow, rat(72, 125));
        assert_eq!(b.vertex_value, rat(144, 1));
        assert!(bound_table(4, 3, false).is_err());
        assert!(bound_table(2, 2, false).is_err());
        assert!(bound_table(5, 4, false).is_err());
    }

    #[test]
    fn brute_cap_guard() {
        let m = cfg_c();
        let w = weights_35();
        assert!(matches!(
            brute_xk_ordered(&m, &w, 3, 10),
            Err(FunctionalError::CostCapExceeded { .. })
        ));
    }
}
