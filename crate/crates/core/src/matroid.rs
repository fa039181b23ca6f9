//! The linear matroid `M(u_1, ..., u_N)` of a vector configuration: rank,
//! closure, flats, bases, circuits and connected components, all decided by
//! exact rational rank computations.

use crate::linalg::{rank_of, QMatrix, QVector, RowSpace};
use crate::scalar::Rational;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{OnceLock, RwLock};
use thiserror::Error;

/// Largest supported ground set; index sets are 64-bit masks.
pub const MAX_GROUND_SIZE: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("ambient dimension must be at least 2, got {0}")]
    AmbientTooSmall(usize),
    #[error("need at least {n} vectors in R^{n}, got {got}")]
    TooFewVectors { n: usize, got: usize },
    #[error("at most {MAX_GROUND_SIZE} vectors supported, got {0}")]
    TooManyVectors(usize),
    #[error("vector {0} has dimension {1}, expected {2}")]
    WrongDimension(usize, usize, usize),
    #[error("zero vector at position {0}")]
    ZeroVector(usize),
    #[error("parallel pair ({0}, {1})")]
    ParallelPair(usize, usize),
    #[error("configuration does not span: rank {rank} < n = {n}")]
    NotSpanning { rank: usize, n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("index {index} out of range for ground set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("snapshot does not match configuration: {0}")]
    SnapshotMismatch(String),
}

/// Subset of the ground set `{0, ..., N-1}` as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND_SIZE);
        if n == MAX_GROUND_SIZE {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = IndexSet(0);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < MAX_GROUND_SIZE);
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_GROUND_SIZE && self.0 & (1u64 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> IndexSet {
        IndexSet(self.0 | (1u64 << i))
    }

    pub fn without(self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1u64 << i))
    }

    pub fn is_subset_of(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic order on the sorted index sequences (used for canonical
    /// listings; this is not the numeric order of the masks).
    pub fn lex_cmp(self, other: IndexSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// N pairwise-unparallel nonzero rational direction vectors spanning R^n.
///
/// Each index carries the antipodal pair `{±u_i}`; directions need not be
/// unit vectors because every downstream quantity depends only on spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorConfiguration {
    n: usize,
    vectors: Vec<QVector>,
}

impl VectorConfiguration {
    /// Validates and builds a configuration. Positions in error messages are
    /// 1-based, matching input-file order.
    pub fn new(n: usize, vectors: Vec<QVector>) -> Result<Self, ConfigError> {
        if n < 2 {
            return Err(ConfigError::AmbientTooSmall(n));
        }
        if vectors.len() < n {
            return Err(ConfigError::TooFewVectors { n, got: vectors.len() });
        }
        if vectors.len() > MAX_GROUND_SIZE {
            return Err(ConfigError::TooManyVectors(vectors.len()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != n {
                return Err(ConfigError::WrongDimension(i + 1, v.dim(), n));
            }
            if v.is_zero() {
                return Err(ConfigError::ZeroVector(i + 1));
            }
        }
        for i in 0..vectors.len() {
            for j in (i + 1)..vectors.len() {
                if rank_of(&[vectors[i].clone(), vectors[j].clone()]).expect("same dim") < 2 {
                    return Err(ConfigError::ParallelPair(i + 1, j + 1));
                }
            }
        }
        let rank = rank_of(&vectors).expect("same dim");
        if rank < n {
            return Err(ConfigError::NotSpanning { rank, n });
        }
        Ok(VectorConfiguration { n, vectors })
    }

    pub fn from_ints(n: usize, rows: &[&[i64]]) -> Result<Self, ConfigError> {
        Self::new(n, rows.iter().map(|r| QVector::from_ints(r)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of directions N.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &QVector {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[QVector] {
        &self.vectors
    }

    /// Applies an invertible matrix to every direction (matroid-preserving).
    pub fn transformed(&self, t: &QMatrix) -> Result<Self, ConfigError> {
        let vectors: Vec<QVector> = self
            .vectors
            .iter()
            .map(|v| t.apply(v).expect("dimension checked by caller"))
            .collect();
        Self::new(self.n, vectors)
    }

    /// Content string used for hashing/caching: dimension plus the exact
    /// rational entries in input order.
    pub fn content_key(&self) -> String {
        let mut out = format!("n={};", self.n);
        for v in &self.vectors {
            out.push_str(&v.display());
            out.push(';');
        }
        out
    }
}

/// A flat (closed set) with its rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flat {
    pub indices: IndexSet,
    pub rank: usize,
}

/// Partition of the ground set into connected components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    blocks: Vec<IndexSet>,
}

impl ComponentPartition {
    pub fn blocks(&self) -> &[IndexSet] {
        &self.blocks
    }

    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    /// True iff `s` is a union of whole components (a separator).
    pub fn is_separator(&self, s: IndexSet) -> bool {
        self.blocks
            .iter()
            .all(|b| b.intersection(s).is_empty() || b.is_subset_of(s))
    }
}

/// Serializable enumeration results, for external caching.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatroidSnapshot {
    pub content_key_hashed: Option<String>,
    pub flats: Vec<Flat>,
    pub bases: Vec<IndexSet>,
}

/// Linear matroid over a configuration with memoized rank queries and lazily
/// computed enumerations. Queries are logically pure; the caches are behind
/// locks so shared references can be used across threads.
pub struct LinearMatroid {
    config: VectorConfiguration,
    rank_cache: RwLock<HashMap<IndexSet, usize>>,
    flats: OnceLock<Vec<Flat>>,
    bases: OnceLock<Vec<IndexSet>>,
    circuits: OnceLock<Vec<IndexSet>>,
    components: OnceLock<ComponentPartition>,
}

impl fmt::Debug for LinearMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearMatroid")
            .field("n", &self.config.n())
            .field("ground_size", &self.config.len())
            .finish()
    }
}

/// Builds the linear matroid of a validated configuration.
pub fn build_matroid(config: VectorConfiguration) -> LinearMatroid {
    LinearMatroid {
        config,
        rank_cache: RwLock::new(HashMap::new()),
        flats: OnceLock::new(),
        bases: OnceLock::new(),
        circuits: OnceLock::new(),
        components: OnceLock::new(),
    }
}

impl LinearMatroid {
    pub fn config(&self) -> &VectorConfiguration {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    /// Size of the ground set E.
    pub fn ground_size(&self) -> usize {
        self.config.len()
    }

    pub fn ground_set(&self) -> IndexSet {
        IndexSet::full(self.ground_size())
    }

    fn check_subset(&self, s: IndexSet) -> Result<(), MatroidError> {
        if !s.is_subset_of(self.ground_set()) {
            let index = s.difference(self.ground_set()).iter().next().unwrap_or(0);
            return Err(MatroidError::IndexOutOfRange { index, size: self.ground_size() });
        }
        Ok(())
    }

    /// Rank of an index set: dim span of the indexed vectors. Memoized.
    pub fn rank(&self, s: IndexSet) -> Result<usize, MatroidError> {
        self.check_subset(s)?;
        Ok(self.rank_unchecked(s))
    }

    fn rank_unchecked(&self, s: IndexSet) -> usize {
        if let Some(&r) = self.rank_cache.read().expect("lock").get(&s) {
            return r;
        }
        let mut space = RowSpace::new(self.n());
        for i in s.iter() {
            space.insert(self.config.vector(i));
        }
        let r = space.rank();
        self.rank_cache.write().expect("lock").insert(s, r);
        r
    }

    pub fn is_independent(&self, s: IndexSet) -> Result<bool, MatroidError> {
        Ok(self.rank(s)? == s.len())
    }

    /// Closure: all ground elements whose vector lies in the span of `s`.
    pub fn closure(&self, s: IndexSet) -> Result<Flat, MatroidError> {
        self.check_subset(s)?;
        let mut space = RowSpace::new(self.n());
        for i in s.iter() {
            space.insert(self.config.vector(i));
        }
        let rank = space.rank();
        let mut indices = s;
        for i in 0..self.ground_size() {
            if !indices.contains(i) && space.contains(self.config.vector(i)) {
                indices.insert(i);
            }
        }
        Ok(Flat { indices, rank })
    }

    /// All flats of rank 1..=n, canonically ordered by rank then
    /// lexicographic index set. Computed by closing every subset of size at
    /// most n and deduplicating.
    pub fn flats(&self) -> &[Flat] {
        self.flats.get_or_init(|| {
            let ground = self.ground_size();
            let n = self.n();
            let mut seen: HashSet<IndexSet> = HashSet::new();
            let mut out: Vec<Flat> = Vec::new();
            let mut stack: Vec<(IndexSet, usize)> = vec![(IndexSet::EMPTY, 0)];
            // Depth-first enumeration of subsets of size <= n; closing each.
            while let Some((set, next)) = stack.pop() {
                if !set.is_empty() {
                    let flat = self.closure(set).expect("subset of ground set");
                    if seen.insert(flat.indices) {
                        out.push(flat);
                    }
                }
                if set.len() < n {
                    for i in next..ground {
                        stack.push((set.with(i), i + 1));
                    }
                }
            }
            out.sort_by(|a, b| a.rank.cmp(&b.rank).then(a.indices.lex_cmp(b.indices)));
            out
        })
    }

    /// All bases (n-subsets of full rank), lexicographically ordered.
    pub fn bases(&self) -> &[IndexSet] {
        self.bases.get_or_init(|| {
            let ground = self.ground_size();
            let n = self.n();
            let mut out = Vec::new();
            // Depth-first over independent partial selections only.
            let mut stack: Vec<(IndexSet, usize)> = vec![(IndexSet::EMPTY, 0)];
            while let Some((set, next)) = stack.pop() {
                if set.len() == n {
                    out.push(set);
                    continue;
                }
                let need = n - set.len();
                for i in (next..ground).rev() {
                    if ground - i < need {
                        continue;
                    }
                    let cand = set.with(i);
                    if self.rank_unchecked(cand) == cand.len() {
                        stack.push((cand, i + 1));
                    }
                }
            }
            out.sort_by(|a, b| a.lex_cmp(*b));
            out
        })
    }

    /// All circuits (minimal dependent sets); sizes range over 2..=n+1 since
    /// loops and parallel pairs are excluded by construction.
    pub fn circuits(&self) -> &[IndexSet] {
        self.circuits.get_or_init(|| {
            let ground = self.ground_size();
            let n = self.n();
            let mut out = Vec::new();
            let mut stack: Vec<(IndexSet, usize)> = vec![(IndexSet::EMPTY, 0)];
            // A circuit is a dependent set all of whose maximal proper
            // subsets are independent; prune any branch that already
            // contains a dependent proper subset.
            while let Some((set, next)) = stack.pop() {
                let size = set.len();
                if size >= 2 && self.rank_unchecked(set) < size {
                    // dependent: minimal iff every one-element deletion is independent
                    let minimal = set
                        .iter()
                        .all(|i| {
                            let sub = set.without(i);
                            self.rank_unchecked(sub) == sub.len()
                        });
                    if minimal {
                        out.push(set);
                    }
                    continue;
                }
                if size <= n {
                    for i in next..ground {
                        stack.push((set.with(i), i + 1));
                    }
                }
            }
            out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
            out
        })
    }

    /// Connected components: transitive closure of "share a circuit".
    pub fn components(&self) -> &ComponentPartition {
        self.components.get_or_init(|| {
            let ground = self.ground_size();
            let mut parent: Vec<usize> = (0..ground).collect();
            fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for c in self.circuits() {
                let mut it = c.iter();
                if let Some(first) = it.next() {
                    for other in it {
                        let (a, b) = (find(&mut parent, first), find(&mut parent, other));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
            let mut blocks: HashMap<usize, IndexSet> = HashMap::new();
            for i in 0..ground {
                let root = find(&mut parent, i);
                blocks.entry(root).or_insert(IndexSet::EMPTY).insert(i);
            }
            let mut blocks: Vec<IndexSet> = blocks.into_values().collect();
            blocks.sort_by(|a, b| a.lex_cmp(*b));
            ComponentPartition { blocks }
        })
    }

    /// Enumeration results for external caching.
    pub fn snapshot(&self) -> MatroidSnapshot {
        MatroidSnapshot {
            content_key_hashed: None,
            flats: self.flats().to_vec(),
            bases: self.bases().to_vec(),
        }
    }

    /// Rebuilds a matroid with precomputed enumerations. The snapshot is
    /// sanity-checked against the configuration (counts and rank of a few
    /// entries), not re-derived.
    pub fn restore(
        config: VectorConfiguration,
        snapshot: MatroidSnapshot,
    ) -> Result<LinearMatroid, MatroidError> {
        let m = build_matroid(config);
        let ground = m.ground_set();
        for f in &snapshot.flats {
            if !f.indices.is_subset_of(ground) || f.rank == 0 || f.rank > m.n() {
                return Err(MatroidError::SnapshotMismatch(format!(
                    "flat {} with rank {}",
                    f.indices, f.rank
                )));
            }
        }
        for b in &snapshot.bases {
            if b.len() != m.n() || !b.is_subset_of(ground) {
                return Err(MatroidError::SnapshotMismatch(format!("basis {b}")));
            }
        }
        if let Some(first) = snapshot.bases.first() {
            if m.rank_unchecked(*first) != m.n() {
                return Err(MatroidError::SnapshotMismatch("first basis is dependent".into()));
            }
        }
        m.flats.set(snapshot.flats).ok();
        m.bases.set(snapshot.bases).ok();
        Ok(m)
    }
}

/// Convenience: exact rational weights of a 0/1 indicator vector.
pub fn indicator_rationals(s: IndexSet, len: usize) -> Vec<Rational> {
    use num_traits::{One, Zero};
    (0..len)
        .map(|i| if s.contains(i) { Rational::one() } else { Rational::zero() })
        .collect()
}
