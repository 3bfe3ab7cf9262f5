//! Lazy graphs: a neighbor oracle plus a base vertex.
//!
//! Infinite graphs are only ever touched through [`LazyGraph::neighbors`].
//! Every enumeration (balls, spheres, distances) is bounded by a member cap so
//! that a runaway search surfaces as [`Error::ResourceLimit`] instead of
//! exhausting memory.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::key::VertexKey;

/// Default member cap for ball enumeration.
pub const DEFAULT_CAP: usize = 5_000_000;

/// Member cap, honoring the `FIREGRAPH_CAP` override.
pub fn default_cap() -> usize {
    std::env::var("FIREGRAPH_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&c: &usize| c > 0)
        .unwrap_or(DEFAULT_CAP)
}

/// Pure adjacency oracle of a locally finite graph.
///
/// `neighbors` must return a sorted, duplicate-free list that never contains
/// `v` itself, and adjacency must be symmetric.
pub trait NeighborOracle: Send + Sync {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey>;
    fn contains(&self, v: &VertexKey) -> bool;
}

pub type Predicate = Arc<dyn Fn(&VertexKey) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct LazyGraph {
    name: String,
    base: VertexKey,
    degree_bound: Option<usize>,
    cap: usize,
    oracle: Arc<dyn NeighborOracle>,
}

impl fmt::Debug for LazyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyGraph")
            .field("name", &self.name)
            .field("base", &self.base)
            .field("degree_bound", &self.degree_bound)
            .field("cap", &self.cap)
            .finish()
    }
}

/// Outcome of a capped distance query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    ExceedsCap,
}

impl Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::ExceedsCap => None,
        }
    }
}

/// Layered BFS result around a finite center set.
#[derive(Debug, Clone)]
pub struct BallView {
    pub centers: BTreeSet<VertexKey>,
    pub radius: usize,
    /// `layers[k]` holds the vertices at distance exactly `k`, sorted.
    pub layers: Vec<Vec<VertexKey>>,
    dist: HashMap<VertexKey, usize>,
}

impl BallView {
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn contains(&self, v: &VertexKey) -> bool {
        self.dist.contains_key(v)
    }

    pub fn distance_of(&self, v: &VertexKey) -> Option<usize> {
        self.dist.get(v).copied()
    }

    pub fn members(&self) -> BTreeSet<VertexKey> {
        self.layers.iter().flatten().cloned().collect()
    }

    pub fn sphere(&self, k: usize) -> &[VertexKey] {
        self.layers.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }
}

impl LazyGraph {
    pub fn new(
        name: impl Into<String>,
        base: VertexKey,
        degree_bound: Option<usize>,
        oracle: Arc<dyn NeighborOracle>,
    ) -> Self {
        LazyGraph {
            name: name.into(),
            base,
            degree_bound,
            cap: default_cap(),
            oracle,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &VertexKey {
        &self.base
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.degree_bound
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_base(mut self, base: VertexKey) -> Result<Self> {
        if !self.oracle.contains(&base) {
            return Err(Error::BaseOutsideSubgraph(base));
        }
        self.base = base;
        Ok(self)
    }

    pub fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        self.oracle.neighbors(v)
    }

    pub fn contains(&self, v: &VertexKey) -> bool {
        self.oracle.contains(v)
    }

    /// Parses a key and checks that it names a vertex of this graph.
    pub fn parse_key(&self, text: &str) -> Result<VertexKey> {
        let key: VertexKey = text.parse().map_err(|_| self.invalid_key(text))?;
        if !self.contains(&key) {
            return Err(self.invalid_key(text));
        }
        Ok(key)
    }

    fn invalid_key(&self, text: &str) -> Error {
        Error::InvalidKey {
            family: self.name.clone(),
            text: text.to_string(),
        }
    }

    /// BFS distance from `u` to `v`, or `ExceedsCap` if it is larger than `cap`.
    pub fn distance(&self, u: &VertexKey, v: &VertexKey, cap: usize) -> Distance {
        self.distance_to_set(std::slice::from_ref(u), v, cap)
    }

    /// Distance from the nearest member of `sources` to `target`, capped.
    pub fn distance_to_set(&self, sources: &[VertexKey], target: &VertexKey, cap: usize) -> Distance {
        if sources.contains(target) {
            return Distance::Exact(0);
        }
        let mut seen: HashSet<VertexKey> = sources.iter().cloned().collect();
        let mut frontier: Vec<VertexKey> = sources.to_vec();
        for d in 1..=cap {
            let mut next = Vec::new();
            for v in &frontier {
                for w in self.neighbors(v) {
                    if &w == target {
                        return Distance::Exact(d);
                    }
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() || seen.len() > self.cap {
                break;
            }
            frontier = next;
        }
        Distance::ExceedsCap
    }

    /// Layered ball of the given radius about `centers`.
    pub fn ball<'a, I>(&self, centers: I, radius: usize) -> Result<BallView>
    where
        I: IntoIterator<Item = &'a VertexKey>,
    {
        let centers: BTreeSet<VertexKey> = centers.into_iter().cloned().collect();
        let mut dist: HashMap<VertexKey, usize> = HashMap::new();
        let mut layers: Vec<Vec<VertexKey>> = Vec::with_capacity(radius + 1);
        let first: Vec<VertexKey> = centers.iter().cloned().collect();
        for v in &first {
            dist.insert(v.clone(), 0);
        }
        layers.push(first);
        for d in 1..=radius {
            let mut next = Vec::new();
            for v in &layers[d - 1] {
                for w in self.neighbors(v) {
                    if !dist.contains_key(&w) {
                        dist.insert(w.clone(), d);
                        next.push(w);
                    }
                }
            }
            if dist.len() > self.cap {
                return Err(Error::ResourceLimit { cap: self.cap });
            }
            next.sort();
            layers.push(next);
        }
        Ok(BallView {
            centers,
            radius,
            layers,
            dist,
        })
    }

    /// Ball of the given radius about the base vertex.
    pub fn base_ball(&self, radius: usize) -> Result<BallView> {
        let base = self.base.clone();
        self.ball(std::iter::once(&base), radius)
    }

    /// The power graph `G(k)`: same vertices, adjacency at distance at most `k`.
    pub fn power(&self, k: usize) -> Result<LazyGraph> {
        if k == 0 {
            return Err(Error::InvalidArgument("power graph needs k >= 1".into()));
        }
        let delta = self
            .degree_bound
            .ok_or_else(|| Error::NoDegreeBound(self.name.clone()))?;
        if k == 1 {
            return Ok(self.clone());
        }
        let mut bound = 0usize;
        let mut term = delta;
        for _ in 0..k {
            bound = bound.saturating_add(term);
            term = term.saturating_mul(delta.saturating_sub(1));
        }
        Ok(LazyGraph {
            name: format!("power:k={k}({})", self.name),
            base: self.base.clone(),
            degree_bound: Some(bound),
            cap: self.cap,
            oracle: Arc::new(PowerOracle { inner: self.clone(), k }),
        })
    }

    /// Induced subgraph on the vertices satisfying `pred`.
    pub fn restrict(&self, name: impl Into<String>, pred: Predicate) -> Result<LazyGraph> {
        if !pred(&self.base) {
            return Err(Error::BaseOutsideSubgraph(self.base.clone()));
        }
        Ok(LazyGraph {
            name: name.into(),
            base: self.base.clone(),
            degree_bound: self.degree_bound,
            cap: self.cap,
            oracle: Arc::new(RestrictOracle {
                inner: self.clone(),
                pred,
            }),
        })
    }
}

struct PowerOracle {
    inner: LazyGraph,
    k: usize,
}

impl NeighborOracle for PowerOracle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let mut seen: HashSet<VertexKey> = HashSet::new();
        seen.insert(v.clone());
        let mut frontier = vec![v.clone()];
        let mut out = Vec::new();
        for _ in 0..self.k {
            let mut next = Vec::new();
            for u in &frontier {
                for w in self.inner.neighbors(u) {
                    if seen.insert(w.clone()) {
                        out.push(w.clone());
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        out.sort();
        out
    }

    fn contains(&self, v: &VertexKey) -> bool {
        self.inner.contains(v)
    }
}

struct RestrictOracle {
    inner: LazyGraph,
    pred: Predicate,
}

impl NeighborOracle for RestrictOracle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        self.inner.neighbors(v).into_iter().filter(|w| (self.pred)(w)).collect()
    }

    fn contains(&self, v: &VertexKey) -> bool {
        (self.pred)(v) && self.inner.contains(v)
    }
}
