#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use firegraph::families::{make, FamilySpec};
use firegraph::{LazyGraph, VertexKey};

/// The `{3,7}` triangulation grown layer by layer from local degrees only:
/// every vertex of the outer cycle gets `7 - deg` new neighbors, consecutive
/// on the next cycle, sharing one with each cycle neighbor.
pub struct Tiling37 {
    pub adj: Vec<Vec<usize>>,
    /// `layers[n]` in cycle order; `layers[0] = [root]`
    pub layers: Vec<Vec<usize>>,
}

impl Tiling37 {
    pub fn build(depth: usize) -> Self {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
        let link = |adj: &mut Vec<Vec<usize>>, a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        let first: Vec<usize> = (1..=7).collect();
        adj.resize(8, Vec::new());
        for i in 0..7 {
            link(&mut adj, 0, first[i]);
            link(&mut adj, first[i], first[(i + 1) % 7]);
        }
        let mut layers = vec![vec![0], first];
        while layers.len() <= depth + 1 {
            let cycle = layers.last().unwrap().clone();
            let k = cycle.len();
            let mut next = Vec::new();
            // apex[i] is shared by cycle[i] and cycle[i+1]
            let mut exclusive: Vec<Vec<usize>> = Vec::with_capacity(k);
            let mut apex = Vec::with_capacity(k);
            for &v in &cycle {
                let missing = 7 - adj[v].len();
                assert!(missing >= 3, "vertex {v} has degree {}", adj[v].len());
                let own: Vec<usize> = (0..missing - 2)
                    .map(|_| {
                        adj.push(Vec::new());
                        adj.len() - 1
                    })
                    .collect();
                adj.push(Vec::new());
                apex.push(adj.len() - 1);
                exclusive.push(own);
            }
            for i in 0..k {
                let v = cycle[i];
                let before = apex[(i + k - 1) % k];
                link(&mut adj, v, before);
                for &w in &exclusive[i] {
                    link(&mut adj, v, w);
                }
                link(&mut adj, v, apex[i]);
                next.extend(exclusive[i].iter().copied());
                next.push(apex[i]);
            }
            let m = next.len();
            for j in 0..m {
                link(&mut adj, next[j], next[(j + 1) % m]);
            }
            layers.push(next);
        }
        Tiling37 { adj, layers }
    }

    pub fn bfs_layers(&self, depth: usize) -> Vec<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0]);
        let mut out = vec![Vec::new(); depth + 1];
        while let Some(v) = queue.pop_front() {
            if dist[v] > depth {
                continue;
            }
            out[dist[v]].push(v);
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// Searches for an isomorphism between the ball of radius `depth` and the
    /// same ball of the lazy graph. Layer 1 is matched by rotation and
    /// reflection; each later layer is forced by the images of parent sets.
    /// Returns the map when every edge of both balls matches.
    pub fn isomorphism(&self, g: &LazyGraph, depth: usize) -> Option<HashMap<usize, VertexKey>> {
        let ball = g.base_ball(depth).ok()?;
        let mut theirs = vec![vec![g.base().clone()]];
        for n in 1..=depth {
            theirs.push(cycle_order(g, ball.sphere(n))?);
        }
        let in_ball: HashSet<&VertexKey> = theirs.iter().flatten().collect();
        for flip in [false, true] {
            for shift in 0..7 {
                let mut map: HashMap<usize, VertexKey> = HashMap::new();
                map.insert(0, g.base().clone());
                let mut first = theirs[1].clone();
                if flip {
                    first.reverse();
                }
                for (i, &v) in self.layers[1].iter().enumerate() {
                    map.insert(v, first[(i + shift) % 7].clone());
                }
                let ok = (2..=depth).all(|n| self.extend(g, &mut map, n, &theirs[n - 1], &theirs[n]));
                if ok && self.edges_match(g, &map, depth, &in_ball) {
                    return Some(map);
                }
            }
        }
        None
    }

    fn extend(
        &self,
        g: &LazyGraph,
        map: &mut HashMap<usize, VertexKey>,
        n: usize,
        their_prev: &[VertexKey],
        theirs: &[VertexKey],
    ) -> bool {
        let prev: HashSet<&VertexKey> = their_prev.iter().collect();
        let their_parents: Vec<BTreeSet<VertexKey>> = theirs
            .iter()
            .map(|c| g.neighbors(c).into_iter().filter(|w| prev.contains(w)).collect())
            .collect();
        let our_prev: HashSet<usize> = self.layers[n - 1].iter().copied().collect();
        let ours = &self.layers[n];
        let our_parents: Vec<BTreeSet<VertexKey>> = ours
            .iter()
            .map(|v| {
                self.adj[*v]
                    .iter()
                    .filter(|p| our_prev.contains(p))
                    .map(|p| map[p].clone())
                    .collect()
            })
            .collect();
        let m = ours.len();
        if theirs.len() != m {
            return false;
        }
        for rev in [false, true] {
            for j in 0..m {
                let idx = |i: usize| if rev { (j + m - i) % m } else { (i + j) % m };
                if (0..m).all(|i| our_parents[i] == their_parents[idx(i)]) {
                    for (i, v) in ours.iter().enumerate() {
                        map.insert(*v, theirs[idx(i)].clone());
                    }
                    return true;
                }
            }
        }
        false
    }

    fn edges_match(
        &self,
        g: &LazyGraph,
        map: &HashMap<usize, VertexKey>,
        depth: usize,
        in_ball: &HashSet<&VertexKey>,
    ) -> bool {
        let ours: Vec<usize> = self.layers[..=depth].iter().flatten().copied().collect();
        let inside: HashSet<usize> = ours.iter().copied().collect();
        let mut edges = 0usize;
        for &v in &ours {
            for &w in &self.adj[v] {
                if inside.contains(&w) {
                    edges += 1;
                    if !g.neighbors(&map[&v]).contains(&map[&w]) {
                        return false;
                    }
                }
            }
        }
        let their_edges: usize = in_ball
            .iter()
            .map(|v| g.neighbors(v).iter().filter(|w| in_ball.contains(w)).count())
            .sum();
        edges == their_edges
    }
}

/// Orders a sphere along its cycle, or `None` when it is not one cycle.
pub fn cycle_order(g: &LazyGraph, layer: &[VertexKey]) -> Option<Vec<VertexKey>> {
    let set: HashSet<&VertexKey> = layer.iter().collect();
    let inner = |v: &VertexKey| -> Vec<VertexKey> { g.neighbors(v).into_iter().filter(|w| set.contains(w)).collect() };
    if layer.iter().any(|v| inner(v).len() != 2) {
        return None;
    }
    let mut order = vec![layer[0].clone()];
    let mut prev = layer[0].clone();
    let mut cur = inner(&layer[0])[0].clone();
    while cur != layer[0] {
        order.push(cur.clone());
        let next = inner(&cur).into_iter().find(|w| *w != prev)?;
        prev = cur;
        cur = next;
        if order.len() > layer.len() {
            return None;
        }
    }
    (order.len() == layer.len()).then_some(order)
}

/// `min |A*| / |A|` and whether `|A*| >= p/q |A|` for all nonempty `A`, by
/// enumerating every subset of the sphere.
pub fn subset_expansion(forward: &[Vec<usize>], p: u64, q: u64) -> (bool, (u64, u64)) {
    let s = forward.len();
    assert!(s <= 20);
    let mut holds = true;
    let mut best = (u64::MAX, 1u64);
    for mask in 1u32..(1 << s) {
        let mut star: HashSet<usize> = HashSet::new();
        let mut size = 0u64;
        for (u, fw) in forward.iter().enumerate() {
            if mask >> u & 1 == 1 {
                size += 1;
                star.extend(fw.iter().copied());
            }
        }
        let st = star.len() as u64;
        if q * st < p * size {
            holds = false;
        }
        if st * best.1 < best.0 * size {
            best = (st, size);
        }
    }
    (holds, best)
}

/// Forward neighbors of `S_n` into `S_{n+1}` by index.
pub fn forward_lists(g: &LazyGraph, n: usize) -> Vec<Vec<usize>> {
    let ball = g.base_ball(n + 1).unwrap();
    let next = ball.sphere(n + 1);
    let index: HashMap<&VertexKey, usize> = next.iter().enumerate().map(|(i, v)| (v, i)).collect();
    ball.sphere(n)
        .iter()
        .map(|u| g.neighbors(u).iter().filter_map(|w| index.get(w).copied()).collect())
        .collect()
}

/// Spread by brute force: a vertex burns after a turn when it is within
/// distance `r` of the fire in the graph with the protected vertices removed.
pub fn punctured_spread(
    g: &LazyGraph,
    burning: &HashSet<VertexKey>,
    protected: &HashSet<VertexKey>,
    r: usize,
) -> HashSet<VertexKey> {
    let mut dist: HashMap<VertexKey, usize> = burning.iter().map(|v| (v.clone(), 0)).collect();
    let mut queue: VecDeque<VertexKey> = burning.iter().cloned().collect();
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == r {
            continue;
        }
        for w in g.neighbors(&v) {
            if !protected.contains(&w) && !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    dist.into_keys().collect()
}

pub fn graph(spec: &str) -> LazyGraph {
    make(&spec.parse::<FamilySpec>().unwrap()).unwrap()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
