//! Exact game-tree search for a constant budget on a finite truncation.
//!
//! The game is played inside `B(X_0, R)`; the fire touching the sphere of
//! radius `R` counts as escape. The defender minimizes the final burned
//! count. Protecting more vertices never enlarges the fire, so every move
//! protects exactly `min(f, #candidates)` vertices, and candidates are the
//! unburnt vertices the fire can still reach.

use std::collections::HashMap;

use serde::Serialize;

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::game::Strategy;
use crate::graph::LazyGraph;
use crate::key::VertexKey;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub f: usize,
    pub radius: usize,
    pub r: u32,
    pub node_cap: usize,
    /// When set, first search only protections within this distance of the
    /// fire; a containing line found that way is a valid witness. Otherwise
    /// the exhaustive search runs.
    pub quick_radius: Option<usize>,
}

impl OracleConfig {
    pub fn new(f: usize, radius: usize) -> Self {
        OracleConfig {
            f,
            radius,
            r: 1,
            node_cap: 5_000_000,
            quick_radius: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum OracleResult {
    Containable {
        witness: Strategy,
        burned: usize,
        nodes: usize,
    },
    /// Every schedule inside the truncation lets the fire touch its boundary.
    BoundaryReached {
        nodes: usize,
    },
    Inconclusive {
        nodes: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Box<[u64]>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)].into_boxed_slice())
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }
}

struct Board {
    keys: Vec<VertexKey>,
    adj: Vec<Vec<usize>>,
    boundary: Bits,
    n: usize,
}

struct Search<'a> {
    board: &'a Board,
    f: usize,
    r: u32,
    node_cap: usize,
    quick: Option<usize>,
    nodes: usize,
    memo: HashMap<(Bits, Bits), (Option<usize>, Vec<usize>)>,
}

struct Aborted;

impl Search<'_> {
    fn spread(&self, x: &Bits, p: &Bits) -> Bits {
        let mut out = x.clone();
        let mut layer: Vec<usize> = (0..self.board.n).filter(|&i| x.get(i)).collect();
        for _ in 0..self.r {
            let mut next = Vec::new();
            for &v in &layer {
                for &w in &self.board.adj[v] {
                    if !out.get(w) && !p.get(w) {
                        out.set(w);
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        out
    }

    /// Unburnt vertices reachable from the fire avoiding `p`, with their
    /// distance from the fire.
    fn reachable(&self, x: &Bits, p: &Bits) -> Vec<(usize, usize)> {
        let mut seen = x.clone();
        let mut layer: Vec<usize> = (0..self.board.n).filter(|&i| x.get(i)).collect();
        let mut out = Vec::new();
        let mut d = 0;
        while !layer.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &v in &layer {
                for &w in &self.board.adj[v] {
                    if !seen.get(w) && !p.get(w) {
                        seen.set(w);
                        next.push(w);
                        out.push((w, d));
                    }
                }
            }
            layer = next;
        }
        out
    }

    fn normalize(&self, x: &Bits, p: &Bits, reach: &[(usize, usize)]) -> Bits {
        let mut region = x.clone();
        for &(v, _) in reach {
            region.set(v);
        }
        let mut out = Bits::new(self.board.n);
        for i in 0..self.board.n {
            if p.get(i) && self.board.adj[i].iter().any(|&w| region.get(w)) {
                out.set(i);
            }
        }
        out
    }

    fn solve(&mut self, x: &Bits, p: &Bits) -> Result<Option<usize>, Aborted> {
        let reach = self.reachable(x, p);
        if reach.is_empty() {
            return Ok(Some(x.count()));
        }
        let key = (x.clone(), self.normalize(x, p, &reach));
        if let Some((v, _)) = self.memo.get(&key) {
            return Ok(*v);
        }
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Aborted);
        }
        let mut candidates: Vec<usize> = reach
            .iter()
            .filter(|(_, d)| self.quick.is_none_or(|q| *d <= q))
            .map(|&(v, _)| v)
            .collect();
        candidates.sort_unstable();
        let k = self.f.min(candidates.len());
        // boundary vertices next to the fire must all be protected now
        if self.r == 1 {
            let urgent = reach
                .iter()
                .filter(|&&(v, d)| d == 1 && self.board.boundary.get(v))
                .count();
            if urgent > self.f {
                self.memo.insert(key, (None, Vec::new()));
                return Ok(None);
            }
        }
        let mut best: (Option<usize>, Vec<usize>) = (None, Vec::new());
        let floor = x.count();
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let mut p2 = p.clone();
            for &i in &combo {
                p2.set(candidates[i]);
            }
            let x2 = self.spread(x, &p2);
            if !x2.intersects(&self.board.boundary) {
                if let Some(v) = self.solve(&x2, &p2)? {
                    if best.0.is_none_or(|b| v < b) {
                        best = (Some(v), combo.iter().map(|&i| candidates[i]).collect());
                        if v == floor {
                            break;
                        }
                    }
                }
            }
            if !next_combination(&mut combo, candidates.len()) {
                break;
            }
        }
        self.memo.insert(key, best.clone());
        Ok(best.0)
    }

    fn witness(&self, x0: &Bits) -> Vec<Vec<VertexKey>> {
        let mut x = x0.clone();
        let mut p = Bits::new(self.board.n);
        let mut schedule = Vec::new();
        loop {
            let reach = self.reachable(&x, &p);
            if reach.is_empty() {
                break;
            }
            let key = (x.clone(), self.normalize(&x, &p, &reach));
            let Some((_, mv)) = self.memo.get(&key) else { break };
            for &v in mv {
                p.set(v);
            }
            schedule.push(mv.iter().map(|&v| self.board.keys[v].clone()).collect());
            x = self.spread(&x, &p);
        }
        schedule
    }
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact minimax search for a constant budget `f` on `B(X_0, R)`.
pub fn minimax_oracle(g: &LazyGraph, x0: &[VertexKey], cfg: OracleConfig) -> Result<OracleResult> {
    if x0.is_empty() {
        return Err(Error::InvalidArgument("initial fire must be nonempty".into()));
    }
    if cfg.r == 0 || cfg.radius == 0 {
        return Err(Error::InvalidArgument(
            "spread radius and truncation radius must be positive".into(),
        ));
    }
    let ball = g.ball(x0.iter(), cfg.radius)?;
    let keys: Vec<VertexKey> = ball.members().into_iter().collect();
    let index: HashMap<&VertexKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let n = keys.len();
    let adj = keys
        .iter()
        .map(|v| g.neighbors(v).iter().filter_map(|w| index.get(w).copied()).collect())
        .collect();
    let mut boundary = Bits::new(n);
    let mut x = Bits::new(n);
    for (i, k) in keys.iter().enumerate() {
        if ball.distance_of(k) == Some(cfg.radius) {
            boundary.set(i);
        }
    }
    for v in x0 {
        x.set(index[v]);
    }
    let board = Board { keys, adj, boundary, n };
    let mut total_nodes = 0;
    let passes: Vec<Option<usize>> = match cfg.quick_radius {
        Some(q) => vec![Some(q), None],
        None => vec![None],
    };
    for quick in passes {
        let mut search = Search {
            board: &board,
            f: cfg.f,
            r: cfg.r,
            node_cap: cfg.node_cap,
            quick,
            nodes: 0,
            memo: HashMap::new(),
        };
        let outcome = search.solve(&x, &Bits::new(n));
        total_nodes += search.nodes;
        match outcome {
            Ok(Some(burned)) => {
                let schedule = search.witness(&x);
                return Ok(OracleResult::Containable {
                    witness: Strategy::new(cfg.r, BudgetSeq::Constant(cfg.f as u64), schedule),
                    burned,
                    nodes: total_nodes,
                });
            }
            Ok(None) if quick.is_none() => return Ok(OracleResult::BoundaryReached { nodes: total_nodes }),
            Ok(None) => {}
            Err(Aborted) if quick.is_none() => return Ok(OracleResult::Inconclusive { nodes: total_nodes }),
            Err(Aborted) => {}
        }
    }
    Ok(OracleResult::Inconclusive { nodes: total_nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make, FamilySpec};

    #[test]
    fn line_is_containable_with_one_firefighter() {
        let g = make(&FamilySpec::Lattice { d: 1 }).unwrap();
        match minimax_oracle(&g, &[VertexKey::coords(&[0])], OracleConfig::new(1, 4)).unwrap() {
            OracleResult::Containable { burned, witness, .. } => {
                assert_eq!(burned, 2);
                assert_eq!(witness.schedule.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn combinations_are_enumerated_in_order() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
    }
}
