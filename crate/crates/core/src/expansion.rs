//! Sphere expansion `|A*| >= λ|A|` decided by max-flow.
//!
//! For `λ = p/q`: source → each `u ∈ S_n` with capacity `p`, `u → v` for every
//! forward edge into `S_{n+1}` with infinite capacity, each `v ∈ S_{n+1}` →
//! sink with capacity `q`. A cut with sphere side `A` costs
//! `p(s_n - |A|) + q|A*|`, so the max-flow equals `p s_n` exactly when
//! `q|A*| >= p|A|` for every `A ⊆ S_n`.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use num::integer::gcd;
use num::{BigRational, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, INFINITE};
use crate::graph::LazyGraph;
use crate::key::VertexKey;
use crate::rational::{self, frac, small_parts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub level: usize,
    pub lambda: String,
    pub verdict: Verdict,
    pub sphere_size: usize,
    pub next_size: usize,
    /// `min |A*|/|A|` over nonempty `A ⊆ S_n`.
    pub min_ratio: String,
    pub min_ratio_witness: Vec<VertexKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violating_set: Option<Vec<VertexKey>>,
}

impl ExpansionReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Bipartite forward graph between two consecutive spheres.
pub struct SpherePair {
    pub level: usize,
    pub sphere: Vec<VertexKey>,
    pub next_size: usize,
    /// forward neighbors of each sphere vertex, as indices into `S_{n+1}`
    pub forward: Vec<Vec<usize>>,
}

impl SpherePair {
    pub fn star_size(&self, set: &[usize]) -> usize {
        let mut hit = vec![false; self.next_size];
        let mut count = 0;
        for &u in set {
            for &v in &self.forward[u] {
                if !hit[v] {
                    hit[v] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// Minimum of `q|A*| - p|A|` over all `A`, with a minimizing `A`.
    fn min_deficiency(&self, p: i64, q: i64) -> (i64, Vec<usize>) {
        let s = self.sphere.len();
        let source = 0;
        let sink = 1;
        let mut net = FlowNetwork::new(2 + s + self.next_size);
        for (u, fw) in self.forward.iter().enumerate() {
            net.add_edge(source, 2 + u, p);
            for &v in fw {
                net.add_edge(2 + u, 2 + s + v, INFINITE);
            }
        }
        for v in 0..self.next_size {
            net.add_edge(2 + s + v, sink, q);
        }
        let flow = net.max_flow(source, sink);
        let side = net.source_side(source);
        let set: Vec<usize> = (0..s).filter(|&u| side[2 + u]).collect();
        (flow - p * s as i64, set)
    }

    fn keys(&self, set: &[usize]) -> Vec<VertexKey> {
        set.iter().map(|&u| self.sphere[u].clone()).collect()
    }

    /// Exact `min |A*|/|A|` by Dinkelbach iteration on the flow oracle.
    pub fn min_ratio(&self) -> Result<(BigRational, Vec<usize>)> {
        let mut best: Vec<usize> = (0..self.sphere.len()).collect();
        loop {
            let ratio = frac(self.star_size(&best) as i64, best.len() as i64);
            let (p, q) = small_parts(&ratio).ok_or_else(|| Error::InvalidArgument("ratio too large".into()))?;
            let (value, set) = self.min_deficiency(p, q);
            if value >= 0 || set.is_empty() {
                return Ok((ratio, best));
            }
            best = set;
        }
    }

    pub fn check(&self, lambda: &BigRational) -> Result<ExpansionReport> {
        if !lambda.is_positive() {
            return Err(Error::InvalidArgument("lambda must be positive".into()));
        }
        let (p, q) = small_parts(lambda).ok_or_else(|| Error::InvalidArgument("lambda too large".into()))?;
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        if self.sphere.is_empty() {
            return Ok(ExpansionReport {
                level: self.level,
                lambda: rational::to_text(lambda),
                verdict: Verdict::Holds,
                sphere_size: 0,
                next_size: self.next_size,
                min_ratio: "inf".into(),
                min_ratio_witness: Vec::new(),
                violating_set: None,
            });
        }
        let (value, set) = self.min_deficiency(p, q);
        let (ratio, witness) = self.min_ratio()?;
        let verdict = if value >= 0 { Verdict::Holds } else { Verdict::Fails };
        Ok(ExpansionReport {
            level: self.level,
            lambda: rational::to_text(lambda),
            verdict,
            sphere_size: self.sphere.len(),
            next_size: self.next_size,
            min_ratio: rational::to_text(&ratio),
            min_ratio_witness: self.keys(&witness),
            violating_set: (value < 0).then(|| self.keys(&set)),
        })
    }
}

/// Consecutive sphere pairs about the base vertex for the given levels.
pub fn sphere_pairs(g: &LazyGraph, levels: RangeInclusive<usize>) -> Result<Vec<SpherePair>> {
    let top = *levels.end();
    let ball = g.base_ball(top + 1)?;
    let mut out = Vec::new();
    for n in levels {
        let sphere = ball.sphere(n).to_vec();
        let next = ball.sphere(n + 1);
        let index: HashMap<&VertexKey, usize> = next.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let forward = sphere
            .iter()
            .map(|u| g.neighbors(u).iter().filter_map(|w| index.get(w).copied()).collect())
            .collect();
        out.push(SpherePair {
            level: n,
            sphere,
            next_size: next.len(),
            forward,
        });
    }
    Ok(out)
}

pub fn check_expansion(g: &LazyGraph, level: usize, lambda: &BigRational) -> Result<ExpansionReport> {
    sphere_pairs(g, level..=level)?.remove(0).check(lambda)
}

pub fn check_expansion_levels(
    g: &LazyGraph,
    levels: RangeInclusive<usize>,
    lambda: &BigRational,
) -> Result<Vec<ExpansionReport>> {
    sphere_pairs(g, levels)?.iter().map(|pair| pair.check(lambda)).collect()
}

/// Homogeneous growth check: `|T*|/|T| >= s_{n+1}/s_n >= 1` at each level.
/// A level with `s_{n+1} < s_n` fails outright.
pub fn check_homogeneous(g: &LazyGraph, levels: RangeInclusive<usize>) -> Result<Vec<ExpansionReport>> {
    let mut out = Vec::new();
    for pair in sphere_pairs(g, levels)? {
        let lambda = frac(pair.next_size as i64, pair.sphere.len().max(1) as i64);
        let mut report = pair.check(&lambda)?;
        if pair.next_size < pair.sphere.len() {
            report.verdict = Verdict::Fails;
        }
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make, FamilySpec};
    use crate::rational::int;

    #[test]
    fn line_fails_doubling() {
        let g = make(&FamilySpec::Lattice { d: 1 }).unwrap();
        let r = check_expansion(&g, 3, &int(2)).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.min_ratio, "1");
        assert!(r.violating_set.is_some());
    }

    #[test]
    fn regular_tree_expands_by_branching() {
        let g = make(&FamilySpec::Tree { delta: 4 }).unwrap();
        for r in check_expansion_levels(&g, 1..=3, &int(3)).unwrap() {
            assert!(r.holds());
            assert_eq!(r.min_ratio, "3");
        }
        assert!(!check_expansion(&g, 2, &frac(7, 2)).unwrap().holds());
    }

    #[test]
    fn orthant_is_homogeneous_on_small_levels() {
        let g = make(&FamilySpec::Orthant { d: 2 }).unwrap();
        assert!(check_homogeneous(&g, 0..=5).unwrap().iter().all(ExpansionReport::holds));
    }
}
