//! Growth functions `β`, their differences, and sphere enumeration.

use std::collections::HashSet;

use num::{BigRational, BigUint};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::LazyGraph;
use crate::key::VertexKey;
use crate::rational::{self, int};

/// Walks the spheres `S_0, S_1, ...` about a vertex, keeping only two layers.
pub struct Spheres<'g> {
    g: &'g LazyGraph,
    prev: HashSet<VertexKey>,
    current: Vec<VertexKey>,
    radius: usize,
    total: usize,
}

impl<'g> Spheres<'g> {
    pub fn new(g: &'g LazyGraph, root: VertexKey) -> Self {
        Spheres {
            g,
            prev: HashSet::new(),
            current: vec![root],
            radius: 0,
            total: 1,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// The current sphere, sorted by key.
    pub fn current(&self) -> &[VertexKey] {
        &self.current
    }

    /// Moves to the next sphere.
    pub fn advance(&mut self) -> Result<&[VertexKey]> {
        let here: HashSet<VertexKey> = self.current.iter().cloned().collect();
        let mut next = HashSet::new();
        for v in &self.current {
            for w in self.g.neighbors(v) {
                if !here.contains(&w) && !self.prev.contains(&w) {
                    next.insert(w);
                }
            }
        }
        self.total += next.len();
        if self.total > self.g.cap() {
            return Err(Error::ResourceLimit { cap: self.g.cap() });
        }
        let mut next: Vec<VertexKey> = next.into_iter().collect();
        next.sort();
        self.prev = here;
        self.current = next;
        self.radius += 1;
        Ok(&self.current)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthProfile {
    pub root: VertexKey,
    pub horizon: usize,
    pub beta: Vec<u64>,
    /// `β'(0) = β(0)`, `β'(n) = β(n) - β(n-1)`
    pub beta1: Vec<u64>,
    /// `β''(0) = β'(0)`, `β''(n) = β'(n) - β'(n-1)`
    pub beta2: Vec<i64>,
    pub sphere_sizes: Vec<u64>,
}

impl GrowthProfile {
    pub fn from_spheres(root: VertexKey, sphere_sizes: Vec<u64>) -> Self {
        let horizon = sphere_sizes.len() - 1;
        let mut beta = Vec::with_capacity(sphere_sizes.len());
        let mut acc = 0u64;
        for s in &sphere_sizes {
            acc += s;
            beta.push(acc);
        }
        let beta1 = sphere_sizes.clone();
        let mut beta2 = vec![beta1[0] as i64];
        for n in 1..beta1.len() {
            beta2.push(beta1[n] as i64 - beta1[n - 1] as i64);
        }
        GrowthProfile {
            root,
            horizon,
            beta,
            beta1,
            beta2,
            sphere_sizes,
        }
    }
}

/// Exact growth profile about the base vertex up to radius `horizon`.
pub fn profile(g: &LazyGraph, horizon: usize) -> Result<GrowthProfile> {
    let mut walk = Spheres::new(g, g.base().clone());
    let mut sizes = vec![1u64];
    for _ in 0..horizon {
        sizes.push(walk.advance()?.len() as u64);
    }
    Ok(GrowthProfile::from_spheres(g.base().clone(), sizes))
}

/// `p_{n,d} = 1^{d-1} + 2^{d-1} + ... + n^{d-1}` by direct summation.
pub fn faulhaber(n: u64, d: u32) -> BigUint {
    assert!(d >= 1, "faulhaber needs d >= 1");
    (1..=n).map(|k| BigUint::from(k).pow(d - 1)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DegreeEstimate {
    /// `s_n / n^{d-1}` stops growing on the window; `witness` is its minimum there.
    Polynomial {
        d: u32,
        witness: String,
    },
    /// Consecutive sphere ratios stay at or above 3/2 on the window.
    Exponential,
    Inconclusive {
        reason: String,
    },
}

/// Finite-horizon guess of the polynomial growth degree. This is a heuristic:
/// `liminf s_n / n^{d-1}` cannot be decided from finitely many terms.
pub fn degree_estimate(profile: &GrowthProfile) -> DegreeEstimate {
    let n_max = profile.horizon;
    if n_max < 8 {
        return DegreeEstimate::Inconclusive {
            reason: format!("horizon {n_max} is below 8"),
        };
    }
    let s = &profile.sphere_sizes;
    let lo = n_max / 2;
    if (lo..n_max).all(|n| s[n] > 0 && 2 * s[n + 1] >= 3 * s[n]) {
        return DegreeEstimate::Exponential;
    }
    let mid = (lo + n_max) / 2;
    for d in 1..=16u32 {
        let ratio = |n: usize| BigRational::new(s[n].into(), num::BigInt::from(n as u64).pow(d - 1));
        let first = (lo..=mid).map(ratio).min().unwrap();
        let second = (mid + 1..=n_max).map(ratio).min().unwrap();
        if second <= first.clone() * rational::frac(5, 4) {
            let witness = first.min(second);
            return DegreeEstimate::Polynomial {
                d,
                witness: rational::to_text(&witness),
            };
        }
    }
    DegreeEstimate::Inconclusive {
        reason: "no degree up to 16 fits the window".into(),
    }
}

/// `β_n <= c n^d` for `1 <= n <= horizon`; returns the first failing index.
pub fn polynomial_bound_violation(profile: &GrowthProfile, c: u64, d: u32) -> Option<usize> {
    (1..=profile.horizon).find(|&n| {
        let bound = int(c) * int(n as u64).pow(d as i32);
        int(profile.beta[n]) > bound
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make, FamilySpec};

    #[test]
    fn square_grid_profile() {
        let g = make(&FamilySpec::Square).unwrap();
        let p = profile(&g, 3).unwrap();
        assert_eq!(p.beta, vec![1, 5, 13, 25]);
        assert_eq!(p.beta2, vec![1, 3, 4, 4]);
    }

    #[test]
    fn faulhaber_small_values() {
        assert_eq!(faulhaber(4, 3), BigUint::from(30u32));
        assert_eq!(faulhaber(3, 2), BigUint::from(6u32));
        assert_eq!(faulhaber(7, 1), BigUint::from(7u32));
        assert_eq!(faulhaber(0, 4), BigUint::from(0u32));
    }

    #[test]
    fn degree_estimates() {
        let est = |spec: FamilySpec, n| degree_estimate(&profile(&make(&spec).unwrap(), n).unwrap());
        assert!(matches!(
            est(FamilySpec::Square, 12),
            DegreeEstimate::Polynomial { d: 2, .. }
        ));
        assert!(matches!(
            est(FamilySpec::Lattice { d: 3 }, 10),
            DegreeEstimate::Polynomial { d: 3, .. }
        ));
        assert_eq!(est(FamilySpec::Tree { delta: 3 }, 12), DegreeEstimate::Exponential);
        assert!(matches!(
            est(FamilySpec::Square, 5),
            DegreeEstimate::Inconclusive { .. }
        ));
    }
}
