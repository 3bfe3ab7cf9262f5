//! A bounded-degree graph with subexponential growth that one firefighter
//! can always contain.
//!
//! Level `n` holds `2^{s_n}` vertices `v_{n,1} .. v_{n,2^{s_n}}`, where `s`
//! runs `0, 1, 0, 1, 2, 1, 0, 1, 2, 3, 2, 1, 0, ...`; `s` vanishes exactly at
//! the levels `k(k+1)`, whose single vertex is a cut vertex. Between two
//! adjacent levels the larger one doubles the smaller one: `v_{n,x}` is joined
//! to `v_{m,2x-1}` and `v_{m,2x}`.

use crate::graph::NeighborOracle;
use crate::key::VertexKey;

/// Value of the level sequence `s_n`.
pub fn level_sequence_subexp(n: u64) -> u32 {
    // block k spans levels k(k+1) ..= (k+1)(k+2) and ramps 0 -> k+1 -> 0
    let mut k = ((n as f64).sqrt() as u64).saturating_sub(1);
    while (k + 1) * (k + 2) <= n {
        k += 1;
    }
    while k > 0 && k * (k + 1) > n {
        k -= 1;
    }
    let j = n - k * (k + 1);
    let peak = k + 1;
    (if j <= peak { j } else { 2 * peak - j }) as u32
}

/// Zero levels `k(k+1)` are the cut vertices of the graph.
pub fn is_zero_level(n: u64) -> bool {
    level_sequence_subexp(n) == 0
}

/// Smallest zero level that is at least `from`.
pub fn next_zero_level(from: u64) -> u64 {
    let mut k = 0u64;
    while k * (k + 1) < from {
        k += 1;
    }
    k * (k + 1)
}

pub fn level_width(n: u64) -> u64 {
    1u64 << level_sequence_subexp(n)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SubexpOracle;

impl NeighborOracle for SubexpOracle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        if !self.contains(v) {
            return Vec::new();
        }
        let (n, x) = v.as_layered().unwrap();
        let s = level_sequence_subexp(n);
        let mut out = Vec::with_capacity(4);
        let mut adjacent = vec![n + 1];
        if n > 0 {
            adjacent.push(n - 1);
        }
        for m in adjacent {
            let sm = level_sequence_subexp(m);
            if sm == s + 1 {
                out.push(VertexKey::layered(m, 2 * x - 1));
                out.push(VertexKey::layered(m, 2 * x));
            } else if sm + 1 == s {
                out.push(VertexKey::layered(m, x.div_ceil(2)));
            }
        }
        out.sort();
        out
    }

    fn contains(&self, v: &VertexKey) -> bool {
        match v.as_layered() {
            Some((n, x)) => n < (1 << 40) && x >= 1 && x <= level_width(n),
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_matches_listing() {
        let listed = [0, 1, 0, 1, 2, 1, 0, 1, 2, 3, 2, 1, 0, 1, 2, 3, 4, 3, 2, 1, 0];
        for (n, &s) in listed.iter().enumerate() {
            assert_eq!(level_sequence_subexp(n as u64), s, "n = {n}");
        }
        assert_eq!(level_sequence_subexp(9), 3);
        assert_eq!(level_sequence_subexp(16), 4);
    }

    #[test]
    fn zero_levels_are_pronic() {
        for k in 0..50u64 {
            assert!(is_zero_level(k * (k + 1)));
            assert_eq!(next_zero_level(k * (k + 1)), k * (k + 1));
            assert_eq!(next_zero_level(k * (k + 1) + 1), (k + 1) * (k + 2));
        }
    }

    #[test]
    fn degrees_are_at_most_four() {
        let g = SubexpOracle;
        for n in 0..30 {
            for x in 1..=level_width(n) {
                let v = VertexKey::layered(n, x);
                let ns = g.neighbors(&v);
                assert!(ns.len() <= 4 && !ns.is_empty());
                for w in ns {
                    assert!(g.neighbors(&w).contains(&v), "{v} -> {w}");
                }
            }
        }
    }
}
