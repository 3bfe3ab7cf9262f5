//! The order-7 triangular tiling `{3,7}`, built layer by layer around a root.
//!
//! Every sphere `S_n` (`n >= 1`) is a cycle. A vertex of `S_n` has one parent
//! (type `a`) or two consecutive parents (type `b`) in `S_{n-1}`. Each vertex
//! of `S_n` owns a block of children in `S_{n+1}`: two exclusive children for
//! type `a`, one for type `b`, followed by the child it shares with its
//! successor on the cycle. Exclusive children are type `a`, shared ones are
//! type `b`, which yields `a_{n+1} = 2 a_n + b_n` and `b_{n+1} = s_n`.
//!
//! The type word of a layer is therefore the substitution `a -> aab`,
//! `b -> ab` applied to the previous layer, starting from `a^7` on `S_1`.
//! Positions, parents and children are computed from that substitution
//! without materializing layers, so the neighbor oracle is pure and needs no
//! cache.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NeighborOracle;
use crate::key::VertexKey;

/// Deepest layer whose vertices can be queried (sizes must fit in `u64`).
pub const MAX_LAYER: u64 = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexType {
    /// One parent; degree 3 inside the ball `B_n`.
    A,
    /// Two parents; degree 4 inside the ball `B_n`.
    B,
}

impl VertexType {
    fn exclusive_children(self) -> u64 {
        match self {
            VertexType::A => 2,
            VertexType::B => 1,
        }
    }
}

struct Tables {
    /// `len[x][k] = |sigma^k(x)|`
    len: [Vec<u64>; 2],
    /// `acount[x][k]` = number of `a` letters in `sigma^k(x)`
    acount: [Vec<u64>; 2],
}

const A: usize = 0;
const B: usize = 1;

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut len = [vec![1u64], vec![1u64]];
        let mut acount = [vec![1u64], vec![0u64]];
        for k in 1..=MAX_LAYER as usize {
            len[A].push(2 * len[A][k - 1] + len[B][k - 1]);
            len[B].push(len[A][k - 1] + len[B][k - 1]);
            acount[A].push(2 * acount[A][k - 1] + acount[B][k - 1]);
            acount[B].push(acount[A][k - 1] + acount[B][k - 1]);
        }
        Tables { len, acount }
    })
}

fn expansion(x: usize) -> &'static [usize] {
    if x == A {
        &[A, A, B]
    } else {
        &[A, B]
    }
}

/// Size of the sphere `S_n`.
pub fn layer_size(n: u64) -> u64 {
    if n == 0 {
        1
    } else {
        7 * tables().len[A][n as usize - 1]
    }
}

/// Number of type-`a` vertices in `S_n` (`n >= 1`).
pub fn a_count(n: u64) -> u64 {
    if n == 0 {
        0
    } else {
        7 * tables().acount[A][n as usize - 1]
    }
}

fn letter_in(mut x: usize, mut k: usize, mut j: u64) -> usize {
    let t = tables();
    while k > 0 {
        for &y in expansion(x) {
            let l = t.len[y][k - 1];
            if j < l {
                x = y;
                break;
            }
            j -= l;
        }
        k -= 1;
    }
    x
}

fn rank_a_in(mut x: usize, mut k: usize, mut p: u64) -> u64 {
    let t = tables();
    let mut count = 0;
    loop {
        if p == 0 {
            return count;
        }
        if k == 0 {
            return count + u64::from(x == A);
        }
        let mut descended = false;
        for &y in expansion(x) {
            let l = t.len[y][k - 1];
            if p >= l {
                count += t.acount[y][k - 1];
                p -= l;
            } else {
                x = y;
                descended = true;
                break;
            }
        }
        if !descended {
            return count;
        }
        k -= 1;
    }
}

/// Type of vertex `i` of `S_n` (`n >= 1`).
pub fn vertex_type(n: u64, i: u64) -> VertexType {
    let k = n as usize - 1;
    let j = i % tables().len[A][k];
    if letter_in(A, k, j) == A {
        VertexType::A
    } else {
        VertexType::B
    }
}

/// Number of type-`a` vertices among the first `p` vertices of `S_n`.
fn rank_a(n: u64, p: u64) -> u64 {
    let t = tables();
    let k = n as usize - 1;
    let l = t.len[A][k];
    (p / l) * t.acount[A][k] + rank_a_in(A, k, p % l)
}

/// Index in `S_{n+1}` of the first exclusive child of vertex `p` of `S_n`.
fn child_start(n: u64, p: u64) -> u64 {
    2 * p + rank_a(n, p)
}

/// Parents in `S_{n-1}` of vertex `i` of `S_n`, for `n >= 2`.
fn parents(n: u64, i: u64) -> Vec<u64> {
    let below = n - 1;
    let size = layer_size(below);
    // largest p with child_start(p) <= i
    let (mut lo, mut hi) = (0u64, size);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if child_start(below, mid) <= i {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let offset = i - child_start(below, lo);
    if offset < vertex_type(below, lo).exclusive_children() {
        vec![lo]
    } else {
        vec![lo, (lo + 1) % size]
    }
}

/// Children in `S_{n+1}` of vertex `i` of `S_n`, in cycle order.
fn children(n: u64, i: u64) -> Vec<u64> {
    let next = layer_size(n + 1);
    let start = child_start(n, i);
    let excl = vertex_type(n, i).exclusive_children();
    let mut out = vec![(start + next - 1) % next];
    out.extend(start..start + excl);
    out.push(start + excl);
    out
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Hyper37Oracle;

impl NeighborOracle for Hyper37Oracle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        if !self.contains(v) {
            return Vec::new();
        }
        let (n, i) = v.as_layered().unwrap();
        if n == 0 {
            return (0..7).map(|j| VertexKey::layered(1, j)).collect();
        }
        let size = layer_size(n);
        let mut out = vec![
            VertexKey::layered(n, (i + size - 1) % size),
            VertexKey::layered(n, (i + 1) % size),
        ];
        if n == 1 {
            out.push(VertexKey::layered(0, 0));
        } else {
            out.extend(parents(n, i).into_iter().map(|p| VertexKey::layered(n - 1, p)));
        }
        out.extend(children(n, i).into_iter().map(|c| VertexKey::layered(n + 1, c)));
        out.sort();
        out
    }

    fn contains(&self, v: &VertexKey) -> bool {
        match v.as_layered() {
            Some((n, i)) => n < MAX_LAYER && i < layer_size(n),
            None => false,
        }
    }
}

/// Materialized description of one layer.
#[derive(Debug, Clone, Serialize)]
pub struct Hyper37Layer {
    pub layer: u64,
    pub size: u64,
    pub a_count: u64,
    pub b_count: u64,
    pub types: Vec<VertexType>,
    /// Children of each vertex in `S_{layer+1}`, in cycle order.
    pub children: Vec<Vec<u64>>,
}

/// Layer descriptor for `S_n`, `n >= 1`. Refuses layers with more than
/// `limit` vertices.
pub fn hyper37_layer(n: u64, limit: usize) -> Result<Hyper37Layer> {
    if n == 0 || n >= MAX_LAYER {
        return Err(Error::InvalidArgument(format!("layer must be in 1..{MAX_LAYER}")));
    }
    let size = layer_size(n);
    if size > limit as u64 {
        return Err(Error::ResourceLimit { cap: limit });
    }
    let a = a_count(n);
    Ok(Hyper37Layer {
        layer: n,
        size,
        a_count: a,
        b_count: size - a,
        types: (0..size).map(|i| vertex_type(n, i)).collect(),
        children: (0..size).map(|i| children(n, i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_layer_is_a_seven_cycle_of_type_a() {
        let l = hyper37_layer(1, 100).unwrap();
        assert_eq!((l.size, l.a_count, l.b_count), (7, 7, 0));
        assert!(l.types.iter().all(|&t| t == VertexType::A));
    }

    #[test]
    fn second_layer_follows_the_recurrence() {
        let l = hyper37_layer(2, 100).unwrap();
        assert_eq!((l.size, l.a_count, l.b_count), (21, 14, 7));
    }

    #[test]
    fn recurrences_hold() {
        for n in 1..20 {
            let (s, a) = (layer_size(n), a_count(n));
            let b = s - a;
            assert_eq!(a_count(n + 1), 2 * a + b);
            assert_eq!(layer_size(n + 1) - a_count(n + 1), s);
        }
    }

    #[test]
    fn children_partition_the_next_layer() {
        for n in 1..6 {
            let next = layer_size(n + 1);
            let mut hits = vec![0u32; next as usize];
            for i in 0..layer_size(n) {
                for c in children(n, i) {
                    hits[c as usize] += 1;
                }
            }
            for (c, &h) in hits.iter().enumerate() {
                let t = vertex_type(n + 1, c as u64);
                let expected = if t == VertexType::A { 1 } else { 2 };
                assert_eq!(h, expected, "layer {} vertex {c}", n + 1);
            }
        }
    }

    #[test]
    fn parents_invert_children() {
        for n in 1..6 {
            for i in 0..layer_size(n) {
                for c in children(n, i) {
                    assert!(parents(n + 1, c).contains(&i));
                }
            }
        }
    }
}
