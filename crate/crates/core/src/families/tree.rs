use crate::graph::NeighborOracle;
use crate::key::VertexKey;

/// The infinite `delta`-regular tree, vertices keyed by their path from the root.
///
/// The root has `delta` children labelled `0..delta`; every other vertex has
/// `delta - 1` children labelled `0..delta-1`.
#[derive(Debug, Clone)]
pub struct TreeOracle {
    delta: u16,
}

impl TreeOracle {
    pub fn new(delta: usize) -> Self {
        TreeOracle { delta: delta as u16 }
    }

    fn valid(&self, w: &[u16]) -> bool {
        match w.split_first() {
            None => true,
            Some((first, rest)) => *first < self.delta && rest.iter().all(|&d| d < self.delta - 1),
        }
    }
}

impl NeighborOracle for TreeOracle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let Some(w) = v.as_word() else {
            return Vec::new();
        };
        if !self.valid(w) {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.delta as usize);
        if !w.is_empty() {
            out.push(VertexKey::Word(w[..w.len() - 1].to_vec()));
        }
        let children = if w.is_empty() { self.delta } else { self.delta - 1 };
        for c in 0..children {
            let mut child = w.to_vec();
            child.push(c);
            out.push(VertexKey::Word(child));
        }
        out.sort();
        out
    }

    fn contains(&self, v: &VertexKey) -> bool {
        v.as_word().is_some_and(|w| self.valid(w))
    }
}
