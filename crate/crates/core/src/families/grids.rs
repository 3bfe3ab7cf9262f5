use crate::graph::NeighborOracle;
use crate::key::{Coords, VertexKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// `Z^d` with L1 adjacency.
    Lattice,
    /// Nonnegative orthant of `Z^d`.
    Orthant,
    /// `Z^2` plus the `(1,1)` diagonal.
    Triangular,
    /// `Z^2` with king moves.
    Strong,
    /// Brick-wall honeycomb on `Z^2`.
    Hexagonal,
}

#[derive(Debug, Clone)]
pub struct GridOracle {
    kind: GridKind,
    dim: usize,
}

impl GridOracle {
    pub fn new(kind: GridKind, dim: usize) -> Self {
        GridOracle { kind, dim }
    }

    pub fn degree_bound(&self) -> usize {
        match self.kind {
            GridKind::Lattice | GridKind::Orthant => 2 * self.dim,
            GridKind::Triangular => 6,
            GridKind::Strong => 8,
            GridKind::Hexagonal => 3,
        }
    }

    fn shifted(c: &[i64], delta: &[i64]) -> VertexKey {
        VertexKey::Coords(c.iter().zip(delta).map(|(a, b)| a + b).collect::<Coords>())
    }
}

impl NeighborOracle for GridOracle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let Some(c) = v.as_coords() else {
            return Vec::new();
        };
        if c.len() != self.dim {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.degree_bound());
        match self.kind {
            GridKind::Lattice | GridKind::Orthant => {
                for i in 0..self.dim {
                    for step in [-1i64, 1] {
                        if self.kind == GridKind::Orthant && c[i] + step < 0 {
                            continue;
                        }
                        let mut w: Coords = c.iter().copied().collect();
                        w[i] += step;
                        out.push(VertexKey::Coords(w));
                    }
                }
            }
            GridKind::Triangular => {
                for d in [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]] {
                    out.push(Self::shifted(c, &d));
                }
            }
            GridKind::Strong => {
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        if dx != 0 || dy != 0 {
                            out.push(Self::shifted(c, &[dx, dy]));
                        }
                    }
                }
            }
            GridKind::Hexagonal => {
                let vertical = if (c[0] + c[1]).rem_euclid(2) == 0 { 1 } else { -1 };
                for d in [[1, 0], [-1, 0], [0, vertical]] {
                    out.push(Self::shifted(c, &d));
                }
            }
        }
        out.sort();
        out
    }

    fn contains(&self, v: &VertexKey) -> bool {
        match v.as_coords() {
            Some(c) if c.len() == self.dim => self.kind != GridKind::Orthant || c.iter().all(|&x| x >= 0),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagonal_vertices_have_degree_three() {
        let g = GridOracle::new(GridKind::Hexagonal, 2);
        for x in -3..3 {
            for y in -3..3 {
                let v = VertexKey::coords(&[x, y]);
                let ns = g.neighbors(&v);
                assert_eq!(ns.len(), 3);
                for w in ns {
                    assert!(g.neighbors(&w).contains(&v));
                }
            }
        }
    }

    #[test]
    fn orthant_corner_has_d_neighbors() {
        let g = GridOracle::new(GridKind::Orthant, 4);
        assert_eq!(g.neighbors(&VertexKey::origin(4)).len(), 4);
        assert!(!g.contains(&VertexKey::coords(&[0, -1, 0, 0])));
    }

    #[test]
    fn wrong_dimension_is_not_a_vertex() {
        let g = GridOracle::new(GridKind::Lattice, 3);
        assert!(!g.contains(&VertexKey::coords(&[0, 0])));
        assert!(g.neighbors(&VertexKey::coords(&[0, 0])).is_empty());
    }
}
