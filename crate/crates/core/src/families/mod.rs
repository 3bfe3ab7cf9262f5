//! Constructors for every graph family the engine knows about.
//!
//! Text grammar (used by the CLI, trace headers and certificates):
//!
//! ```text
//! lattice:d=3   orthant:d=4   square   tri   hex   strong
//! tree:delta=3  hyper37       subexp   power:k=2(<inner>)
//! ```

mod grids;
pub mod hyper37;
pub mod subexp;
mod tree;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::LazyGraph;
use crate::key::VertexKey;

pub use grids::{GridKind, GridOracle};
pub use hyper37::{hyper37_layer, Hyper37Layer, Hyper37Oracle, VertexType};
pub use subexp::{level_sequence_subexp, SubexpOracle};
pub use tree::TreeOracle;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Lattice { d: usize },
    Orthant { d: usize },
    Square,
    Triangular,
    Hexagonal,
    Strong,
    Tree { delta: usize },
    Hyper37,
    Subexp,
    Power { k: usize, inner: Box<FamilySpec> },
}

/// Asymptotic shape of the sphere sizes, as far as it is proven for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereGrowth {
    /// `s_n` is a polynomial of the given degree for large `n`.
    Polynomial { degree: u32 },
    /// `s_n >= base^n` for every `n`.
    ExponentialAtLeast { base: u64 },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidSpec {
            spec: self.to_string(),
            reason: reason.to_string(),
        };
        match self {
            FamilySpec::Lattice { d } | FamilySpec::Orthant { d } if *d == 0 => {
                Err(bad("dimension must be at least 1"))
            }
            FamilySpec::Tree { delta } if *delta < 2 => Err(bad("tree degree must be at least 2")),
            FamilySpec::Power { k, .. } if *k == 0 => Err(bad("power needs k >= 1")),
            FamilySpec::Power { inner, .. } => inner.validate(),
            _ => Ok(()),
        }
    }

    /// Sphere growth known from the structure of the family (not from data).
    pub fn sphere_growth(&self) -> Option<SphereGrowth> {
        match self {
            FamilySpec::Lattice { d } | FamilySpec::Orthant { d } => Some(SphereGrowth::Polynomial {
                degree: (*d as u32).saturating_sub(1),
            }),
            FamilySpec::Square | FamilySpec::Triangular | FamilySpec::Hexagonal | FamilySpec::Strong => {
                Some(SphereGrowth::Polynomial { degree: 1 })
            }
            FamilySpec::Tree { delta: 2 } => Some(SphereGrowth::Polynomial { degree: 0 }),
            FamilySpec::Tree { delta } => Some(SphereGrowth::ExponentialAtLeast {
                base: (*delta - 1) as u64,
            }),
            FamilySpec::Hyper37 => Some(SphereGrowth::ExponentialAtLeast { base: 2 }),
            FamilySpec::Subexp | FamilySpec::Power { .. } => None,
        }
    }

    /// Name of the argument that makes the growth homogeneous at every level,
    /// when one is known for this family.
    pub fn homogeneity_premise(&self) -> Option<&'static str> {
        match self {
            FamilySpec::Orthant { .. } => Some("orthant of the integer lattice: homogeneous growth from radius 0"),
            FamilySpec::Tree { .. } => Some("regular tree: |T*|/|T| = s_(n+1)/s_n = delta-1 at every level"),
            _ => None,
        }
    }

    /// Name of the argument giving `|A*| >= lambda |A|` on every sphere.
    pub fn expansion_premise(&self) -> Option<&'static str> {
        match self {
            FamilySpec::Hyper37 => Some(
                "order-7 triangular tiling: every sphere vertex has at least 3 forward neighbors and two \
                 vertices of a sphere share at most one, so |A*| >= 2|A| on every sphere",
            ),
            FamilySpec::Tree { delta } if *delta >= 3 => {
                Some("regular tree: every non-root vertex has delta-1 children and one parent")
            }
            _ => None,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Lattice { d } => write!(f, "lattice:d={d}"),
            FamilySpec::Orthant { d } => write!(f, "orthant:d={d}"),
            FamilySpec::Square => f.write_str("square"),
            FamilySpec::Triangular => f.write_str("tri"),
            FamilySpec::Hexagonal => f.write_str("hex"),
            FamilySpec::Strong => f.write_str("strong"),
            FamilySpec::Tree { delta } => write!(f, "tree:delta={delta}"),
            FamilySpec::Hyper37 => f.write_str("hyper37"),
            FamilySpec::Subexp => f.write_str("subexp"),
            FamilySpec::Power { k, inner } => write!(f, "power:k={k}({inner})"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = |reason: &str| Error::InvalidSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let param = |rest: &str, name: &str| -> Result<usize> {
            rest.strip_prefix(name)
                .and_then(|r| r.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(&format!("expected `{name}=<int>`")))
        };
        let spec = match t {
            "square" => FamilySpec::Square,
            "tri" => FamilySpec::Triangular,
            "hex" => FamilySpec::Hexagonal,
            "strong" => FamilySpec::Strong,
            "hyper37" => FamilySpec::Hyper37,
            "subexp" => FamilySpec::Subexp,
            _ => {
                let (head, rest) = t.split_once(':').ok_or_else(|| bad("unknown family"))?;
                match head {
                    "lattice" => FamilySpec::Lattice { d: param(rest, "d")? },
                    "orthant" => FamilySpec::Orthant { d: param(rest, "d")? },
                    "tree" => FamilySpec::Tree {
                        delta: param(rest, "delta")?,
                    },
                    "power" => {
                        let open = rest.find('(').ok_or_else(|| bad("expected `(<inner>)`"))?;
                        let inner = rest[open + 1..]
                            .strip_suffix(')')
                            .ok_or_else(|| bad("unbalanced parentheses"))?;
                        FamilySpec::Power {
                            k: param(&rest[..open], "k")?,
                            inner: Box::new(inner.parse()?),
                        }
                    }
                    _ => return Err(bad("unknown family")),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Builds the lazy graph for a family, rooted at its canonical base vertex.
pub fn make(spec: &FamilySpec) -> Result<LazyGraph> {
    spec.validate()?;
    let name = spec.to_string();
    let g = match spec {
        FamilySpec::Lattice { d } => grid(name, GridKind::Lattice, *d),
        FamilySpec::Orthant { d } => grid(name, GridKind::Orthant, *d),
        FamilySpec::Square => grid(name, GridKind::Lattice, 2),
        FamilySpec::Triangular => grid(name, GridKind::Triangular, 2),
        FamilySpec::Hexagonal => grid(name, GridKind::Hexagonal, 2),
        FamilySpec::Strong => grid(name, GridKind::Strong, 2),
        FamilySpec::Tree { delta } => LazyGraph::new(
            name,
            VertexKey::root_word(),
            Some(*delta),
            Arc::new(TreeOracle::new(*delta)),
        ),
        FamilySpec::Hyper37 => LazyGraph::new(name, VertexKey::layered(0, 0), Some(7), Arc::new(Hyper37Oracle)),
        FamilySpec::Subexp => LazyGraph::new(name, VertexKey::layered(0, 1), Some(4), Arc::new(SubexpOracle)),
        FamilySpec::Power { k, inner } => {
            return Ok(make(inner)?.power(*k)?.renamed(name));
        }
    };
    Ok(g)
}

fn grid(name: String, kind: GridKind, dim: usize) -> LazyGraph {
    let oracle = GridOracle::new(kind, dim);
    let bound = oracle.degree_bound();
    LazyGraph::new(name, VertexKey::origin(dim), Some(bound), Arc::new(oracle))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trips() {
        for s in [
            "lattice:d=3",
            "orthant:d=4",
            "square",
            "tri",
            "hex",
            "strong",
            "tree:delta=3",
            "hyper37",
            "subexp",
            "power:k=2(square)",
            "power:k=3(power:k=2(tree:delta=4))",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn grammar_rejects_invalid_parameters() {
        for s in [
            "lattice:d=0",
            "tree:delta=1",
            "power:k=0(square)",
            "cube",
            "lattice:n=2",
            "power:k=2(square",
        ] {
            assert!(s.parse::<FamilySpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn declared_degree_bounds() {
        let cases = [
            ("lattice:d=3", 6),
            ("orthant:d=2", 4),
            ("square", 4),
            ("tri", 6),
            ("strong", 8),
            ("hex", 3),
            ("tree:delta=5", 5),
            ("hyper37", 7),
            ("subexp", 4),
            ("power:k=2(square)", 16),
        ];
        for (s, bound) in cases {
            let g = make(&s.parse().unwrap()).unwrap();
            assert_eq!(g.degree_bound(), Some(bound), "{s}");
        }
    }

    #[test]
    fn lattice_origin_has_four_neighbors() {
        let g = make(&FamilySpec::Lattice { d: 2 }).unwrap();
        assert_eq!(g.neighbors(g.base()).len(), 4);
    }

    #[test]
    fn power_family_keeps_canonical_name() {
        let g = make(&"power:k=2(square)".parse().unwrap()).unwrap();
        assert_eq!(g.name(), "power:k=2(square)");
    }
}
