//! Canonical vertex keys.
//!
//! Every family encodes its vertices in exactly one of three shapes:
//! integer tuples for lattices and planar grids, `(layer, index)` pairs for
//! layered constructions, and root paths for trees. Keys are totally ordered,
//! which gives every set of vertices a reproducible iteration order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

pub type Coords = SmallVec<[i64; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKey {
    /// Integer coordinates, rendered `(x,y,...)`.
    Coords(Coords),
    /// Layer and position within the layer, rendered `n:i`.
    Layered { layer: u64, index: u64 },
    /// Path from the root, rendered `r` for the root and `r.2.0.1` otherwise.
    Word(Vec<u16>),
}

impl VertexKey {
    pub fn coords(xs: &[i64]) -> Self {
        VertexKey::Coords(xs.iter().copied().collect())
    }

    pub fn origin(dim: usize) -> Self {
        VertexKey::Coords(smallvec::smallvec![0; dim])
    }

    pub fn layered(layer: u64, index: u64) -> Self {
        VertexKey::Layered { layer, index }
    }

    pub fn root_word() -> Self {
        VertexKey::Word(Vec::new())
    }

    pub fn as_coords(&self) -> Option<&[i64]> {
        match self {
            VertexKey::Coords(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_layered(&self) -> Option<(u64, u64)> {
        match self {
            VertexKey::Layered { layer, index } => Some((*layer, *index)),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&[u16]> {
        match self {
            VertexKey::Word(w) => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKey::Coords(c) => {
                f.write_str("(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            VertexKey::Layered { layer, index } => write!(f, "{layer}:{index}"),
            VertexKey::Word(w) => {
                f.write_str("r")?;
                for d in w {
                    write!(f, ".{d}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseKeyError(pub String);

impl fmt::Display for ParseKeyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse vertex key `{}`", self.0)
    }
}

impl std::error::Error for ParseKeyError {}

impl FromStr for VertexKey {
    type Err = ParseKeyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseKeyError(s.to_string());
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let coords = inner
                .split(',')
                .map(|p| p.trim().parse::<i64>())
                .collect::<Result<Coords, _>>()
                .map_err(|_| err())?;
            return Ok(VertexKey::Coords(coords));
        }
        if let Some(rest) = t.strip_prefix('r') {
            if rest.is_empty() {
                return Ok(VertexKey::Word(Vec::new()));
            }
            let rest = rest.strip_prefix('.').ok_or_else(err)?;
            let word = rest
                .split('.')
                .map(|p| p.parse::<u16>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err())?;
            return Ok(VertexKey::Word(word));
        }
        if let Some((a, b)) = t.split_once(':') {
            let layer = a.parse().map_err(|_| err())?;
            let index = b.parse().map_err(|_| err())?;
            return Ok(VertexKey::Layered { layer, index });
        }
        Err(err())
    }
}

impl Serialize for VertexKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
