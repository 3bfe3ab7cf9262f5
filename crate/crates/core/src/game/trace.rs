//! JSON-lines game transcripts.
//!
//! Line 1 is the header, the last line is the footer, every line in between
//! is one turn.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::graph::LazyGraph;
use crate::key::VertexKey;

use super::{run, RunOptions, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Contained,
    BudgetExhaustedStillSpreading,
    CapExceeded,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Contained => "contained",
            Outcome::BudgetExhaustedStillSpreading => "budget-exhausted-still-spreading",
            Outcome::CapExceeded => "cap-exceeded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub family: String,
    pub x0: Vec<VertexKey>,
    pub r: u32,
    pub budget: BudgetSeq,
    pub schedule: Vec<Vec<VertexKey>>,
    pub radius_cap: usize,
    pub max_turns: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub turn: usize,
    pub protected: Vec<VertexKey>,
    pub burning_count: usize,
    pub frontier_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFooter {
    pub outcome: Outcome,
    pub containment_time: Option<usize>,
    pub burned_total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTrace {
    pub header: TraceHeader,
    pub turns: Vec<TurnRecord>,
    pub footer: Option<TraceFooter>,
}

impl GameTrace {
    pub fn new(header: TraceHeader) -> Self {
        GameTrace {
            header,
            turns: Vec::new(),
            footer: None,
        }
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.footer.as_ref().map(|f| f.outcome)
    }

    pub fn is_contained(&self) -> bool {
        self.outcome() == Some(Outcome::Contained)
    }

    pub fn strategy(&self) -> Strategy {
        Strategy {
            r: self.header.r,
            budget: self.header.budget.clone(),
            schedule: self.header.schedule.clone(),
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for t in &self.turns {
            out.push_str(&serde_json::to_string(t).expect("turn serializes"));
            out.push('\n');
        }
        if let Some(f) = &self.footer {
            out.push_str(&serde_json::to_string(f).expect("footer serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let Some((first, rest)) = lines.split_first() else {
            return Err(Error::Malformed {
                what: "trace",
                reason: "empty input".into(),
            });
        };
        let header: TraceHeader = serde_json::from_str(first)?;
        let mut turns = Vec::new();
        let mut footer = None;
        for (i, line) in rest.iter().enumerate() {
            if i + 1 == rest.len() {
                if let Ok(f) = serde_json::from_str::<TraceFooter>(line) {
                    footer = Some(f);
                    break;
                }
            }
            turns.push(serde_json::from_str::<TurnRecord>(line)?);
        }
        Ok(GameTrace { header, turns, footer })
    }

    /// Re-runs the header's strategy on `g` and returns the fresh trace.
    pub fn replay(&self, g: &LazyGraph) -> Result<GameTrace> {
        if g.name() != self.header.family {
            return Err(Error::Malformed {
                what: "trace",
                reason: format!("trace is for {} but graph is {}", self.header.family, g.name()),
            });
        }
        let opts = RunOptions {
            radius_cap: Some(self.header.radius_cap),
            max_turns: self.header.max_turns,
        };
        let mut fresh = run(g, &self.header.x0, &self.strategy(), opts)?;
        fresh.header.provenance = self.header.provenance.clone();
        Ok(fresh)
    }
}
