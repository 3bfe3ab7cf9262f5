//! The `(f_n, r)`-containment game.
//!
//! Each turn the defender protects a set `W_n`, then the fire spreads from
//! every burning vertex along paths of length at most `r` that avoid all
//! protected vertices. Burning and protected sets only grow.

mod scaling;
pub mod trace;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::graph::LazyGraph;
use crate::key::VertexKey;

pub use scaling::{restrict_strategy, scale_down, scale_up};
pub use trace::{GameTrace, Outcome, TraceFooter, TraceHeader, TurnRecord};

/// A finite schedule `W_1 .. W_N` with its budget and spread radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    pub r: u32,
    pub budget: BudgetSeq,
    pub schedule: Vec<Vec<VertexKey>>,
}

impl Strategy {
    pub fn new(r: u32, budget: BudgetSeq, schedule: Vec<Vec<VertexKey>>) -> Self {
        let schedule = schedule
            .into_iter()
            .map(|w| {
                let set: BTreeSet<VertexKey> = w.into_iter().collect();
                set.into_iter().collect()
            })
            .collect();
        Strategy { r, budget, schedule }
    }

    /// Checks `|W_n| <= f_n` for every scheduled turn.
    pub fn check_budget(&self) -> Result<()> {
        for (i, w) in self.schedule.iter().enumerate() {
            let n = i + 1;
            let budget = self.budget.value(n as u64);
            if w.len() as u64 > budget {
                return Err(Error::BudgetExceeded {
                    turn: n,
                    size: w.len(),
                    budget,
                });
            }
        }
        Ok(())
    }

    pub fn protected_total(&self) -> usize {
        self.schedule.iter().map(Vec::len).sum()
    }
}

/// Burning set `X_n` and protected set `P_n` after turn `n`.
#[derive(Debug, Clone)]
pub struct FireState {
    turn: usize,
    burning: HashSet<VertexKey>,
    protected: HashSet<VertexKey>,
    /// burning vertices that still have an unburnt, unprotected neighbor
    active: HashSet<VertexKey>,
}

impl FireState {
    pub fn new(g: &LazyGraph, x0: &[VertexKey]) -> Result<Self> {
        for v in x0 {
            if !g.contains(v) {
                return Err(Error::InvalidKey {
                    family: g.name().to_string(),
                    text: v.to_string(),
                });
            }
        }
        let burning: HashSet<VertexKey> = x0.iter().cloned().collect();
        let mut state = FireState {
            turn: 0,
            active: HashSet::new(),
            burning,
            protected: HashSet::new(),
        };
        state.active = state.burning.clone();
        state.refresh_active(g, Vec::new());
        Ok(state)
    }

    pub fn turn(&self) -> usize {
        self.turn
    }

    pub fn burning(&self) -> &HashSet<VertexKey> {
        &self.burning
    }

    pub fn protected(&self) -> &HashSet<VertexKey> {
        &self.protected
    }

    pub fn is_burning(&self, v: &VertexKey) -> bool {
        self.burning.contains(v)
    }

    pub fn is_protected(&self, v: &VertexKey) -> bool {
        self.protected.contains(v)
    }

    pub fn burning_sorted(&self) -> Vec<VertexKey> {
        let mut v: Vec<VertexKey> = self.burning.iter().cloned().collect();
        v.sort();
        v
    }

    pub fn protected_sorted(&self) -> Vec<VertexKey> {
        let mut v: Vec<VertexKey> = self.protected.iter().cloned().collect();
        v.sort();
        v
    }

    /// Unburnt, unprotected vertices adjacent to the fire.
    pub fn frontier(&self, g: &LazyGraph) -> BTreeSet<VertexKey> {
        let mut out = BTreeSet::new();
        for v in &self.active {
            for w in g.neighbors(v) {
                if !self.burning.contains(&w) && !self.protected.contains(&w) {
                    out.insert(w);
                }
            }
        }
        out
    }

    /// True when no further spread is possible, whatever is protected later.
    pub fn is_stuck(&self) -> bool {
        self.active.is_empty()
    }

    fn open(&self, v: &VertexKey) -> bool {
        !self.burning.contains(v) && !self.protected.contains(v)
    }

    fn refresh_active(&mut self, g: &LazyGraph, fresh: Vec<VertexKey>) {
        self.active.extend(fresh);
        let stale: Vec<VertexKey> = self
            .active
            .iter()
            .filter(|v| !g.neighbors(v).iter().any(|w| self.open(w)))
            .cloned()
            .collect();
        for v in stale {
            self.active.remove(&v);
        }
    }

    /// Validates `w` against the current state without changing it.
    pub fn validate_protection(&self, g: &LazyGraph, w: &[VertexKey]) -> Result<()> {
        let turn = self.turn + 1;
        let mut seen = HashSet::new();
        for v in w {
            if !g.contains(v) {
                return Err(Error::InvalidKey {
                    family: g.name().to_string(),
                    text: v.to_string(),
                });
            }
            if self.burning.contains(v) {
                return Err(Error::ProtectionOverlap {
                    turn,
                    vertex: v.clone(),
                    state: "burning",
                });
            }
            if self.protected.contains(v) || !seen.insert(v) {
                return Err(Error::ProtectionOverlap {
                    turn,
                    vertex: v.clone(),
                    state: "protected",
                });
            }
        }
        Ok(())
    }

    /// Plays one turn in place: protect `w`, then spread with radius `r`.
    /// Returns the newly burned vertices.
    pub fn advance(&mut self, g: &LazyGraph, w: &[VertexKey], r: u32) -> Result<Vec<VertexKey>> {
        self.validate_protection(g, w)?;
        self.protected.extend(w.iter().cloned());
        let mut layer: Vec<VertexKey> = self.active.iter().cloned().collect();
        let mut fresh = Vec::new();
        for _ in 0..r {
            let mut next = Vec::new();
            for v in &layer {
                for u in g.neighbors(v) {
                    if self.open(&u) {
                        self.burning.insert(u.clone());
                        next.push(u);
                    }
                }
            }
            if self.burning.len() > g.cap() {
                return Err(Error::ResourceLimit { cap: g.cap() });
            }
            if next.is_empty() {
                break;
            }
            fresh.extend(next.iter().cloned());
            layer = next;
        }
        self.refresh_active(g, fresh.clone());
        self.turn += 1;
        fresh.sort();
        Ok(fresh)
    }
}

/// One turn of the game as a pure function of the previous state.
pub fn step(g: &LazyGraph, state: &FireState, w: &[VertexKey], r: u32) -> Result<FireState> {
    let mut next = state.clone();
    next.advance(g, w, r)?;
    Ok(next)
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Failure is declared once the fire leaves `B(X_0, radius_cap)`.
    /// Defaults to `256 r`.
    pub radius_cap: Option<usize>,
    pub max_turns: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            radius_cap: None,
            max_turns: 100_000,
        }
    }
}

/// Plays the schedule, then empty turns, until the fire is stuck, leaves the
/// radius cap, or `max_turns` is reached.
pub fn run(g: &LazyGraph, x0: &[VertexKey], strategy: &Strategy, opts: RunOptions) -> Result<GameTrace> {
    if strategy.r == 0 {
        return Err(Error::InvalidArgument("spread radius must be positive".into()));
    }
    strategy.check_budget()?;
    let radius_cap = opts.radius_cap.unwrap_or(256 * strategy.r as usize);
    let mut state = FireState::new(g, x0)?;
    let mut x0_sorted: Vec<VertexKey> = state.burning_sorted();
    x0_sorted.dedup();
    let mut trace = GameTrace::new(TraceHeader {
        family: g.name().to_string(),
        x0: x0_sorted.clone(),
        r: strategy.r,
        budget: strategy.budget.clone(),
        schedule: strategy.schedule.clone(),
        radius_cap,
        max_turns: opts.max_turns,
        provenance: None,
    });
    let mut counts = vec![state.burning.len()];
    let mut cap_ball: Option<HashSet<VertexKey>> = None;
    let mut outcome = Outcome::BudgetExhaustedStillSpreading;
    let empty = Vec::new();
    for n in 1..=opts.max_turns.max(strategy.schedule.len()) {
        let w = strategy.schedule.get(n - 1).unwrap_or(&empty);
        let fresh = match state.advance(g, w, strategy.r) {
            Ok(fresh) => fresh,
            Err(Error::ResourceLimit { .. }) => {
                outcome = Outcome::CapExceeded;
                break;
            }
            Err(e) => return Err(e),
        };
        counts.push(state.burning.len());
        trace.turns.push(TurnRecord {
            turn: n,
            protected: w.clone(),
            burning_count: state.burning.len(),
            frontier_count: state.frontier(g).len(),
        });
        if n * strategy.r as usize > radius_cap && !fresh.is_empty() {
            if cap_ball.is_none() {
                match g.ball(x0_sorted.iter(), radius_cap) {
                    Ok(ball) => cap_ball = Some(ball.members().into_iter().collect()),
                    Err(Error::ResourceLimit { .. }) => {
                        outcome = Outcome::CapExceeded;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let ball = cap_ball.as_ref().unwrap();
            if fresh.iter().any(|v| !ball.contains(v)) {
                outcome = Outcome::CapExceeded;
                break;
            }
        }
        if n >= strategy.schedule.len() && state.is_stuck() {
            outcome = Outcome::Contained;
            break;
        }
    }
    let containment_time = (outcome == Outcome::Contained).then(|| {
        let last = *counts.last().unwrap();
        counts.iter().skip(1).position(|&c| c == last).unwrap() + 1
    });
    trace.footer = Some(TraceFooter {
        outcome,
        containment_time,
        burned_total: state.burning.len(),
    });
    Ok(trace)
}

/// Plays a schedule and returns the final state (no trace, no cap handling).
pub fn replay_state(g: &LazyGraph, x0: &[VertexKey], strategy: &Strategy, extra_turns: usize) -> Result<FireState> {
    strategy.check_budget()?;
    let mut state = FireState::new(g, x0)?;
    for w in &strategy.schedule {
        state.advance(g, w, strategy.r)?;
    }
    for _ in 0..extra_turns {
        if state.is_stuck() {
            break;
        }
        state.advance(g, &[], strategy.r)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make, FamilySpec};

    fn line() -> LazyGraph {
        make(&FamilySpec::Lattice { d: 1 }).unwrap()
    }

    fn k(x: i64) -> VertexKey {
        VertexKey::coords(&[x])
    }

    #[test]
    fn unprotected_line_spreads_one_step() {
        let g = line();
        let s = FireState::new(&g, &[k(0)]).unwrap();
        let s = step(&g, &s, &[], 1).unwrap();
        assert_eq!(s.burning_sorted(), vec![k(-1), k(0), k(1)]);
    }

    #[test]
    fn two_protections_contain_the_line() {
        let g = line();
        let strat = Strategy::new(1, BudgetSeq::Constant(1), vec![vec![k(1)], vec![k(-2)]]);
        let t = run(&g, &[k(0)], &strat, RunOptions::default()).unwrap();
        let footer = t.footer.unwrap();
        assert_eq!(footer.outcome, Outcome::Contained);
        assert_eq!(footer.burned_total, 2);
        assert_eq!(footer.containment_time, Some(1));
        let s = replay_state(&g, &[k(0)], &strat, 0).unwrap();
        assert_eq!(s.burning_sorted(), vec![k(-1), k(0)]);
    }

    #[test]
    fn full_cut_stops_the_square_grid() {
        let g = make(&FamilySpec::Square).unwrap();
        let o = VertexKey::origin(2);
        let s = FireState::new(&g, std::slice::from_ref(&o)).unwrap();
        let s = step(&g, &s, &g.neighbors(&o), 1).unwrap();
        assert_eq!(s.burning_sorted(), vec![o]);
        assert!(s.is_stuck());
    }

    #[test]
    fn protecting_fire_is_rejected() {
        let g = line();
        let s = FireState::new(&g, &[k(0)]).unwrap();
        let err = step(&g, &s, &[k(0)], 1).unwrap_err();
        assert_eq!(err.kind(), "protection_overlap");
        let s = step(&g, &s, &[k(3)], 1).unwrap();
        assert_eq!(step(&g, &s, &[k(3)], 1).unwrap_err().kind(), "protection_overlap");
    }

    #[test]
    fn over_budget_schedule_is_rejected() {
        let g = line();
        let strat = Strategy::new(1, BudgetSeq::Constant(1), vec![vec![k(1), k(-1)]]);
        assert_eq!(
            run(&g, &[k(0)], &strat, RunOptions::default()).unwrap_err().kind(),
            "budget_exceeded"
        );
    }

    #[test]
    fn unchecked_fire_exceeds_the_radius_cap() {
        let g = make(&FamilySpec::Square).unwrap();
        let strat = Strategy::new(1, BudgetSeq::Constant(0), vec![]);
        let opts = RunOptions {
            radius_cap: Some(6),
            ..RunOptions::default()
        };
        let t = run(&g, &[VertexKey::origin(2)], &strat, opts).unwrap();
        assert_eq!(t.footer.as_ref().unwrap().outcome, Outcome::CapExceeded);
        let counts: Vec<usize> = t.turns.iter().map(|r| r.burning_count).collect();
        assert_eq!(&counts[..3], &[5, 13, 25]);
    }

    #[test]
    fn radius_two_spread_skips_over_protection_only_by_paths() {
        let g = line();
        let s = FireState::new(&g, &[k(0)]).unwrap();
        let s = step(&g, &s, &[k(1)], 2).unwrap();
        assert_eq!(s.burning_sorted(), vec![k(-2), k(-1), k(0)]);
    }
}
