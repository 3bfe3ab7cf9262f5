//! Conversions between strategies for different spread radii, and
//! restriction of strategies to subgraphs.

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::graph::LazyGraph;
use crate::key::VertexKey;

use super::{run, RunOptions, Strategy};

/// `(f_n, 1)` to `(g_n, r)`: `U_n = W_{(n-1)r+1} ∪ ... ∪ W_{nr}` with
/// `g_n = f_{(n-1)r+1} + ... + f_{nr}`.
pub fn scale_up(strategy: &Strategy, r: u32) -> Result<Strategy> {
    if strategy.r != 1 {
        return Err(Error::InvalidArgument(format!(
            "scale_up expects a radius-1 strategy, got radius {}",
            strategy.r
        )));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("target radius must be positive".into()));
    }
    if let Some(index) = strategy.budget.nondecreasing_violation() {
        return Err(Error::NonMonotoneBudget { index: index as usize });
    }
    let schedule = strategy
        .schedule
        .chunks(r as usize)
        .map(|block| block.concat())
        .collect();
    Ok(Strategy::new(r, strategy.budget.clone().grouped(r as u64), schedule))
}

/// `(g_n, r)` to `(f_n, 1)`. The given strategy must contain `B(X_0, r)`
/// under radius-`r` spread (checked by replay on `g`); each `W_k` is split in
/// key order into blocks of sizes at most `f_{r(k-1)+1}, ..., f_{rk}`.
pub fn scale_down(g: &LazyGraph, strategy: &Strategy, x0: &[VertexKey], f: &BudgetSeq) -> Result<Strategy> {
    let r = strategy.r as usize;
    if r == 0 {
        return Err(Error::InvalidArgument("spread radius must be positive".into()));
    }
    let y0 = g.ball(x0.iter(), r)?.members();
    let y0: Vec<VertexKey> = y0.into_iter().collect();
    let trace = run(g, &y0, strategy, RunOptions::default())?;
    if !trace.is_contained() {
        return Err(Error::PreconditionViolated {
            index: 0,
            reason: format!(
                "strategy does not contain B(X_0, {r}): {}",
                trace.footer.unwrap().outcome
            ),
        });
    }
    let mut schedule: Vec<Vec<VertexKey>> = Vec::with_capacity(strategy.schedule.len() * r);
    for (k, w) in strategy.schedule.iter().enumerate() {
        let budgets: Vec<u64> = (1..=r).map(|i| f.value((k * r + i) as u64)).collect();
        let total: u64 = budgets.iter().fold(0u64, |a, b| a.saturating_add(*b));
        if w.len() as u64 > total {
            return Err(Error::PartitionInfeasible {
                turn: k + 1,
                size: w.len(),
                budgets,
            });
        }
        let mut sorted = w.clone();
        sorted.sort();
        let mut rest = sorted.as_slice();
        for b in budgets {
            let take = (b as usize).min(rest.len());
            schedule.push(rest[..take].to_vec());
            rest = &rest[take..];
        }
    }
    while schedule.last().is_some_and(Vec::is_empty) {
        schedule.pop();
    }
    Ok(Strategy::new(1, f.clone(), schedule))
}

/// `W_k ∩ G` for a strategy played on a supergraph of `g`.
pub fn restrict_strategy(strategy: &Strategy, g: &LazyGraph) -> Strategy {
    let schedule = strategy
        .schedule
        .iter()
        .map(|w| w.iter().filter(|v| g.contains(v)).cloned().collect())
        .collect();
    Strategy::new(strategy.r, strategy.budget.clone(), schedule)
}
