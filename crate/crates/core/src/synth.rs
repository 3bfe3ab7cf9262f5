//! Strategies built from growth data: protect a whole sphere `S_r` before the
//! fire gets there, or a single cut vertex.

use serde::Serialize;

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::families::subexp::{level_sequence_subexp, next_zero_level};
use crate::game::Strategy;
use crate::graph::LazyGraph;
use crate::growth::{polynomial_bound_violation, profile, Spheres};
use crate::key::VertexKey;

pub const DEFAULT_SCAN_CAP: usize = 10_000;

/// How the growth bound `β_n <= c n^d` is established before synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthHypothesis {
    /// Verify the bound on `1..=horizon` from the exact profile.
    Check { horizon: usize },
    /// Taken on trust; the scan cap still turns a false claim into an error.
    Assume,
}

#[derive(Debug, Clone, Serialize)]
pub struct Synthesis {
    pub method: &'static str,
    pub family: String,
    pub x0: Vec<VertexKey>,
    pub strategy: Strategy,
    /// Radius of the protected sphere, for the sphere methods.
    pub sphere_radius: Option<usize>,
}

fn base_ball_members(g: &LazyGraph, m: usize) -> Result<Vec<VertexKey>> {
    Ok(g.base_ball(m)?.members().into_iter().collect())
}

/// Splits `sphere` (already sorted) into consecutive blocks of sizes at most
/// `budget(1), budget(2), ...` over `turns` turns.
fn partition(sphere: &[VertexKey], budget: &BudgetSeq, turns: usize) -> Result<Vec<Vec<VertexKey>>> {
    let mut out = Vec::with_capacity(turns);
    let mut rest = sphere;
    for k in 1..=turns {
        let take = (budget.value(k as u64) as usize).min(rest.len());
        out.push(rest[..take].to_vec());
        rest = &rest[take..];
    }
    if !rest.is_empty() {
        return Err(Error::PartitionInfeasible {
            turn: turns,
            size: sphere.len(),
            budgets: (1..=turns).map(|k| budget.value(k as u64)).collect(),
        });
    }
    Ok(out)
}

/// Polynomial growth of degree `d >= 2` with `β_n <= c n^d`: budget
/// `f_n = (d-1)(dc+1) n^{d-2}` and fire `B(g_0, m)`. Scans `r = m+1, m+2, ...`
/// for `s_r <= (d-1)(dc+1) p_{r-m,d-1}` and spreads `S_r` over turns
/// `1..=r-m`.
pub fn synth_sphere_poly(
    g: &LazyGraph,
    d: u32,
    c: u64,
    m: usize,
    hypothesis: GrowthHypothesis,
    scan_cap: usize,
) -> Result<Synthesis> {
    if d < 2 {
        return Err(Error::InvalidArgument("sphere_poly needs d >= 2".into()));
    }
    if c == 0 {
        return Err(Error::InvalidArgument("growth constant must be positive".into()));
    }
    if let GrowthHypothesis::Check { horizon } = hypothesis {
        let p = profile(g, horizon)?;
        if let Some(n) = polynomial_bound_violation(&p, c, d) {
            return Err(Error::HypothesisViolated {
                index: n,
                reason: format!("beta({n}) = {} exceeds {c} n^{d}", p.beta[n]),
            });
        }
    }
    let coeff = (d as u64 - 1) * (d as u64 * c + 1);
    let budget = BudgetSeq::Poly { c: coeff, d: d - 2 };
    let mut walk = Spheres::new(g, g.base().clone());
    for _ in 0..m {
        walk.advance()?;
    }
    // running p_{r-m, d-1} = Σ_{k<=r-m} k^{d-2}
    let mut faulhaber: u128 = 0;
    for r in m + 1..=m + scan_cap {
        let sphere = walk.advance()?;
        faulhaber += ((r - m) as u128).pow(d - 2);
        if sphere.len() as u128 <= coeff as u128 * faulhaber {
            let schedule = partition(sphere, &budget, r - m)?;
            return Ok(Synthesis {
                method: "sphere-poly",
                family: g.name().to_string(),
                x0: base_ball_members(g, m)?,
                strategy: Strategy::new(1, budget, schedule),
                sphere_radius: Some(r),
            });
        }
    }
    Err(Error::ScanCapExceeded { cap: m + scan_cap })
}

/// Fire `B(g_0, n)`, budget `f_k = 3 β''(2k)`. Requires `β''` non-negative
/// and non-decreasing (checked from index 1 with `β''(0) = β'(0) = β(0)`).
/// Picks the least `m >= max(2n, n+1)` with `Σ_{k=1}^{m-n} β''(2k) >= β'(n)`
/// and spreads `S_m` over turns `1..=m-n`.
pub fn synth_second_difference(g: &LazyGraph, n: usize, scan_cap: usize) -> Result<Synthesis> {
    let mut walk = Spheres::new(g, g.base().clone());
    let mut s: Vec<i64> = vec![1];
    let mut beta2: Vec<i64> = vec![1];
    let mut extend_to = |len: usize, s: &mut Vec<i64>, beta2: &mut Vec<i64>| -> Result<()> {
        while s.len() <= len {
            let size = walk.advance()?.len() as i64;
            let k = s.len();
            let b2 = size - s[k - 1];
            if b2 < 0 {
                return Err(Error::HypothesisViolated {
                    index: k,
                    reason: format!("second difference {b2} is negative"),
                });
            }
            if b2 < beta2[k - 1] {
                return Err(Error::HypothesisViolated {
                    index: k,
                    reason: format!("second difference drops from {} to {b2}", beta2[k - 1]),
                });
            }
            s.push(size);
            beta2.push(b2);
        }
        Ok(())
    };
    let start = (2 * n).max(n + 1);
    extend_to(2 * (start - n), &mut s, &mut beta2)?;
    let target = s[n];
    let mut m = start;
    let mut acc: i64 = (1..=m - n).map(|k| beta2[2 * k]).sum();
    while acc < target {
        if m >= n + scan_cap {
            return Err(Error::ScanCapExceeded { cap: n + scan_cap });
        }
        m += 1;
        extend_to(2 * (m - n), &mut s, &mut beta2)?;
        acc += beta2[2 * (m - n)];
    }
    let values: Vec<u64> = (1..=m - n).map(|k| 3 * beta2[2 * k] as u64).collect();
    let budget = BudgetSeq::List(values);
    let sphere = g.base_ball(m)?.sphere(m).to_vec();
    if (budget.prefix_sum((m - n) as u64) as usize) < sphere.len() {
        return Err(Error::HypothesisViolated {
            index: m,
            reason: format!("budget cannot cover the sphere of size {}", sphere.len()),
        });
    }
    let schedule = partition(&sphere, &budget, m - n)?;
    Ok(Synthesis {
        method: "second-diff",
        family: g.name().to_string(),
        x0: base_ball_members(g, n)?,
        strategy: Strategy::new(1, budget, schedule),
        sphere_radius: Some(m),
    })
}

/// On the subexponential example graph: protect `v_{m,1}` on turn 1, where
/// `m` is the first zero level with `m >= maxlevel(X_0) + r + 1`.
pub fn synth_cut_vertex(g: &LazyGraph, x0: &[VertexKey], r: u32) -> Result<Synthesis> {
    if g.name() != "subexp" {
        return Err(Error::InvalidArgument(format!(
            "cut-vertex synthesis needs subexp, got {}",
            g.name()
        )));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("spread radius must be positive".into()));
    }
    let mut top = 0;
    for v in x0 {
        match v.as_layered() {
            Some((n, _)) if g.contains(v) => top = top.max(n),
            _ => {
                return Err(Error::InvalidKey {
                    family: g.name().to_string(),
                    text: v.to_string(),
                })
            }
        }
    }
    let m = next_zero_level(top + r as u64 + 1);
    debug_assert_eq!(level_sequence_subexp(m), 0);
    let mut x0: Vec<VertexKey> = x0.to_vec();
    x0.sort();
    x0.dedup();
    Ok(Synthesis {
        method: "cut-vertex",
        family: g.name().to_string(),
        x0,
        strategy: Strategy::new(r, BudgetSeq::Constant(1), vec![vec![VertexKey::layered(m, 1)]]),
        sphere_radius: None,
    })
}
