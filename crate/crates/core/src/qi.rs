//! Quasi-isometries between graphs and the transfer of containment
//! strategies along them.
//!
//! A `c`-quasi-isometry from `G` to `H` is a pair of maps `φ: G → H`,
//! `ψ: H → G` with
//!
//! ```text
//! d_H(φg1, φg2) <= c d_G(g1, g2) + c     d_G(ψh1, ψh2) <= c d_H(h1, h2) + c
//! d_G(g, ψφg)  <= c                      d_H(h, φψh)  <= c
//! ```
//!
//! Given an `(f_n, 1)` strategy source on `G`, [`transfer`] builds a
//! `(b_n, 1)` strategy on `H` for `B_H(h_0, q)` with `r = c^2 + 2c` and
//! `b_n = a_n δ^{r+1}`, where `a_n` groups `f` in blocks of `2c` and `δ` is
//! the degree bound of `H`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::families::{make, FamilySpec};
use crate::game::{run, scale_up, FireState, GameTrace, RunOptions, Strategy};
use crate::graph::{Distance, LazyGraph};
use crate::key::VertexKey;
use crate::synth::{synth_second_difference, synth_sphere_poly, GrowthHypothesis, DEFAULT_SCAN_CAP};

pub type VertexMap = Arc<dyn Fn(&VertexKey) -> VertexKey + Send + Sync>;

#[derive(Clone)]
pub struct QiMapPair {
    pub name: String,
    pub g: LazyGraph,
    pub h: LazyGraph,
    pub phi: VertexMap,
    pub psi: VertexMap,
    pub c: u64,
}

impl fmt::Debug for QiMapPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QiMapPair")
            .field("name", &self.name)
            .field("g", &self.g.name())
            .field("h", &self.h.name())
            .field("c", &self.c)
            .finish()
    }
}

fn identity_map() -> VertexMap {
    Arc::new(|v: &VertexKey| v.clone())
}

impl QiMapPair {
    /// Identity coordinates between two graphs on the same vertex set.
    pub fn identity_coords(name: impl Into<String>, g: LazyGraph, h: LazyGraph, c: u64) -> Self {
        QiMapPair {
            name: name.into(),
            g,
            h,
            phi: identity_map(),
            psi: identity_map(),
            c,
        }
    }

    /// `identity`, `identity(<family>)`, `grid-strong`, `grid-power:k`.
    pub fn named(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown pair `{text}`"));
        let square = || make(&FamilySpec::Square);
        if text == "identity" {
            let g = square()?;
            return Ok(Self::identity_coords(text, g.clone(), g, 1));
        }
        if let Some(inner) = text.strip_prefix("identity(").and_then(|t| t.strip_suffix(')')) {
            let g = make(&inner.parse()?)?;
            return Ok(Self::identity_coords(text, g.clone(), g, 1));
        }
        if text == "grid-strong" {
            return Ok(Self::identity_coords(text, square()?, make(&FamilySpec::Strong)?, 2));
        }
        if let Some(k) = text.strip_prefix("grid-power:") {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            let h = make(&FamilySpec::Power {
                k,
                inner: Box::new(FamilySpec::Square),
            })?;
            return Ok(Self::identity_coords(text, square()?, h, k as u64));
        }
        Err(bad())
    }

    /// `r = c^2 + 2c`
    pub fn radius(&self) -> u64 {
        self.c * self.c + 2 * self.c
    }

    pub fn delta(&self) -> Result<u64> {
        self.h
            .degree_bound()
            .map(|d| d as u64)
            .ok_or_else(|| Error::NoDegreeBound(self.h.name().to_string()))
    }

    /// `δ^{r+1}`
    pub fn ball_factor(&self) -> Result<u64> {
        let delta = self.delta()?;
        let exp = u32::try_from(self.radius() + 1).map_err(|_| Error::InvalidArgument("radius too large".into()))?;
        delta
            .checked_pow(exp)
            .ok_or_else(|| Error::InvalidArgument(format!("{delta}^{exp} overflows")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub checked: usize,
    /// Least `bound - lhs` over the checked samples.
    pub worst_slack: Option<i64>,
    pub violations: Vec<String>,
    /// Samples whose distances exceeded the BFS cap.
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QiReport {
    pub pair: String,
    pub c: u64,
    pub checks: Vec<InequalityCheck>,
    pub verified: bool,
}

fn dist(g: &LazyGraph, a: &VertexKey, b: &VertexKey, cap: usize) -> Option<i64> {
    match g.distance(a, b, cap) {
        Distance::Exact(d) => Some(d as i64),
        Distance::ExceedsCap => None,
    }
}

fn record(check: &mut InequalityCheck, lhs: Option<i64>, bound: Option<i64>, what: String) {
    match (lhs, bound) {
        (Some(l), Some(b)) => {
            check.checked += 1;
            let slack = b - l;
            check.worst_slack = Some(check.worst_slack.map_or(slack, |w| w.min(slack)));
            if slack < 0 {
                check.violations.push(what);
            }
        }
        _ => check.skipped += 1,
    }
}

/// Checks the four quasi-isometry inequalities on sampled vertex pairs of
/// `G` and of `H`.
pub fn verify_qi(
    pair: &QiMapPair,
    g_pairs: &[(VertexKey, VertexKey)],
    h_pairs: &[(VertexKey, VertexKey)],
    cap: usize,
) -> QiReport {
    let c = pair.c as i64;
    let new = |name| InequalityCheck {
        name,
        checked: 0,
        worst_slack: None,
        violations: Vec::new(),
        skipped: 0,
    };
    let mut phi_lip = new("d_H(phi g1, phi g2) <= c d_G(g1, g2) + c");
    let mut psi_lip = new("d_G(psi h1, psi h2) <= c d_H(h1, h2) + c");
    let mut g_round = new("d_G(g, psi phi g) <= c");
    let mut h_round = new("d_H(h, phi psi h) <= c");
    let mut g_seen = BTreeSet::new();
    for (a, b) in g_pairs {
        let lhs = dist(&pair.h, &(pair.phi)(a), &(pair.phi)(b), cap);
        let bound = dist(&pair.g, a, b, cap).map(|d| c * d + c);
        record(&mut phi_lip, lhs, bound, format!("{a} {b}"));
        g_seen.insert(a.clone());
        g_seen.insert(b.clone());
    }
    for v in &g_seen {
        let back = (pair.psi)(&(pair.phi)(v));
        record(&mut g_round, dist(&pair.g, v, &back, cap), Some(c), v.to_string());
    }
    let mut h_seen = BTreeSet::new();
    for (a, b) in h_pairs {
        let lhs = dist(&pair.g, &(pair.psi)(a), &(pair.psi)(b), cap);
        let bound = dist(&pair.h, a, b, cap).map(|d| c * d + c);
        record(&mut psi_lip, lhs, bound, format!("{a} {b}"));
        h_seen.insert(a.clone());
        h_seen.insert(b.clone());
    }
    for v in &h_seen {
        let back = (pair.phi)(&(pair.psi)(v));
        record(&mut h_round, dist(&pair.h, v, &back, cap), Some(c), v.to_string());
    }
    let checks = vec![phi_lip, psi_lip, g_round, h_round];
    let verified = checks.iter().all(|c| c.violations.is_empty() && c.skipped == 0);
    QiReport {
        pair: pair.name.clone(),
        c: pair.c,
        checks,
        verified,
    }
}

/// All unordered pairs of vertices in the ball of the given radius about the
/// base vertex.
pub fn ball_pairs(g: &LazyGraph, radius: usize) -> Result<Vec<(VertexKey, VertexKey)>> {
    let members: Vec<VertexKey> = g.base_ball(radius)?.members().into_iter().collect();
    let mut out = Vec::new();
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            out.push((a.clone(), b.clone()));
        }
    }
    Ok(out)
}

/// Produces an `(f_n, 1)` strategy on `G` for a ball fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceMethod {
    SecondDifference,
    /// Sphere protection with `d = 2` and the given growth constant (taken on trust).
    SpherePoly {
        c: u64,
    },
}

impl SourceMethod {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "second-diff" => Ok(SourceMethod::SecondDifference),
            "sphere-poly" => Ok(SourceMethod::SpherePoly { c: 3 }),
            _ => Err(Error::InvalidArgument(format!("unknown source method `{text}`"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            SourceMethod::SecondDifference => "second-diff",
            SourceMethod::SpherePoly { .. } => "sphere-poly",
        }
    }

    /// Strategy for `B_G(base, radius)`.
    pub fn strategy(self, g: &LazyGraph, radius: usize) -> Result<Strategy> {
        let out = match self {
            SourceMethod::SecondDifference => synth_second_difference(g, radius, DEFAULT_SCAN_CAP),
            SourceMethod::SpherePoly { c } => {
                synth_sphere_poly(g, 2, c, radius, GrowthHypothesis::Assume, DEFAULT_SCAN_CAP)
            }
        };
        let mut strategy = out
            .map(|s| s.strategy)
            .map_err(|e| Error::SourceFailure(e.to_string()))?;
        // a finite list stops at zero; keep its last (largest) value instead
        if let BudgetSeq::List(values) = &strategy.budget {
            strategy.budget = BudgetSeq::Constant(values.last().copied().unwrap_or(0));
        }
        Ok(strategy)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferTurn {
    pub turn: usize,
    pub source_size: usize,
    pub protected: usize,
    pub bound: u64,
    /// Vertices of `Y_k` whose image under `ψ` was checked to lie in `X_{k-1}`.
    pub lemma_checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Transfer {
    pub pair: String,
    pub c: u64,
    pub r: u64,
    pub delta: u64,
    pub source: String,
    pub h0: VertexKey,
    pub q: usize,
    pub y0: Vec<VertexKey>,
    /// The scaled `(a_n, 2c)` strategy on `G` for `B_G(ψh_0, 2c(q+2))`.
    pub source_strategy: Strategy,
    pub strategy: Strategy,
    pub turns: Vec<TransferTurn>,
    #[serde(skip)]
    pub trace: GameTrace,
}

/// Runs the transfer online: `Q_k` is the union of `B_H(φg, r)` over
/// `g ∈ W_k`, minus the burning set `Y_{k-1}` and earlier protections.
/// Checks `|Q_k| <= b_k` and `h ∈ Y_k ⇒ ψh ∈ X_{k-1}` at every turn, then
/// replays the result on `H`.
pub fn transfer(pair: &QiMapPair, source: SourceMethod, h0: &VertexKey, q: usize) -> Result<Transfer> {
    let (g, h) = (&pair.g, &pair.h);
    let c = pair.c;
    let r = pair.radius() as usize;
    let factor = pair.ball_factor()?;
    let g0 = (pair.psi)(h0);
    let x0_radius = 2 * c as usize * (q + 2);
    let g_rooted = g.clone().with_base(g0.clone())?;
    let base = source.strategy(&g_rooted, x0_radius)?;
    let scaled = scale_up(&base, 2 * c as u32)?;
    let budget = scaled.budget.clone().scaled(factor);
    let x0: Vec<VertexKey> = g.ball(std::iter::once(&g0), x0_radius)?.members().into_iter().collect();
    let y0: Vec<VertexKey> = h.ball(std::iter::once(h0), q)?.members().into_iter().collect();

    let mut fire_g = FireState::new(g, &x0)?;
    let mut fire_h = FireState::new(h, &y0)?;
    let mut schedule: Vec<Vec<VertexKey>> = Vec::new();
    let mut turns = Vec::new();
    let max_turns = scaled.schedule.len() + 100_000;
    let empty = Vec::new();
    for k in 1..=max_turns {
        let w = scaled.schedule.get(k - 1).unwrap_or(&empty);
        let mut qk: BTreeSet<VertexKey> = BTreeSet::new();
        for v in w {
            for u in h.ball(std::iter::once(&(pair.phi)(v)), r)?.members() {
                if !fire_h.is_burning(&u) && !fire_h.is_protected(&u) {
                    qk.insert(u);
                }
            }
        }
        let bound = budget.value(k as u64);
        if qk.len() as u64 > bound {
            return Err(Error::TransferInvariant {
                turn: k,
                reason: format!("|Q_k| = {} exceeds b_k = {bound}", qk.len()),
            });
        }
        let qk: Vec<VertexKey> = qk.into_iter().collect();
        let fresh = fire_h.advance(h, &qk, 1)?;
        // ψ(Y_k) ⊆ X_{k-1}; older members of Y_k were checked against smaller X
        let to_check: Vec<VertexKey> = if k == 1 { fire_h.burning_sorted() } else { fresh };
        for v in &to_check {
            let image = (pair.psi)(v);
            if !fire_g.is_burning(&image) {
                return Err(Error::TransferInvariant {
                    turn: k,
                    reason: format!("{v} burns in H but psi({v}) = {image} is not in X_{}", k - 1),
                });
            }
        }
        fire_g.advance(g, w, 2 * c as u32)?;
        turns.push(TransferTurn {
            turn: k,
            source_size: w.len(),
            protected: qk.len(),
            bound,
            lemma_checked: to_check.len(),
        });
        schedule.push(qk);
        if k >= scaled.schedule.len() && fire_h.is_stuck() {
            break;
        }
    }
    while schedule.last().is_some_and(Vec::is_empty) {
        schedule.pop();
    }
    let strategy = Strategy::new(1, budget, schedule);
    let mut trace = run(h, &y0, &strategy, RunOptions::default())?;
    if !trace.is_contained() {
        return Err(Error::TransferInvariant {
            turn: trace.turns.len(),
            reason: format!("replay on H ended with {}", trace.footer.as_ref().unwrap().outcome),
        });
    }
    let fire_final: HashSet<&VertexKey> = fire_h.burning().iter().collect();
    if trace.footer.as_ref().unwrap().burned_total != fire_final.len() {
        return Err(Error::TransferInvariant {
            turn: trace.turns.len(),
            reason: "replay disagrees with the online fire".into(),
        });
    }
    trace.header.provenance = Some(serde_json::json!({
        "pair": pair.name,
        "c": c,
        "r": r,
        "delta": pair.delta()?,
        "source": source.name(),
    }));
    Ok(Transfer {
        pair: pair.name.clone(),
        c,
        r: r as u64,
        delta: pair.delta()?,
        source: source.name().to_string(),
        h0: h0.clone(),
        q,
        y0,
        source_strategy: scaled,
        strategy,
        turns,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::AsymptoticClass;

    #[test]
    fn identity_pair_constants() {
        let pair = QiMapPair::named("identity").unwrap();
        assert_eq!(pair.radius(), 3);
        assert_eq!(pair.ball_factor().unwrap(), 256);
        let strong = QiMapPair::named("grid-strong").unwrap();
        assert_eq!(strong.radius(), 8);
        assert_eq!(strong.ball_factor().unwrap(), 8u64.pow(9));
    }

    #[test]
    fn identity_pair_is_a_quasi_isometry() {
        let pair = QiMapPair::named("identity").unwrap();
        let pairs = ball_pairs(&pair.g, 2).unwrap();
        let report = verify_qi(&pair, &pairs, &pairs, 50);
        assert!(report.verified);
        assert!(report.checks.iter().all(|c| c.worst_slack.unwrap() >= 0));
    }

    #[test]
    fn grid_to_strong_needs_c_two() {
        let mut pair = QiMapPair::named("grid-strong").unwrap();
        let gp = ball_pairs(&pair.g, 3).unwrap();
        let hp = ball_pairs(&pair.h, 3).unwrap();
        assert!(verify_qi(&pair, &gp, &hp, 50).verified);
        pair.c = 1;
        assert!(!verify_qi(&pair, &gp, &hp, 50).verified);
    }

    #[test]
    fn identity_transfer_contains_and_keeps_class() {
        let pair = QiMapPair::named("identity").unwrap();
        let t = transfer(&pair, SourceMethod::SecondDifference, &VertexKey::origin(2), 0).unwrap();
        assert!(t.trace.is_contained());
        assert_eq!(t.strategy.budget.asymptotic_class(), AsymptoticClass::Poly(0));
        assert!(t.turns.iter().all(|turn| turn.protected as u64 <= turn.bound));
    }
}
