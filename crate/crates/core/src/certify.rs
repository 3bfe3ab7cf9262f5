//! Impossibility certificates and containment-class verdicts.
//!
//! A certificate separates what was machine-checked (flow reports on a range
//! of levels, exact tail sums) from the structural premise that extends the
//! checked levels to all of them. Certificates are deterministic: [`check`]
//! re-derives one from its inputs and compares the documents field by field.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use num::{BigInt, BigRational, One, Signed};
use serde::{Deserialize, Serialize};

use crate::budget::BudgetSeq;
use crate::error::{Error, Result};
use crate::expansion::{check_expansion_levels, check_homogeneous, ExpansionReport};
use crate::families::{make, FamilySpec};
use crate::game::{run, FireState, Outcome, RunOptions, Strategy};
use crate::graph::LazyGraph;
use crate::growth::Spheres;
use crate::key::VertexKey;
use crate::rational::{self, small_parts};
use crate::series::{geometric_tail, ratio_partial_sums, rearrange_check, PartialSums, SeriesVerdict, Tail};
use crate::synth::{synth_sphere_poly, GrowthHypothesis, DEFAULT_SCAN_CAP};

/// Turns played by the greedy smoke test.
pub const SMOKE_TURNS: usize = 20;
/// The smoke test stops early once the fire or the current sphere exceeds this.
pub const SMOKE_SIZE_CAP: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Levels {
    pub from: usize,
    pub to: usize,
}

impl Levels {
    pub fn range(self) -> RangeInclusive<usize> {
        self.from..=self.to
    }
}

impl From<RangeInclusive<usize>> for Levels {
    fn from(r: RangeInclusive<usize>) -> Self {
        Levels {
            from: *r.start(),
            to: *r.end(),
        }
    }
}

/// `f_n = c n^d`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetClass {
    pub c: u64,
    pub d: u32,
}

fn budget_class(b: &BudgetSeq) -> Option<BudgetClass> {
    match b {
        BudgetSeq::Constant(c) => Some(BudgetClass { c: *c, d: 0 }),
        BudgetSeq::Poly { c, d } => Some(BudgetClass { c: *c, d: *d }),
        _ => None,
    }
}

/// Greedy play from the certificate's fire, with the sphere bookkeeping
/// `t_k = |S_{r+k} ∩ X_k|` and `p_k = |T_{k-1}^* \ T_k|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmokeAudit {
    pub baseline: String,
    pub turns: usize,
    pub contained: bool,
    pub burned: usize,
    pub t: Vec<u64>,
    pub p: Vec<u64>,
    pub f: Vec<u64>,
    /// First `k` with `t_k < λ t_{k-1} - p_k`.
    pub chain_violation: Option<usize>,
    /// First prefix where `Σ p_k/λ^k <= Σ f_k/λ^k` fails (integral λ only).
    pub lemma_violation: Option<usize>,
    pub lemma_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub s_r: u64,
    pub tail_bound: String,
    /// `s_r - tail_bound`
    pub margin: String,
    pub machine_checked: String,
    pub structural_premise: Option<String>,
    pub smoke: SmokeAudit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpossibilityCertificate {
    pub family: String,
    pub root: VertexKey,
    pub lambda: String,
    pub levels_checked: Levels,
    pub reports: Vec<ExpansionReport>,
    pub budget: BudgetSeq,
    pub budget_class: Option<BudgetClass>,
    /// Exact `Σ_{k>=1} f_k / λ^k`.
    pub tail_bound: String,
    pub chosen_radius: usize,
    pub s_r: u64,
    pub audit: Audit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    NoObstruction,
    Impossible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceVerdict {
    pub family: String,
    pub root: VertexKey,
    pub homogeneity: Levels,
    pub reports: Vec<ExpansionReport>,
    pub homogeneity_checked: bool,
    pub structural_premise: Option<String>,
    pub budget: BudgetSeq,
    pub budget_class: Option<BudgetClass>,
    pub sphere_sizes: Vec<u64>,
    pub partial_sums: PartialSums,
    pub series: SeriesVerdict,
    pub conclusion: Conclusion,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeVerdict {
    Containable,
    Impossible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeWitness {
    pub family: String,
    pub x0: Vec<VertexKey>,
    pub strategy: Strategy,
    pub outcome: Outcome,
    pub burned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeClassification {
    pub d: usize,
    pub q: u32,
    pub verdict: LatticeVerdict,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LatticeWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<DivergenceVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Expansion(ImpossibilityCertificate),
    Divergence(DivergenceVerdict),
    Lattice(LatticeClassification),
}

fn greedy_move(g: &LazyGraph, state: &FireState, f: u64) -> Vec<VertexKey> {
    let mut scored: Vec<(usize, VertexKey)> = state
        .frontier(g)
        .into_iter()
        .map(|v| {
            let open = g
                .neighbors(&v)
                .iter()
                .filter(|w| !state.is_burning(w) && !state.is_protected(w))
                .count();
            (open, v)
        })
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    scored.into_iter().take(f as usize).map(|(_, v)| v).collect()
}

/// Plays the greedy baseline (largest onward spread first, ties by key) from
/// `B(root, r)` and records the sphere bookkeeping.
pub fn smoke_test(g: &LazyGraph, r: usize, budget: &BudgetSeq, lambda: &BigRational) -> Result<SmokeAudit> {
    let root = g.base().clone();
    let mut walk = Spheres::new(g, root.clone());
    let mut x0 = vec![root];
    for _ in 0..r {
        x0.extend_from_slice(walk.advance()?);
    }
    let mut state = FireState::new(g, &x0)?;
    // T_0 is the whole outer sphere
    let mut shell: Vec<VertexKey> = walk.current().to_vec();
    let mut t = vec![shell.len() as u64];
    let (mut p, mut f) = (Vec::new(), Vec::new());
    let (lp, lq) = small_parts(lambda).ok_or_else(|| Error::InvalidArgument("lambda too large".into()))?;
    let mut chain_violation = None;
    let mut turns = 0;
    for k in 1..=SMOKE_TURNS {
        if state.burning().len() > SMOKE_SIZE_CAP || walk.current().len() > SMOKE_SIZE_CAP || state.is_stuck() {
            break;
        }
        let fk = budget.value(k as u64);
        let w = greedy_move(g, &state, fk);
        state.advance(g, &w, 1)?;
        let next: HashSet<VertexKey> = walk.advance()?.iter().cloned().collect();
        let star: HashSet<VertexKey> = shell
            .iter()
            .flat_map(|v| g.neighbors(v))
            .filter(|w| next.contains(w))
            .collect();
        let mut tk: Vec<VertexKey> = star.iter().filter(|v| state.is_burning(v)).cloned().collect();
        tk.sort();
        let pk = (star.len() - tk.len()) as u64;
        let (prev, now) = (*t.last().unwrap() as i128, tk.len() as i128);
        if chain_violation.is_none() && now * (lq as i128) < (lp as i128) * prev - (lq as i128) * pk as i128 {
            chain_violation = Some(k);
        }
        t.push(tk.len() as u64);
        p.push(pk);
        f.push(fk);
        shell = tk;
        turns = k;
    }
    let lambda_int = lambda.is_integer().then(|| lambda.to_integer());
    let (lemma_violation, lemma_checked) = match lambda_int.and_then(|l| u64::try_from(l).ok()) {
        Some(l) => {
            let powers: Option<Vec<u64>> = (1..=turns as u32).map(|k| l.checked_pow(k)).collect();
            match powers {
                Some(s) => {
                    let out = match rearrange_check(&f, &p, &s) {
                        Ok(v) => v,
                        Err(Error::PreconditionViolated { index, .. }) => Some(index),
                        Err(e) => return Err(e),
                    };
                    (out, true)
                }
                None => (None, false),
            }
        }
        None => (None, false),
    };
    Ok(SmokeAudit {
        baseline: "greedy".into(),
        turns,
        contained: state.is_stuck(),
        burned: state.burning().len(),
        t,
        p,
        f,
        chain_violation,
        lemma_violation,
        lemma_checked,
    })
}

/// Certificate that no strategy within `budget` contains some ball fire:
/// every checked level has `|A*| >= λ|A|`, `Σ f_k/λ^k` is finite, and the
/// sphere `S_r` of the chosen radius is larger than that sum.
pub fn certify_expansion_impossible(
    spec: &FamilySpec,
    lambda: &BigRational,
    budget: &BudgetSeq,
    levels: RangeInclusive<usize>,
) -> Result<ImpossibilityCertificate> {
    if *lambda <= BigRational::one() {
        return Err(Error::InvalidArgument("lambda must exceed 1".into()));
    }
    if levels.is_empty() {
        return Err(Error::InvalidArgument("empty level range".into()));
    }
    let g = make(spec)?;
    let reports = check_expansion_levels(&g, levels.clone(), lambda)?;
    if let Some(bad) = reports.iter().find(|r| !r.holds()) {
        return Err(Error::Refused(format!(
            "expansion by {} fails at level {} (min ratio {})",
            rational::to_text(lambda),
            bad.level,
            bad.min_ratio
        )));
    }
    let tail = match geometric_tail(budget, lambda)? {
        Tail::Exact(t) => t,
        Tail::Diverges => return Err(Error::Refused(format!("series of {budget} over lambda^k diverges"))),
        Tail::Unknown => return Err(Error::Refused(format!("budget {budget} has no recognized closed form"))),
    };
    let mut walk = Spheres::new(&g, g.base().clone());
    let (r, s_r) = loop {
        if walk.radius() >= DEFAULT_SCAN_CAP {
            return Err(Error::ScanCapExceeded { cap: DEFAULT_SCAN_CAP });
        }
        let s = walk.advance()?.len() as u64;
        if BigRational::from_integer(BigInt::from(s)) > tail {
            break (walk.radius(), s);
        }
    };
    let margin = BigRational::from_integer(BigInt::from(s_r)) - &tail;
    debug_assert!(margin.is_positive());
    let smoke = smoke_test(&g, r, budget, lambda)?;
    Ok(ImpossibilityCertificate {
        family: spec.to_string(),
        root: g.base().clone(),
        lambda: rational::to_text(lambda),
        levels_checked: levels.clone().into(),
        reports,
        budget: budget.clone(),
        budget_class: budget_class(budget),
        tail_bound: rational::to_text(&tail),
        chosen_radius: r,
        s_r,
        audit: Audit {
            s_r,
            tail_bound: rational::to_text(&tail),
            margin: rational::to_text(&margin),
            machine_checked: format!(
                "max-flow expansion on levels {}..{}; exact tail sum",
                levels.start(),
                levels.end()
            ),
            structural_premise: spec.expansion_premise().map(str::to_string),
            smoke,
        },
    })
}

/// Necessary condition for a non-decreasing budget on a homogeneous graph:
/// `Σ f_n/s_n` must diverge. `Impossible` requires a known homogeneity
/// premise, flow-checked homogeneity on the horizon, and a convergent series.
pub fn certify_divergence_required(spec: &FamilySpec, budget: &BudgetSeq, horizon: usize) -> Result<DivergenceVerdict> {
    if let Some(index) = budget.nondecreasing_violation() {
        return Err(Error::NonMonotoneBudget { index: index as usize });
    }
    let g = make(spec)?;
    let reports = check_homogeneous(&g, 0..=horizon)?;
    let homogeneity_checked = reports.iter().all(ExpansionReport::holds);
    let mut sizes: Vec<u64> = g
        .base_ball(horizon + 1)?
        .sphere_sizes()
        .into_iter()
        .map(|s| s as u64)
        .collect();
    sizes.truncate(horizon + 1);
    let partial_sums = ratio_partial_sums(budget, &sizes, spec.sphere_growth())?;
    let premise = spec.homogeneity_premise();
    let series = partial_sums.verdict;
    let (conclusion, reason) = match series {
        SeriesVerdict::Diverges => (
            Conclusion::NoObstruction,
            format!(
                "the series diverges ({}); divergence alone does not give containment",
                partial_sums.reason
            ),
        ),
        SeriesVerdict::Unknown => (Conclusion::Unknown, partial_sums.reason.clone()),
        SeriesVerdict::Converges if !homogeneity_checked => (
            Conclusion::Unknown,
            "homogeneous growth fails on the checked levels".to_string(),
        ),
        SeriesVerdict::Converges if premise.is_none() => (
            Conclusion::Unknown,
            "series converges but homogeneous growth is only known on the checked levels".to_string(),
        ),
        SeriesVerdict::Converges => (
            Conclusion::Impossible,
            format!("homogeneous growth and a convergent series ({})", partial_sums.reason),
        ),
    };
    Ok(DivergenceVerdict {
        family: spec.to_string(),
        root: g.base().clone(),
        homogeneity: (0..=horizon).into(),
        reports,
        homogeneity_checked,
        structural_premise: premise.map(str::to_string),
        budget: budget.clone(),
        budget_class: budget_class(budget),
        sphere_sizes: sizes,
        partial_sums,
        series,
        conclusion,
        reason,
    })
}

/// Horizon used for lattice certificates.
fn lattice_horizon(d: usize) -> usize {
    if d <= 3 {
        8
    } else {
        6
    }
}

fn lattice_witness(d: usize) -> Result<LatticeWitness> {
    let spec = FamilySpec::Lattice { d };
    let g = make(&spec)?;
    let (x0, strategy) = if d == 1 {
        // protect the two points at distance 3, one per turn
        let x0 = vec![VertexKey::coords(&[-1]), VertexKey::origin(1), VertexKey::coords(&[1])];
        let schedule = vec![vec![VertexKey::coords(&[-3])], vec![VertexKey::coords(&[3])]];
        (x0, Strategy::new(1, BudgetSeq::Constant(1), schedule))
    } else {
        let c = 3u64.pow(d as u32);
        let s = synth_sphere_poly(
            &g,
            d as u32,
            c,
            1,
            GrowthHypothesis::Check { horizon: 6 },
            DEFAULT_SCAN_CAP,
        )?;
        (s.x0, s.strategy)
    };
    let trace = run(&g, &x0, &strategy, RunOptions::default())?;
    let footer = trace.footer.expect("run always writes a footer");
    Ok(LatticeWitness {
        family: spec.to_string(),
        x0,
        strategy,
        outcome: footer.outcome,
        burned: footer.burned_total,
    })
}

/// `q >= d-2`: containable (sphere protection with an `O(n^{d-2})` budget).
/// `q <= d-3`: impossible (homogeneous orthant with a convergent series).
/// With `evidence`, attaches a replayed witness or a divergence certificate.
pub fn classify_lattice(d: usize, q: u32, evidence: bool) -> Result<LatticeClassification> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if q as usize + 2 >= d {
        let witness = if evidence { Some(lattice_witness(d)?) } else { None };
        return Ok(LatticeClassification {
            d,
            q,
            verdict: LatticeVerdict::Containable,
            reason: format!(
                "growth of degree {d} gives an O(n^{}) budget and q >= d-2",
                d.saturating_sub(2)
            ),
            witness,
            certificate: None,
        });
    }
    let certificate = if evidence {
        let v = certify_divergence_required(
            &FamilySpec::Orthant { d },
            &BudgetSeq::Poly { c: 1, d: q },
            lattice_horizon(d),
        )?;
        if v.conclusion != Conclusion::Impossible {
            return Err(Error::Refused(format!(
                "orthant certificate inconclusive: {}",
                v.reason
            )));
        }
        Some(v)
    } else {
        None
    };
    Ok(LatticeClassification {
        d,
        q,
        verdict: LatticeVerdict::Impossible,
        reason: format!(
            "the orthant has homogeneous growth with s_n of degree {}, so sum c n^{q} / s_n converges for every c; \
             containment passes to subgraphs",
            d - 1
        ),
        witness: None,
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub kind: String,
    pub valid: bool,
    pub mismatches: Vec<String>,
}

fn parse_lambda(text: &str) -> Result<BigRational> {
    rational::parse(text).map_err(|e| Error::Malformed {
        what: "certificate",
        reason: format!("bad rational `{text}`: {e}"),
    })
}

fn rederive(cert: &Certificate) -> Result<Certificate> {
    Ok(match cert {
        Certificate::Expansion(c) => Certificate::Expansion(certify_expansion_impossible(
            &c.family.parse()?,
            &parse_lambda(&c.lambda)?,
            &c.budget,
            c.levels_checked.range(),
        )?),
        Certificate::Divergence(c) => {
            if c.homogeneity.from != 0 {
                return Err(Error::Malformed {
                    what: "certificate",
                    reason: "homogeneity range must start at 0".into(),
                });
            }
            Certificate::Divergence(certify_divergence_required(
                &c.family.parse()?,
                &c.budget,
                c.homogeneity.to,
            )?)
        }
        Certificate::Lattice(c) => {
            let evidence = c.witness.is_some() || c.certificate.is_some();
            Certificate::Lattice(classify_lattice(c.d, c.q, evidence)?)
        }
    })
}

fn kind_of(cert: &Certificate) -> &'static str {
    match cert {
        Certificate::Expansion(_) => "expansion",
        Certificate::Divergence(_) => "divergence",
        Certificate::Lattice(_) => "lattice",
    }
}

/// Re-derives a certificate document from its inputs and compares every
/// field.
pub fn check(text: &str) -> Result<CheckReport> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let cert: Certificate = serde_json::from_value(value.clone()).map_err(|e| Error::Malformed {
        what: "certificate",
        reason: e.to_string(),
    })?;
    let kind = kind_of(&cert).to_string();
    let fresh = match rederive(&cert) {
        Ok(c) => serde_json::to_value(c)?,
        Err(e) => {
            return Ok(CheckReport {
                kind,
                valid: false,
                mismatches: vec![format!("re-derivation failed: {e}")],
            })
        }
    };
    let mut mismatches = Vec::new();
    match (&value, &fresh) {
        (serde_json::Value::Object(a), serde_json::Value::Object(b)) => {
            let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
            for k in keys {
                if a.get(k) != b.get(k) {
                    mismatches.push(k.clone());
                }
            }
        }
        _ => mismatches.push("document".into()),
    }
    Ok(CheckReport {
        kind,
        valid: mismatches.is_empty(),
        mismatches,
    })
}
