use std::fs;
use std::net::SocketAddr;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use firegraph::certify::{self, Certificate};
use firegraph::expansion::{check_expansion_levels, check_homogeneous};
use firegraph::families::make;
use firegraph::game::{run, RunOptions};
use firegraph::growth::{degree_estimate, profile};
use firegraph::oracle::{minimax_oracle, OracleConfig};
use firegraph::qi::{transfer, QiMapPair, SourceMethod};
use firegraph::server::{error_body, serve};
use firegraph::service::parse_fire;
use firegraph::synth::{synth_cut_vertex, synth_second_difference, synth_sphere_poly, GrowthHypothesis};
use firegraph::{rational, BudgetSeq, Error, FamilySpec, GameTrace, LazyGraph, Result, Strategy};

/// Firefighter games on infinite graphs.
#[derive(Parser)]
#[command(name = "firegraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a schedule and write the trace.
    Simulate {
        #[arg(long)]
        family: String,
        /// `ball:R`, `ball:R@<key>` or keys separated by `;`
        #[arg(long)]
        x0: String,
        #[arg(long)]
        budget: Option<BudgetSeq>,
        #[arg(long)]
        r: Option<u32>,
        /// Strategy JSON or trace file whose schedule is played.
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long)]
        radius_cap: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        max_turns: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a containment strategy and write its trace.
    Synth {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        family: String,
        /// Growth degree (sphere-poly).
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Growth constant (sphere-poly).
        #[arg(long, default_value_t = 3)]
        c: u64,
        /// Radius of the initial ball (sphere-poly, second-diff).
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Verify the growth bound up to this radius instead of assuming it.
        #[arg(long)]
        check_growth: Option<usize>,
        /// Initial fire (cut-vertex).
        #[arg(long)]
        x0: Option<String>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = firegraph::synth::DEFAULT_SCAN_CAP)]
        scan_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact game-tree search for a constant budget on a truncation.
    Oracle {
        #[arg(long)]
        family: String,
        #[arg(long)]
        x0: String,
        #[arg(long)]
        f: usize,
        #[arg(long = "R")]
        radius: usize,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        node_cap: Option<usize>,
        #[arg(long)]
        quick: Option<usize>,
    },
    /// Growth profile about the base vertex.
    Growth {
        #[arg(long)]
        family: String,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Sphere expansion reports by max-flow.
    Expansion {
        #[arg(long)]
        family: String,
        /// `p/q`; omit with --homogeneous
        #[arg(long)]
        lambda: Option<String>,
        /// `a..b`, inclusive
        #[arg(long)]
        levels: String,
        #[arg(long)]
        homogeneous: bool,
    },
    /// Transfer a strategy along a quasi-isometry.
    Transfer {
        /// `identity`, `identity(<family>)`, `grid-strong`, `grid-power:k`
        #[arg(long)]
        pair: String,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value = "second-diff")]
        source: String,
        /// Center of the fire in the target graph (defaults to its base).
        #[arg(long)]
        h0: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a certificate.
    Certify {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        budget: Option<BudgetSeq>,
        #[arg(long)]
        levels: Option<String>,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        q: Option<u32>,
        /// Attach a witness or divergence certificate to a lattice verdict.
        #[arg(long)]
        evidence: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-validate a certificate or replay a trace file.
    Check { file: PathBuf },
    /// Serve game sessions over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    SpherePoly,
    SecondDiff,
    CutVertex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Expansion,
    Divergence,
    Lattice,
}

const EXIT_ERROR: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 3;

fn family(text: &str) -> Result<LazyGraph> {
    make(&text.parse::<FamilySpec>()?)
}

fn levels(text: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::InvalidArgument(format!("expected levels `a..b`, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required")))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load_strategy(path: &PathBuf) -> Result<Strategy> {
    let text = fs::read_to_string(path)?;
    match serde_json::from_str::<Strategy>(&text) {
        Ok(s) => Ok(s),
        Err(_) => Ok(GameTrace::from_jsonl(&text)?.strategy()),
    }
}

fn trace_summary(trace: &GameTrace) -> serde_json::Value {
    let footer = trace.footer.as_ref();
    json!({
        "family": trace.header.family,
        "turns": trace.turns.len(),
        "outcome": footer.map(|f| f.outcome),
        "containment_time": footer.and_then(|f| f.containment_time),
        "burned_total": footer.map(|f| f.burned_total),
        "provenance": trace.header.provenance,
    })
}

fn write_trace(trace: &GameTrace, out: Option<&PathBuf>) -> Result<()> {
    emit(out, &trace.to_jsonl())?;
    if out.is_some() {
        print!("{}", pretty(&trace_summary(trace))?);
    }
    Ok(())
}

fn check_file(path: &PathBuf) -> Result<(bool, serde_json::Value)> {
    let text = fs::read_to_string(path)?;
    if let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) {
        if value.get("kind").is_some() {
            let report = certify::check(&text)?;
            return Ok((report.valid, serde_json::to_value(report)?));
        }
    }
    let trace = GameTrace::from_jsonl(&text)?;
    let g = family(&trace.header.family)?;
    let fresh = trace.replay(&g)?;
    let original = trace.to_jsonl();
    let identical = fresh.to_jsonl() == original && original == text;
    let first_diff = fresh
        .to_jsonl()
        .lines()
        .zip(text.lines())
        .position(|(a, b)| a != b)
        .map(|i| i + 1);
    Ok((
        identical,
        json!({
            "kind": "trace",
            "valid": identical,
            "outcome": fresh.outcome(),
            "first_differing_line": first_diff,
        }),
    ))
}

fn execute(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Simulate {
            family: fam,
            x0,
            budget,
            r,
            strategy,
            radius_cap,
            max_turns,
            out,
        } => {
            let g = family(&fam)?;
            let x0 = parse_fire(&g, &x0)?;
            let mut strat = match &strategy {
                Some(path) => load_strategy(path)?,
                None => Strategy::new(1, BudgetSeq::Constant(0), Vec::new()),
            };
            if let Some(b) = budget {
                strat.budget = b;
            } else if strategy.is_none() {
                return Err(Error::InvalidArgument("--budget is required without --strategy".into()));
            }
            if let Some(r) = r {
                strat.r = r;
            }
            let trace = run(&g, &x0, &strat, RunOptions { radius_cap, max_turns })?;
            write_trace(&trace, out.as_ref())?;
        }
        Command::Synth {
            method,
            family: fam,
            d,
            c,
            m,
            check_growth,
            x0,
            r,
            scan_cap,
            out,
        } => {
            let g = family(&fam)?;
            let s = match method {
                Method::SpherePoly => {
                    let hyp = match check_growth {
                        Some(horizon) => GrowthHypothesis::Check { horizon },
                        None => GrowthHypothesis::Assume,
                    };
                    synth_sphere_poly(&g, d, c, m, hyp, scan_cap)?
                }
                Method::SecondDiff => synth_second_difference(&g, m, scan_cap)?,
                Method::CutVertex => {
                    let x0 = parse_fire(&g, &required(x0, "x0")?)?;
                    synth_cut_vertex(&g, &x0, r)?
                }
            };
            let mut trace = run(&g, &s.x0, &s.strategy, RunOptions::default())?;
            trace.header.provenance = Some(json!({"method": s.method, "sphere_radius": s.sphere_radius}));
            write_trace(&trace, out.as_ref())?;
        }
        Command::Oracle {
            family: fam,
            x0,
            f,
            radius,
            r,
            node_cap,
            quick,
        } => {
            let g = family(&fam)?;
            let x0 = parse_fire(&g, &x0)?;
            let mut cfg = OracleConfig::new(f, radius);
            cfg.r = r;
            cfg.quick_radius = quick;
            if let Some(cap) = node_cap {
                cfg.node_cap = cap;
            }
            print!("{}", pretty(&minimax_oracle(&g, &x0, cfg)?)?);
        }
        Command::Growth { family: fam, n, json } => {
            let g = family(&fam)?;
            let p = profile(&g, n)?;
            if json {
                let estimate = degree_estimate(&p);
                print!("{}", pretty(&json!({"profile": p, "estimate": estimate}))?);
            } else {
                println!("{:>4} {:>12} {:>12} {:>12}", "n", "beta", "s", "beta2");
                for k in 0..=n {
                    println!(
                        "{:>4} {:>12} {:>12} {:>12}",
                        k, p.beta[k], p.sphere_sizes[k], p.beta2[k]
                    );
                }
            }
        }
        Command::Expansion {
            family: fam,
            lambda,
            levels: lv,
            homogeneous,
        } => {
            let g = family(&fam)?;
            let range = levels(&lv)?;
            let reports = if homogeneous {
                check_homogeneous(&g, range)?
            } else {
                let lambda = rational::parse(&required(lambda, "lambda")?)?;
                check_expansion_levels(&g, range, &lambda)?
            };
            let all_hold = reports.iter().all(|r| r.holds());
            print!(
                "{}",
                pretty(&json!({"family": fam, "holds": all_hold, "reports": reports}))?
            );
        }
        Command::Transfer {
            pair,
            q,
            source,
            h0,
            out,
        } => {
            let pair = QiMapPair::named(&pair)?;
            let h0 = match h0 {
                Some(k) => pair.h.parse_key(&k)?,
                None => pair.h.base().clone(),
            };
            let t = transfer(&pair, SourceMethod::parse(&source)?, &h0, q)?;
            emit(out.as_ref(), &t.trace.to_jsonl())?;
            if out.is_some() {
                let mut summary = trace_summary(&t.trace);
                summary["budget"] = json!(t.strategy.budget);
                summary["turns_audit"] = json!(t.turns);
                print!("{}", pretty(&summary)?);
            }
        }
        Command::Certify {
            kind,
            family: fam,
            lambda,
            budget,
            levels: lv,
            horizon,
            d,
            q,
            evidence,
            out,
        } => {
            let cert = match kind {
                Kind::Expansion => Certificate::Expansion(certify::certify_expansion_impossible(
                    &required(fam, "family")?.parse()?,
                    &rational::parse(&required(lambda, "lambda")?)?,
                    &required(budget, "budget")?,
                    levels(&required(lv, "levels")?)?,
                )?),
                Kind::Divergence => Certificate::Divergence(certify::certify_divergence_required(
                    &required(fam, "family")?.parse()?,
                    &required(budget, "budget")?,
                    horizon,
                )?),
                Kind::Lattice => Certificate::Lattice(certify::classify_lattice(
                    required(d, "d")?,
                    required(q, "q")?,
                    evidence,
                )?),
            };
            let verdict = match &cert {
                Certificate::Expansion(_) => "impossible".to_string(),
                Certificate::Divergence(v) => serde_json::to_value(v.conclusion)?.as_str().unwrap_or("").to_string(),
                Certificate::Lattice(c) => serde_json::to_value(c.verdict)?.as_str().unwrap_or("").to_string(),
            };
            match &out {
                Some(path) => {
                    fs::write(path, pretty(&cert)?)?;
                    println!("{verdict}");
                }
                None => print!("{}", pretty(&cert)?),
            }
        }
        Command::Check { file } => {
            let (valid, report) = check_file(&file)?;
            print!("{}", pretty(&report)?);
            if !valid {
                eprintln!(
                    "{}",
                    json!({"error": "check_failed", "message": format!("{} did not re-validate", file.display())})
                );
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        Command::Serve { port, host } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad address {host}:{port}")))?;
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            rt.block_on(serve(addr))?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", error_body(&e));
            ExitCode::from(EXIT_ERROR)
        }
    }
}
