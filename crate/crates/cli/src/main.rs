use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use chazy_core::conditions::{check_conditions, run_appendix, scan, ConditionReport};
use chazy_core::flow::{
    find_fixed_point, lift_orbit, validate_trap_region, FlowError, Options, OrbitConfig,
    OrbitResult,
};

/// Root-count certificates and periodic orbits for the generalized Chazy
/// equation with k = q + 1.
#[derive(Parser)]
#[command(name = "chazy", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check conditions C1, C2, C3 for one q.
    Check {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Check C1–C3 for every q in a range, in parallel.
    Scan {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        q_min: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q_max: u32,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Compute symmetric periodic orbits on the levels H = −ω².
    Orbit {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q: u32,
        /// Comma-separated list of ω > 0.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        omega: Vec<f64>,
        /// Directory for the `orbit_q<q>_w<ω>.csv` sample files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Curve samples per orbit.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Integrator relative tolerance.
        #[arg(long, default_value_t = 1e-12)]
        rtol: f64,
        /// Integrator absolute tolerance.
        #[arg(long, default_value_t = 1e-14)]
        atol: f64,
        /// Event location tolerance.
        #[arg(long, default_value_t = 1e-14)]
        event_tol: f64,
        /// Bisection stops once |x1 + x0| is below this.
        #[arg(long, default_value_t = 1e-13)]
        shoot_tol: f64,
        /// Largest accepted closure error.
        #[arg(long, default_value_t = 1e-6)]
        closure_tol: f64,
        /// Write the summary JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the trapping-region boundary and check the flow direction.
    Trap {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q: u32,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Samples with |u| below this are skipped on pieces touching u = 0.
        #[arg(long, default_value_t = 1e-2)]
        exclusion: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Recompute the low-q reference root counts, sign variations and
    /// resultants and diff them against the stored reference values.
    Appendix {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Drop the `millis` field so output is byte-identical across runs.
    #[arg(long)]
    omit_timing: bool,
}

#[derive(Serialize)]
struct OrbitSummary<'a> {
    csv: String,
    #[serde(flatten)]
    orbit: &'a OrbitResult,
}

enum Failure {
    Check(String),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    match out {
        Some(p) => fs::write(p, s).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(s.as_bytes())?,
    }
    Ok(())
}

fn strip_timing(r: &mut ConditionReport, omit: bool) {
    if omit {
        r.millis = None;
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        bail!("--{name} must be positive, got {x}");
    }
    Ok(())
}

fn write_csv(path: &Path, orbit: &OrbitResult) -> Result<()> {
    let mut s = String::from("t,x,y,z,H\n");
    for c in &orbit.curve {
        s.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e}\n",
            c.t, c.x, c.y, c.z, c.h
        ));
    }
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Check { q, out } => {
            let mut r = check_conditions(q).context("checking conditions")?;
            strip_timing(&mut r, out.omit_timing);
            emit(&r, out.out.as_deref())?;
            if !r.pass {
                return Err(Failure::Check(format!("conditions fail at q = {q}")));
            }
        }
        Cmd::Scan {
            q_min,
            q_max,
            jobs,
            out,
        } => {
            if q_min > q_max {
                return Err(Failure::Internal(anyhow::anyhow!(
                    "--q-min exceeds --q-max"
                )));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .context("building thread pool")?;
            let mut reports = pool.install(|| scan(q_min, q_max)).context("scanning")?;
            for r in &mut reports {
                strip_timing(r, out.omit_timing);
            }
            emit(&reports, out.out.as_deref())?;
            let failed: Vec<u32> = reports.iter().filter(|r| !r.pass).map(|r| r.q).collect();
            if !failed.is_empty() {
                return Err(Failure::Check(format!("conditions fail at q = {failed:?}")));
            }
        }
        Cmd::Orbit {
            q,
            omega,
            out_dir,
            samples,
            rtol,
            atol,
            event_tol,
            shoot_tol,
            closure_tol,
            out,
        } => {
            for (name, x) in [
                ("rtol", rtol),
                ("atol", atol),
                ("event-tol", event_tol),
                ("shoot-tol", shoot_tol),
                ("closure-tol", closure_tol),
            ] {
                positive(name, x)?;
            }
            for &w in &omega {
                positive("omega", w)?;
            }
            let cfg = OrbitConfig {
                opts: Options {
                    rtol,
                    atol,
                    event_tol,
                    ..OrbitConfig::default().opts
                },
                shoot_tol,
                closure_tol,
                samples,
            };
            let fp = match find_fixed_point(q, &Options::default()) {
                Ok(fp) => fp,
                Err(e @ FlowError::Bracket { .. }) => return Err(Failure::Check(e.to_string())),
                Err(e) => return Err(Failure::Internal(e.into())),
            };
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            let mut orbits = Vec::new();
            for &w in &omega {
                let r = match lift_orbit(q, w, fp.u_star, fp.t_star, &cfg) {
                    Ok(r) => r,
                    Err(e @ (FlowError::Bracket { .. } | FlowError::Closure { .. })) => {
                        return Err(Failure::Check(format!("omega = {w}: {e}")))
                    }
                    Err(e) => return Err(Failure::Internal(e.into())),
                };
                let path = out_dir.join(format!("orbit_q{q}_w{w}.csv"));
                write_csv(&path, &r)?;
                eprintln!(
                    "q={q} omega={w}: period {:.10}, {} crossings of x = 0, wrote {}",
                    r.period,
                    r.x_zero_crossings,
                    path.display()
                );
                orbits.push((path.display().to_string(), r));
            }
            let summary: Vec<OrbitSummary> = orbits
                .iter()
                .map(|(csv, orbit)| OrbitSummary {
                    csv: csv.clone(),
                    orbit,
                })
                .collect();
            emit(&summary, out.as_deref())?;
        }
        Cmd::Trap {
            q,
            samples,
            exclusion,
            out,
        } => {
            positive("exclusion", exclusion)?;
            if samples == 0 {
                return Err(Failure::Internal(anyhow::anyhow!(
                    "--samples must be positive"
                )));
            }
            let r = validate_trap_region(q, samples, exclusion).context("trap validation")?;
            emit(&r, out.out.as_deref())?;
            if !r.pass {
                let bad: Vec<&str> = r
                    .pieces
                    .iter()
                    .filter(|p| !p.ok)
                    .map(|p| p.name.as_str())
                    .collect();
                return Err(Failure::Check(format!("sign violations on {bad:?}")));
            }
        }
        Cmd::Appendix { out } => {
            let r = run_appendix().context("appendix regression")?;
            emit(&r, out.out.as_deref())?;
            if r.mismatches > 0 {
                for c in r.checks.iter().filter(|c| !c.ok) {
                    eprintln!(
                        "mismatch: {}: expected {}, got {}",
                        c.name, c.expected, c.got
                    );
                }
                return Err(Failure::Check(format!("{} mismatches", r.mismatches)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
