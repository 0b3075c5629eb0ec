#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use lockstep::asymptotics::{l_of, scaling, x_of};
use lockstep::combinatorics::conditional_cdf_exact;
use lockstep::exact_dist::{phi_hankel_table, phi_opuc_table};
use lockstep::io::write_json;
use lockstep::painleve::{hastings_mcleod, F1Table, PIISolution, DEFAULT_X_RIGHT};
use lockstep::sampler::{empirical_cdf, SamplerConfig};
use lockstep::verify::{run_suite, VerifyOptions, SUITES};
use lockstep::{Error, PrecisionPolicy, Result};
use rug::Float;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lockstep", version, about = "Lock-step walker tables, exact laws, sampling and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// F1 table (x, u, v, F1, F1') on a uniform grid.
    Tw1(Flags),
    /// φ by both determinant routes and the exact conditional law over a range of l.
    Exact(Flags),
    /// Monte Carlo samples of L1 with KS distance to F1.
    Montecarlo(Flags),
    /// Run a verification suite (or "all") and emit a JSON report.
    Verify {
        /// One of counting, routes, painleve, rhp, convergence, asymptotics, all.
        suite: String,
        #[command(flatten)]
        flags: Flags,
    },
}

/// Every field is optional so that a JSON config can supply it; flags win over the file.
#[derive(Args, Clone, Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct Flags {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    t: Option<f64>,
    /// l range "a:b" (inclusive) or a single value.
    #[arg(long)]
    l: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long)]
    x_step: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with any of the flag names as keys.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

macro_rules! merge {
    ($dst:ident, $src:ident, $($f:ident),*) => { $( if $dst.$f.is_none() { $dst.$f = $src.$f; } )* };
}

impl Flags {
    fn resolve(mut self) -> Result<Self> {
        if let Some(path) = self.config.clone() {
            let file: Flags = serde_json::from_reader(File::open(&path)?)?;
            merge!(self, file, n, k, t, l, x_min, x_max, x_step, seed, samples, bits, tol, workers, out);
        }
        Ok(self)
    }

    fn policy(&self) -> Result<PrecisionPolicy> {
        let d = PrecisionPolicy::default();
        PrecisionPolicy::new(self.bits.unwrap_or(d.bits), self.tol.unwrap_or(d.target_tol), d.max_escalations)
    }

    fn n(&self) -> Result<u32> {
        self.n.ok_or_else(|| Error::Domain("--N is required".into()))
    }

    fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }

    fn echo(&self, command: &str) -> String {
        let mut echo = serde_json::to_value(self).unwrap_or_default();
        if let Some(map) = echo.as_object_mut() {
            map.retain(|_, v| !v.is_null());
        }
        format!("lockstep {} {command} {echo}", env!("CARGO_PKG_VERSION"))
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Domain(format!("l range '{s}' must be 'a:b' with 0 ≤ a ≤ b"));
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Grid points a, a+h, ..., up to b (inclusive within h/2).
fn grid(a: f64, b: f64, h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) || !(b >= a) {
        return Err(Error::Domain(format!("grid [{a}, {b}] step {h} is empty")));
    }
    let count = ((b - a) / h + 0.5).floor() as usize + 1;
    Ok((0..count).map(|i| a + i as f64 * h).collect())
}

fn solve(x_min: f64, policy: &PrecisionPolicy) -> Result<PIISolution> {
    hastings_mcleod(x_min.min(-10.0), DEFAULT_X_RIGHT, policy)
}

fn cmd_tw1(f: &Flags) -> Result<()> {
    let (a, b, h) = (f.x_min.unwrap_or(-10.0), f.x_max.unwrap_or(6.0), f.x_step.unwrap_or(0.05));
    if b > DEFAULT_X_RIGHT {
        return Err(Error::Domain(format!("x_max = {b} exceeds the matching point {DEFAULT_X_RIGHT}")));
    }
    let xs = grid(a, b, h)?;
    let sol = solve(a, &f.policy()?)?;
    F1Table::on_grid(&sol, &xs)?.write_csv(sink(&f.out)?, &f.echo("tw1"))
}

fn cmd_exact(f: &Flags) -> Result<()> {
    let n = f.n()?;
    let policy = f.policy()?;
    // k and t determine each other through k = t²N²/(1−t²)
    let (t, k) = match (f.k, f.t) {
        (Some(k), _) => ((k as f64 / (k as f64 + (n as f64).powi(2))).sqrt(), k),
        (None, Some(t)) => (t, (t * t * (n as f64).powi(2) / (1.0 - t * t)).round() as u64),
        (None, None) => return Err(Error::Domain("exact needs --k or --t".into())),
    };
    scaling(t)?;
    let (l_lo, l_hi) = match &f.l {
        Some(s) => parse_range(s)?,
        None => (l_of(n, t, -4.0)?, l_of(n, t, 4.0)?.max(1)),
    };
    let l_top = l_hi | 1;
    let h = phi_hankel_table(n, t, l_top, &policy)?;
    let o = phi_opuc_table(n, t, l_top, &policy)?;
    let tolerance = policy.target_tol.max(h.gap + o.gap);
    let mut rows = Vec::new();
    let mut exact_ok = true;
    for l in l_lo..=l_hi {
        let (lo, hi) = h.bracket(l).expect("table covers l");
        let (ph, po) = match (h.odd(l), o.odd(l)) {
            (Some(a), Some(b)) => {
                let gap = Float::with_val(a.prec(), a - b).abs().to_f64();
                if gap > tolerance {
                    return Err(Error::Disagreement { what: format!("φ routes at l = {l}"), gap, tol: tolerance });
                }
                (format!("{:.16e}", a.to_f64()), format!("{:.16e}", b.to_f64()))
            }
            _ => (String::new(), String::new()),
        };
        let exact = if exact_ok {
            match conditional_cdf_exact(n, k, l) {
                Ok(r) => r.to_string(),
                // an explicit k asks for the exact law, so running out of budget is an error
                Err(e @ Error::Budget(_)) if f.k.is_some() => return Err(e),
                Err(Error::Budget(_)) => {
                    exact_ok = false;
                    String::new()
                }
                Err(e) => return Err(e),
            }
        } else {
            String::new()
        };
        rows.push(format!("{l},{ph},{po},{tolerance:.3e},{lo:.16e},{hi:.16e},{exact},{:.16e}", x_of(n, t, l)?));
    }
    // rows are assembled first so that a failed run leaves no partial file
    let mut out = sink(&f.out)?;
    writeln!(out, "# {} t={t} k={k}", f.echo("exact"))?;
    writeln!(out, "l,phi_hankel,phi_opuc,tolerance,phi_lower,phi_upper,conditional_cdf_exact,x")?;
    for r in rows {
        writeln!(out, "{r}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MonteCarloReport {
    #[serde(flatten)]
    summary: lockstep::sampler::SamplerSummary,
    samples_csv: Option<String>,
}

fn cmd_montecarlo(f: &Flags) -> Result<()> {
    let n = f.n()?;
    let t = f.t.unwrap_or(0.5);
    scaling(t)?;
    let k = (t * t * (n as f64).powi(2) / (1.0 - t * t)).round() as u64;
    let cfg = SamplerConfig { n, k, seed: f.seed.unwrap_or(2024), n_samples: f.samples.unwrap_or(10_000), worker_count: f.workers() };
    let sol = solve(-10.0, &f.policy()?)?;
    let (ecdf, summary) = empirical_cdf(&cfg, t, &sol)?;
    ecdf.write_samples_csv(sink(&f.out)?, &format!("{} k={k}", f.echo("montecarlo")))?;
    let report = MonteCarloReport { summary, samples_csv: f.out.as_ref().map(|p| p.display().to_string()) };
    match &f.out {
        Some(p) => write_json(BufWriter::new(File::create(summary_path(p))?), &report),
        None => write_json(std::io::stderr().lock(), &report),
    }
}

fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    suites: Vec<lockstep::verify::SuiteReport>,
}

fn cmd_verify(suite: &str, f: &Flags) -> Result<bool> {
    let d = VerifyOptions::default();
    let opts = VerifyOptions {
        policy: f.policy()?,
        samples: f.samples.unwrap_or(d.samples),
        seed: f.seed.unwrap_or(d.seed),
        workers: f.workers(),
    };
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut suites = Vec::new();
    for name in names {
        let report = run_suite(name, &opts)?;
        for c in &report.checks {
            eprintln!("{}", c.line());
        }
        suites.push(report);
    }
    let report = VerifyReport { passed: suites.iter().all(|s| s.passed), suites };
    write_json(sink(&f.out)?, &report)?;
    Ok(report.passed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Tw1(f) => cmd_tw1(&f.resolve()?).map(|_| true),
        Command::Exact(f) => cmd_exact(&f.resolve()?).map(|_| true),
        Command::Montecarlo(f) => cmd_montecarlo(&f.resolve()?).map(|_| true),
        Command::Verify { suite, flags } => cmd_verify(&suite, &flags.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
