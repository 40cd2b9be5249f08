//! Command-line driver for the hjfrac library.
//!
//! Subcommands:
//! - `run`      — one solve; prints a summary, optionally writes artifacts.
//! - `converge` — grid-refinement study with an error table and fitted rate.
//! - `sweep`    — same problem across several fractional orders α.
//! - `verify`   — randomized monotonicity/stability property suite.
//!
//! Every subcommand accepts `--config file.json` plus individual flags that
//! override config fields. Exit codes: 0 success, 2 configuration error,
//! 3 CFL violation, 4 non-finite values, 5 property-suite failure.

use clap::{Args, Parser, Subcommand};
use hjfrac::error::{HjError, Result};
use hjfrac::harness::{
    run_alpha_sweep, run_convergence, run_property_suite, run_single, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "hjfrac",
    version,
    about = "Monotone schemes for time-fractional Hamilton-Jacobi equations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one problem instance and report stability and error.
    Run(CommonArgs),
    /// Run a grid-refinement ladder and fit the observed convergence rate.
    Converge(CommonArgs),
    /// Solve across several fractional orders and compare profiles.
    Sweep(CommonArgs),
    /// Check scheme-map monotonicity properties on random data.
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Problem id: test1 | test2 | zero_flux.
    #[arg(long)]
    problem: Option<String>,
    /// Fractional order α ∈ (0, 1].
    #[arg(long)]
    alpha: Option<f64>,
    /// Flux: lax_friedrichs (lf) | upwind_plus | upwind_minus.
    #[arg(long)]
    scheme: Option<String>,
    /// Lax-Friedrichs dissipation θ (default 1 − 2^{−α}).
    #[arg(long)]
    theta: Option<f64>,
    /// Ladder θ policy: fixed | cfl_lower_edge.
    #[arg(long)]
    theta_policy: Option<String>,
    /// Time step Δt.
    #[arg(long)]
    dt: Option<f64>,
    /// Grid spacing h (run, sweep, verify).
    #[arg(long)]
    h: Option<f64>,
    /// Comma-separated spacings for converge (each must halve the previous).
    #[arg(long)]
    ladder: Option<String>,
    /// Final time T.
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Spatial dimension: 1 | 2.
    #[arg(long)]
    dim: Option<usize>,
    /// Domain box as "lo,hi" (applied per axis).
    #[arg(long = "box")]
    domain: Option<String>,
    /// Boundary: periodic | dirichlet_frozen | dirichlet_from_exact.
    #[arg(long)]
    boundary: Option<String>,
    /// Output directory for manifest.json and CSV artifacts.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// RNG seed (verify).
    #[arg(long)]
    seed: Option<u64>,
    /// Proceed even when the CFL check fails.
    #[arg(long)]
    allow_unstable: bool,
    /// Comma-separated α list for sweep.
    #[arg(long)]
    alphas: Option<String>,
    /// Trials per property family (verify).
    #[arg(long)]
    trials: Option<usize>,
    /// Δt multiplier for verify (values ≫ 1 break the CFL on purpose).
    #[arg(long)]
    dt_factor: Option<f64>,
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| HjError::Config(format!("bad {what} entry {t:?}: {e}")))
        })
        .collect()
}

fn canonical_scheme(s: &str) -> Result<&'static str> {
    match s {
        "lax_friedrichs" | "lax-friedrichs" | "lf" => Ok("lax_friedrichs"),
        "upwind_plus" | "upwind+" => Ok("upwind_plus"),
        "upwind_minus" | "upwind-" => Ok("upwind_minus"),
        other => Err(HjError::Config(format!("unknown scheme {other:?}"))),
    }
}

fn canonical_policy(s: &str) -> Result<&'static str> {
    match s {
        "fixed" => Ok("fixed"),
        "cfl_lower_edge" | "cfl-lower-edge" | "lower_edge" => Ok("cfl_lower_edge"),
        other => Err(HjError::Config(format!("unknown theta policy {other:?}"))),
    }
}

/// Merge the config file (if any) with flag overrides into a RunConfig.
fn assemble(args: &CommonArgs, is_verify: bool) -> Result<RunConfig> {
    let mut v: serde_json::Value = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)?
        }
        None => serde_json::json!({}),
    };
    let obj = v
        .as_object_mut()
        .ok_or_else(|| HjError::Config("config file must hold a JSON object".into()))?;

    if let Some(p) = &args.problem {
        obj.insert("problem".into(), serde_json::json!(p));
    }
    if let Some(a) = args.alpha {
        obj.insert("alpha".into(), serde_json::json!(a));
    }
    if let Some(s) = &args.scheme {
        obj.insert("scheme".into(), serde_json::json!(canonical_scheme(s)?));
    }
    if let Some(t) = args.theta {
        obj.insert("theta".into(), serde_json::json!(t));
    }
    if let Some(p) = &args.theta_policy {
        obj.insert("theta_policy".into(), serde_json::json!(canonical_policy(p)?));
    }
    if let Some(dt) = args.dt {
        obj.insert("dt".into(), serde_json::json!(dt));
    }
    if let Some(h) = args.h {
        obj.insert("h".into(), serde_json::json!(h));
    }
    if let Some(l) = &args.ladder {
        obj.insert("ladder".into(), serde_json::json!(parse_list(l, "ladder")?));
    }
    if let Some(t) = args.t_final {
        obj.insert("t_final".into(), serde_json::json!(t));
    }
    if let Some(d) = args.dim {
        obj.insert("dim".into(), serde_json::json!(d));
    }
    if let Some(b) = &args.domain {
        let ends = parse_list(b, "box")?;
        if ends.len() != 2 {
            return Err(HjError::Config(format!("--box needs \"lo,hi\", got {b:?}")));
        }
        obj.insert("box".into(), serde_json::json!(ends));
    }
    if let Some(b) = &args.boundary {
        obj.insert("boundary".into(), serde_json::json!(b));
    }
    if let Some(o) = &args.out {
        obj.insert("out".into(), serde_json::json!(o));
    }
    if let Some(s) = args.seed {
        obj.insert("seed".into(), serde_json::json!(s));
    }
    if args.allow_unstable {
        obj.insert("allow_unstable".into(), serde_json::json!(true));
    }
    if let Some(a) = &args.alphas {
        obj.insert("alphas".into(), serde_json::json!(parse_list(a, "alphas")?));
    }
    if let Some(t) = args.trials {
        obj.insert("trials".into(), serde_json::json!(t));
    }
    if let Some(f) = args.dt_factor {
        obj.insert("dt_override_factor".into(), serde_json::json!(f));
    }

    if is_verify {
        // The property suite has sensible defaults for everything.
        obj.entry("problem").or_insert(serde_json::json!("test1"));
        obj.entry("alpha").or_insert(serde_json::json!(0.8));
    }
    if obj.contains_key("alphas") {
        // Sweeps iterate over `alphas`; the scalar order is only the
        // reference profile, which defaults to 1.
        obj.entry("alpha").or_insert(serde_json::json!(1.0));
    }

    Ok(serde_json::from_value(v)?)
}

fn cmd_run(cfg: &RunConfig) -> Result<()> {
    let out = run_single(cfg)?;
    let m = &out.manifest;
    let cfl = m.cfl.as_ref().expect("run manifest carries a CFL report");
    println!("problem {} | alpha {} | {}", cfg.problem, cfg.alpha, cfl.describe());
    if let Some(s) = &m.stability {
        println!(
            "steps {} | flux sup {:.6e} | deviation from datum {:.6e} | bounds satisfied: {}",
            s.steps, s.flux_sup, s.max_deviation_from_ic, s.all_bounds_satisfied
        );
        if let Some(w) = &s.gradient_warning {
            println!("note: {w}");
        }
    }
    match (m.error_sup, &m.oracle_note) {
        (Some(e), _) => println!("sup error vs exact solution at T={}: {:.6e}", cfg.t_final, e),
        (None, Some(note)) => println!("{note}"),
        (None, None) => {}
    }
    if let Some(out_dir) = &cfg.out {
        println!("artifacts: {}", out_dir.display());
    }
    Ok(())
}

fn cmd_converge(cfg: &RunConfig) -> Result<()> {
    let out = run_convergence(cfg)?;
    println!(
        "problem {} | alpha {} | scheme {} | T = {}",
        cfg.problem, cfg.alpha, cfg.scheme, out.t_effective
    );
    println!(
        "{:>10} {:>12} {:>12} {:>14} {:>8}",
        "h", "dt", "theta", "sup error", "rate"
    );
    for r in &out.rows {
        let theta = r.theta.map(|t| format!("{t:.6}")).unwrap_or_else(|| "-".into());
        let rate = r
            .observed_rate
            .map(|t| format!("{t:.3}"))
            .unwrap_or_else(|| "-".into());
        let mark = if r.dt_substituted { "*" } else { " " };
        println!(
            "{:>10.5} {:>12.3e}{} {:>11} {:>14.6e} {:>8}",
            r.h, r.dt, mark, theta, r.l_inf_error, rate
        );
    }
    println!("least-squares rate: {:.3}", out.ls_rate);
    for s in &out.manifest.substitutions {
        println!("note: {s}");
    }
    if let Some(out_dir) = &cfg.out {
        println!("artifacts: {}", out_dir.display());
    }
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig) -> Result<()> {
    let out = run_alpha_sweep(cfg)?;
    println!(
        "problem {} | h = {} | T = {} | sup distance to alpha = 1 profile:",
        cfg.problem,
        cfg.h.unwrap_or(f64::NAN),
        cfg.t_final
    );
    for (a, d) in out.alphas.iter().zip(&out.distances_to_alpha_one) {
        println!("  alpha {:>5.3}: {:.6e}", a, d);
    }
    for s in &out.manifest.substitutions {
        println!("note: {s}");
    }
    if let Some(out_dir) = &cfg.out {
        println!("artifacts: {}", out_dir.display());
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig) -> Result<()> {
    let out = run_property_suite(cfg)?;
    let r = &out.report;
    println!(
        "alpha {} | dt {:.3e} (x{} = {:.3e}; CFL edge {:.3e}) | h {} | seed {} | {} trials per family",
        r.alpha, r.dt, cfg.dt_override_factor, r.dt_effective, r.dt_cfl_edge, r.h, r.seed,
        r.trials_per_family
    );
    for f in &r.families {
        let status = if f.violations == 0 {
            "clean".to_string()
        } else if f.expected_failures {
            format!("{} violations (expected here)", f.violations)
        } else {
            format!("{} violations", f.violations)
        };
        println!(
            "  {:<24} {:<30} worst defect {:.3e}",
            f.name, status, f.worst_defect
        );
    }
    if let Some(out_dir) = &cfg.out {
        println!("artifacts: {}", out_dir.display());
    }
    if r.passed {
        println!("property suite: PASS");
        Ok(())
    } else {
        println!("property suite: FAIL");
        Err(HjError::Property(
            "property suite found unexpected violations".into(),
        ))
    }
}

fn main() {
    let cli = Cli::parse();
    let result = (|| -> Result<()> {
        match &cli.cmd {
            Cmd::Run(a) => cmd_run(&assemble(a, false)?),
            Cmd::Converge(a) => cmd_converge(&assemble(a, false)?),
            Cmd::Sweep(a) => cmd_sweep(&assemble(a, false)?),
            Cmd::Verify(a) => cmd_verify(&assemble(a, true)?),
        }
    })();
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
