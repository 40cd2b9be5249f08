//! Experiment harness: declarative run configuration, single runs,
//! grid-refinement convergence studies, fractional-order sweeps, and the
//! randomized property suite — with JSON manifests and CSV artifacts.

use crate::caputo::rho;
use crate::error::{HjError, Result};
use crate::exact::{Test1Solution, Test2Solution};
use crate::grid::{sup_dist, write_csv, BoundaryMode, GridFunction, GridSpec};
use crate::hamiltonian::{theta_upper, CflReport, Flavor, NumericalHamiltonian};
use crate::solver::{
    solve, verify_g_properties, ExactOracle, Problem, PropertyConfig, PropertyReport, Solution,
    SolveOptions, SpaceFn, StepReport,
};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

/// Built-in problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    /// ∂ᵗᵅu + |Du|²/2 = 0, u₀ = min{0, |x|² − 1}; frozen boundary.
    Test1,
    /// ∂ᵗᵅu + |Du| = 0, u₀ = −|x|²; boundary from the exact solution.
    Test2,
    /// H ≡ 0 control problem: the solution is the initial datum forever.
    /// Pins an upwind flux so the discrete update is exactly the identity.
    ZeroFlux,
}

impl std::fmt::Display for ProblemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ProblemId::Test1 => "test1",
            ProblemId::Test2 => "test2",
            ProblemId::ZeroFlux => "zero_flux",
        };
        f.write_str(s)
    }
}

/// θ selection policy for refinement ladders (Lax-Friedrichs only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaPolicy {
    /// Keep θ fixed across rungs (the configured value, default 1 − 2^{−α});
    /// reduce Δt on rungs where the CFL window closes.
    #[default]
    Fixed,
    /// Re-pick θ at each rung as the CFL window's lower edge (minimal
    /// artificial viscosity); reduce Δt first if the window is empty.
    CflLowerEdge,
}

fn d_dim() -> usize {
    1
}
fn d_scheme() -> Flavor {
    Flavor::LaxFriedrichs
}
fn d_dt() -> f64 {
    1e-3
}
fn d_t() -> f64 {
    0.2
}
fn d_box() -> [f64; 2] {
    [-2.0, 2.0]
}
fn d_seed() -> u64 {
    12345
}
fn d_trials() -> usize {
    200
}
fn d_factor() -> f64 {
    1.0
}

/// Declarative description of a run; JSON-serializable (config files), with
/// CLI flags mapped onto the same fields.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemId,
    #[serde(default = "d_dim")]
    pub dim: usize,
    pub alpha: f64,
    #[serde(default = "d_scheme")]
    pub scheme: Flavor,
    /// Lax-Friedrichs dissipation; defaults to 1 − 2^{−α}.
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub theta_policy: ThetaPolicy,
    #[serde(default = "d_dt")]
    pub dt: f64,
    /// Grid spacing (single runs and sweeps).
    #[serde(default)]
    pub h: Option<f64>,
    /// Grid spacings for refinement studies; each entry must halve the
    /// previous one.
    #[serde(default)]
    pub ladder: Option<Vec<f64>>,
    #[serde(default = "d_t", alias = "T")]
    pub t_final: f64,
    /// Domain per axis: the box [lo, hi]^dim.
    #[serde(default = "d_box", rename = "box")]
    pub domain: [f64; 2],
    /// Defaults per problem: test1/zero_flux freeze the boundary, test2
    /// assigns it from the exact solution.
    #[serde(default)]
    pub boundary: Option<BoundaryMode>,
    /// Output directory for manifests and CSV artifacts.
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "d_seed")]
    pub seed: u64,
    #[serde(default)]
    pub allow_unstable: bool,
    /// Fractional orders for sweeps (α = 1 is appended when missing).
    #[serde(default)]
    pub alphas: Option<Vec<f64>>,
    /// Trials per family for the property suite.
    #[serde(default = "d_trials")]
    pub trials: usize,
    /// Δt multiplier for the property suite (≫1 demonstrates CFL breakage).
    #[serde(default = "d_factor")]
    pub dt_override_factor: f64,
}

impl RunConfig {
    /// Minimal config for a problem at a given order (library use).
    pub fn new(problem: ProblemId, alpha: f64) -> Self {
        Self {
            problem,
            dim: d_dim(),
            alpha,
            scheme: d_scheme(),
            theta: None,
            theta_policy: ThetaPolicy::default(),
            dt: d_dt(),
            h: None,
            ladder: None,
            t_final: d_t(),
            domain: d_box(),
            boundary: None,
            out: None,
            seed: d_seed(),
            allow_unstable: false,
            alphas: None,
            trials: d_trials(),
            dt_override_factor: d_factor(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// The grid-defaulted boundary mode of a problem.
pub fn default_boundary(problem: ProblemId) -> BoundaryMode {
    match problem {
        ProblemId::Test1 | ProblemId::ZeroFlux => BoundaryMode::DirichletFrozen,
        ProblemId::Test2 => BoundaryMode::DirichletFromExact,
    }
}

struct FrozenOracle {
    u0: SpaceFn,
}

impl ExactOracle for FrozenOracle {
    fn eval(&self, x: &[f64], _t: f64) -> Result<f64> {
        Ok((self.u0)(x))
    }
}

/// Assemble a [`Problem`] (and its oracle) for one concrete (α, h, θ).
pub fn build_problem(
    cfg: &RunConfig,
    alpha: f64,
    h: f64,
    theta: Option<f64>,
) -> Result<(Problem, Option<Arc<dyn ExactOracle>>)> {
    if cfg.dim != 1 && cfg.dim != 2 {
        return Err(HjError::Config(format!("dim must be 1 or 2, got {}", cfg.dim)));
    }
    let boundary = cfg.boundary.unwrap_or_else(|| default_boundary(cfg.problem));
    let lo = [cfg.domain[0]; 2];
    let hi = [cfg.domain[1]; 2];
    let grid = match boundary {
        BoundaryMode::Periodic => GridSpec::new_periodic(cfg.dim, lo, hi, h)?,
        _ => GridSpec::new_closed(cfg.dim, lo, hi, h)?,
    };

    let (u0, oracle): (SpaceFn, Option<Arc<dyn ExactOracle>>) =
        match cfg.problem {
            ProblemId::Test1 => {
                let s = Test1Solution::with_defaults(alpha, cfg.dim)?;
                (
                    Arc::new(|x: &[f64]| {
                        (x.iter().map(|v| v * v).sum::<f64>() - 1.0).min(0.0)
                    }),
                    Some(Arc::new(s) as Arc<dyn ExactOracle>),
                )
            }
            ProblemId::Test2 => {
                let s = Test2Solution::new(alpha, cfg.dim)?;
                (
                    Arc::new(|x: &[f64]| -x.iter().map(|v| v * v).sum::<f64>()),
                    Some(Arc::new(s) as Arc<dyn ExactOracle>),
                )
            }
            ProblemId::ZeroFlux => {
                let u0: SpaceFn = Arc::new(|x: &[f64]| {
                    (x.iter().map(|v| v * v).sum::<f64>() - 1.0).min(0.0)
                });
                (
                    u0.clone(),
                    Some(Arc::new(FrozenOracle { u0 }) as Arc<dyn ExactOracle>),
                )
            }
        };

    let hamiltonian = match cfg.problem {
        ProblemId::Test1 => {
            let hf = |_x: &[f64], p: &[f64]| p.iter().map(|v| v * v).sum::<f64>() / 2.0;
            match cfg.scheme {
                Flavor::LaxFriedrichs => {
                    let th = theta.unwrap_or_else(|| theta_upper(alpha));
                    NumericalHamiltonian::lax_friedrichs(hf, 2.0, th, alpha)?
                        .with_gradient_range(2.0)
                }
                Flavor::UpwindPlus => {
                    warn_upwind();
                    NumericalHamiltonian::upwind_plus(hf, 2.0)?.with_gradient_range(2.0)
                }
                Flavor::UpwindMinus => {
                    warn_upwind();
                    NumericalHamiltonian::upwind_minus(hf, 2.0)?.with_gradient_range(2.0)
                }
            }
        }
        ProblemId::Test2 => {
            let hf = |_x: &[f64], p: &[f64]| p.iter().map(|v| v * v).sum::<f64>().sqrt();
            match cfg.scheme {
                Flavor::LaxFriedrichs => {
                    let th = theta.unwrap_or_else(|| theta_upper(alpha));
                    NumericalHamiltonian::lax_friedrichs(hf, 1.0, th, alpha)?
                }
                Flavor::UpwindPlus => {
                    warn_upwind();
                    NumericalHamiltonian::upwind_plus(hf, 1.0)?
                }
                Flavor::UpwindMinus => {
                    warn_upwind();
                    NumericalHamiltonian::upwind_minus(hf, 1.0)?
                }
            }
        }
        // The control problem pins an upwind flux: with H ≡ 0 the update is
        // then exactly the identity, whereas Lax-Friedrichs would still add
        // its θ dissipation term.
        ProblemId::ZeroFlux => NumericalHamiltonian::upwind_plus(|_, _| 0.0, 0.0)?,
    };

    let problem = Problem {
        grid,
        hamiltonian,
        u0,
        boundary,
        exact: oracle.clone(),
    };
    Ok((problem, oracle))
}

fn warn_upwind() {
    eprintln!(
        "warning: the built-in Hamiltonians are not monotone in p; upwind fluxes are not monotone schemes for them"
    );
}

/// Aggregated stability record of a run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StabilitySummary {
    pub steps: usize,
    pub all_bounds_satisfied: bool,
    pub max_deviation_from_ic: f64,
    pub final_stability_bound: Option<f64>,
    pub flux_sup: f64,
    pub gradient_range: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_warning: Option<String>,
}

fn summarize(sol: &Solution) -> StabilitySummary {
    let mut all = true;
    let mut max_dev = 0.0f64;
    let mut flux = 0.0f64;
    let mut range = [f64::INFINITY, f64::NEG_INFINITY];
    for s in &sol.steps {
        all &= s.bound_satisfied;
        max_dev = max_dev.max(s.deviation_from_ic);
        flux = flux.max(s.flux_sup);
        range[0] = range[0].min(s.gradient_range[0]);
        range[1] = range[1].max(s.gradient_range[1]);
    }
    StabilitySummary {
        steps: sol.steps.len(),
        all_bounds_satisfied: all,
        max_deviation_from_ic: max_dev,
        final_stability_bound: sol.steps.last().and_then(|s| s.stability_bound),
        flux_sup: flux,
        gradient_range: range,
        gradient_warning: sol.gradient_warning.clone(),
    }
}

/// One rung of a refinement study.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RungRow {
    pub h: f64,
    pub dt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// True when Δt was reduced below the configured value to keep the rung
    /// inside its CFL window.
    pub dt_substituted: bool,
    pub l_inf_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_rate: Option<f64>,
    pub cfl: CflReport,
}

/// JSON manifest written next to every artifact set.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl: Option<CflReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_requested: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_effective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_effective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_effective: Option<f64>,
    /// Human-readable notes about parameter adjustments (Δt reductions,
    /// horizon clamps, appended sweep orders).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub substitutions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilitySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_sup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<RungRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ls_rate: Option<f64>,
    /// (α, sup-distance to the α = 1 profile) pairs for sweeps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances_to_alpha_one: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property_report: Option<PropertyReport>,
    pub wall_clock_seconds: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub artifacts: Vec<String>,
}

impl Manifest {
    fn new(command: &str, cfg: &RunConfig) -> Self {
        Self {
            schema_version: 1,
            tool: "hjfrac".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: cfg.clone(),
            cfl: None,
            t_requested: None,
            t_effective: None,
            dt_effective: None,
            theta_effective: None,
            substitutions: Vec::new(),
            stability: None,
            steps: None,
            error_sup: None,
            oracle_note: None,
            table: None,
            ls_rate: None,
            distances_to_alpha_one: None,
            property_report: None,
            wall_clock_seconds: 0.0,
            artifacts: Vec::new(),
        }
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn ensure_dir(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    Ok(())
}

fn write_manifest(out: &Path, m: &Manifest) -> Result<()> {
    let mut f = std::fs::File::create(out.join("manifest.json"))?;
    f.write_all(m.to_json_pretty()?.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Sup-norm error of the final level against the oracle at time `t`.
fn error_against_oracle(
    grid: &GridSpec,
    u: &GridFunction,
    oracle: &dyn ExactOracle,
    t: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..grid.n[0] {
        for j in 0..grid.n[1] {
            let x = grid.coord(i, j);
            let e = oracle.eval(&x[..grid.dim], t)?;
            worst = worst.max((u.at(i, j) - e).abs());
        }
    }
    Ok(worst)
}

/// Outcome of a single run.
pub struct SingleOutcome {
    pub manifest: Manifest,
    pub solution: Solution,
}

/// Execute one run to the requested final time; measure the error against
/// the oracle when it serves that time, otherwise record a note.
pub fn run_single(cfg: &RunConfig) -> Result<SingleOutcome> {
    let start = Instant::now();
    let h = cfg
        .h
        .ok_or_else(|| HjError::Config("run requires a grid spacing h".into()))?;
    let theta_eff = match cfg.scheme {
        Flavor::LaxFriedrichs => Some(cfg.theta.unwrap_or_else(|| theta_upper(cfg.alpha))),
        _ => None,
    };
    let (problem, oracle) = build_problem(cfg, cfg.alpha, h, theta_eff)?;
    let sol = solve(
        &problem,
        cfg.alpha,
        cfg.dt,
        &SolveOptions {
            t_final: cfg.t_final,
            allow_unstable: cfg.allow_unstable,
        },
    )?;

    let mut manifest = Manifest::new("run", cfg);
    manifest.cfl = Some(sol.cfl.clone());
    manifest.t_requested = Some(cfg.t_final);
    manifest.t_effective = Some(cfg.t_final);
    manifest.dt_effective = Some(cfg.dt);
    manifest.theta_effective = theta_eff;
    manifest.stability = Some(summarize(&sol));
    manifest.steps = Some(sol.steps.clone());

    if let Some(ref oracle) = oracle {
        match error_against_oracle(&problem.grid, sol.last(), oracle.as_ref(), cfg.t_final) {
            Ok(e) => manifest.error_sup = Some(e),
            Err(HjError::Oracle(msg)) => {
                manifest.oracle_note = Some(format!(
                    "error not measured: {msg}"
                ));
            }
            Err(other) => return Err(other),
        }
    }

    if let Some(ref out) = cfg.out {
        ensure_dir(out)?;
        let f = std::fs::File::create(out.join("snapshot.csv"))?;
        write_csv(sol.last(), std::io::BufWriter::new(f))?;
        manifest.artifacts.push("snapshot.csv".into());
        manifest.artifacts.push("manifest.json".into());
        manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
        write_manifest(out, &manifest)?;
    } else {
        manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    }

    Ok(SingleOutcome {
        manifest,
        solution: sol,
    })
}

/// Outcome of a refinement study.
pub struct ConvergenceOutcome {
    pub manifest: Manifest,
    pub rows: Vec<RungRow>,
    pub ls_rate: f64,
    pub t_effective: f64,
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Pick (θ, Δt) for one rung according to the policy; returns
/// (theta, dt, substituted).
fn rung_parameters(
    cfg: &RunConfig,
    h: f64,
    t_eff: f64,
) -> Result<(Option<f64>, f64, bool)> {
    let alpha = cfg.alpha;
    let steps_for = |dt_cap: f64| -> (f64, bool) {
        // Reduce Δt to fit an integer number of steps in t_eff.
        let n = (t_eff / dt_cap).ceil().max(1.0);
        (t_eff / n, true)
    };
    let upper = theta_upper(alpha);
    // Probe the problem for its actual flux flavor and Lipschitz bound (the
    // control problem pins an upwind flux regardless of cfg.scheme).
    let (probe, _) = build_problem(cfg, alpha, h, Some(upper))?;
    match probe.hamiltonian.flavor {
        Flavor::UpwindPlus | Flavor::UpwindMinus => {
            if probe.hamiltonian.cfl_check(alpha, cfg.dt, h, cfg.dim).satisfied {
                Ok((None, cfg.dt, false))
            } else {
                let cap = probe.hamiltonian.suggest_dt(alpha, h, cfg.dim);
                let (dt, sub) = steps_for(cap);
                Ok((None, dt, sub))
            }
        }
        Flavor::LaxFriedrichs => match cfg.theta_policy {
            ThetaPolicy::Fixed => {
                let th = cfg.theta.unwrap_or(upper);
                let (p, _) = build_problem(cfg, alpha, h, Some(th))?;
                if p.hamiltonian.cfl_check(alpha, cfg.dt, h, cfg.dim).satisfied {
                    Ok((Some(th), cfg.dt, false))
                } else {
                    let cap = p.hamiltonian.suggest_dt(alpha, h, cfg.dim);
                    let (dt, sub) = steps_for(cap);
                    Ok((Some(th), dt, sub))
                }
            }
            ThetaPolicy::CflLowerEdge => {
                let l = probe.hamiltonian.lipschitz_bound;
                if l == 0.0 {
                    return Ok((Some(upper), cfg.dt, false));
                }
                let lower_at = |dt: f64| cfg.dim as f64 * rho(alpha, dt) * l / (2.0 * h);
                let lo = lower_at(cfg.dt);
                if lo <= upper {
                    Ok((Some(lo), cfg.dt, false))
                } else {
                    let cap = probe.hamiltonian.suggest_dt(alpha, h, cfg.dim);
                    let (dt, sub) = steps_for(cap);
                    Ok((Some(lower_at(dt)), dt, sub))
                }
            }
        },
    }
}

/// Run the refinement ladder and assemble the error table.
pub fn run_convergence(cfg: &RunConfig) -> Result<ConvergenceOutcome> {
    let start = Instant::now();
    let ladder = cfg
        .ladder
        .clone()
        .unwrap_or_else(|| vec![0.2, 0.1, 0.05, 0.025]);
    if ladder.len() < 2 {
        return Err(HjError::Config("ladder needs at least two spacings".into()));
    }
    for w in ladder.windows(2) {
        if !(w[1] > 0.0) || (w[1] - w[0] / 2.0).abs() > 1e-12 * w[0] {
            return Err(HjError::Config(format!(
                "ladder spacings must halve exactly: {} then {}",
                w[0], w[1]
            )));
        }
    }

    let mut manifest = Manifest::new("converge", cfg);
    manifest.t_requested = Some(cfg.t_final);

    // Clamp the horizon for oracles with finite validity (benchmark 1).
    let mut t_eff = cfg.t_final;
    if let ProblemId::Test1 = cfg.problem {
        let probe = Test1Solution::with_defaults(cfg.alpha, cfg.dim)?;
        let horizon = probe.horizon().expect("benchmark 1 has a horizon");
        if t_eff > horizon {
            t_eff = (horizon / cfg.dt).floor() * cfg.dt;
            if !(t_eff > 0.0) {
                return Err(HjError::Config(format!(
                    "horizon {horizon} leaves no whole step at dt = {}",
                    cfg.dt
                )));
            }
            manifest.substitutions.push(format!(
                "t_final clamped from {} to {t_eff} (oracle horizon {horizon})",
                cfg.t_final
            ));
        }
    }
    manifest.t_effective = Some(t_eff);

    let mut rows: Vec<RungRow> = Vec::with_capacity(ladder.len());
    for &h in &ladder {
        let (theta, dt, substituted) = rung_parameters(cfg, h, t_eff)?;
        if substituted {
            manifest
                .substitutions
                .push(format!("rung h={h}: dt reduced from {} to {dt}", cfg.dt));
        }
        let (problem, oracle) = build_problem(cfg, cfg.alpha, h, theta)?;
        let sol = solve(
            &problem,
            cfg.alpha,
            dt,
            &SolveOptions {
                t_final: t_eff,
                allow_unstable: cfg.allow_unstable,
            },
        )?;
        let oracle = oracle.ok_or_else(|| {
            HjError::Config(format!("problem {} has no oracle for errors", cfg.problem))
        })?;
        let err = error_against_oracle(&problem.grid, sol.last(), oracle.as_ref(), t_eff)?;
        let observed_rate = rows
            .last()
            .map(|prev: &RungRow| (prev.l_inf_error.max(1e-300) / err.max(1e-300)).log2());
        rows.push(RungRow {
            h,
            dt,
            theta,
            dt_substituted: substituted,
            l_inf_error: err,
            observed_rate,
            cfl: sol.cfl.clone(),
        });
    }

    let xs: Vec<f64> = rows.iter().map(|r| r.h.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.l_inf_error.max(1e-300).ln()).collect();
    let ls_rate = ls_slope(&xs, &ys);

    manifest.table = Some(rows.clone());
    manifest.ls_rate = Some(ls_rate);
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();

    if let Some(ref out) = cfg.out {
        ensure_dir(out)?;
        let mut f = std::fs::File::create(out.join("error_table.csv"))?;
        writeln!(f, "h,dt,theta,dt_substituted,l_inf_error,observed_rate")?;
        for r in &rows {
            let theta_s = r
                .theta
                .map(|t| format!("{t:.16e}"))
                .unwrap_or_default();
            let rate_s = r
                .observed_rate
                .map(|t| format!("{t:.16e}"))
                .unwrap_or_default();
            writeln!(
                f,
                "{:.16e},{:.16e},{},{},{:.16e},{}",
                r.h, r.dt, theta_s, r.dt_substituted, r.l_inf_error, rate_s
            )?;
        }
        manifest.artifacts.push("error_table.csv".into());
        manifest.artifacts.push("manifest.json".into());
        write_manifest(out, &manifest)?;
    }

    Ok(ConvergenceOutcome {
        rows,
        ls_rate,
        t_effective: t_eff,
        manifest,
    })
}

/// Outcome of a fractional-order sweep.
pub struct SweepOutcome {
    pub manifest: Manifest,
    pub alphas: Vec<f64>,
    pub profiles: Vec<GridFunction>,
    /// Sup distance of each profile to the α = 1 profile.
    pub distances_to_alpha_one: Vec<f64>,
}

/// Solve the same problem across a list of fractional orders and collect the
/// final profiles (long CSV: alpha,x,u). The α = 1 profile is appended when
/// missing and used as the reference for sup distances.
pub fn run_alpha_sweep(cfg: &RunConfig) -> Result<SweepOutcome> {
    let start = Instant::now();
    if cfg.dim != 1 {
        return Err(HjError::Config("sweeps are one-dimensional".into()));
    }
    let h = cfg
        .h
        .ok_or_else(|| HjError::Config("sweep requires a grid spacing h".into()))?;
    let mut alphas = cfg
        .alphas
        .clone()
        .ok_or_else(|| HjError::Config("sweep requires a non-empty alphas list".into()))?;
    if alphas.is_empty() {
        return Err(HjError::Config("sweep requires a non-empty alphas list".into()));
    }
    for &a in &alphas {
        if !(a > 0.0 && a <= 1.0) {
            return Err(HjError::Config(format!("sweep alpha {a} outside (0, 1]")));
        }
    }
    let mut manifest = Manifest::new("sweep", cfg);
    if !alphas.iter().any(|&a| (a - 1.0).abs() < 1e-12) {
        alphas.push(1.0);
        manifest
            .substitutions
            .push("appended alpha = 1 reference profile".into());
    }

    let mut profiles = Vec::with_capacity(alphas.len());
    for &a in &alphas {
        // Small α closes the CFL window quickly; re-pick (θ, Δt) per order
        // exactly like a refinement rung so every profile is stable.
        let mut acfg = cfg.clone();
        acfg.alpha = a;
        let (theta, dt, substituted) = rung_parameters(&acfg, h, cfg.t_final)?;
        if substituted {
            manifest
                .substitutions
                .push(format!("alpha={a}: dt reduced from {} to {dt}", cfg.dt));
        }
        let (problem, _) = build_problem(&acfg, a, h, theta)?;
        let sol = solve(
            &problem,
            a,
            dt,
            &SolveOptions {
                t_final: cfg.t_final,
                allow_unstable: cfg.allow_unstable,
            },
        )?;
        profiles.push(sol.last().clone());
    }

    let ref_idx = alphas
        .iter()
        .position(|&a| (a - 1.0).abs() < 1e-12)
        .expect("alpha = 1 present");
    let reference = profiles[ref_idx].clone();
    let distances: Vec<f64> = profiles.iter().map(|p| sup_dist(p, &reference)).collect();

    manifest.distances_to_alpha_one = Some(
        alphas
            .iter()
            .zip(&distances)
            .map(|(&a, &d)| [a, d])
            .collect(),
    );
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();

    if let Some(ref out) = cfg.out {
        ensure_dir(out)?;
        let mut f = std::fs::File::create(out.join("sweep.csv"))?;
        writeln!(f, "alpha,x,u")?;
        for (a, prof) in alphas.iter().zip(&profiles) {
            for i in 0..prof.spec.n[0] {
                let x = prof.spec.coord(i, 0)[0];
                writeln!(f, "{:.16e},{:.16e},{:.16e}", a, x, prof.at(i, 0))?;
            }
        }
        manifest.artifacts.push("sweep.csv".into());
        manifest.artifacts.push("manifest.json".into());
        write_manifest(out, &manifest)?;
    }

    Ok(SweepOutcome {
        manifest,
        alphas,
        profiles,
        distances_to_alpha_one: distances,
    })
}

/// Outcome of the property suite.
pub struct PropertyOutcome {
    pub manifest: Manifest,
    pub report: PropertyReport,
}

/// Run the randomized scheme-map property suite.
pub fn run_property_suite(cfg: &RunConfig) -> Result<PropertyOutcome> {
    let start = Instant::now();
    let pc = PropertyConfig {
        alpha: cfg.alpha,
        dt: cfg.dt,
        h: cfg.h.unwrap_or(0.1),
        trials: cfg.trials,
        seed: cfg.seed,
        dt_override_factor: cfg.dt_override_factor,
    };
    let report = verify_g_properties(&pc)?;
    let mut manifest = Manifest::new("verify", cfg);
    manifest.property_report = Some(report.clone());
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    if let Some(ref out) = cfg.out {
        ensure_dir(out)?;
        manifest.artifacts.push("manifest.json".into());
        write_manifest(out, &manifest)?;
    }
    Ok(PropertyOutcome { manifest, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn config_json_roundtrip_and_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"problem":"test1","alpha":0.8}"#).unwrap();
        assert_eq!(cfg.problem, ProblemId::Test1);
        assert_eq!(cfg.dim, 1);
        assert_eq!(cfg.scheme, Flavor::LaxFriedrichs);
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.t_final, 0.2);
        assert_eq!(cfg.domain, [-2.0, 2.0]);
        assert_eq!(cfg.seed, 12345);
        assert_eq!(cfg.theta_policy, ThetaPolicy::Fixed);
        let back = serde_json::to_string(&cfg).unwrap();
        let again: RunConfig = serde_json::from_str(&back).unwrap();
        assert_eq!(again.alpha, 0.8);
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        let r: std::result::Result<RunConfig, _> =
            serde_json::from_str(r#"{"problem":"test1","alpha":0.8,"typo_field":1}"#);
        assert!(r.is_err());
    }

    #[test]
    fn t_alias_is_accepted() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"problem":"test2","alpha":1.0,"T":0.1}"#).unwrap();
        assert_eq!(cfg.t_final, 0.1);
    }

    #[test]
    fn zero_time_run_returns_the_initial_datum() {
        let mut cfg = RunConfig::new(ProblemId::Test1, 0.8);
        cfg.h = Some(0.25);
        cfg.t_final = 0.0;
        let out = run_single(&cfg).unwrap();
        let ic = GridFunction::sample(&out.solution.levels[0].spec.clone(), |x| {
            (x[0] * x[0] - 1.0).min(0.0)
        });
        assert_eq!(out.solution.last().values, ic.values);
        // Error against the oracle at t = 0 is exactly 0.
        assert_eq!(out.manifest.error_sup, Some(0.0));
    }

    #[test]
    fn run_requires_h() {
        let cfg = RunConfig::new(ProblemId::Test1, 0.8);
        assert!(matches!(run_single(&cfg), Err(HjError::Config(_))));
    }

    #[test]
    fn eikonal_alpha_one_single_run_error_is_small() {
        // At α = 1 and h = 0.025 the sup error stays below 10h.
        let mut cfg = RunConfig::new(ProblemId::Test2, 1.0);
        cfg.h = Some(0.025);
        let out = run_single(&cfg).unwrap();
        let err = out.manifest.error_sup.unwrap();
        assert!(err < 10.0 * 0.025, "error {err}");
        assert!(out.manifest.stability.as_ref().unwrap().all_bounds_satisfied);
    }

    #[test]
    fn run_past_oracle_horizon_omits_error() {
        // α = 0.5 has a short horizon; the run completes but carries a note
        // instead of an error value.
        let mut cfg = RunConfig::new(ProblemId::Test1, 0.5);
        cfg.h = Some(0.2);
        cfg.t_final = 0.1; // horizon ≈ 0.0427
        let out = run_single(&cfg).unwrap();
        assert!(out.manifest.error_sup.is_none());
        assert!(out.manifest.oracle_note.is_some());
    }

    #[test]
    fn artifacts_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(ProblemId::Test2, 0.8);
        cfg.h = Some(0.1);
        cfg.t_final = 0.05;
        cfg.out = Some(dir.path().to_path_buf());
        let _ = run_single(&cfg).unwrap();
        let manifest = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&manifest).unwrap();
        assert_eq!(parsed["schema_version"], 1);
        assert_eq!(parsed["command"], "run");
        assert!(parsed["cfl"]["satisfied"].as_bool().unwrap());
        let csv = std::fs::read_to_string(dir.path().join("snapshot.csv")).unwrap();
        assert!(csv.starts_with("x,u\n"));
    }

    #[test]
    fn zero_flux_ladder_errors_vanish() {
        let mut cfg = RunConfig::new(ProblemId::ZeroFlux, 0.7);
        cfg.ladder = Some(vec![0.2, 0.1]);
        cfg.t_final = 0.05;
        let out = run_convergence(&cfg).unwrap();
        for r in &out.rows {
            assert!(r.l_inf_error <= 1e-12, "h={}: {}", r.h, r.l_inf_error);
        }
    }

    #[test]
    fn bad_ladders_are_rejected() {
        let mut cfg = RunConfig::new(ProblemId::Test2, 0.8);
        cfg.ladder = Some(vec![0.2, 0.15]);
        assert!(matches!(run_convergence(&cfg), Err(HjError::Config(_))));
        cfg.ladder = Some(vec![0.2]);
        assert!(matches!(run_convergence(&cfg), Err(HjError::Config(_))));
    }

    #[test]
    fn horizon_clamp_is_recorded() {
        let mut cfg = RunConfig::new(ProblemId::Test1, 0.5);
        cfg.ladder = Some(vec![0.2, 0.1]);
        cfg.t_final = 0.2; // horizon ≈ 0.0427 ⇒ clamp
        let out = run_convergence(&cfg).unwrap();
        assert!(out.t_effective < 0.05);
        assert!(out
            .manifest
            .substitutions
            .iter()
            .any(|s| s.contains("clamped")));
        // t_eff is a whole number of base steps.
        let steps = out.t_effective / cfg.dt;
        assert_relative_eq!(steps, steps.round(), epsilon = 1e-9);
    }

    #[test]
    fn lower_edge_policy_reduces_dt_when_window_closes() {
        // α = 0.5, h = 0.025: the window at Δt = 1e-3 is empty, so the rung
        // must substitute a smaller Δt and record it.
        let mut cfg = RunConfig::new(ProblemId::Test2, 0.5);
        cfg.theta_policy = ThetaPolicy::CflLowerEdge;
        cfg.ladder = Some(vec![0.05, 0.025]);
        cfg.t_final = 0.02;
        let out = run_convergence(&cfg).unwrap();
        let last = out.rows.last().unwrap();
        assert!(last.dt_substituted);
        assert!(last.dt < 1e-3);
        assert!(last.cfl.satisfied);
        // θ sits at the window's lower edge.
        let [lo, _up] = last.cfl.theta_window.unwrap();
        assert_relative_eq!(last.theta.unwrap(), lo, max_relative = 1e-12);
    }

    #[test]
    fn sweep_requires_alphas_and_appends_reference() {
        let mut cfg = RunConfig::new(ProblemId::Test2, 0.8);
        cfg.h = Some(0.1);
        cfg.t_final = 0.1;
        assert!(matches!(run_alpha_sweep(&cfg), Err(HjError::Config(_))));
        cfg.alphas = Some(vec![]);
        assert!(matches!(run_alpha_sweep(&cfg), Err(HjError::Config(_))));
        cfg.alphas = Some(vec![0.5, 0.9]);
        let out = run_alpha_sweep(&cfg).unwrap();
        assert_eq!(out.alphas.len(), 3);
        assert_relative_eq!(*out.alphas.last().unwrap(), 1.0);
        // Sup distance to the reference shrinks as α → 1.
        assert!(out.distances_to_alpha_one[1] < out.distances_to_alpha_one[0]);
        assert_eq!(*out.distances_to_alpha_one.last().unwrap(), 0.0);
    }

    #[test]
    fn property_suite_wrapper_matches_direct_call() {
        let mut cfg = RunConfig::new(ProblemId::Test1, 0.8);
        cfg.trials = 20;
        cfg.h = Some(0.1);
        let out = run_property_suite(&cfg).unwrap();
        assert!(out.report.passed);
        assert_eq!(out.report.trials_per_family, 20);
    }
}
