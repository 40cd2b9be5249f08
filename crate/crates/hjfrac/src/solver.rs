//! Explicit time marching for the fractional Hamilton-Jacobi scheme
//!
//! ```text
//! U^{n+1} = Σ_{m=0}^{n} c_m^{n+1} U^m − ρ_α g(x, [D_h U^n]),
//! ```
//!
//! plus per-step stability accounting and randomized verification of the
//! scheme-map properties (commutation with constants, nonexpansiveness,
//! monotonicity, sup bound, level-shift bound).

use crate::caputo::WeightLadder;
use crate::error::{HjError, Result};
use crate::grid::{sup_dist, sup_norm, BoundaryMode, GridFunction, GridSpec};
use crate::hamiltonian::{CflReport, Flavor, NumericalHamiltonian};
use crate::numerics::{gamma, KahanSum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

/// Exact-solution oracle attached to a problem (used for
/// `dirichlet_from_exact` boundaries and error measurement).
pub trait ExactOracle: Send + Sync {
    /// Evaluate u(x, t). May refuse (e.g. past a validity horizon).
    fn eval(&self, x: &[f64], t: f64) -> Result<f64>;
    /// Largest t this oracle will serve, if limited.
    fn horizon(&self) -> Option<f64> {
        None
    }
}

pub type SpaceFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A fully specified initial-boundary value problem on a grid.
pub struct Problem {
    pub grid: GridSpec,
    pub hamiltonian: NumericalHamiltonian,
    pub u0: SpaceFn,
    pub boundary: BoundaryMode,
    pub exact: Option<Arc<dyn ExactOracle>>,
}

impl Problem {
    pub fn initial_condition(&self) -> GridFunction {
        let f = self.u0.clone();
        GridFunction::sample(&self.grid, move |x| f(x))
    }
}

/// Per-step stability record.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StepReport {
    /// Level produced (1-based: this report describes U^{level}).
    pub level: usize,
    pub t: f64,
    /// ‖U^{n+1} − U^n‖∞.
    pub sup_increment: f64,
    /// sup_x |g| at this step.
    pub flux_sup: f64,
    /// K = running sup of |g| over all steps so far.
    pub flux_sup_running: f64,
    /// ‖U^{n+1} − U^0‖∞.
    pub deviation_from_ic: f64,
    /// K Γ(2−α) t^α / (α(1−α)); `None` at α = 1 (prefactor infinite).
    pub stability_bound: Option<f64>,
    /// deviation ≤ bound (with 1e-9 relative slack); vacuously true at α = 1.
    pub bound_satisfied: bool,
    /// Realized [min, max] over all one-sided differences this step.
    pub gradient_range: [f64; 2],
}

/// Result of a time-marching run.
pub struct Solution {
    pub alpha: f64,
    pub dt: f64,
    /// U^0, …, U^N.
    pub levels: Vec<GridFunction>,
    pub steps: Vec<StepReport>,
    pub cfl: CflReport,
    /// Set when realized gradients exceeded the declared Lipschitz range.
    pub gradient_warning: Option<String>,
}

impl Solution {
    pub fn last(&self) -> &GridFunction {
        self.levels.last().expect("solution has at least one level")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub t_final: f64,
    /// Proceed past a failed CFL check (the run may blow up; non-finite
    /// values still abort).
    pub allow_unstable: bool,
}

#[inline]
fn stencil_q(
    u: &GridFunction,
    i: usize,
    j: usize,
    q: &mut [f64; 4],
) {
    let spec = &u.spec;
    let h = spec.h;
    let here = u.at(i, j);
    let (nx, ny) = (spec.n[0], spec.n[1]);
    // Axis 0 neighbors (wrap only happens on periodic grids; interior nodes
    // of closed grids never reach the edges here).
    let ip = if i + 1 < nx { i + 1 } else { 0 };
    let im = if i > 0 { i - 1 } else { nx - 1 };
    q[0] = (u.at(ip, j) - here) / h;
    q[1] = (here - u.at(im, j)) / h;
    if spec.dim == 2 {
        let jp = if j + 1 < ny { j + 1 } else { 0 };
        let jm = if j > 0 { j - 1 } else { ny - 1 };
        q[2] = (u.at(i, jp) - here) / h;
        q[3] = (here - u.at(i, jm)) / h;
    }
}

struct NodeOut {
    value: f64,
    /// |g| at interior nodes, NaN at assigned-boundary nodes.
    flux_abs: f64,
    qmin: f64,
    qmax: f64,
}

/// Advance one level: history = U^0..=U^n, ladder serving level n.
///
/// `flux_sup_running` is the running sup of |g| over previous steps; the
/// returned report folds this step's flux into it and evaluates the a-priori
/// stability bound against the initial condition.
pub fn step(
    problem: &Problem,
    history: &[GridFunction],
    ladder: &WeightLadder,
    flux_sup_running: f64,
) -> Result<(GridFunction, StepReport)> {
    let n = history.len() - 1;
    if ladder.level() != n {
        return Err(HjError::Config(format!(
            "weight ladder serves level {}, history is at level {n}",
            ladder.level()
        )));
    }
    let spec = &problem.grid;
    let alpha = ladder.alpha();
    let dt = ladder.dt();
    let rho = ladder.rho();
    let lambda = rho / spec.h;
    let t_next = (n + 1) as f64 * dt;
    let u_n = &history[n];
    let dim = spec.dim;

    // Boundary values for the produced level (Dirichlet modes only).
    let boundary_plan: Option<Vec<f64>> = match problem.boundary {
        BoundaryMode::Periodic => None,
        BoundaryMode::DirichletFrozen => None, // read from history[0] directly
        BoundaryMode::DirichletFromExact => {
            let oracle = problem.exact.as_ref().ok_or_else(|| {
                HjError::Config(
                    "dirichlet_from_exact boundary requires an exact-solution oracle".into(),
                )
            })?;
            let mut vals = vec![0.0; spec.len()];
            for i in 0..spec.n[0] {
                for j in 0..spec.n[1] {
                    if spec.on_boundary(i, j) {
                        let x = spec.coord(i, j);
                        vals[spec.index(i, j)] = oracle.eval(&x[..dim], t_next)?;
                    }
                }
            }
            Some(vals)
        }
    };

    let ham = &problem.hamiltonian;
    let weights: Vec<f64> = (0..=n).map(|m| ladder.coeff(m)).collect();

    let outs: Vec<NodeOut> = (0..spec.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = spec.unindex(idx);
            if spec.on_boundary(i, j) {
                let value = match problem.boundary {
                    BoundaryMode::DirichletFrozen => history[0].values[idx],
                    BoundaryMode::DirichletFromExact => {
                        boundary_plan.as_ref().expect("plan exists")[idx]
                    }
                    BoundaryMode::Periodic => unreachable!("periodic grids have no boundary"),
                };
                return NodeOut {
                    value,
                    flux_abs: f64::NAN,
                    qmin: f64::INFINITY,
                    qmax: f64::NEG_INFINITY,
                };
            }
            let mut q = [0.0f64; 4];
            stencil_q(u_n, i, j, &mut q);
            let qs = &q[..2 * dim];
            let x = spec.coord(i, j);
            let g = ham.flux_eval(&x[..dim], qs, lambda);
            let mut acc = KahanSum::new();
            for (m, w) in weights.iter().enumerate() {
                acc.add(w * history[m].values[idx]);
            }
            let (mut qmin, mut qmax) = (f64::INFINITY, f64::NEG_INFINITY);
            for &v in qs {
                qmin = qmin.min(v);
                qmax = qmax.max(v);
            }
            NodeOut {
                value: acc.value() - rho * g,
                flux_abs: g.abs(),
                qmin,
                qmax,
            }
        })
        .collect();

    let mut values = Vec::with_capacity(spec.len());
    let mut flux_sup = 0.0f64;
    let (mut qmin, mut qmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for o in &outs {
        values.push(o.value);
        if !o.flux_abs.is_nan() {
            flux_sup = flux_sup.max(o.flux_abs);
        }
        qmin = qmin.min(o.qmin);
        qmax = qmax.max(o.qmax);
    }
    let new = GridFunction {
        spec: spec.clone(),
        values,
    };

    let flux_sup_running = flux_sup_running.max(flux_sup);
    let sup_increment = sup_dist(&new, u_n);
    let deviation_from_ic = sup_dist(&new, &history[0]);
    let (stability_bound, bound_satisfied) = if alpha < 1.0 {
        let b = flux_sup_running * gamma(2.0 - alpha) / (alpha * (1.0 - alpha))
            * t_next.powf(alpha);
        (Some(b), deviation_from_ic <= b + 1e-9 * (1.0 + b))
    } else {
        (None, true)
    };

    let report = StepReport {
        level: n + 1,
        t: t_next,
        sup_increment,
        flux_sup,
        flux_sup_running,
        deviation_from_ic,
        stability_bound,
        bound_satisfied,
        gradient_range: [qmin, qmax],
    };
    Ok((new, report))
}

/// March the scheme from the initial condition to `t_final`.
pub fn solve(problem: &Problem, alpha: f64, dt: f64, opts: &SolveOptions) -> Result<Solution> {
    if opts.t_final < 0.0 {
        return Err(HjError::Config(format!(
            "final time must be non-negative, got {}",
            opts.t_final
        )));
    }
    let steps_f = opts.t_final / dt;
    let n_steps = steps_f.round() as usize;
    if (steps_f - n_steps as f64).abs() > 1e-9 * (n_steps as f64).max(1.0) {
        return Err(HjError::Config(format!(
            "t_final/dt = {steps_f} is not an integer number of steps"
        )));
    }

    let cfl = problem
        .hamiltonian
        .cfl_check(alpha, dt, problem.grid.h, problem.grid.dim);
    if n_steps > 0 && !cfl.satisfied && !opts.allow_unstable {
        return Err(HjError::Cfl(cfl.describe()));
    }

    let u0 = problem.initial_condition();
    if u0.has_non_finite() {
        return Err(HjError::NonFinite("initial condition".into()));
    }
    let mut levels = vec![u0];
    let mut steps = Vec::with_capacity(n_steps);
    let mut ladder = WeightLadder::new(alpha, dt)?;
    let mut k_running = 0.0f64;
    for n in 0..n_steps {
        ladder.advance_to(n);
        let (new, report) = step(problem, &levels, &ladder, k_running)?;
        if new.has_non_finite() {
            return Err(HjError::NonFinite(format!(
                "solution values at step {} (t = {})",
                n + 1,
                report.t
            )));
        }
        k_running = report.flux_sup_running;
        steps.push(report);
        levels.push(new);
    }

    let mut gradient_warning = None;
    if let Some(range) = problem.hamiltonian.valid_gradient_range {
        let realized = steps
            .iter()
            .fold(0.0f64, |m, s| m.max(s.gradient_range[0].abs()).max(s.gradient_range[1].abs()));
        if realized > range * (1.0 + 1e-12) {
            let msg = format!(
                "realized gradient sup {realized:.6} exceeds the range {range} on which the Lipschitz bound is justified; CFL guarantees may not apply"
            );
            eprintln!("warning: {msg}");
            gradient_warning = Some(msg);
        }
    }

    Ok(Solution {
        alpha,
        dt,
        levels,
        steps,
        cfl,
        gradient_warning,
    })
}

// ---------------------------------------------------------------------------
// Randomized verification of the scheme-map properties.
// ---------------------------------------------------------------------------

/// One verified property family.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PropertyFamilyReport {
    pub name: String,
    pub trials: usize,
    pub violations: usize,
    /// Largest observed defect (how far past the tolerance the worst trial
    /// went; ≤ 0 when clean).
    pub worst_defect: f64,
    pub tolerance: f64,
    /// True when violations are expected (CFL deliberately broken).
    pub expected_failures: bool,
}

/// Machine-readable outcome of the randomized property suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub alpha: f64,
    pub dt: f64,
    /// Δt actually exercised: dt × dt_override_factor.
    pub dt_effective: f64,
    /// Largest Δt inside the CFL window for the suite's flux (with margin).
    pub dt_cfl_edge: f64,
    pub h: f64,
    pub trials_per_family: usize,
    pub cfl: CflReport,
    pub families: Vec<PropertyFamilyReport>,
    /// True when every family matched expectation: all clean under CFL;
    /// with the CFL deliberately broken, the algebraic families
    /// (commutation, level-shift) still clean while the CFL-dependent ones
    /// are reported as expected failures.
    pub passed: bool,
}

/// Configuration for [`verify_g_properties`].
#[derive(Debug, Clone, Copy)]
pub struct PropertyConfig {
    pub alpha: f64,
    pub dt: f64,
    pub h: f64,
    pub trials: usize,
    pub seed: u64,
    /// Multiply Δt by this factor after the CFL check is recorded (use ≫ 1
    /// to demonstrate monotonicity failure outside the stable region).
    pub dt_override_factor: f64,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        Self {
            alpha: 0.8,
            dt: 1e-3,
            h: 0.1,
            trials: 200,
            seed: 12345,
            dt_override_factor: 1.0,
        }
    }
}

/// Per-node uniform noise in [lo, hi); rough at grid scale, so its divided
/// differences reach ±(hi − lo)/h.
fn jitter_field(rng: &mut ChaCha8Rng, spec: &GridSpec, lo: f64, hi: f64) -> GridFunction {
    let values = (0..spec.len()).map(|_| rng.random_range(lo..hi)).collect();
    GridFunction {
        spec: spec.clone(),
        values,
    }
}

/// A smooth random field with analytic slope at most `slope_cap`.
fn random_field(rng: &mut ChaCha8Rng, spec: &GridSpec, slope_cap: f64) -> GridFunction {
    let modes = 3usize;
    let mut amps = Vec::with_capacity(modes);
    let mut phases = Vec::with_capacity(modes);
    let mut weight_sum = 0.0;
    for k in 1..=modes {
        let a: f64 = rng.random_range(0.1..1.0);
        amps.push(a);
        phases.push(rng.random_range(0.0..std::f64::consts::TAU));
        weight_sum += a * std::f64::consts::PI * k as f64;
    }
    let scale = slope_cap / weight_sum;
    let offset: f64 = rng.random_range(-0.5..0.5);
    GridFunction::sample(spec, |x| {
        let mut v = offset;
        for k in 1..=modes {
            v += scale * amps[k - 1]
                * (std::f64::consts::PI * k as f64 * x[0] + phases[k - 1]).sin();
        }
        v
    })
}

fn apply_g(
    problem: &Problem,
    history: &[GridFunction],
    ladder: &WeightLadder,
) -> GridFunction {
    let (g, _) = step(problem, history, ladder, 0.0).expect("periodic step cannot fail");
    g
}

/// Run the randomized property suite for the scheme map on a periodic grid
/// with H(p) = |p|²/2 (declared gradient bound |p| ≤ 2; realized slopes,
/// perturbations included, stay below 1.8).
///
/// Checks, per trial: commutation with constants, nonexpansiveness in the
/// sup norm, order preservation (monotonicity), the sup-norm growth bound,
/// and the level-shift increment bound.
pub fn verify_g_properties(cfg: &PropertyConfig) -> Result<PropertyReport> {
    if cfg.trials == 0 {
        return Err(HjError::Config("property suite needs at least one trial".into()));
    }
    let spec = GridSpec::new_periodic(1, [0.0, 0.0], [2.0, 0.0], cfg.h)?;
    let theta = crate::hamiltonian::theta_upper(cfg.alpha);
    let ham = NumericalHamiltonian::lax_friedrichs(
        |_x: &[f64], p: &[f64]| p.iter().map(|v| v * v).sum::<f64>() / 2.0,
        2.0,
        theta,
        cfg.alpha,
    )?;
    let dt_eff = cfg.dt * cfg.dt_override_factor;
    // Report the CFL state of the Δt actually exercised.
    let cfl = ham.cfl_check(cfg.alpha, dt_eff, cfg.h, 1);
    let expect_failures = !cfl.satisfied;

    let problem = Problem {
        grid: spec.clone(),
        hamiltonian: ham,
        u0: Arc::new(|_x: &[f64]| 0.0),
        boundary: BoundaryMode::Periodic,
        exact: None,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // Realized slopes stay below 1.8, inside the declared bound |p| ≤ 2,
    // yet steep enough that a broken CFL window shows real violations.
    let slope_cap = 1.8;
    let tol = 1e-11;

    let mut fam = vec![
        PropertyFamilyReport {
            name: "constant_commutation".into(),
            trials: cfg.trials,
            violations: 0,
            worst_defect: f64::NEG_INFINITY,
            tolerance: tol,
            expected_failures: false,
        },
        PropertyFamilyReport {
            name: "nonexpansive_sup_norm".into(),
            trials: cfg.trials,
            violations: 0,
            worst_defect: f64::NEG_INFINITY,
            tolerance: tol,
            expected_failures: expect_failures,
        },
        PropertyFamilyReport {
            name: "ordered_monotonicity".into(),
            trials: cfg.trials,
            violations: 0,
            worst_defect: f64::NEG_INFINITY,
            tolerance: tol,
            expected_failures: expect_failures,
        },
        PropertyFamilyReport {
            name: "sup_norm_bound".into(),
            trials: cfg.trials,
            violations: 0,
            worst_defect: f64::NEG_INFINITY,
            tolerance: tol,
            expected_failures: expect_failures,
        },
        PropertyFamilyReport {
            name: "level_shift_bound".into(),
            trials: cfg.trials,
            violations: 0,
            worst_defect: f64::NEG_INFINITY,
            tolerance: tol,
            expected_failures: false,
        },
    ];

    for _ in 0..cfg.trials {
        let depth = rng.random_range(1..=6usize);
        let mut hist: Vec<GridFunction> = Vec::with_capacity(depth);
        for _ in 0..depth {
            hist.push(random_field(&mut rng, &spec, slope_cap * 0.5));
        }
        let mut ladder = WeightLadder::new(cfg.alpha, dt_eff)?;
        ladder.advance_to(depth - 1);
        let g_u = apply_g(&problem, &hist, &ladder);

        // (1) G(U + c) = G(U) + c.
        {
            let c: f64 = rng.random_range(-5.0..5.0);
            let shifted: Vec<GridFunction> = hist
                .iter()
                .map(|u| GridFunction {
                    spec: spec.clone(),
                    values: u.values.iter().map(|v| v + c).collect(),
                })
                .collect();
            let g_shifted = apply_g(&problem, &shifted, &ladder);
            let expect = GridFunction {
                spec: spec.clone(),
                values: g_u.values.iter().map(|v| v + c).collect(),
            };
            let defect = sup_dist(&g_shifted, &expect) - tol;
            fam[0].worst_defect = fam[0].worst_defect.max(defect);
            if defect > 0.0 {
                fam[0].violations += 1;
            }
        }

        // A perturbed partner history for the pairwise properties. The
        // perturbations are grid-scale rough (that is where monotonicity
        // actually bites) but sized so combined divided differences stay
        // within the slope cap.
        let amp = slope_cap * spec.h / 4.0;
        let other: Vec<GridFunction> = hist
            .iter()
            .map(|u| {
                let bump = jitter_field(&mut rng, &spec, -amp, amp);
                GridFunction {
                    spec: spec.clone(),
                    values: u
                        .values
                        .iter()
                        .zip(&bump.values)
                        .map(|(a, b)| a + b)
                        .collect(),
                }
            })
            .collect();
        let g_other = apply_g(&problem, &other, &ladder);

        // (2) ‖G(U) − G(V)‖∞ ≤ max_m ‖U^m − V^m‖∞.
        {
            let rhs = hist
                .iter()
                .zip(&other)
                .fold(0.0f64, |m, (a, b)| m.max(sup_dist(a, b)));
            let defect = sup_dist(&g_u, &g_other) - rhs - tol;
            fam[1].worst_defect = fam[1].worst_defect.max(defect);
            if defect > 0.0 {
                fam[1].violations += 1;
            }
        }

        // (3) U^m ≤ V^m for all m implies G(U) ≤ G(V).
        {
            let above: Vec<GridFunction> = hist
                .iter()
                .map(|u| {
                    let bump = jitter_field(&mut rng, &spec, 0.0, 2.0 * amp);
                    GridFunction {
                        spec: spec.clone(),
                        values: u
                            .values
                            .iter()
                            .zip(&bump.values)
                            .map(|(a, b)| a + b)
                            .collect(),
                    }
                })
                .collect();
            let g_above = apply_g(&problem, &above, &ladder);
            let defect = g_u
                .values
                .iter()
                .zip(&g_above.values)
                .fold(f64::NEG_INFINITY, |m, (lo, hi)| m.max(lo - hi))
                - tol;
            fam[2].worst_defect = fam[2].worst_defect.max(defect);
            if defect > 0.0 {
                fam[2].violations += 1;
            }
        }

        // (4) ‖G(U)‖∞ ≤ max_m ‖U^m‖∞ + ρ sup_x |H(x, 0)| (here H(x,0) = 0).
        {
            let rhs = hist.iter().fold(0.0f64, |m, u| m.max(sup_norm(u)));
            let defect = sup_norm(&g_u) - rhs - tol;
            fam[3].worst_defect = fam[3].worst_defect.max(defect);
            if defect > 0.0 {
                fam[3].violations += 1;
            }
        }

        // (5) Append G(U) to the history and step again: the increment obeys
        // |G'(U') − G(U)| ≤ (1 − c_0) max_m ‖U^{m+1} − U^m‖∞ + 2 ρ K.
        {
            let mut hist2 = hist.clone();
            hist2.push(g_u.clone());
            let mut ladder2 = ladder.clone();
            ladder2.advance();
            let g_next = apply_g(&problem, &hist2, &ladder2);
            let mut max_inc = 0.0f64;
            for w in hist2.windows(2) {
                max_inc = max_inc.max(sup_dist(&w[0], &w[1]));
            }
            // K: sup of |flux| over the levels actually differenced.
            let lambda = ladder.rho() / spec.h;
            let mut k_sup = 0.0f64;
            for u in [&hist[depth - 1], &g_u] {
                let mut q = [0.0f64; 4];
                for idx in 0..spec.len() {
                    let (i, j) = spec.unindex(idx);
                    stencil_q(u, i, j, &mut q);
                    let x = spec.coord(i, j);
                    k_sup = k_sup.max(
                        problem
                            .hamiltonian
                            .flux_eval(&x[..1], &q[..2], lambda)
                            .abs(),
                    );
                }
            }
            let c0_next = ladder2.coeff(0);
            let rhs = (1.0 - c0_next) * max_inc + 2.0 * ladder.rho() * k_sup;
            let defect = sup_dist(&g_next, &g_u) - rhs - tol;
            fam[4].worst_defect = fam[4].worst_defect.max(defect);
            if defect > 0.0 {
                fam[4].violations += 1;
            }
        }
    }

    // Pass criterion: with the CFL intact, every family must be clean. With
    // the CFL deliberately broken, the CFL-dependent families may (and for a
    // Δt far past the edge, will) violate — that is documented, not a
    // failure — while the purely algebraic families (commutation,
    // level-shift) must stay clean regardless of Δt.
    let passed = if expect_failures {
        fam[0].violations == 0 && fam[4].violations == 0
    } else {
        fam.iter().all(|f| f.violations == 0)
    };

    Ok(PropertyReport {
        seed: cfg.seed,
        alpha: cfg.alpha,
        dt: cfg.dt,
        dt_effective: dt_eff,
        dt_cfl_edge: problem.hamiltonian.suggest_dt(cfg.alpha, cfg.h, 1),
        h: cfg.h,
        trials_per_family: cfg.trials,
        cfl,
        families: fam,
        passed,
    })
}

/// Flavor of the problem's flux (re-exported convenience for manifests).
pub fn flavor_of(problem: &Problem) -> Flavor {
    problem.hamiltonian.flavor
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryMode;
    use approx::assert_relative_eq;

    fn zero_flux_problem(h: f64) -> Problem {
        Problem {
            grid: GridSpec::new_closed(1, [-2.0, 0.0], [2.0, 0.0], h).unwrap(),
            hamiltonian: NumericalHamiltonian::upwind_plus(|_, _| 0.0, 0.0).unwrap(),
            u0: Arc::new(|x: &[f64]| (x[0] * x[0] - 1.0).min(0.0)),
            boundary: BoundaryMode::DirichletFrozen,
            exact: None,
        }
    }

    #[test]
    fn zero_hamiltonian_is_pure_weighted_history() {
        // With g ≡ 0 each new level is the convex weight combination of the
        // history; with a single level U¹ = U⁰ exactly.
        let p = zero_flux_problem(0.5);
        let sol = solve(&p, 0.6, 0.1, &SolveOptions { t_final: 0.5, allow_unstable: false })
            .unwrap();
        for lvl in &sol.levels {
            for (a, b) in lvl.values.iter().zip(&sol.levels[0].values) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn first_step_is_ic_minus_rho_flux() {
        // U¹ = U⁰ − ρ g(D U⁰) since c_0¹ = 1.
        let alpha = 0.7;
        let dt = 1e-3;
        let grid = GridSpec::new_closed(1, [-1.0, 0.0], [1.0, 0.0], 0.25).unwrap();
        let ham = NumericalHamiltonian::lax_friedrichs(
            |_, p: &[f64]| p[0] * p[0] / 2.0,
            2.0,
            crate::hamiltonian::theta_upper(alpha),
            alpha,
        )
        .unwrap();
        let p = Problem {
            grid: grid.clone(),
            hamiltonian: ham,
            u0: Arc::new(|x: &[f64]| x[0] * x[0]),
            boundary: BoundaryMode::DirichletFrozen,
            exact: None,
        };
        let sol = solve(&p, alpha, dt, &SolveOptions { t_final: dt, allow_unstable: false })
            .unwrap();
        let rho = crate::caputo::rho(alpha, dt);
        let lambda = rho / grid.h;
        let u0 = &sol.levels[0];
        for i in 1..grid.n[0] - 1 {
            let mut q = [0.0f64; 4];
            stencil_q(u0, i, 0, &mut q);
            let x = grid.coord(i, 0);
            let g = p.hamiltonian.flux_eval(&x[..1], &q[..2], lambda);
            let expect = u0.at(i, 0) - rho * g;
            assert_relative_eq!(sol.levels[1].at(i, 0), expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn alpha_one_lf_matches_hand_evaluation() {
        // α = 1 on three interior nodes: the update must equal the classical
        // Lax-Friedrichs formula evaluated by hand.
        let dt = 0.01;
        let h = 0.25;
        let grid = GridSpec::new_closed(1, [0.0, 0.0], [1.0, 0.0], h).unwrap();
        let ham = NumericalHamiltonian::lax_friedrichs(
            |_, p: &[f64]| p[0].abs(),
            1.0,
            0.5,
            1.0,
        )
        .unwrap();
        let u0_vals = [0.0, -0.3, 0.1, -0.2, 0.0];
        let p = Problem {
            grid: grid.clone(),
            hamiltonian: ham,
            u0: Arc::new(move |x: &[f64]| {
                let i = ((x[0] / h).round()) as usize;
                u0_vals[i]
            }),
            boundary: BoundaryMode::DirichletFrozen,
            exact: None,
        };
        let sol = solve(&p, 1.0, dt, &SolveOptions { t_final: dt, allow_unstable: false })
            .unwrap();
        for i in 1..=3usize {
            let (w, c, e) = (u0_vals[i - 1], u0_vals[i], u0_vals[i + 1]);
            let p_c = (e - w) / (2.0 * h);
            // θ/λ (q1 − q2) with θ = 1/2, λ = dt/h gives the classical
            // (e − 2c + w) h / (2 dt) viscosity.
            let g = p_c.abs() - 0.5 / (dt / h) * ((e - c) / h - (c - w) / h);
            let expect = c - dt * g;
            assert_relative_eq!(sol.levels[1].at(i, 0), expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn t_zero_returns_initial_condition_only() {
        let p = zero_flux_problem(0.25);
        let sol = solve(&p, 0.5, 0.1, &SolveOptions { t_final: 0.0, allow_unstable: false })
            .unwrap();
        assert_eq!(sol.levels.len(), 1);
        assert!(sol.steps.is_empty());
        let ic = p.initial_condition();
        assert_eq!(sol.levels[0].values, ic.values);
    }

    #[test]
    fn non_integral_step_count_is_rejected() {
        let p = zero_flux_problem(0.25);
        let err = solve(&p, 0.5, 0.3, &SolveOptions { t_final: 1.0, allow_unstable: false });
        assert!(matches!(err, Err(HjError::Config(_))));
    }

    #[test]
    fn cfl_violation_is_fatal_unless_allowed() {
        let alpha = 0.5;
        let grid = GridSpec::new_closed(1, [-2.0, 0.0], [2.0, 0.0], 0.01).unwrap();
        let ham = NumericalHamiltonian::upwind_minus(|_, p: &[f64]| p[0].abs(), 1.0).unwrap();
        let p = Problem {
            grid,
            hamiltonian: ham,
            u0: Arc::new(|x: &[f64]| -x[0].abs()),
            boundary: BoundaryMode::DirichletFrozen,
            exact: None,
        };
        let err = solve(&p, alpha, 0.01, &SolveOptions { t_final: 0.1, allow_unstable: false });
        match err {
            Err(HjError::Cfl(_)) => {}
            Err(other) => panic!("expected CFL error, got {other}"),
            Ok(_) => panic!("expected CFL error, got a solution"),
        }
        // Allowed: runs (may be inaccurate but finite for this short horizon).
        let sol = solve(&p, alpha, 0.01, &SolveOptions { t_final: 0.1, allow_unstable: true });
        assert!(sol.is_ok());
    }

    #[test]
    fn stability_bound_holds_on_smooth_run() {
        let alpha = 0.5;
        let grid = GridSpec::new_closed(1, [-2.0, 0.0], [2.0, 0.0], 0.1).unwrap();
        let ham = NumericalHamiltonian::lax_friedrichs(
            |_, p: &[f64]| p[0].abs(),
            1.0,
            crate::hamiltonian::theta_upper(alpha),
            alpha,
        )
        .unwrap();
        let p = Problem {
            grid,
            hamiltonian: ham,
            u0: Arc::new(|x: &[f64]| -x[0] * x[0]),
            boundary: BoundaryMode::DirichletFrozen,
            exact: None,
        };
        let sol = solve(&p, alpha, 1e-3, &SolveOptions { t_final: 0.1, allow_unstable: false })
            .unwrap();
        assert_eq!(sol.steps.len(), 100);
        for s in &sol.steps {
            assert!(s.bound_satisfied, "bound failed at level {}", s.level);
            assert!(s.stability_bound.unwrap() >= 0.0);
        }
    }

    #[test]
    fn alpha_one_has_no_bound_but_is_satisfied() {
        let p = zero_flux_problem(0.25);
        let sol = solve(&p, 1.0, 0.05, &SolveOptions { t_final: 0.2, allow_unstable: false })
            .unwrap();
        for s in &sol.steps {
            assert!(s.stability_bound.is_none());
            assert!(s.bound_satisfied);
        }
    }

    #[test]
    fn determinism_across_runs() {
        let alpha = 0.8;
        let grid = GridSpec::new_closed(1, [-2.0, 0.0], [2.0, 0.0], 0.05).unwrap();
        let mk = || Problem {
            grid: grid.clone(),
            hamiltonian: NumericalHamiltonian::lax_friedrichs(
                |_, p: &[f64]| p[0] * p[0] / 2.0,
                2.0,
                crate::hamiltonian::theta_upper(alpha),
                alpha,
            )
            .unwrap(),
            u0: Arc::new(|x: &[f64]| (x[0] * x[0] - 1.0).min(0.0)),
            boundary: BoundaryMode::DirichletFrozen,
            exact: None,
        };
        let a = solve(&mk(), alpha, 1e-3, &SolveOptions { t_final: 0.05, allow_unstable: false })
            .unwrap();
        let b = solve(&mk(), alpha, 1e-3, &SolveOptions { t_final: 0.05, allow_unstable: false })
            .unwrap();
        for (ua, ub) in a.levels.iter().zip(&b.levels) {
            for (x, y) in ua.values.iter().zip(&ub.values) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn property_suite_clean_under_cfl() {
        let cfg = PropertyConfig {
            trials: 60,
            ..Default::default()
        };
        let rep = verify_g_properties(&cfg).unwrap();
        assert!(rep.passed, "families: {:?}", rep.families);
        for f in &rep.families {
            assert_eq!(f.violations, 0, "{} violated", f.name);
        }
    }

    #[test]
    fn property_suite_detects_cfl_breakage() {
        // Run at 50x the largest CFL-stable Δt: monotonicity must
        // demonstrably fail (a sanity check of the suite itself).
        let probe = verify_g_properties(&PropertyConfig {
            trials: 1,
            ..Default::default()
        })
        .unwrap();
        let cfg = PropertyConfig {
            trials: 60,
            dt: probe.dt_cfl_edge,
            dt_override_factor: 50.0,
            ..Default::default()
        };
        let rep = verify_g_properties(&cfg).unwrap();
        assert!((rep.dt_effective - 50.0 * probe.dt_cfl_edge).abs() < 1e-15);
        let mono = rep
            .families
            .iter()
            .find(|f| f.name == "ordered_monotonicity")
            .unwrap();
        assert!(mono.expected_failures);
        assert!(
            mono.violations > 0,
            "expected monotonicity violations at 50x the CFL-edge dt"
        );
        // The algebraic families hold no matter how large Δt is.
        assert!(rep.passed, "algebraic families must stay clean");
    }

    #[test]
    fn property_suite_is_seed_deterministic() {
        let cfg = PropertyConfig { trials: 30, ..Default::default() };
        let a = verify_g_properties(&cfg).unwrap();
        let b = verify_g_properties(&cfg).unwrap();
        for (fa, fb) in a.families.iter().zip(&b.families) {
            assert_eq!(fa.violations, fb.violations);
            assert_eq!(fa.worst_defect.to_bits(), fb.worst_defect.to_bits());
        }
    }
}
