//! Monotone numerical Hamiltonians (upwind and Lax-Friedrichs flavors),
//! their CFL conditions under the fractional time scale, and suggested
//! stable time steps.
//!
//! Conventions for the gradient stencil vector `q` at a node:
//! 1D: `q = [q1, q2]` with q1 the forward and q2 the backward difference.
//! 2D: `q = [q1, q2, q3, q4]`, forward/backward along axis 0 then axis 1.
//!
//! The Lax-Friedrichs flux in d dimensions is
//!
//! ```text
//! g(x, q) = H(x, centered averages) − (θ / (d λ)) Σ_axis (q_fwd − q_bwd),
//! λ = ρ_α / h,
//! ```
//!
//! i.e. an artificial-viscosity coefficient θ/d per axis. With this split the
//! scheme's monotone window is 0 < θ ≤ 1 − 2^{−α} for every d (the center
//! weight stays (2 − 2^{1−α}) − 2θ ≥ 0), and at α = 1, d = 2, θ = 1/2 the
//! update reduces to the classical two-dimensional Lax-Friedrichs average.
//! The price is a factor d on the lower CFL edge: θ ≥ d λ L / 2.

use crate::caputo::rho;
use crate::error::{HjError, Result};
use crate::numerics::gamma;
use std::sync::Arc;

/// Flux flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Evaluate H on forward differences (monotone for H nonincreasing in p).
    UpwindPlus,
    /// Evaluate H on backward differences (monotone for H nondecreasing in p).
    UpwindMinus,
    /// Centered evaluation plus artificial viscosity θ.
    LaxFriedrichs,
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Flavor::UpwindPlus => "upwind_plus",
            Flavor::UpwindMinus => "upwind_minus",
            Flavor::LaxFriedrichs => "lax_friedrichs",
        };
        f.write_str(s)
    }
}

type HFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// A numerical Hamiltonian: the analytic H(x, p), a Lipschitz bound for it
/// in p over the relevant gradient range, a flavor, and (for Lax-Friedrichs)
/// the dissipation parameter θ.
#[derive(Clone)]
pub struct NumericalHamiltonian {
    pub flavor: Flavor,
    h: HFn,
    /// Lipschitz bound L for p ↦ H(x, p) over the gradient range of the run.
    pub lipschitz_bound: f64,
    /// Dissipation θ (Lax-Friedrichs only).
    pub theta: Option<f64>,
    /// Largest |p| for which `lipschitz_bound` is justified (`None` when it
    /// holds for every p, e.g. H = |p|). Runs warn when realized gradients
    /// leave this range.
    pub valid_gradient_range: Option<f64>,
}

impl std::fmt::Debug for NumericalHamiltonian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumericalHamiltonian")
            .field("flavor", &self.flavor)
            .field("lipschitz_bound", &self.lipschitz_bound)
            .field("theta", &self.theta)
            .finish()
    }
}

/// Monotone upper edge for θ at fractional order α.
pub fn theta_upper(alpha: f64) -> f64 {
    1.0 - 2.0f64.powf(-alpha)
}

fn validate_lipschitz(l: f64) -> Result<()> {
    if !(l >= 0.0) || !l.is_finite() {
        return Err(HjError::Config(format!(
            "Lipschitz bound must be finite and non-negative, got {l}"
        )));
    }
    Ok(())
}

impl NumericalHamiltonian {
    /// Upwind flux using forward differences.
    pub fn upwind_plus(
        h: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        lipschitz_bound: f64,
    ) -> Result<Self> {
        validate_lipschitz(lipschitz_bound)?;
        Ok(Self {
            flavor: Flavor::UpwindPlus,
            h: Arc::new(h),
            lipschitz_bound,
            theta: None,
            valid_gradient_range: None,
        })
    }

    /// Upwind flux using backward differences.
    pub fn upwind_minus(
        h: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        lipschitz_bound: f64,
    ) -> Result<Self> {
        validate_lipschitz(lipschitz_bound)?;
        Ok(Self {
            flavor: Flavor::UpwindMinus,
            h: Arc::new(h),
            lipschitz_bound,
            theta: None,
            valid_gradient_range: None,
        })
    }

    /// Lax-Friedrichs flux. θ must lie in the monotone window
    /// (0, 1 − 2^{−α}] for the order α the flux will run under.
    pub fn lax_friedrichs(
        h: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        lipschitz_bound: f64,
        theta: f64,
        alpha: f64,
    ) -> Result<Self> {
        validate_lipschitz(lipschitz_bound)?;
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(HjError::Config(format!(
                "fractional order must satisfy 0 < alpha <= 1, got {alpha}"
            )));
        }
        let upper = theta_upper(alpha);
        if !(theta > 0.0) || theta > upper {
            return Err(HjError::Config(format!(
                "theta = {theta} outside the monotone window (0, {upper}] for alpha = {alpha}"
            )));
        }
        Ok(Self {
            flavor: Flavor::LaxFriedrichs,
            h: Arc::new(h),
            lipschitz_bound,
            theta: Some(theta),
            valid_gradient_range: None,
        })
    }

    /// Declare the |p| range over which the Lipschitz bound is justified.
    pub fn with_gradient_range(mut self, range: f64) -> Self {
        self.valid_gradient_range = Some(range);
        self
    }

    /// Evaluate the analytic H(x, p).
    pub fn hamiltonian(&self, x: &[f64], p: &[f64]) -> f64 {
        (self.h)(x, p)
    }

    /// Evaluate the numerical flux g(x, q) with λ = ρ_α / h.
    ///
    /// `q` holds forward/backward difference pairs per axis (length 2 or 4).
    #[inline]
    pub fn flux_eval(&self, x: &[f64], q: &[f64], lambda: f64) -> f64 {
        let dim = q.len() / 2;
        debug_assert!(q.len() == 2 * dim && (dim == 1 || dim == 2));
        let mut p = [0.0f64; 2];
        match self.flavor {
            Flavor::UpwindPlus => {
                for a in 0..dim {
                    p[a] = q[2 * a];
                }
                (self.h)(x, &p[..dim])
            }
            Flavor::UpwindMinus => {
                for a in 0..dim {
                    p[a] = q[2 * a + 1];
                }
                (self.h)(x, &p[..dim])
            }
            Flavor::LaxFriedrichs => {
                let theta = self.theta.expect("LF flux carries theta");
                let mut diss = 0.0;
                for a in 0..dim {
                    p[a] = 0.5 * (q[2 * a] + q[2 * a + 1]);
                    diss += q[2 * a] - q[2 * a + 1];
                }
                (self.h)(x, &p[..dim]) - theta / (dim as f64 * lambda) * diss
            }
        }
    }

    /// CFL/monotonicity check at (α, Δt, h) in `dim` dimensions.
    pub fn cfl_check(&self, alpha: f64, dt: f64, h: f64, dim: usize) -> CflReport {
        let l = self.lipschitz_bound;
        match self.flavor {
            Flavor::UpwindPlus | Flavor::UpwindMinus => {
                // Δt^α L / h ≤ (2 − 2^{1−α}) / Γ(2−α).
                let lhs = dt.powf(alpha) * l / h;
                let rhs = (2.0 - 2.0f64.powf(1.0 - alpha)) / gamma(2.0 - alpha);
                CflReport {
                    flavor: self.flavor,
                    alpha,
                    dt,
                    h,
                    dim,
                    lipschitz: l,
                    lhs,
                    rhs,
                    theta: None,
                    theta_window: None,
                    satisfied: lhs <= rhs,
                }
            }
            Flavor::LaxFriedrichs => {
                // d λ L / 2 ≤ θ ≤ 1 − 2^{−α}, λ = ρ_α / h.
                let theta = self.theta.expect("LF flux carries theta");
                let lower = dim as f64 * rho(alpha, dt) * l / (2.0 * h);
                let upper = theta_upper(alpha);
                CflReport {
                    flavor: self.flavor,
                    alpha,
                    dt,
                    h,
                    dim,
                    lipschitz: l,
                    lhs: lower,
                    rhs: theta,
                    theta: Some(theta),
                    theta_window: Some([lower, upper]),
                    satisfied: lower <= theta && theta <= upper,
                }
            }
        }
    }

    /// Largest stable Δt at (α, h) in `dim` dimensions, times a 0.95 safety
    /// factor (applied after the 1/α power). Infinite when L = 0.
    pub fn suggest_dt(&self, alpha: f64, h: f64, dim: usize) -> f64 {
        let l = self.lipschitz_bound;
        if l == 0.0 {
            return f64::INFINITY;
        }
        let dt_max = match self.flavor {
            Flavor::UpwindPlus | Flavor::UpwindMinus => {
                let rhs = (2.0 - 2.0f64.powf(1.0 - alpha)) / gamma(2.0 - alpha);
                (h * rhs / l).powf(1.0 / alpha)
            }
            Flavor::LaxFriedrichs => {
                let theta = self.theta.expect("LF flux carries theta");
                (2.0 * h * theta / (dim as f64 * gamma(2.0 - alpha) * l)).powf(1.0 / alpha)
            }
        };
        0.95 * dt_max
    }
}

/// Outcome of a CFL check; serialized into run manifests.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CflReport {
    pub flavor: Flavor,
    pub alpha: f64,
    pub dt: f64,
    pub h: f64,
    pub dim: usize,
    pub lipschitz: f64,
    /// Upwind: Δt^α L / h. Lax-Friedrichs: the required lower edge d λ L / 2.
    pub lhs: f64,
    /// Upwind: (2 − 2^{1−α}) / Γ(2−α). Lax-Friedrichs: the θ in use.
    pub rhs: f64,
    pub theta: Option<f64>,
    /// Admissible θ window [d λ L / 2, 1 − 2^{−α}] (Lax-Friedrichs only).
    pub theta_window: Option<[f64; 2]>,
    pub satisfied: bool,
}

impl CflReport {
    /// Human-readable one-liner for logs and error messages.
    pub fn describe(&self) -> String {
        match self.theta_window {
            Some([lo, up]) => format!(
                "{} alpha={} dt={} h={} dim={}: theta={} window=[{lo:.6}, {up:.6}] satisfied={}",
                self.flavor,
                self.alpha,
                self.dt,
                self.h,
                self.dim,
                self.rhs,
                self.satisfied
            ),
            None => format!(
                "{} alpha={} dt={} h={} dim={}: lhs={:.6} rhs={:.6} satisfied={}",
                self.flavor, self.alpha, self.dt, self.h, self.dim, self.lhs, self.rhs, self.satisfied
            ),
        }
    }
}

/// λ = ρ_α / h, the mesh ratio entering the Lax-Friedrichs flux.
pub fn lambda(alpha: f64, dt: f64, h: f64) -> f64 {
    rho(alpha, dt) / h
}
