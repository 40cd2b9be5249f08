//! Discrete Caputo time-fractional derivative of order α ∈ (0, 1] on a
//! uniform time grid (the classical L1 scheme).
//!
//! At time level n+1 the derivative of a sampled function U is
//!
//! ```text
//! D^α U^{n+1} = ( U^{n+1} − Σ_{m=0}^{n} c_m^{n+1} U^m ) / ρ_α ,
//! ρ_α = Γ(2−α) Δt^α ,
//! ```
//!
//! with convex history weights
//!
//! ```text
//! c_0^{n+1} = (n+1)^{1−α} − n^{1−α}
//! c_m^{n+1} = 2(n+1−m)^{1−α} − (n+2−m)^{1−α} − (n−m)^{1−α},  1 ≤ m ≤ n,
//! ```
//!
//! under the convention 0^{1−α} := 0 (also at α = 1, where 0^0 := 0). At
//! α = 1 the weights degenerate to (0, …, 0, 1) exactly and the formula is
//! the backward Euler difference quotient.
//!
//! The weights depend on (n, m) only through shifted differences of
//! k ↦ k^{1−α}: with
//!
//! ```text
//! e_k = k^{1−α} − (k−1)^{1−α},   d_k = 2 k^{1−α} − (k+1)^{1−α} − (k−1)^{1−α},
//! ```
//!
//! one has c_0^{n+1} = e_{n+1} and c_m^{n+1} = d_{n+1−m} for m ≥ 1. A
//! [`WeightLadder`] stores (e, d) once and extends them in O(1) amortized
//! per time level; the direct formula is kept as an independent oracle.

use crate::error::{HjError, Result};
use crate::numerics::{gamma, kahan_sum, powf_zero, KahanSum};

/// History weights for one time level of the discrete fractional derivative.
#[derive(Debug, Clone)]
pub struct CaputoWeights {
    /// Fractional order α ∈ (0, 1].
    pub alpha: f64,
    /// Level index: these are the weights c_m^{n+1}, m = 0..=n.
    pub n: usize,
    /// The weights, `c[m]` = c_m^{n+1}; length n+1.
    pub c: Vec<f64>,
    /// Scale ρ_α = Γ(2−α) Δt^α.
    pub rho: f64,
    /// Time step Δt.
    pub dt: f64,
}

fn validate_alpha_dt(alpha: f64, dt: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(HjError::Config(format!(
            "fractional order must satisfy 0 < alpha <= 1, got {alpha}"
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(HjError::Config(format!(
            "time step must be positive and finite, got {dt}"
        )));
    }
    Ok(())
}

/// Scale factor ρ_α = Γ(2−α) Δt^α. At α = 1 this is Δt exactly.
pub fn rho(alpha: f64, dt: f64) -> f64 {
    gamma(2.0 - alpha) * dt.powf(alpha)
}

/// Weights by the direct two-power formula (the oracle path).
pub fn weights(alpha: f64, n: usize, dt: f64) -> Result<CaputoWeights> {
    validate_alpha_dt(alpha, dt)?;
    let p = 1.0 - alpha;
    let mut c = Vec::with_capacity(n + 1);
    let np1 = (n + 1) as f64;
    c.push(powf_zero(np1, p) - powf_zero(n as f64, p));
    for m in 1..=n {
        let k = (n + 1 - m) as f64;
        c.push(2.0 * powf_zero(k, p) - powf_zero(k + 1.0, p) - powf_zero(k - 1.0, p));
    }
    Ok(CaputoWeights {
        alpha,
        n,
        c,
        rho: rho(alpha, dt),
        dt,
    })
}

/// Incremental weight producer: O(1) amortized work per time level.
#[derive(Debug, Clone)]
pub struct WeightLadder {
    alpha: f64,
    dt: f64,
    rho: f64,
    /// `pow[k]` = k^{1−α} under the 0^{1−α} := 0 convention; grows on demand.
    pow: Vec<f64>,
    /// `e[k-1]` = e_k = k^{1−α} − (k−1)^{1−α}.
    e: Vec<f64>,
    /// `d[k-1]` = d_k = 2k^{1−α} − (k+1)^{1−α} − (k−1)^{1−α}.
    d: Vec<f64>,
    /// Current level: `coeff` serves c_m^{n+1}.
    n: usize,
}

impl WeightLadder {
    pub fn new(alpha: f64, dt: f64) -> Result<Self> {
        validate_alpha_dt(alpha, dt)?;
        let p = 1.0 - alpha;
        let pow = vec![powf_zero(0.0, p), powf_zero(1.0, p)];
        let e = vec![pow[1] - pow[0]];
        Ok(Self {
            alpha,
            dt,
            rho: rho(alpha, dt),
            pow,
            e,
            d: Vec::new(),
            n: 0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Level currently served: weights c_m^{n+1}, m = 0..=n.
    pub fn level(&self) -> usize {
        self.n
    }

    /// Move from level n to level n+1 (prepend e_{n+2}, shift the tail).
    pub fn advance(&mut self) {
        let p = 1.0 - self.alpha;
        self.n += 1;
        let k = self.n + 1; // need e_{n+1} with the *new* n, i.e. index k
        while self.pow.len() <= k {
            self.pow.push(powf_zero(self.pow.len() as f64, p));
        }
        self.e.push(self.pow[k] - self.pow[k - 1]);
        // d_n with the new n: uses pow up to n+1 = k.
        let j = self.n;
        self.d
            .push(2.0 * self.pow[j] - self.pow[j + 1] - self.pow[j - 1]);
    }

    /// Advance until the ladder serves level `n`.
    pub fn advance_to(&mut self, n: usize) {
        while self.n < n {
            self.advance();
        }
    }

    /// Weight c_m^{n+1} at the current level.
    pub fn coeff(&self, m: usize) -> f64 {
        debug_assert!(m <= self.n);
        if m == 0 {
            self.e[self.n]
        } else {
            self.d[self.n - m]
        }
    }

    /// Materialize the current level's weights as a `CaputoWeights`.
    pub fn materialize(&self) -> CaputoWeights {
        let c = (0..=self.n).map(|m| self.coeff(m)).collect();
        CaputoWeights {
            alpha: self.alpha,
            n: self.n,
            c,
            rho: self.rho,
            dt: self.dt,
        }
    }

    /// e_k table (index k-1), exposed for identity checks.
    pub fn e_table(&self) -> &[f64] {
        &self.e
    }

    /// d_k table (index k-1), exposed for identity checks.
    pub fn d_table(&self) -> &[f64] {
        &self.d
    }
}

/// Apply the discrete derivative to a history `U^0..=U^{n+1}`
/// (`history.len()` must be `w.n + 2`). Uses compensated summation.
pub fn caputo_apply(w: &CaputoWeights, history: &[f64]) -> Result<f64> {
    if history.len() != w.n + 2 {
        return Err(HjError::Config(format!(
            "history length {} does not match weight level n={} (need n+2 = {})",
            history.len(),
            w.n,
            w.n + 2
        )));
    }
    let mut acc = KahanSum::new();
    for (m, &u) in history.iter().take(w.n + 1).enumerate() {
        acc.add(w.c[m] * u);
    }
    Ok((history[w.n + 1] - acc.value()) / w.rho)
}

/// Discrete derivative of a sampled function at every level 1..=N.
///
/// `samples[m]` = f(m Δt), m = 0..=N; returns D^α f at t_1, …, t_N.
pub fn l1_derivative(alpha: f64, dt: f64, samples: &[f64]) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return Err(HjError::Config(
            "need at least two samples for a derivative".into(),
        ));
    }
    let mut ladder = WeightLadder::new(alpha, dt)?;
    let mut out = Vec::with_capacity(samples.len() - 1);
    for n in 0..samples.len() - 1 {
        ladder.advance_to(n);
        let mut acc = KahanSum::new();
        for (m, &s) in samples.iter().take(n + 1).enumerate() {
            acc.add(ladder.coeff(m) * s);
        }
        out.push((samples[n + 1] - acc.value()) / ladder.rho());
    }
    Ok(out)
}

/// Empirical truncation-order report for the discrete derivative.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub alpha: f64,
    pub t_star: f64,
    pub dt: f64,
    /// |L1 − exact| at Δt.
    pub err_coarse: f64,
    /// |L1 − exact| at Δt/2.
    pub err_fine: f64,
    /// log2(err_coarse / err_fine); ≈ 2−α for C² test functions.
    pub order: f64,
}

/// Measure the empirical truncation order of the discrete derivative on a
/// smooth test function at `t_star`, comparing step sizes Δt and Δt/2.
///
/// `t_star / dt` must be an integer (within rounding slack).
pub fn truncation_order(
    alpha: f64,
    f: &dyn Fn(f64) -> f64,
    exact_derivative_at_t_star: f64,
    t_star: f64,
    dt: f64,
) -> Result<TruncationReport> {
    validate_alpha_dt(alpha, dt)?;
    if !(t_star > 0.0) {
        return Err(HjError::Config(format!(
            "t_star must be positive, got {t_star}"
        )));
    }
    let err_at = |h: f64| -> Result<f64> {
        let steps_f = t_star / h;
        let steps = steps_f.round() as usize;
        if steps == 0 || (steps_f - steps as f64).abs() > 1e-9 * steps_f.max(1.0) {
            return Err(HjError::Config(format!(
                "t_star/dt = {steps_f} is not an integer number of steps"
            )));
        }
        let samples: Vec<f64> = (0..=steps).map(|m| f(m as f64 * h)).collect();
        let d = l1_derivative(alpha, h, &samples)?;
        Ok((d[steps - 1] - exact_derivative_at_t_star).abs())
    };
    let err_coarse = err_at(dt)?;
    let err_fine = err_at(dt / 2.0)?;
    Ok(TruncationReport {
        alpha,
        t_star,
        dt,
        err_coarse,
        err_fine,
        order: (err_coarse / err_fine).log2(),
    })
}

/// Sum of the current-level weights (should be 1 by telescoping).
pub fn weight_sum(w: &CaputoWeights) -> f64 {
    kahan_sum(w.c.iter().cloned())
}
