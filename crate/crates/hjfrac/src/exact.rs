//! Exact-solution oracles for the two benchmark problems.
//!
//! Benchmark 1 (quadratic Hamiltonian, obstacle-type datum):
//!   ∂ᵗᵅ u + |Du|²/2 = 0,  u(x,0) = min{0, |x|² − 1},
//!   u(x,t) = min{0, |x|² f(t) − 1}
//! with f(t) = Σ_n f_n t^{αn}, f_0 = 1 and
//!   f_n = −(2/β_n) Σ_{i+j=n−1} f_i f_j,  β_n = Γ(αn+1)/Γ(α(n−1)+1).
//! The series has a finite radius: in z = t^α it is estimated by a root
//! test on trailing coefficients and converted through T = r_z^{1/α}. The
//! oracle refuses evaluation past 0.95·T.
//!
//! Benchmark 2 (eikonal Hamiltonian, smooth concave datum):
//!   ∂ᵗᵅ u + |Du| = 0,  u(x,0) = −|x|²,
//!   u(x,t) = −|x|² − t^{2α}/(α Γ(2α)) − 2 t^α |x| / (α Γ(α)),
//! valid for all t; at α = 1 it collapses to −(|x| + t)².

use crate::error::{HjError, Result};
use crate::numerics::{gamma, gamma_ratio, KahanSum, PowerSeries};
use crate::solver::ExactOracle;

/// Coefficient-magnitude guard: the recurrence stops before a coefficient
/// exceeds this (keeps small-α series finite and the root test meaningful).
const COEFF_OVERFLOW_GUARD: f64 = 1e280;

/// Fraction of the critical time up to which benchmark-1 evaluations are
/// served.
pub const HORIZON_SAFETY: f64 = 0.95;

/// Trailing-window length for the root-test radius estimate.
const RADIUS_WINDOW: usize = 50;

fn validate_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(HjError::Config(format!(
            "fractional order must satisfy 0 < alpha <= 1, got {alpha}"
        )));
    }
    Ok(())
}

fn validate_dim(dim: usize) -> Result<()> {
    if dim != 1 && dim != 2 {
        return Err(HjError::Config(format!("dim must be 1 or 2, got {dim}")));
    }
    Ok(())
}

/// Coefficients and their β-weighted numerators.
struct FData {
    /// f_0, f_1, …, f_M (possibly truncated by the guards).
    coeffs: Vec<f64>,
    /// numer[n] = β_n f_n = −2 Σ_{i+j=n−1} f_i f_j for n ≥ 1 (numer[0] = 0).
    /// Kept separately so residual evaluation avoids the divide/multiply
    /// round trip through β_n.
    numer: Vec<f64>,
}

fn f_data(alpha: f64, n_terms: usize) -> Result<FData> {
    validate_alpha(alpha)?;
    if n_terms == 0 {
        return Err(HjError::Config("series needs at least one term".into()));
    }
    let mut coeffs = vec![1.0f64];
    let mut numer = vec![0.0f64];
    for n in 1..=n_terms {
        let mut conv = KahanSum::new();
        for i in 0..n {
            conv.add(coeffs[i] * coeffs[n - 1 - i]);
        }
        let num = -2.0 * conv.value();
        // β_n needs Γ(αn + 1) unless the ratio shortcut applies (α = 1),
        // so the Γ-domain guard is the finiteness of β itself.
        let beta = gamma_ratio(alpha * n as f64 + 1.0, alpha * (n as f64 - 1.0) + 1.0);
        let fn_ = num / beta;
        if !beta.is_finite() || !fn_.is_finite() || fn_.abs() > COEFF_OVERFLOW_GUARD {
            break;
        }
        coeffs.push(fn_);
        numer.push(num);
    }
    Ok(FData { coeffs, numer })
}

/// Coefficients f_0..f_M of the benchmark-1 series in z = t^α.
///
/// Truncated early when Γ arguments would leave the gamma domain or a
/// coefficient would overflow the magnitude guard.
pub fn f_coefficients(alpha: f64, n_terms: usize) -> Result<PowerSeries> {
    Ok(PowerSeries::new(f_data(alpha, n_terms)?.coeffs))
}

/// Critical (blow-up) time of the benchmark-1 series: the root-test radius
/// in z = t^α, converted through T = r_z^{1/α}.
pub fn critical_time(alpha: f64, n_terms: usize) -> Result<f64> {
    let series = f_coefficients(alpha, n_terms)?;
    let r_z = series
        .radius_estimate(RADIUS_WINDOW)
        .ok_or_else(|| HjError::Oracle("series carries no growth information".into()))?;
    Ok(r_z.powf(1.0 / alpha))
}

/// Exact solution of benchmark 1 with its coefficient series and blow-up
/// horizon. Evaluations are refused past `HORIZON_SAFETY · critical_time`.
pub struct Test1Solution {
    pub alpha: f64,
    pub dim: usize,
    pub critical_time: f64,
    series: PowerSeries,
    numer: Vec<f64>,
}

impl Test1Solution {
    pub fn new(alpha: f64, dim: usize, n_terms: usize) -> Result<Self> {
        validate_dim(dim)?;
        let data = f_data(alpha, n_terms)?;
        let series = PowerSeries::new(data.coeffs);
        let r_z = series
            .radius_estimate(RADIUS_WINDOW)
            .ok_or_else(|| HjError::Oracle("series carries no growth information".into()))?;
        let critical_time = r_z.powf(1.0 / alpha);
        if !(critical_time > 0.0) || !critical_time.is_finite() {
            return Err(HjError::Oracle(format!(
                "critical time estimate {critical_time} is not positive finite"
            )));
        }
        Ok(Self {
            alpha,
            dim,
            critical_time,
            series,
            numer: data.numer,
        })
    }

    /// Default construction: 400 series terms.
    pub fn with_defaults(alpha: f64, dim: usize) -> Result<Self> {
        Self::new(alpha, dim, 400)
    }

    pub fn series(&self) -> &PowerSeries {
        &self.series
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if t < 0.0 {
            return Err(HjError::Oracle(format!("negative time {t}")));
        }
        let horizon = HORIZON_SAFETY * self.critical_time;
        if t > horizon {
            return Err(HjError::Oracle(format!(
                "t = {t} exceeds the oracle horizon {horizon} (0.95 of the critical time {})",
                self.critical_time
            )));
        }
        Ok(())
    }

    /// The time factor f(t).
    pub fn f(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.series.eval(t.powf(self.alpha)))
    }

    /// Residual of the series in the time equation ∂ᵗᵅ f + 2 f² = 0, using
    /// term-wise ∂ᵗᵅ t^{αn} = β_n t^{α(n−1)}. Zero in exact arithmetic; at
    /// t → 0⁺ it is exactly β₁f₁ + 2 = 0 by construction.
    pub fn residual(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let z = t.powf(self.alpha);
        let mut acc = KahanSum::new();
        // Horner over the numerators β_n f_n, lowest power first.
        let mut zpow = 1.0f64;
        for n in 1..self.series.len() {
            acc.add(self.numer[n] * zpow);
            zpow *= z;
        }
        let fval = self.series.eval(z);
        Ok((acc.value() + 2.0 * fval * fval).abs())
    }
}

impl ExactOracle for Test1Solution {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64> {
        if x.len() != self.dim {
            return Err(HjError::Config(format!(
                "point has {} coordinates, problem is {}-dimensional",
                x.len(),
                self.dim
            )));
        }
        let f = self.f(t)?;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Ok((r2 * f - 1.0).min(0.0))
    }

    fn horizon(&self) -> Option<f64> {
        Some(HORIZON_SAFETY * self.critical_time)
    }
}

/// Exact solution of benchmark 2 (valid for all t ≥ 0).
pub struct Test2Solution {
    pub alpha: f64,
    pub dim: usize,
}

impl Test2Solution {
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        validate_alpha(alpha)?;
        validate_dim(dim)?;
        Ok(Self { alpha, dim })
    }

    fn norm(&self, x: &[f64]) -> f64 {
        if self.dim == 1 {
            x[0].abs()
        } else {
            x.iter().map(|v| v * v).sum::<f64>().sqrt()
        }
    }
}

impl ExactOracle for Test2Solution {
    fn eval(&self, x: &[f64], t: f64) -> Result<f64> {
        if x.len() != self.dim {
            return Err(HjError::Config(format!(
                "point has {} coordinates, problem is {}-dimensional",
                x.len(),
                self.dim
            )));
        }
        if t < 0.0 {
            return Err(HjError::Oracle(format!("negative time {t}")));
        }
        let a = self.alpha;
        let r = self.norm(x);
        Ok(-r * r
            - t.powf(2.0 * a) / (a * gamma(2.0 * a))
            - 2.0 * t.powf(a) * r / (a * gamma(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_coefficients_match_closed_forms() {
        // f₁ = −2/Γ(α+1), f₂ = 8/Γ(2α+1).
        for &alpha in &[0.3, 0.5, 0.8, 1.0] {
            let s = f_coefficients(alpha, 10).unwrap();
            let c = s.coeffs();
            assert_eq!(c[0], 1.0);
            assert_relative_eq!(c[1], -2.0 / gamma(alpha + 1.0), max_relative = 1e-13);
            assert_relative_eq!(c[2], 8.0 / gamma(2.0 * alpha + 1.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn alpha_one_coefficients_are_powers_of_minus_two_exactly() {
        let s = f_coefficients(1.0, 20).unwrap();
        let c = s.coeffs();
        assert_eq!(c.len(), 21);
        let mut want = 1.0f64;
        for (n, &cn) in c.iter().enumerate().take(21) {
            assert_eq!(cn.to_bits(), want.to_bits(), "n = {n}");
            want *= -2.0;
        }
    }

    #[test]
    fn small_alpha_series_stays_finite_under_guards() {
        for &alpha in &[0.2, 0.3, 0.4] {
            let s = f_coefficients(alpha, 400).unwrap();
            assert!(s.coeffs().iter().all(|c| c.is_finite()));
            let t = critical_time(alpha, 400).unwrap();
            assert!(t > 0.0 && t.is_finite(), "alpha={alpha}: T = {t}");
        }
    }

    #[test]
    fn critical_time_values() {
        // α = 1: geometric series Σ(−2t)ⁿ has radius exactly 1/2.
        let t1 = critical_time(1.0, 400).unwrap();
        assert!((t1 - 0.5).abs() <= 0.02 * 0.5, "T(1) = {t1}");
        // Monotone-ish table sanity for the fractional range.
        let t08 = critical_time(0.8, 400).unwrap();
        assert_relative_eq!(t08, 0.2664, max_relative = 2e-2);
        let t05 = critical_time(0.5, 400).unwrap();
        assert_relative_eq!(t05, 0.0450, max_relative = 2e-2);
    }

    #[test]
    fn critical_time_is_deterministic() {
        let a = critical_time(0.7, 400).unwrap();
        let b = critical_time(0.7, 400).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn test1_at_time_zero_is_the_initial_datum() {
        let s = Test1Solution::with_defaults(0.8, 1).unwrap();
        for &x in &[-2.0, -0.5, 0.0, 0.3, 1.0, 1.7] {
            let u = s.eval(&[x], 0.0).unwrap();
            assert_relative_eq!(u, (x * x - 1.0).min(0.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn test1_worked_examples() {
        // α = 1, t = 0.2, x = 1: f = 1/(1 + 0.4) = 5/7, u = 5/7 − 1 = −2/7.
        let s1 = Test1Solution::with_defaults(1.0, 1).unwrap();
        assert_relative_eq!(
            s1.eval(&[1.0], 0.2).unwrap(),
            -2.0 / 7.0,
            max_relative = 1e-12
        );
        // α = 0.8, t = 0.2, x = 0: the obstacle keeps u = −1.
        let s2 = Test1Solution::with_defaults(0.8, 1).unwrap();
        assert_relative_eq!(s2.eval(&[0.0], 0.2).unwrap(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn test1_refuses_past_horizon() {
        let s = Test1Solution::with_defaults(0.5, 1).unwrap();
        let horizon = s.horizon().unwrap();
        assert!(s.eval(&[0.5], horizon * 0.999).is_ok());
        let err = s.eval(&[0.5], horizon * 1.01);
        assert!(matches!(err, Err(HjError::Oracle(_))));
    }

    #[test]
    fn test1_alpha_one_matches_rational_closed_form() {
        // f(t) = 1/(1+2t) for α = 1, so u = min{0, x²/(1+2t) − 1}.
        let s = Test1Solution::with_defaults(1.0, 1).unwrap();
        for &t in &[0.0, 0.1, 0.25, 0.45] {
            for &x in &[-1.5f64, -0.4, 0.0, 0.8, 1.2] {
                let want = (x * x / (1.0 + 2.0 * t) - 1.0).min(0.0);
                assert!(
                    (s.eval(&[x], t).unwrap() - want).abs() < 1e-8,
                    "t={t} x={x}"
                );
            }
        }
    }

    #[test]
    fn residual_vanishes_at_origin_exactly() {
        for &alpha in &[0.3, 0.5, 0.8, 1.0] {
            let s = Test1Solution::with_defaults(alpha, 1).unwrap();
            assert_eq!(s.residual(0.0).unwrap(), 0.0, "alpha = {alpha}");
        }
    }

    #[test]
    fn residual_is_tiny_at_half_critical_time() {
        for &alpha in &[0.5, 0.8] {
            let s = Test1Solution::new(alpha, 1, 400).unwrap();
            let r = s.residual(0.5 * s.critical_time).unwrap();
            assert!(r <= 1e-8, "alpha={alpha}: residual {r}");
        }
    }

    #[test]
    fn residual_drops_with_more_terms() {
        // Doubling the series length must shrink the residual markedly
        // (at a point inside the radius where truncation dominates).
        let alpha = 0.8;
        let coarse = Test1Solution::new(alpha, 1, 25).unwrap();
        let fine = Test1Solution::new(alpha, 1, 50).unwrap();
        let t = 0.6 * coarse.critical_time;
        let rc = coarse.residual(t).unwrap();
        let rf = fine.residual(t).unwrap();
        assert!(
            rf * 10.0 <= rc,
            "residual {rc} -> {rf} did not drop 10x at t = {t}"
        );
    }

    #[test]
    fn test2_at_time_zero_is_the_initial_datum() {
        let s = Test2Solution::new(0.6, 1).unwrap();
        for &x in &[-2.0, -0.3, 0.0, 1.1] {
            assert_relative_eq!(s.eval(&[x], 0.0).unwrap(), -x * x, epsilon = 1e-15);
        }
    }

    #[test]
    fn test2_worked_examples() {
        // α = 0.5, t = 0.04, x = 0: −t^{2α}/(αΓ(2α)) = −0.04/0.5 = −0.08.
        let s = Test2Solution::new(0.5, 1).unwrap();
        assert_relative_eq!(s.eval(&[0.0], 0.04).unwrap(), -0.08, max_relative = 1e-13);
    }

    #[test]
    fn test2_alpha_one_is_squared_distance_wave() {
        let s = Test2Solution::new(1.0, 1).unwrap();
        for &t in &[0.0, 0.1, 0.5, 1.0] {
            for &x in &[-1.5f64, -0.2, 0.0, 0.7, 2.0] {
                let want = -(x.abs() + t) * (x.abs() + t);
                assert!(
                    (s.eval(&[x], t).unwrap() - want).abs() <= 1e-12,
                    "t={t} x={x}"
                );
            }
        }
        // And in 2D.
        let s2 = Test2Solution::new(1.0, 2).unwrap();
        let (x, y, t) = (0.3, -0.4, 0.25);
        let r = 0.5f64; // |(0.3, −0.4)|
        assert!((s2.eval(&[x, y], t).unwrap() + (r + t) * (r + t)).abs() <= 1e-12);
    }

    #[test]
    fn test2_caputo_self_consistency() {
        // Sample u(x₀, ·) on a fine time grid, apply the discrete fractional
        // derivative, and compare with −|∂ₓu| at the final time.
        use crate::caputo::l1_derivative;
        let x0 = 1.0;
        let t_final = 0.2f64;
        let dt = 1e-4;
        for &alpha in &[0.5, 0.8] {
            let s = Test2Solution::new(alpha, 1).unwrap();
            let n = (t_final / dt).round() as usize;
            let samples: Vec<f64> = (0..=n)
                .map(|m| s.eval(&[x0], m as f64 * dt).unwrap())
                .collect();
            let d = l1_derivative(alpha, dt, &samples).unwrap();
            let grad = -2.0 * x0 - 2.0 * t_final.powf(alpha) / (alpha * gamma(alpha));
            let residual = (d[n - 1] + grad.abs()).abs();
            assert!(residual <= 5e-3, "alpha={alpha}: residual {residual}");
        }
    }

    #[test]
    fn dimension_mismatch_is_a_config_error() {
        let s = Test2Solution::new(0.5, 2).unwrap();
        assert!(matches!(s.eval(&[1.0], 0.1), Err(HjError::Config(_))));
        let s1 = Test1Solution::with_defaults(0.5, 1).unwrap();
        assert!(matches!(s1.eval(&[1.0, 2.0], 0.01), Err(HjError::Config(_))));
    }

    /// Independent integral-equation oracle: product-trapezoidal Picard
    /// iteration for f(t) = 1 − (2/Γ(α)) ∫₀ᵗ (t−s)^{α−1} f(s)² ds on a
    /// graded mesh.
    fn volterra_f(alpha: f64, t_end: f64, n_mesh: usize) -> f64 {
        let nodes: Vec<f64> = (0..=n_mesh)
            .map(|j| t_end * ((j as f64 / n_mesh as f64).powi(2)))
            .collect();
        let mut f = vec![1.0f64; n_mesh + 1];
        let pref = 2.0 / gamma(alpha);
        for _ in 0..200 {
            let mut next = vec![1.0f64; n_mesh + 1];
            let sq: Vec<f64> = f.iter().map(|v| v * v).collect();
            for i in 1..=n_mesh {
                let t = nodes[i];
                let mut integral = 0.0f64;
                for j in 0..i {
                    let (t0, t1) = (nodes[j], nodes[j + 1]);
                    let (a0, a1) = (sq[j], sq[j + 1]);
                    let b = (a1 - a0) / (t1 - t0);
                    let (ta, tb) = (t - t1, t - t0); // 0 ≤ ta < tb
                    let i0 = (tb.powf(alpha) - ta.powf(alpha)) / alpha;
                    let i1 = (tb.powf(alpha + 1.0) - ta.powf(alpha + 1.0)) / (alpha + 1.0);
                    // ∫ (t−s)^{α−1} (a0 + b (s−t0)) ds over [t0, t1]
                    integral += (a0 + b * (t - t0)) * i0 - b * i1;
                }
                next[i] = 1.0 - pref * integral;
            }
            let diff = f
                .iter()
                .zip(&next)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            f = next;
            if diff < 1e-13 {
                break;
            }
        }
        f[n_mesh]
    }

    #[test]
    fn series_agrees_with_integral_equation_oracle() {
        // Two independent routes to f(t): power series vs Volterra fixed
        // point. Also pins the frozen reference value at (α, t) = (0.8, 0.2).
        let s = Test1Solution::with_defaults(0.8, 1).unwrap();
        let series_val = s.f(0.2).unwrap();
        assert_relative_eq!(series_val, 0.6522569029474787, max_relative = 1e-12);
        let volterra_val = volterra_f(0.8, 0.2, 400);
        assert_relative_eq!(series_val, volterra_val, max_relative = 5e-4);

        let s5 = Test1Solution::with_defaults(0.5, 1).unwrap();
        let t5 = 0.5 * s5.critical_time;
        assert_relative_eq!(
            s5.f(t5).unwrap(),
            volterra_f(0.5, t5, 400),
            max_relative = 5e-4
        );

        // α = 1 closed form anchors the integrator itself.
        assert_relative_eq!(
            volterra_f(1.0, 0.2, 400),
            1.0 / 1.4,
            max_relative = 1e-4
        );
    }
}
