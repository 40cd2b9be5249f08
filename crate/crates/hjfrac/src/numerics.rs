//! Scalar numerical kernels: the gamma function, compensated summation,
//! and power series with a root-test radius estimate.

/// Largest argument for which `gamma` returns a finite `f64`
/// (Γ(x) overflows shortly above 171).
pub const GAMMA_MAX_ARG: f64 = 171.0;

// Lanczos approximation, g = 7, 9 coefficients.
const LANCZOS_G: f64 = 7.0;
// Published table values, kept digit-for-digit.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function Γ(x) for real arguments.
///
/// Integral arguments in `1..=170` take an exact factorial product path, so
/// `gamma(1.0) == 1.0` and `gamma(2.0) == 1.0` bit-for-bit; this keeps
/// α = 1 reductions of fractional formulas exact. Non-integral arguments use
/// the Lanczos approximation with reflection for `x < 0.5`. Poles
/// (non-positive integers) return NaN.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == x.trunc() {
        // Integral argument: pole or factorial.
        if x <= 0.0 {
            return f64::NAN;
        }
        if x <= 170.0 {
            let n = x as u32;
            let mut acc = 1.0f64;
            for k in 2..n {
                acc *= k as f64;
            }
            return acc;
        }
        return f64::INFINITY;
    }
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
}

/// Ratio Γ(hi)/Γ(lo) computed stably.
///
/// When `hi == lo + 1` the functional equation Γ(z+1) = z Γ(z) gives the
/// ratio exactly as `lo`; otherwise the two gammas are evaluated directly.
pub fn gamma_ratio(hi: f64, lo: f64) -> f64 {
    if hi - lo == 1.0 {
        lo
    } else {
        gamma(hi) / gamma(lo)
    }
}

/// `base.powf(exponent)` under the convention `0^p := 0` for every `p`,
/// including `p == 0`.
///
/// Rust's `powf(0.0, 0.0)` is 1.0; the discrete fractional-derivative
/// weights need `0^(1-α) = 0` uniformly in α ∈ (0, 1] so that the α = 1
/// limit degenerates cleanly.
pub fn powf_zero(base: f64, exponent: f64) -> f64 {
    if base == 0.0 {
        0.0
    } else {
        base.powf(exponent)
    }
}

/// Kahan (compensated) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = KahanSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// A real power series Σ_k c_k z^k with dense coefficients.
#[derive(Debug, Clone)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = 0.0f64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Root-test estimate of the convergence radius.
    ///
    /// Takes the last `window` nonzero coefficients (index ≥ 1) and returns
    /// 1 / max_k |c_k|^(1/k) over that window. Returns `None` when no
    /// nonzero coefficient of index ≥ 1 exists (polynomial constant, radius
    /// infinite) and `Some(0.0)` only if a coefficient is non-finite.
    pub fn radius_estimate(&self, window: usize) -> Option<f64> {
        let mut roots: Vec<f64> = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            if c != 0.0 {
                if !c.is_finite() {
                    return Some(0.0);
                }
                roots.push(c.abs().powf(1.0 / k as f64));
                if roots.len() >= window {
                    break;
                }
            }
        }
        if roots.is_empty() {
            return None;
        }
        let sup = roots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Some(1.0 / sup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_is_exact_at_integers() {
        let mut fact = 1.0f64;
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(2.0), 1.0);
        for n in 2..=20u32 {
            fact *= (n - 1) as f64;
            assert_eq!(gamma(n as f64), fact, "Γ({n}) should be ({n}-1)!");
        }
    }

    #[test]
    fn gamma_half_integer_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert_relative_eq!(gamma(0.5), sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), 0.5 * sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(2.5), 0.75 * sqrt_pi, max_relative = 1e-14);
        // Reflection side.
        assert_relative_eq!(gamma(-0.5), -2.0 * sqrt_pi, max_relative = 1e-13);
    }

    #[test]
    fn gamma_reference_values() {
        // Standard table values.
        assert_relative_eq!(gamma(0.2), 4.590_843_711_998_803, max_relative = 1e-13);
        assert_relative_eq!(gamma(1.2), 0.918_168_742_399_760_6, max_relative = 1e-13);
        assert_relative_eq!(gamma(1.8), 0.931_383_770_980_242_8, max_relative = 1e-13);
    }

    #[test]
    fn gamma_functional_equation() {
        for &x in &[0.13, 0.37, 0.5, 0.9, 1.31, 2.71, 5.5, 10.25] {
            assert_relative_eq!(gamma(x + 1.0), x * gamma(x), max_relative = 1e-12);
        }
    }

    #[test]
    fn gamma_poles_and_overflow() {
        assert!(gamma(0.0).is_nan());
        assert!(gamma(-1.0).is_nan());
        assert!(gamma(-7.0).is_nan());
        assert!(gamma(200.0).is_infinite());
    }

    #[test]
    fn gamma_ratio_adjacent_is_exact() {
        // Γ(z+1)/Γ(z) = z, bit-exact through the shortcut.
        for n in 1..=20u32 {
            assert_eq!(gamma_ratio(n as f64 + 1.0, n as f64), n as f64);
        }
        assert_eq!(gamma_ratio(1.7, 0.7), 0.7);
        // Non-adjacent falls back to the quotient.
        assert_relative_eq!(gamma_ratio(3.0, 1.0), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn powf_zero_convention() {
        assert_eq!(powf_zero(0.0, 0.0), 0.0);
        assert_eq!(powf_zero(0.0, 0.5), 0.0);
        assert_eq!(powf_zero(2.0, 3.0), 8.0);
        assert_eq!(powf_zero(5.0, 1.0), 5.0);
    }

    #[test]
    fn kahan_beats_naive_on_small_terms() {
        let n = 1_000_000usize;
        let naive: f64 = (0..n).map(|_| 1e-3).sum();
        let comp = kahan_sum((0..n).map(|_| 1e-3));
        let exact = 1_000.0;
        assert!((comp - exact).abs() <= (naive - exact).abs());
        assert!((comp - exact).abs() < 1e-9);
    }

    #[test]
    fn power_series_eval_matches_closed_form() {
        // Partial geometric series at z = 0.5.
        let s = PowerSeries::new((0..40).map(|_| 1.0).collect());
        assert_relative_eq!(s.eval(0.5), 2.0, max_relative = 1e-11);
    }

    #[test]
    fn radius_estimate_geometric() {
        // c_k = 2^-k has radius exactly 2; the window estimate is exact here.
        let s = PowerSeries::new((0..60).map(|k| 0.5f64.powi(k)).collect());
        assert_relative_eq!(s.radius_estimate(20).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn radius_estimate_degenerate_cases() {
        // Constant polynomial: no growth information.
        let s = PowerSeries::new(vec![3.0]);
        assert!(s.radius_estimate(10).is_none());
        // Factorially growing coefficients: radius collapses toward zero.
        let mut c = vec![1.0f64];
        for k in 1..30 {
            c.push(c[k - 1] * k as f64);
        }
        let r = PowerSeries::new(c).radius_estimate(10).unwrap();
        assert!(r < 0.1, "factorial series radius estimate was {r}");
    }
}
