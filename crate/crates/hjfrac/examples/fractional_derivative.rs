//! Discrete Caputo derivatives of known functions and the L1 truncation
//! order 2 − α.
//!
//! For f(t) = t² the Caputo derivative is 2 t^{2−α} / Γ(3−α); for
//! f(t) = t^α it is Γ(α+1) t^... — here we use the cleanest pair:
//! f(t) = t gives t^{1−α}/Γ(2−α) and f(t) = t² gives 2t^{2−α}/Γ(3−α).
//! The L1 scheme reproduces them to O(Δt^{2−α}), and halving Δt shows
//! exactly that order. Run with
//!     cargo run --example fractional_derivative

use hjfrac::caputo::{l1_derivative, truncation_order};
use hjfrac::numerics::gamma;

fn main() -> hjfrac::Result<()> {
    let t_star = 0.5f64;

    println!("=== L1 derivative vs closed forms at t = {t_star} ===\n");
    println!(
        "{:>6} {:>10} {:>16} {:>16} {:>12}",
        "alpha", "dt", "L1 value", "exact", "abs error"
    );
    for &alpha in &[0.3, 0.5, 0.8] {
        for &dt in &[0.01, 0.005] {
            let n = (t_star / dt).round() as usize;
            let samples: Vec<f64> = (0..=n).map(|m| {
                let t = m as f64 * dt;
                t * t
            }).collect();
            let deriv = l1_derivative(alpha, dt, &samples)?;
            let got = *deriv.last().unwrap();
            let exact = 2.0 * t_star.powf(2.0 - alpha) / gamma(3.0 - alpha);
            println!(
                "{:>6} {:>10} {:>16.10} {:>16.10} {:>12.3e}",
                alpha,
                dt,
                got,
                exact,
                (got - exact).abs()
            );
        }
    }

    println!("\n=== linear functions are differentiated exactly ===\n");
    let (a, b) = (1.7, -0.3);
    for &alpha in &[0.4, 0.9] {
        let dt = 0.01;
        let n = 50usize;
        let samples: Vec<f64> = (0..=n).map(|m| a * (m as f64 * dt) + b).collect();
        let deriv = l1_derivative(alpha, dt, &samples)?;
        let t = n as f64 * dt;
        let exact = a * t.powf(1.0 - alpha) / gamma(2.0 - alpha);
        let err = (deriv.last().unwrap() - exact).abs();
        println!("alpha = {alpha}: |L1 - exact| = {err:.3e} for f(t) = {a} t + {b}");
        assert!(err < 1e-11);
    }

    println!("\n=== observed truncation order (expect 2 - alpha) ===\n");
    println!("{:>6} {:>14} {:>14} {:>10} {:>10}", "alpha", "err(dt)", "err(dt/2)", "order", "2-alpha");
    for &alpha in &[0.3, 0.5, 0.8] {
        let rep = truncation_order(
            alpha,
            &|t| t * t,
            2.0 * f64::powf(t_star, 2.0 - alpha) / gamma(3.0 - alpha),
            t_star,
            0.05,
        )?;
        println!(
            "{:>6} {:>14.6e} {:>14.6e} {:>10.3} {:>10.3}",
            alpha,
            rep.err_coarse,
            rep.err_fine,
            rep.order,
            2.0 - alpha
        );
    }

    Ok(())
}
