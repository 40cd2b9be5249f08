//! Fractional CFL conditions: upwind bounds, Lax-Friedrichs θ windows, and
//! suggested time steps.
//!
//! Monotonicity of the explicit scheme restricts Δt through ρ_α = Γ(2−α)Δtᵅ:
//!
//! - upwind: Δtᵅ L / h ≤ (2 − 2^{1−α}) / Γ(2−α)
//! - Lax-Friedrichs: d ρ_α L / (2h) ≤ θ ≤ 1 − 2^{−α}
//!
//! Because Δt enters through Δtᵅ, halving h forces much smaller time steps
//! as α decreases. Run with `cargo run --example cfl_windows`.

use hjfrac::hamiltonian::{theta_upper, NumericalHamiltonian};

fn main() -> hjfrac::Result<()> {
    let h = 0.1;
    let dim = 1;

    println!("=== upwind CFL check for H(p) = |p|, L = 1, h = {h} ===\n");
    println!(
        "{:>6} {:>10} {:>12} {:>12} {:>10} {:>12}",
        "alpha", "dt", "lhs", "rhs", "ok", "suggest_dt"
    );
    for &alpha in &[0.4, 0.6, 0.8, 1.0] {
        let ham = NumericalHamiltonian::upwind_minus(|_x: &[f64], p: &[f64]| p[0].abs(), 1.0)?;
        for &dt in &[1e-3, 1e-2, 5e-2] {
            let rep = ham.cfl_check(alpha, dt, h, dim);
            println!(
                "{:>6} {:>10} {:>12.5} {:>12.5} {:>10} {:>12.5e}",
                alpha,
                dt,
                rep.lhs,
                rep.rhs,
                rep.satisfied,
                ham.suggest_dt(alpha, h, dim)
            );
        }
    }

    println!("\n=== Lax-Friedrichs theta windows for H(p) = p^2/2, L = 2 ===\n");
    println!(
        "{:>6} {:>8} {:>10} {:>14} {:>14} {:>10}",
        "alpha", "h", "dt", "lower edge", "upper edge", "window?"
    );
    for &alpha in &[0.5, 0.8, 1.0] {
        for &hh in &[0.1, 0.05, 0.025] {
            let theta = theta_upper(alpha);
            let ham = NumericalHamiltonian::lax_friedrichs(
                |_x: &[f64], p: &[f64]| p.iter().map(|v| v * v).sum::<f64>() / 2.0,
                2.0,
                theta,
                alpha,
            )?;
            let rep = ham.cfl_check(alpha, 1e-3, hh, dim);
            let [lo, up] = rep.theta_window.expect("LF always reports a window");
            println!(
                "{:>6} {:>8} {:>10} {:>14.6} {:>14.6} {:>10}",
                alpha,
                hh,
                1e-3,
                lo,
                up,
                if lo <= up { "open" } else { "empty" }
            );
        }
    }

    println!("\n=== the alpha = 1 upwind bound is the classical dt*L <= h ===\n");
    let ham = NumericalHamiltonian::upwind_plus(|_x: &[f64], p: &[f64]| p[0].abs(), 1.0)?;
    let rep = ham.cfl_check(1.0, 0.09, h, dim);
    println!(
        "alpha=1, L=1, h={h}, dt=0.09: lhs = {}, rhs = {}, satisfied = {}",
        rep.lhs, rep.rhs, rep.satisfied
    );
    let rep = ham.cfl_check(1.0, 0.11, h, dim);
    println!(
        "alpha=1, L=1, h={h}, dt=0.11: lhs = {}, rhs = {}, satisfied = {}",
        rep.lhs, rep.rhs, rep.satisfied
    );

    Ok(())
}
