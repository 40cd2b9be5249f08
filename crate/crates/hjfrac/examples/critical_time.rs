//! The obstacle benchmark's series solution: coefficients, blow-up time,
//! and residual self-checks.
//!
//! For ∂ᵅu + |Du|²/2 = 0 with u₀ = min{0, |x|² − 1}, the smooth branch is
//! u = |x|² f(t) − 1 where f(t) = Σ fₙ tᵅⁿ solves a fractional Riccati
//! equation; the coefficient recursion is
//!     fₙ = −(2/βₙ) Σ_{i+j=n−1} fᵢ fⱼ,   βₙ = Γ(αn+1)/Γ(α(n−1)+1).
//! The series has a finite radius, so the oracle carries a critical time
//! T_α beyond which it refuses to serve values. At α = 1 it telescopes to
//! the rational function 1/(1+2t). Run with
//!     cargo run --example critical_time

use hjfrac::exact::{f_coefficients, Test1Solution};
use hjfrac::solver::ExactOracle;

fn main() -> hjfrac::Result<()> {
    println!("=== leading series coefficients f_n ===\n");
    print!("{:>4}", "n");
    for &alpha in &[0.5, 0.8, 1.0] {
        print!(" {:>16}", format!("alpha={alpha}"));
    }
    println!();
    let tables: Vec<_> = [0.5, 0.8, 1.0]
        .iter()
        .map(|&a| f_coefficients(a, 400).unwrap())
        .collect();
    for n in 0..8 {
        print!("{:>4}", n);
        for t in &tables {
            print!(" {:>16.8}", t.coeffs()[n]);
        }
        println!();
    }
    println!(
        "\nat alpha = 1 the coefficients are exactly (-2)^n: f_5 = {}",
        tables[2].coeffs()[5]
    );

    println!("\n=== critical times T_alpha (series blow-up) ===\n");
    println!("{:>6} {:>14} {:>14}", "alpha", "T_alpha", "0.95 T_alpha");
    for &alpha in &[0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
        let s = Test1Solution::with_defaults(alpha, 1)?;
        let horizon = s.horizon().expect("series oracle has a horizon");
        println!("{:>6} {:>14.6} {:>14.6}", alpha, s.critical_time, horizon);
    }
    println!("\n(alpha = 1 recovers the radius 1/2 of 1/(1+2t) = sum (-2t)^n)");

    println!("\n=== residual of the fractional Riccati equation ===\n");
    // The series is verified by plugging it back into its own equation:
    // sum_n beta_n f_n z^(n-1) + 2 f(z)^2 = 0 with z = t^alpha.
    println!("{:>6} {:>10} {:>14}", "alpha", "t/T", "residual");
    for &alpha in &[0.5, 0.8] {
        let s = Test1Solution::with_defaults(alpha, 1)?;
        for &frac in &[0.0, 0.25, 0.5] {
            let t = frac * s.critical_time;
            println!("{:>6} {:>10.2} {:>14.3e}", alpha, frac, s.residual(t)?);
        }
    }

    println!("\n=== the oracle refuses to serve beyond its horizon ===\n");
    let s = Test1Solution::with_defaults(0.8, 1)?;
    let horizon = s.horizon().unwrap();
    match s.eval(&[0.5], horizon * 1.2) {
        Err(e) => println!("eval at 1.2 x horizon -> error ({e})"),
        Ok(_) => unreachable!("must refuse past the horizon"),
    }
    let v = s.eval(&[0.5], horizon * 0.8)?;
    println!("eval at 0.8 x horizon -> u = {v:.6}");

    Ok(())
}
