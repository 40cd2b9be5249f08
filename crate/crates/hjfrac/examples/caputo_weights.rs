//! L1 weights of the Caputo derivative: tables, identities, and the α → 1
//! degeneration.
//!
//! The discrete fractional derivative at level n+1 is
//!     D^α U^{n+1} = (U^{n+1} − Σ_m c_m^{n+1} U^m) / ρ_α,
//! with ρ_α = Γ(2−α)Δtᵅ. The weights c_m^{n+1} form a convex combination:
//! they are positive, sum to one, and shift across levels — the properties
//! that make the explicit scheme monotone. Run with
//!     cargo run --example caputo_weights

use hjfrac::caputo::{weight_sum, weights, WeightLadder};

fn main() -> hjfrac::Result<()> {
    let dt = 1e-3;

    println!("=== L1 weights c_m^(n+1) for dt = {dt} ===\n");
    for &alpha in &[0.4, 0.8, 1.0] {
        let n = 6;
        let w = weights(alpha, n, dt)?;
        println!("alpha = {alpha}, level n+1 = {}:", n + 1);
        print!("  c = [");
        for (m, c) in w.c.iter().enumerate() {
            if m > 0 {
                print!(", ");
            }
            print!("{c:.6}");
        }
        println!("]");
        println!("  sum = {:.16}", weight_sum(&w));
        println!("  rho_alpha = {:.6e}\n", w.rho);
    }

    println!("=== weight identities across levels (alpha = 0.7) ===\n");
    let alpha = 0.7;
    println!(
        "{:>4} {:>14} {:>14} {:>14}",
        "n", "c_0 drop", "shift defect", "1 - sum"
    );
    let mut ladder = WeightLadder::new(alpha, dt)?;
    for n in 0..8usize {
        let a = ladder.materialize();
        let mut next = ladder.clone();
        next.advance();
        let b = next.materialize();
        // c_0 decreases: c_0^{n+2} - c_0^{n+1} = -c_1^{n+2}.
        let drop = b.c[0] - a.c[0] + b.c[1];
        // Shift: c_{m+1}^{n+2} = c_m^{n+1} for m >= 1.
        let mut shift = 0.0f64;
        for m in 1..=n {
            shift = shift.max((b.c[m + 1] - a.c[m]).abs());
        }
        let defect = 1.0 - weight_sum(&a);
        println!("{:>4} {:>14.3e} {:>14.3e} {:>14.3e}", n, drop, shift, defect);
        ladder.advance();
    }

    println!("\n=== alpha = 1 collapses to the classical one-level scheme ===\n");
    let w = weights(1.0, 9, dt)?;
    println!("weights at level 10: first 9 entries all {}", w.c[0]);
    println!("                     last entry          {}", w.c[9]);
    assert!(w.c[..9].iter().all(|&c| c == 0.0) && w.c[9] == 1.0);
    println!(
        "rho_1 = Gamma(1) * dt = {} (= dt exactly: {})",
        w.rho,
        w.rho == dt
    );

    Ok(())
}
