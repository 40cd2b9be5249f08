//! Two-dimensional solve: the obstacle benchmark on a square, with a radial
//! symmetry check.
//!
//! ∂ᵅu + |Du|²/2 = 0 with u₀ = min{0, x² + y² − 1} on [−2, 2]², α = 0.8,
//! h = 0.1, Δt = 10⁻³, θ = 1 − 2^{−0.8}. Both the datum and the square are
//! invariant under 90° rotation about the origin, so the computed surface
//! must be too (up to roundoff); values stay in the datum's range [−1, 0].
//! Run with
//!     cargo run --example two_dim_surface

use hjfrac::harness::{run_single, ProblemId, RunConfig};

fn main() -> hjfrac::Result<()> {
    let mut cfg = RunConfig::new(ProblemId::Test1, 0.8);
    cfg.dim = 2;
    cfg.h = Some(0.1);
    cfg.dt = 1e-3;
    cfg.t_final = 0.1;

    println!("d^0.8 u + |Du|^2/2 = 0,  u0 = min(0, x^2 + y^2 - 1)  on [-2, 2]^2, T = 0.1\n");
    let out = run_single(&cfg)?;
    let m = &out.manifest;
    println!("{}", m.cfl.as_ref().unwrap().describe());
    println!(
        "sup error vs series solution: {:.6e}\n",
        m.error_sup.expect("series oracle serves T = 0.1")
    );

    let u = out.solution.last();
    let spec = &u.spec;
    let n = spec.n[0];

    // The bowl region near the origin (every 2nd node of the center block).
    println!("u(x, y, T) near the origin:");
    print!("{:>7}", "y\\x");
    for i in ((n / 2 - 6)..=(n / 2 + 6)).step_by(2) {
        print!("{:>8.1}", spec.coord(i, 0)[0]);
    }
    println!();
    for j in ((n / 2 - 6)..=(n / 2 + 6)).step_by(2) {
        print!("{:>7.1}", spec.coord(0, j)[1]);
        for i in ((n / 2 - 6)..=(n / 2 + 6)).step_by(2) {
            print!("{:>8.4}", u.at(i, j));
        }
        println!();
    }

    // 90°-rotation symmetry: u[i, j] == u[(n-1)-j, i] up to roundoff.
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((u.at(i, j) - u.at(n - 1 - j, i)).abs());
        }
    }
    println!("\nworst 90-degree rotation defect: {worst:.3e}");
    assert!(worst <= 1e-9, "solution must stay radially symmetric");

    // Values remain inside the datum's range.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &u.values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    println!("value range at T: [{lo:.6}, {hi:.6}] (datum range [-1, 0])");
    assert!(lo >= -1.0 - 1e-9 && hi <= 1e-9);

    Ok(())
}
