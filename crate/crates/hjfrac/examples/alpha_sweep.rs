//! Sweep the fractional order α and watch the profiles approach the
//! classical (α = 1) solution.
//!
//! The memory kernel slows propagation: for ∂ᵅu + |u_x| = 0 the front
//! advances like tᵅ/Γ(α+1) instead of t, so smaller α lags further behind
//! the α = 1 profile at a fixed time. The sweep appends the α = 1 reference
//! automatically and reports sup distances to it. Run with
//!     cargo run --example alpha_sweep

use hjfrac::harness::{run_alpha_sweep, ProblemId, RunConfig};

fn main() -> hjfrac::Result<()> {
    let mut cfg = RunConfig::new(ProblemId::Test2, 1.0);
    cfg.h = Some(0.05);
    cfg.dt = 1e-3;
    cfg.t_final = 0.2;
    cfg.alphas = Some(vec![0.4, 0.6, 0.8, 0.9]);

    println!("eikonal problem, h = 0.05, dt = 1e-3, T = 0.2\n");
    let out = run_alpha_sweep(&cfg)?;

    println!("{:>8} {:>22}", "alpha", "sup dist to alpha=1");
    for (a, d) in out.alphas.iter().zip(&out.distances_to_alpha_one) {
        println!("{:>8.3} {:>22.6e}", a, d);
    }

    // The distances shrink monotonically as alpha -> 1.
    let interior = &out.distances_to_alpha_one[..out.alphas.len() - 1];
    let monotone = interior.windows(2).all(|w| w[1] <= w[0]);
    println!("\nmonotone approach to the classical profile: {monotone}");

    // Profile values at a few sample points.
    println!("\n{:>8} u(x, T) per alpha", "x");
    print!("{:>8} ", "");
    for a in &out.alphas {
        print!("{:>12}", format!("a={a}"));
    }
    println!();
    let spec = &out.profiles[0].spec;
    for i in (0..spec.n[0]).step_by(spec.n[0] / 8) {
        print!("{:>8.3} ", spec.coord(i, 0)[0]);
        for p in &out.profiles {
            print!("{:>12.5}", p.at(i, 0));
        }
        println!();
    }

    Ok(())
}
