//! Samples the Calabi torus by finite differences and compares the
//! recovered invariants with the closed forms.
//!
//!     cargo run --example calabi_invariants -- 4

use legendrian_pinching::catalog::calabi_torus;
use legendrian_pinching::immersion::{jet, legendrian_residual, sigma_at, DEFAULT_H};
use legendrian_pinching::{theta, ThetaOptions};

fn main() -> legendrian_pinching::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let entry = calabi_torus(n)?;
    let u: Vec<f64> = entry.immersion.axes.iter().map(|a| 0.5 * (a.lo + a.hi) - 0.3).collect();

    let j = jet(&entry.immersion, &u, DEFAULT_H)?;
    let sigma = sigma_at(&j)?.sigma.traceless_part();
    let spec = theta(&sigma, &ThetaOptions::default())?;

    println!("{} at u = {u:.3?}", entry.name);
    println!("  |B|^2   {:.10}  expected {:.10}", j.b_norm_sq(), entry.expected.norm_sq.unwrap());
    println!("  theta   {:.10}  expected {:.10}", spec.theta, entry.expected.theta.unwrap());
    println!("  mu      {:.6?}", spec.mu);
    println!("  |H|     {:.2e}", j.mean_curvature_norm());
    println!("  legendrian residual {:.2e}", legendrian_residual(&j));
    Ok(())
}
