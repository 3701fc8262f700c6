//! Maximum of a random traceless cubic form on the unit sphere, its adapted
//! basis, and a grid cross-check.

use legendrian_pinching::spectrum::{default_resolution, multiplicity_one, theta_bruteforce, TOL_LAGRANGE};
use legendrian_pinching::{theta, SymCubic, ThetaOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> legendrian_pinching::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 2..=4 {
        let sigma = SymCubic::random_traceless(n, &mut rng)?;
        let spec = theta(&sigma, &ThetaOptions::default())?;
        let grid = theta_bruteforce(&sigma, default_resolution(n))?;
        println!("n = {n}");
        println!("  theta {:.12}  grid {:.12}", spec.theta, grid);
        println!("  e1    {:.6?}", spec.e1);
        println!("  mu    {:.6?}", spec.mu);
        println!("  lagrange residual {:.1e}, mu1 - 2 mu2 = {:.4}", spec.lagrange_residual, spec.second_order_margin());
        println!("  simple maximum: {}", multiplicity_one(&sigma, &spec, TOL_LAGRANGE));
    }
    Ok(())
}
