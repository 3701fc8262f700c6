//! Normal form of a traceless cubic on R^3 and the quantities built from it.

use legendrian_pinching::pinching::{kappa_inequality_gap, laplacian_lower_bound, Ambient};
use legendrian_pinching::{canonical3, SymCubic};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> legendrian_pinching::Result<()> {
    let sigma = SymCubic::random_traceless(3, &mut ChaCha8Rng::seed_from_u64(9))?;
    let c = canonical3(&sigma)?;
    println!("lambda = ({:.6}, {:.6}), mu = ({:.6}, {:.6})", c.lambda1, c.lambda2, c.mu1, c.mu2);
    println!("x = {:.6}, y = {:.6}, z = {:.6}", c.x, c.y, c.z);
    println!("|s|^2 {:.10} vs {:.10}", c.norm_sq(), sigma.norm_sq());
    println!("reconstruction error {:.1e}", c.reconstruct().max_abs_diff(&sigma));

    for ambient in [Ambient::Sphere4, Ambient::NearlyKahler154] {
        let b = laplacian_lower_bound(&c, ambient);
        println!("{ambient:?}: threshold {:.6}, bound {:.6}, holds {}", b.threshold, b.bound, b.holds);
    }
    for kappa in [1.4, 2.0, 5.0] {
        println!("kappa {kappa}: gap {:.6}", kappa_inequality_gap(&c, kappa)?);
    }
    Ok(())
}
