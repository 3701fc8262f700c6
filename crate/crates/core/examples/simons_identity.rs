//! The algebraic side of the Simons formula for a random traceless form and
//! for the Calabi form, where it vanishes.

use legendrian_pinching::catalog::calabi_sigma;
use legendrian_pinching::{algebraic_curvature, simons_gap, simons_rhs, SymCubic};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> legendrian_pinching::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sigma = SymCubic::random_traceless(4, &mut rng)?;
    let inv = sigma.invariants();
    let rhs = simons_rhs(&sigma)?;
    println!("random n=4: |s|^2 {:.6}, gram {:.6}, comm {:.6}", inv.norm_sq, inv.gram, inv.comm);
    println!("  <s, rhs> = {:.12}", sigma.dot(&rhs));
    println!("  gap      = {:.12}", simons_gap(&sigma));

    let r = algebraic_curvature(&sigma)?;
    println!("  curvature symmetry {:.1e}, Bianchi {:.1e}", r.symmetry_residual(), r.bianchi_residual());

    let c = calabi_sigma(4)?;
    println!("Calabi n=4: max |rhs| {:.1e}, gap {:.1e}", simons_rhs(&c)?.max_abs(), simons_gap(&c));

    let s3 = SymCubic::random_traceless(3, &mut rng)?;
    let w = algebraic_curvature(&s3)?.weyl_decomposition()?;
    println!("n=3 Weyl part: {w:?}");
    Ok(())
}
