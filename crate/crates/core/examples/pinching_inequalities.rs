//! Pinching report for a cubic form read from a tensor file, or for the
//! Calabi form when no file is given.
//!
//!     cargo run --example pinching_inequalities -- my.tensor

use legendrian_pinching::catalog::calabi_sigma;
use legendrian_pinching::pinching::{beta_chain_check, newton_gap};
use legendrian_pinching::{pinching_report, SymCubic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = match std::env::args().nth(1) {
        Some(path) => SymCubic::from_text(&std::fs::read_to_string(path)?)?,
        None => calabi_sigma(3)?,
    };
    let r = pinching_report(&sigma)?;
    println!("{}", serde_json::to_string_pretty(&r)?);

    let chain = beta_chain_check(&r.mu, r.n)?;
    println!("beta {:.6} >= {:.6} (admissible {})", chain.beta, chain.bound, chain.admissible);
    println!("newton gap of (1, 2, 3): {:.6}", newton_gap(&[1.0, 2.0, 3.0])?);
    Ok(())
}
