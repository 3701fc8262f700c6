//! Writes a cubic form in the plain text format, reads it back, and shows
//! how parse errors are reported.

use legendrian_pinching::catalog::calabi_sigma;
use legendrian_pinching::SymCubic;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = calabi_sigma(3)?;
    let text = sigma.to_text();
    print!("{text}");

    let path = std::env::temp_dir().join("calabi3.tensor");
    std::fs::write(&path, &text)?;
    let back = SymCubic::from_text(&std::fs::read_to_string(&path)?)?;
    println!("round trip exact: {}", back == sigma);
    println!("wrote {}; try `lpinch theta {}`", path.display(), path.display());

    let commented = "# comments and blank lines are ignored\n2\n\n1 1 1 1.0\n2 1 2 -1.0  # order of indices is free\n";
    println!("{:?}", SymCubic::from_text(commented)?.to_dense());

    for bad in ["", "3\n1 2\n", "3\n1 2 4 0.5\n", "two\n"] {
        println!("{bad:?}: {}", SymCubic::from_text(bad).unwrap_err());
    }
    Ok(())
}
