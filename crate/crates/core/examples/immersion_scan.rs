//! Scans a catalog entry over a parameter grid and summarizes the records.
//!
//!     cargo run --example immersion_scan -- geodesic3 6

use legendrian_pinching::catalog::lookup;
use legendrian_pinching::immersion::{field_scan, JetOptions};

fn main() -> legendrian_pinching::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "calabi2".into());
    let res: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    let entry = lookup(&name)?;
    let grid = vec![res; entry.immersion.n];
    let points = field_scan(&entry.immersion, &grid, &JetOptions::default())?;

    let ok: Vec<_> = points.iter().filter_map(|p| p.record.as_ref()).collect();
    println!("{name}: {} points, {} failed", points.len(), points.len() - ok.len());
    if let Some(e) = points.iter().find_map(|p| p.error.as_ref()) {
        println!("  first error: {e}");
    }
    if ok.is_empty() {
        return Ok(());
    }
    let span = |f: &dyn Fn(&&legendrian_pinching::immersion::PointRecord) -> f64| {
        ok.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    println!("  theta    in {:.8?}", span(&|r| r.report.theta));
    println!("  |B|^2    in {:.8?}", span(&|r| r.report.norm_sq));
    println!("  gap_main in {:?}", span(&|r| r.report.gap_main));
    println!("  max legendrian residual {:.1e}", span(&|r| r.legendrian_residual).1);
    Ok(())
}
