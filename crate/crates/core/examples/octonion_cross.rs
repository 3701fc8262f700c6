//! The cross product on R^7 and the nearly Kähler structure it induces on S^6.

use legendrian_pinching::g2::{almost_complex, nearly_kahler_constants, nearly_kahler_threshold, cross, nearly_kahler_defect};

fn main() -> legendrian_pinching::Result<()> {
    let e = |i: usize| -> Vec<f64> { (0..7).map(|k| if k == i { 1.0 } else { 0.0 }).collect() };
    for i in 0..7 {
        let row: Vec<String> = (0..7)
            .map(|j| {
                let c = cross(&e(i), &e(j)).unwrap();
                match c.iter().position(|v| *v != 0.0) {
                    Some(k) if c[k] > 0.0 => format!("+e{}", k + 1),
                    Some(k) => format!("-e{}", k + 1),
                    None => " 0 ".into(),
                }
            })
            .collect();
        println!("e{} x . : {}", i + 1, row.join(" "));
    }

    let p = e(0);
    let v = e(3);
    let jv = almost_complex(&p, &v)?;
    let jjv = almost_complex(&p, &jv)?;
    println!("J e4 = {jv:?} at e1, J^2 e4 = {jjv:?}");
    println!("(nabla_v J) v along the great circle: {:.1e}", nearly_kahler_defect(&p, &v, 0.7, 1e-4)?);

    let c = nearly_kahler_constants();
    println!("{c:?}, threshold at the Berger value {}", nearly_kahler_threshold(c.berger_theta_sq));
    Ok(())
}
