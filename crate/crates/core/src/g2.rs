//! Octonionic cross product on `R^7` and the almost complex structure it
//! induces on `S^6`.
//!
//! Convention: with 1-based basis labels the oriented triples
//!
//! ```text
//! (1,2,3) (1,4,5) (1,7,6) (2,4,6) (2,5,7) (3,4,7) (3,6,5)
//! ```
//!
//! satisfy `e_i x e_j = e_k`, extended by cyclic permutation and
//! antisymmetry. In particular `e1 x e2 = e3`, `e1 x e4 = e5`,
//! `e2 x e4 = e6` and `e3 x e4 = e7`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

/// Oriented Fano triples, 0-based.
pub const FANO: [[usize; 3]; 7] = [
    [0, 1, 2],
    [0, 3, 4],
    [0, 6, 5],
    [1, 3, 5],
    [1, 4, 6],
    [2, 3, 6],
    [2, 5, 4],
];

/// Structure constants `c[i][j][k]` with `e_i x e_j = sum_k c_ijk e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OctonionTable {
    pub c: [[[f64; 7]; 7]; 7],
}

impl OctonionTable {
    pub fn new() -> Self {
        let mut c = [[[0.0; 7]; 7]; 7];
        for t in FANO {
            for r in 0..3 {
                let (i, j, k) = (t[r], t[(r + 1) % 3], t[(r + 2) % 3]);
                c[i][j][k] = 1.0;
                c[j][i][k] = -1.0;
            }
        }
        OctonionTable { c }
    }

    pub fn cross(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        if x.len() != 7 || y.len() != 7 {
            return Err(Error::dim(format!(
                "cross product needs vectors in R^7, got lengths {} and {}",
                x.len(),
                y.len()
            )));
        }
        let mut out = vec![0.0; 7];
        for i in 0..7 {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..7 {
                for k in 0..7 {
                    let c = self.c[i][j][k];
                    if c != 0.0 {
                        out[k] += c * x[i] * y[j];
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Default for OctonionTable {
    fn default() -> Self {
        Self::new()
    }
}

pub fn cross(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    OctonionTable::new().cross(x, y)
}

pub const TOL_TANGENT: f64 = 1e-10;

/// `J_p v = p x v` for a unit `p` and `v` tangent to `S^6` at `p`.
pub fn almost_complex(p: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    if p.len() != 7 || v.len() != 7 {
        return Err(Error::dim("almost complex structure acts on R^7"));
    }
    if (norm(p) - 1.0).abs() > TOL_TANGENT {
        return Err(Error::domain(format!("base point has norm {}", norm(p))));
    }
    if dot(p, v).abs() > TOL_TANGENT {
        return Err(Error::domain(format!(
            "vector is not tangent: <p, v> = {:e}",
            dot(p, v)
        )));
    }
    cross(p, v)
}

/// Finite-difference `(nabla_X J) X` along the great circle
/// `c(t) = cos t p + sin t v` (`|v| = 1`, `v ⊥ p`) at `t`: the tangential
/// part of `d/dt J_{c(t)} c'(t)`, since `c'` is parallel along `c`.
pub fn nearly_kahler_defect(p: &[f64], v: &[f64], t: f64, h: f64) -> Result<f64> {
    let table = OctonionTable::new();
    let point = |s: f64| -> Vec<f64> { (0..7).map(|i| s.cos() * p[i] + s.sin() * v[i]).collect() };
    let velocity = |s: f64| -> Vec<f64> { (0..7).map(|i| -s.sin() * p[i] + s.cos() * v[i]).collect() };
    let jv = |s: f64| table.cross(&point(s), &velocity(s));
    let plus = jv(t + h)?;
    let minus = jv(t - h)?;
    let c = point(t);
    let mut d: Vec<f64> = (0..7).map(|i| (plus[i] - minus[i]) / (2.0 * h)).collect();
    let radial = dot(&d, &c);
    for i in 0..7 {
        d[i] -= radial * c[i];
    }
    Ok(norm(&d))
}

/// Constants of the nearly Kähler integral inequality and its equality
/// case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearlyKahlerConstants {
    pub berger_norm_sq: f64,
    pub berger_theta_sq: f64,
    pub ambient_simons_constant: f64,
}

pub fn nearly_kahler_constants() -> NearlyKahlerConstants {
    NearlyKahlerConstants {
        berger_norm_sq: 25.0 / 8.0,
        berger_theta_sq: 5.0 / 4.0,
        ambient_simons_constant: 15.0 / 4.0,
    }
}

/// `75/56 + (10/7) theta^2`.
pub fn nearly_kahler_threshold(theta_sq: f64) -> f64 {
    75.0 / 56.0 + 10.0 / 7.0 * theta_sq
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Vec<f64> {
        let mut v = vec![0.0; 7];
        v[i - 1] = 1.0;
        v
    }

    #[test]
    fn declared_products() {
        assert_eq!(cross(&e(1), &e(2)).unwrap(), e(3));
        assert_eq!(cross(&e(1), &e(4)).unwrap(), e(5));
        assert_eq!(cross(&e(2), &e(4)).unwrap(), e(6));
        assert_eq!(cross(&e(3), &e(4)).unwrap(), e(7));
        assert_eq!(cross(&e(2), &e(1)).unwrap(), e(3).iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(cross(&e(5), &e(5)).unwrap(), vec![0.0; 7]);
    }

    #[test]
    fn table_is_totally_antisymmetric() {
        let t = OctonionTable::new();
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    assert_eq!(t.c[i][j][k], -t.c[j][i][k]);
                    assert_eq!(t.c[i][j][k], t.c[j][k][i]);
                }
            }
        }
    }

    #[test]
    fn j_on_basis() {
        let j = almost_complex(&e(1), &e(2)).unwrap();
        assert_eq!(j, e(3));
        assert_eq!(almost_complex(&e(1), &j).unwrap(), e(2).iter().map(|x| -x).collect::<Vec<_>>());
        assert!(matches!(almost_complex(&e(1), &e(1)), Err(Error::Domain(_))));
        assert!(matches!(cross(&[1.0; 6], &e(1)), Err(Error::Dimension(_))));
    }

    #[test]
    fn thresholds() {
        let c = nearly_kahler_constants();
        assert_eq!(nearly_kahler_threshold(c.berger_theta_sq), c.berger_norm_sq);
        assert!((nearly_kahler_threshold(0.0) - 75.0 / 56.0).abs() < 1e-16);
    }
}
