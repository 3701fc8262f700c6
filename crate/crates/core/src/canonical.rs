//! Normal form of a traceless cubic form on `R^3`.
//!
//! With `e1` a maximizer of the cubic form and `{e2, e3}` rotated so that
//! `sigma_123 = 0`, the slices take the shape
//!
//! ```text
//! sigma_1 = [[l1+l2, 0, 0], [0, -l1, 0], [0, 0, -l2]]
//! sigma_2 = [[0, -l1, 0], [-l1, m1, m2], [0, m2, -m1]]
//! sigma_3 = [[0, 0, -l2], [0, m2, -m1], [-l2, -m1, -m2]]
//! ```
//!
//! and the invariants reduce to polynomials in
//! `x = (l1+l2)^2`, `y = (l1-l2)^2`, `z = 4 (m1^2 + m2^2)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{self, AdaptedSpectrum, ThetaOptions};
use crate::tensor::{SymCubic, TOL_TRACE};

pub const TOL_CANON: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Canonical3 {
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Rows are the canonical frame `e1, e2, e3`.
    pub rotation: [[f64; 3]; 3],
    /// Largest deviation of the rotated tensor from the displayed pattern.
    pub pattern_residual: f64,
}

impl Canonical3 {
    /// Parameters only; `rotation` is the identity.
    pub fn from_params(lambda1: f64, lambda2: f64, mu1: f64, mu2: f64) -> Self {
        Canonical3 {
            lambda1,
            lambda2,
            mu1,
            mu2,
            x: (lambda1 + lambda2).powi(2),
            y: (lambda1 - lambda2).powi(2),
            z: 4.0 * (mu1 * mu1 + mu2 * mu2),
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            pattern_residual: 0.0,
        }
    }

    /// `theta = l1 + l2`.
    pub fn theta(&self) -> f64 {
        self.lambda1 + self.lambda2
    }

    /// `|sigma|^2 = 5/2 x + 3/2 y + z`.
    pub fn norm_sq(&self) -> f64 {
        norm_sq_xyz(self.x, self.y, self.z)
    }

    /// `sum <sigma_i, sigma_j>^2` in closed form.
    pub fn gram(&self) -> f64 {
        gram_xyz(self.x, self.y, self.z)
    }

    /// The tensor in the canonical frame.
    pub fn canonical_tensor(&self) -> SymCubic {
        let (l1, l2, m1, m2) = (self.lambda1, self.lambda2, self.mu1, self.mu2);
        SymCubic::from_entries(
            3,
            [
                ((0, 0, 0), l1 + l2),
                ((0, 1, 1), -l1),
                ((0, 2, 2), -l2),
                ((1, 1, 1), m1),
                ((1, 1, 2), m2),
                ((1, 2, 2), -m1),
                ((2, 2, 2), -m2),
            ],
        )
        .expect("n = 3")
    }

    fn rotation_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(3, 3, |r, c| self.rotation[r][c])
    }

    /// The tensor in the original frame: the canonical tensor rotated back.
    pub fn reconstruct(&self) -> SymCubic {
        self.canonical_tensor().rotated(&self.rotation_matrix().transpose())
    }
}

pub fn norm_sq_xyz(x: f64, y: f64, z: f64) -> f64 {
    2.5 * x + 1.5 * y + z
}

pub fn gram_xyz(x: f64, y: f64, z: f64) -> f64 {
    2.75 * x * x + 0.75 * y * y + 0.5 * z * z + 4.5 * x * y + x * z + 1.5 * y * z
}

/// Angle that zeroes the off-diagonal entry of a symmetric 2x2 block
/// `[[a, b], [b, c]]` under rotation by `phi`.
fn jacobi_angle(a: f64, b: f64, c: f64) -> f64 {
    0.5 * (2.0 * b).atan2(a - c)
}

/// Golden-section minimization of `|f|` on `[lo, hi)`.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    for _ in 0..200 {
        if f(a).abs() < f(b).abs() {
            hi = b;
        } else {
            lo = a;
        }
        a = hi - g * (hi - lo);
        b = lo + g * (hi - lo);
    }
    0.5 * (lo + hi)
}

/// Normal form of a traceless `n = 3` tensor, using the maximizer from
/// [`spectrum::theta`].
pub fn canonical3(sigma: &SymCubic) -> Result<Canonical3> {
    let spec = spectrum::theta(sigma, &ThetaOptions::default())?;
    canonical3_with(sigma, &spec)
}

/// As [`canonical3`], reusing an already computed spectrum.
pub fn canonical3_with(sigma: &SymCubic, spec: &AdaptedSpectrum) -> Result<Canonical3> {
    if sigma.dim() != 3 {
        return Err(Error::dim(format!(
            "canonical form is defined for n = 3, got {}",
            sigma.dim()
        )));
    }
    sigma.check_traceless(TOL_TRACE)?;

    let e1 = &spec.e1;
    // any orthonormal completion; the (2,3) block is diagonalized below
    let mut q = spec.basis_matrix();
    let partial = sigma.rotated(&q);
    let (a, b, c) = (partial.get(0, 1, 1), partial.get(0, 1, 2), partial.get(0, 2, 2));
    let mut phi = jacobi_angle(a, b, c);
    let off = |phi: f64| {
        let (s, co) = phi.sin_cos();
        (c - a) * s * co + b * (co * co - s * s)
    };
    if off(phi).abs() > 1e-12 * (1.0 + a.abs() + b.abs() + c.abs()) {
        phi = golden_min(off, 0.0, std::f64::consts::PI);
    }
    let (s, co) = phi.sin_cos();
    let r2: Vec<f64> = (0..3).map(|k| co * q[(1, k)] + s * q[(2, k)]).collect();
    let r3: Vec<f64> = (0..3).map(|k| -s * q[(1, k)] + co * q[(2, k)]).collect();
    for k in 0..3 {
        q[(0, k)] = e1[k];
        q[(1, k)] = r2[k];
        q[(2, k)] = r3[k];
    }
    let rot = sigma.rotated(&q);

    let lambda1 = -rot.get(0, 1, 1);
    let lambda2 = -rot.get(0, 2, 2);
    let mu1 = rot.get(1, 1, 1);
    let mu2 = rot.get(1, 1, 2);
    let mut canon = Canonical3::from_params(lambda1, lambda2, mu1, mu2);
    for r in 0..3 {
        for c in 0..3 {
            canon.rotation[r][c] = q[(r, c)];
        }
    }
    canon.pattern_residual = rot.max_abs_diff(&canon.canonical_tensor());
    Ok(canon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn calabi3() -> SymCubic {
        let r = 3f64.sqrt();
        SymCubic::from_entries(
            3,
            [((0, 0, 0), 2.0 / r), ((0, 1, 1), -1.0 / r), ((0, 2, 2), -1.0 / r)],
        )
        .unwrap()
    }

    #[test]
    fn calabi_normal_form() {
        let c = canonical3(&calabi3()).unwrap();
        let r = 3f64.sqrt();
        assert!((c.lambda1 - 1.0 / r).abs() < 1e-9);
        assert!((c.lambda2 - 1.0 / r).abs() < 1e-9);
        assert!(c.mu1.abs() < 1e-9 && c.mu2.abs() < 1e-9);
        assert!((c.x - 4.0 / 3.0).abs() < 1e-9);
        assert!(c.y.abs() < 1e-9 && c.z.abs() < 1e-9);
        assert!(c.pattern_residual < TOL_CANON);
    }

    #[test]
    fn zero_tensor_normal_form() {
        let c = canonical3(&SymCubic::zeros(3).unwrap()).unwrap();
        assert_eq!((c.lambda1, c.lambda2, c.mu1, c.mu2), (0.0, 0.0, 0.0, 0.0));
        assert_eq!((c.x, c.y, c.z), (0.0, 0.0, 0.0));
    }

    #[test]
    fn dimension_and_trace_errors() {
        let four = SymCubic::zeros(4).unwrap();
        assert!(matches!(canonical3(&four), Err(Error::Dimension(_))));
        let t = SymCubic::from_entries(3, [((0, 0, 0), 1.0)]).unwrap();
        let spec = spectrum::theta(&t, &ThetaOptions::default()).unwrap();
        assert!(matches!(canonical3_with(&t, &spec), Err(Error::Trace { .. })));
    }

    #[test]
    fn closed_forms_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let s = SymCubic::random_traceless(3, &mut rng).unwrap();
            let c = canonical3(&s).unwrap();
            let inv = s.invariants();
            assert!(c.pattern_residual < TOL_CANON);
            assert!((c.norm_sq() - inv.norm_sq).abs() < TOL_CANON * (1.0 + inv.norm_sq));
            assert!((c.gram() - inv.gram).abs() < TOL_CANON * (1.0 + inv.gram));
            assert!(c.reconstruct().max_abs_diff(&s) < 1e-9);
        }
    }

    #[test]
    fn jacobi_angle_zeroes_off_diagonal() {
        let (a, b, c) = (0.3, -1.1, 2.0);
        let phi = jacobi_angle(a, b, c);
        let (s, co) = phi.sin_cos();
        assert!(((c - a) * s * co + b * (co * co - s * s)).abs() < 1e-14);
        let g = golden_min(|p| (c - a) * p.sin() * p.cos() + b * p.cos_2(), 0.0, 1.5);
        assert!(((c - a) * g.sin() * g.cos() + b * g.cos_2()).abs() < 1e-9);
    }

    trait Cos2 {
        fn cos_2(self) -> f64;
    }
    impl Cos2 for f64 {
        fn cos_2(self) -> f64 {
            (2.0 * self).cos()
        }
    }
}
