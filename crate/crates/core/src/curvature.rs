//! Algebraic curvature built from a cubic form, its Weyl decomposition and
//! the algebraic side of the Simons formula for minimal Legendrian
//! immersions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{SymCubic, TOL_SYM, TOL_TRACE};

/// Dense algebraic curvature `R_{ijkl} = [sigma_i, sigma_j]_{kl}` with its
/// Ricci contraction `Ric_{ij} = sum_a R_{iaja}` and scalar curvature.
#[derive(Debug, Clone)]
pub struct AlgCurvature {
    pub n: usize,
    rhat: Vec<f64>,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
    /// Largest deviation from `Ric_{ij} = -<sigma_i, sigma_j>` and
    /// `S = -|sigma|^2`, relative to `1 + |sigma|^2`.
    pub ricci_residual: f64,
}

/// Result of splitting an [`AlgCurvature`] into Weyl, traceless Ricci and
/// scalar parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylDecomposition {
    pub weyl_norm_sq: f64,
    pub traceless_ricci_norm_sq: f64,
    /// `| |R|^2 - |W|^2 - 4|Ric|^2/(n-2) + 2S^2/((n-1)(n-2)) |`
    pub identity_residual: f64,
}

impl AlgCurvature {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.rhat[((i * n + j) * n + k) * n + l]
    }

    pub fn norm_sq(&self) -> f64 {
        self.rhat.iter().map(|v| v * v).sum()
    }

    /// Largest violation of `R_{ijkl} = -R_{jikl} = -R_{ijlk} = R_{klij}`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest first-Bianchi sum `R_{ijkl} + R_{iklj} + R_{iljk}`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) + self.get(i, k, l, j) + self.get(i, l, j, k);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Splits off the Weyl part and reports the norm identity residual.
    pub fn weyl_decomposition(&self) -> Result<WeylDecomposition> {
        let n = self.n;
        if n < 3 {
            return Err(Error::dim("Weyl decomposition needs n >= 3"));
        }
        let nf = n as f64;
        let mut ric0 = self.ricci.clone();
        for i in 0..n {
            ric0[(i, i)] -= self.scalar / nf;
        }
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        // Kulkarni-Nomizu products h (.) g and g (.) g
        let kn_hg = |h: &DMatrix<f64>, i: usize, j: usize, k: usize, l: usize| {
            h[(i, k)] * delta(j, l) + h[(j, l)] * delta(i, k)
                - h[(i, l)] * delta(j, k)
                - h[(j, k)] * delta(i, l)
        };
        let c_ric = 1.0 / (nf - 2.0);
        let c_scal = self.scalar / (2.0 * nf * (nf - 1.0));
        let mut weyl_norm_sq = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let gg = 2.0 * (delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k));
                        let w = self.get(i, j, k, l)
                            - c_ric * kn_hg(&ric0, i, j, k, l)
                            - c_scal * gg;
                        weyl_norm_sq += w * w;
                    }
                }
            }
        }
        let ric_sq = self.ricci.norm_squared();
        let identity_residual = (self.norm_sq() - weyl_norm_sq - 4.0 * ric_sq / (nf - 2.0)
            + 2.0 * self.scalar * self.scalar / ((nf - 1.0) * (nf - 2.0)))
            .abs();
        Ok(WeylDecomposition {
            weyl_norm_sq,
            traceless_ricci_norm_sq: ric0.norm_squared(),
            identity_residual,
        })
    }
}

/// Gauss-type curvature of a traceless cubic form.
///
/// The traceless gate is what makes `Ric_{ij} = -<sigma_i, sigma_j>` hold; both
/// that relation and `S = -|sigma|^2` are re-checked after construction.
pub fn algebraic_curvature(sigma: &SymCubic) -> Result<AlgCurvature> {
    sigma.check_traceless(TOL_TRACE)?;
    let n = sigma.dim();
    let mut rhat = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for a in 0..n {
                        s += sigma.get(i, k, a) * sigma.get(j, l, a)
                            - sigma.get(i, l, a) * sigma.get(j, k, a);
                    }
                    rhat[((i * n + j) * n + k) * n + l] = s;
                }
            }
        }
    }
    let mut ricci = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            ricci[(i, j)] = (0..n).map(|a| rhat[((i * n + a) * n + j) * n + a]).sum();
        }
    }
    let scalar = ricci.trace();
    let slices: Vec<DMatrix<f64>> = (0..n).map(|i| sigma.slice(i)).collect();
    let scale = 1.0 + sigma.norm_sq();
    let mut ricci_residual = (scalar + sigma.norm_sq()).abs() / scale;
    for i in 0..n {
        for j in 0..n {
            let expected = -slices[i].component_mul(&slices[j]).sum();
            ricci_residual = ricci_residual.max((ricci[(i, j)] - expected).abs() / scale);
        }
    }
    debug_assert!(ricci_residual <= TOL_SYM, "Ricci identity off by {ricci_residual:e}");
    let curv = AlgCurvature {
        n,
        rhat,
        ricci,
        scalar,
        ricci_residual,
    };
    Ok(curv)
}

/// Algebraic right-hand side of the rough Laplacian `Delta sigma_{ijk}` for a
/// minimal Legendrian immersion:
///
/// `(n+1) sigma_{ijk} + 2 tr(sigma_i sigma_j sigma_k)
///   - sum_s (G_{is} sigma_{jks} + G_{js} sigma_{iks} + G_{ks} sigma_{ijs})`
///
/// with `G_{is} = <sigma_i, sigma_s>`.
pub fn simons_rhs(sigma: &SymCubic) -> Result<SymCubic> {
    sigma.check_traceless(TOL_TRACE)?;
    let n = sigma.dim();
    let slices: Vec<DMatrix<f64>> = (0..n).map(|i| sigma.slice(i)).collect();
    let gram = DMatrix::from_fn(n, n, |i, s| slices[i].component_mul(&slices[s]).sum());
    let nf = n as f64;
    SymCubic::from_fn(n, |i, j, k| {
        let cubic = (&slices[i] * &slices[j] * &slices[k]).trace();
        let mut contraction = 0.0;
        for s in 0..n {
            contraction += gram[(i, s)] * sigma.get(j, k, s)
                + gram[(j, s)] * sigma.get(i, k, s)
                + gram[(k, s)] * sigma.get(i, j, s);
        }
        (nf + 1.0) * sigma.get(i, j, k) + 2.0 * cubic - contraction
    })
}

/// Algebraic part of `1/2 Delta |sigma|^2 - |nabla sigma|^2`:
/// `(n+1)|sigma|^2 - gram - comm`.
pub fn simons_gap(sigma: &SymCubic) -> f64 {
    let inv = sigma.invariants();
    (sigma.dim() as f64 + 1.0) * inv.norm_sq - inv.gram - inv.comm
}
