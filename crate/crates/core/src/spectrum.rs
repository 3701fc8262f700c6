//! Maximum of the cubic form on the unit sphere and the adapted spectrum at
//! a maximizer.
//!
//! `theta(sigma) = max_{|x| = 1} sigma(x, x, x)`. Because the form is odd the
//! maximum is nonnegative and vanishes only for the zero tensor. At a
//! maximizer `e1` the Lagrange condition `sigma(e1, e1, .) = theta e1` holds,
//! so `e1` is an eigenvector of the slice `sigma(e1, ., .)` and the remaining
//! eigenvalues `mu_2 >= ... >= mu_n` live on `e1`-perp. Second-order
//! optimality gives `mu_1 >= 2 mu_j` for `j > 1`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, complement_basis, sym_eigen_desc};
use crate::tensor::{multiplicity, SymCubic};

/// Tolerance on the Lagrange condition and on the adapted-basis pattern.
pub const TOL_LAGRANGE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaOptions {
    /// Number of random starting directions (slice eigenvectors are added on top).
    pub starts: usize,
    /// Shifted power iterations per start before the Newton polish.
    pub max_iter: usize,
    /// Step-size tolerance for the shifted power iteration.
    pub tol: f64,
    /// Cross-check against [`theta_bruteforce`] (only for `n <= 4`).
    pub oracle: bool,
    pub seed: u64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iter: 5000,
            tol: 1e-7,
            oracle: false,
            seed: 0x5eed_cafe,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AdaptedSpectrum {
    pub theta: f64,
    pub e1: Vec<f64>,
    /// `mu[0] = theta >= mu[1] >= ... >= mu[n-1]`.
    pub mu: Vec<f64>,
    /// Rows form the adapted orthonormal basis, first row `e1`.
    pub basis: Vec<Vec<f64>>,
    /// `max_k |sigma(e1, e1, e_k) - theta delta_{1k}|`.
    pub lagrange_residual: f64,
    /// `max_{ij} |sigma(e1, e_i, e_j) - mu_i delta_{ij}|` in the adapted basis.
    pub diagonal_residual: f64,
    /// Multi-start estimate: every converged local maximizer within `1e-8` of
    /// `theta` coincides with `e1` and `mu_1 > 2 mu_2`. See
    /// [`multiplicity_one`] for the dense-grid test.
    pub multiplicity_one: bool,
    /// Relative gap to the brute-force oracle when it was requested.
    pub oracle_rel_gap: Option<f64>,
}

impl AdaptedSpectrum {
    pub fn basis_matrix(&self) -> DMatrix<f64> {
        let n = self.e1.len();
        DMatrix::from_fn(n, n, |r, c| self.basis[r][c])
    }

    /// `mu_1 - 2 mu_2`; nonnegative at a true maximizer.
    pub fn second_order_margin(&self) -> f64 {
        if self.mu.len() < 2 {
            return self.theta;
        }
        self.mu[0] - 2.0 * self.mu[1]
    }
}

/// `sum_{ijk} sigma_{ijk} x^i x^j x^k`.
pub fn cubic_form(sigma: &SymCubic, x: &[f64]) -> Result<f64> {
    if x.len() != sigma.dim() {
        return Err(Error::dim(format!(
            "vector of length {} for a tensor on R^{}",
            x.len(),
            sigma.dim()
        )));
    }
    Ok(sigma.cubic(x))
}

/// Monomial coefficients `(i, j, k, multiplicity * sigma_{ijk})` for fast
/// repeated evaluation.
struct Monomials(Vec<(usize, usize, usize, f64)>);

impl Monomials {
    fn new(sigma: &SymCubic) -> Self {
        Monomials(
            sigma
                .distinct()
                .filter(|(_, v)| *v != 0.0)
                .map(|((i, j, k), v)| (i, j, k, multiplicity(i, j, k) as f64 * v))
                .collect(),
        )
    }

    #[inline]
    fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().map(|&(i, j, k, c)| c * x[i] * x[j] * x[k]).sum()
    }
}

/// Shift for the power iteration. `2 |sigma|` bounds twice the spectral
/// radius of every slice `sigma(x, ., .)` with `|x| = 1`, which makes the
/// shifted objective convex and the iteration monotone.
fn power_shift(sigma: &SymCubic) -> f64 {
    let n = sigma.dim() as f64;
    (n * sigma.max_abs()).max(2.0 * sigma.norm_sq().sqrt())
}

struct LocalMax {
    x: DVector<f64>,
    value: f64,
    residual: f64,
    /// largest eigenvalue of `2 sigma(x, ., .) - lambda` on `x`-perp
    curvature: f64,
}

fn lagrange_residual(sigma: &SymCubic, x: &DVector<f64>, lambda: f64) -> f64 {
    let g = sigma.contract2(x.as_slice());
    (g - x * lambda).amax()
}

/// Newton iteration on `sigma(x, x, .) = lambda x`, `|x| = 1`.
fn newton_polish(sigma: &SymCubic, x0: &DVector<f64>) -> Option<DVector<f64>> {
    let n = sigma.dim();
    let mut x = x0.clone();
    let mut lambda = sigma.cubic(x.as_slice());
    for _ in 0..30 {
        let g = sigma.contract2(x.as_slice());
        let f = &g - &x * lambda;
        let c = 0.5 * (1.0 - x.norm_squared());
        if f.amax() < 1e-15 && c.abs() < 1e-15 {
            break;
        }
        let s = sigma.contract1(x.as_slice());
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                jac[(i, j)] = 2.0 * s[(i, j)];
            }
            jac[(i, i)] -= lambda;
            jac[(i, n)] = -x[i];
            jac[(n, i)] = -x[i];
        }
        let mut rhs = DVector::zeros(n + 1);
        for i in 0..n {
            rhs[i] = -f[i];
        }
        rhs[n] = -c;
        let step = jac.lu().solve(&rhs)?;
        for i in 0..n {
            x[i] += step[i];
        }
        lambda += step[n];
        if step.amax() < 1e-16 {
            break;
        }
    }
    let r = x.norm();
    if !r.is_finite() || r < 0.5 {
        return None;
    }
    Some(x / r)
}

fn ascend(sigma: &SymCubic, mono: &Monomials, shift: f64, x0: &[f64], opts: &ThetaOptions) -> LocalMax {
    let mut x = DVector::from_column_slice(x0);
    x /= x.norm();
    for _ in 0..opts.max_iter {
        let y = sigma.contract2(x.as_slice()) + &x * shift;
        let ny = y.norm();
        if ny == 0.0 {
            break;
        }
        let next = y / ny;
        let step = (&next - &x).amax();
        x = next;
        if step < opts.tol {
            break;
        }
    }
    let mut value = mono.eval(x.as_slice());
    if let Some(p) = newton_polish(sigma, &x) {
        let pv = mono.eval(p.as_slice());
        // keep the polished point only if it stays on the same ascent branch
        if pv >= value - 1e-12 * (1.0 + value.abs()) && (&p - &x).amax() < 1e-3 {
            x = p;
            value = pv;
        }
    }
    let residual = lagrange_residual(sigma, &x, value);
    let curvature = {
        let p = complement_basis(&x);
        let s = sigma.contract1(x.as_slice());
        let m = p.transpose() * s * &p * 2.0 - DMatrix::identity(p.ncols(), p.ncols()) * value;
        m.symmetric_eigenvalues().max()
    };
    LocalMax {
        x,
        value,
        residual,
        curvature,
    }
}

fn starting_points(sigma: &SymCubic, opts: &ThetaOptions) -> Vec<Vec<f64>> {
    let n = sigma.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<Vec<f64>> = (0..opts.starts)
        .map(|_| linalg::random_unit(n, &mut rng))
        .collect();
    for i in 0..n {
        let (_, vecs) = sym_eigen_desc(&sigma.slice(i));
        let v = vecs[0].as_slice().to_vec();
        starts.push(v.iter().map(|c| -c).collect());
        starts.push(v);
    }
    starts
}

/// Builds the adapted spectrum at a unit maximizer `e1`.
fn adapted(sigma: &SymCubic, e1: DVector<f64>, theta: f64) -> AdaptedSpectrum {
    let n = sigma.dim();
    let p = complement_basis(&e1);
    let slice = sigma.contract1(e1.as_slice());
    let restricted = p.transpose() * &slice * &p;
    let (vals, vecs) = sym_eigen_desc(&restricted);
    let mut basis = vec![e1.as_slice().to_vec()];
    for w in &vecs {
        let mut v = &p * w;
        linalg::canonical_sign(&mut v);
        basis.push(v.as_slice().to_vec());
    }
    let mut mu = vec![theta];
    mu.extend(vals);
    let q = DMatrix::from_fn(n, n, |r, c| basis[r][c]);
    let diag = &q * &slice * q.transpose();
    let mut diagonal_residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { mu[i] } else { 0.0 };
            diagonal_residual = diagonal_residual.max((diag[(i, j)] - target).abs());
        }
    }
    AdaptedSpectrum {
        theta,
        lagrange_residual: lagrange_residual(sigma, &e1, theta),
        e1: e1.as_slice().to_vec(),
        mu,
        basis,
        diagonal_residual,
        multiplicity_one: false,
        oracle_rel_gap: None,
    }
}

/// Maximizes the cubic form on the unit sphere by a shifted symmetric power
/// iteration from many starts, each finished by a Newton polish on the
/// Lagrange system, and returns the adapted spectrum at the best maximizer.
///
/// Starts are evaluated in parallel and reduced in start order, so the
/// result does not depend on the thread schedule.
pub fn theta(sigma: &SymCubic, opts: &ThetaOptions) -> Result<AdaptedSpectrum> {
    let n = sigma.dim();
    if sigma.max_abs() == 0.0 {
        let mut e1 = DVector::zeros(n);
        e1[0] = 1.0;
        let mut spec = adapted(sigma, e1, 0.0);
        spec.basis = (0..n)
            .map(|r| (0..n).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
            .collect();
        if opts.oracle && n <= 4 {
            spec.oracle_rel_gap = Some(theta_bruteforce(sigma, default_resolution(n))?.abs());
        }
        return Ok(spec);
    }

    let mono = Monomials::new(sigma);
    let shift = power_shift(sigma);
    let starts = starting_points(sigma, opts);
    let results: Vec<LocalMax> = starts
        .par_iter()
        .map(|x0| ascend(sigma, &mono, shift, x0, opts))
        .collect();

    let scale = sigma.norm_sq().sqrt();
    let best_idx = (0..results.len())
        .filter(|&i| results[i].residual <= TOL_LAGRANGE * (1.0 + scale))
        .fold(None::<usize>, |best, i| match best {
            Some(b) if results[b].value >= results[i].value => Some(b),
            _ => Some(i),
        });
    let Some(best_idx) = best_idx else {
        let b = (0..results.len())
            .max_by(|&a, &b| results[a].value.total_cmp(&results[b].value).then(b.cmp(&a)))
            .unwrap();
        return Err(Error::Convergence {
            iterations: opts.max_iter * results.len(),
            best_value: results[b].value,
            best_point: results[b].x.as_slice().to_vec(),
            residual: results[b].residual,
        });
    };
    let best = &results[best_idx];

    let mut spec = adapted(sigma, best.x.clone(), best.value);
    let value_tol = 1e-8 * (1.0 + best.value.abs());
    let unique = results
        .iter()
        .filter(|r| r.residual <= TOL_LAGRANGE * (1.0 + scale) && r.value >= best.value - value_tol)
        .all(|r| (&r.x - &best.x).amax() <= 1e-6);
    spec.multiplicity_one = unique && best.curvature < -1e-8 * (1.0 + scale);

    if opts.oracle && n <= 4 {
        let oracle = theta_bruteforce(sigma, default_resolution(n))?;
        spec.oracle_rel_gap = Some((spec.theta - oracle).abs() / spec.theta.abs().max(1e-300));
    }
    Ok(spec)
}

/// Default grid resolution for [`theta_bruteforce`], giving at least `10^6`
/// sphere directions.
pub fn default_resolution(n: usize) -> usize {
    match n {
        2 => 250_000,
        3 => 410,
        _ => 64,
    }
}

/// Deterministic quasi-uniform directions: the faces of the cube `[-1, 1]^n`
/// sampled on a `resolution^(n-1)` cell-centered grid, projected to the
/// sphere. Yields `2 n resolution^(n-1)` points.
pub fn cube_sphere_grid(n: usize, resolution: usize) -> impl Iterator<Item = Vec<f64>> {
    let per_face = resolution.pow(n as u32 - 1);
    (0..2 * n).flat_map(move |face| {
        let axis = face / 2;
        let sign = if face % 2 == 0 { 1.0 } else { -1.0 };
        (0..per_face).map(move |mut idx| {
            let mut x = vec![0.0; n];
            for (d, c) in x.iter_mut().enumerate() {
                if d == axis {
                    *c = sign;
                } else {
                    let t = idx % resolution;
                    idx /= resolution;
                    *c = -1.0 + 2.0 * (t as f64 + 0.5) / resolution as f64;
                }
            }
            let r = linalg::norm(&x);
            x.iter_mut().for_each(|c| *c /= r);
            x
        })
    })
}

/// Projected gradient ascent with backtracking, at most `steps` accepted
/// moves. Independent of the power-iteration route used by [`theta`].
fn gradient_polish(mono: &Monomials, sigma: &SymCubic, x0: &[f64], steps: usize) -> f64 {
    let mut x = x0.to_vec();
    let mut value = mono.eval(&x);
    let mut eta = 0.5 / (1.0 + sigma.norm_sq().sqrt());
    for _ in 0..steps {
        let g = sigma.contract2(&x);
        let radial = linalg::dot(g.as_slice(), &x);
        let tangent: Vec<f64> = (0..x.len()).map(|i| 3.0 * (g[i] - radial * x[i])).collect();
        if linalg::norm(&tangent) < 1e-15 {
            break;
        }
        let mut moved = false;
        for _ in 0..40 {
            let mut y: Vec<f64> = x.iter().zip(&tangent).map(|(a, t)| a + eta * t).collect();
            let r = linalg::norm(&y);
            y.iter_mut().for_each(|c| *c /= r);
            let v = mono.eval(&y);
            if v > value {
                x = y;
                value = v;
                eta *= 1.5;
                moved = true;
                break;
            }
            eta *= 0.5;
        }
        if !moved {
            break;
        }
    }
    value
}

/// Dense sampling oracle for `theta`: maximum of the cubic form over
/// [`cube_sphere_grid`], with the best grid points refined by at most 50
/// projected-gradient steps each. A lower bound on the true maximum.
pub fn theta_bruteforce(sigma: &SymCubic, resolution: usize) -> Result<f64> {
    let n = sigma.dim();
    if n > 4 {
        return Err(Error::dim(format!(
            "brute-force theta is limited to n <= 4, got {n}"
        )));
    }
    if resolution == 0 {
        return Err(Error::domain("resolution must be positive"));
    }
    const KEEP: usize = 24;
    let mono = Monomials::new(sigma);
    let mut top: Vec<(f64, Vec<f64>)> = Vec::with_capacity(KEEP + 1);
    for x in cube_sphere_grid(n, resolution) {
        let v = mono.eval(&x);
        if top.len() < KEEP || v > top[top.len() - 1].0 {
            let pos = top.partition_point(|(w, _)| *w >= v);
            top.insert(pos, (v, x));
            top.truncate(KEEP);
        }
    }
    let grid_best = top.first().map(|t| t.0).unwrap_or(0.0);
    let polished = top
        .iter()
        .map(|(_, x)| gradient_polish(&mono, sigma, x, 50))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(grid_best.max(polished).max(0.0))
}

/// Dense test of the multiplicity of the maximum.
///
/// Every direction of a deterministic sphere grid is driven uphill to a
/// critical point; the maximum is of multiplicity one iff every resulting
/// point with `sigma(e, e, e) >= theta - tol` satisfies `|e - e1| <= 10 tol`.
/// Antipodal points are not identified since the form is odd.
pub fn multiplicity_one(sigma: &SymCubic, spectrum: &AdaptedSpectrum, tol: f64) -> bool {
    let n = sigma.dim();
    if sigma.max_abs() == 0.0 {
        return false;
    }
    let grid: Vec<Vec<f64>> = match n {
        2 => cube_sphere_grid(2, 180).collect(),
        3 => cube_sphere_grid(3, 24).collect(),
        4 => cube_sphere_grid(4, 9).collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6d75_6c74);
            (0..6000).map(|_| linalg::random_unit(n, &mut rng)).collect()
        }
    };
    let mono = Monomials::new(sigma);
    let shift = power_shift(sigma);
    let opts = ThetaOptions {
        max_iter: 3000,
        ..ThetaOptions::default()
    };
    let e1 = DVector::from_column_slice(&spectrum.e1);
    let theta = spectrum.theta;
    grid.par_iter()
        .map(|x0| {
            let m = ascend(sigma, &mono, shift, x0, &opts);
            m.value < theta - tol || (&m.x - &e1).norm() <= 10.0 * tol
        })
        .collect::<Vec<bool>>()
        .into_iter()
        .all(|ok| ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn calabi(n: usize) -> SymCubic {
        let r = (n as f64).sqrt();
        let mut t = SymCubic::zeros(n).unwrap();
        t.set(0, 0, 0, (n as f64 - 1.0) / r);
        for j in 1..n {
            t.set(0, j, j, -1.0 / r);
        }
        t
    }

    #[test]
    fn cubic_form_examples() {
        let c = calabi(3);
        assert!((cubic_form(&c, &[1.0, 0.0, 0.0]).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(cubic_form(&c, &[0.0, 1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(cubic_form(&c, &[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(cubic_form(&c, &[1.0, 0.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_tensor_theta_is_zero() {
        let z = SymCubic::zeros(3).unwrap();
        let s = theta(&z, &ThetaOptions::default()).unwrap();
        assert_eq!(s.theta, 0.0);
        assert_eq!(s.e1, vec![1.0, 0.0, 0.0]);
        assert!(!s.multiplicity_one);
        assert_eq!(theta_bruteforce(&z, 20).unwrap(), 0.0);
        assert!(!multiplicity_one(&z, &s, 1e-6));
    }

    #[test]
    fn calabi_theta_and_spectrum() {
        for n in 2..9 {
            let s = theta(&calabi(n), &ThetaOptions::default()).unwrap();
            let r = (n as f64).sqrt();
            assert!((s.theta - (n as f64 - 1.0) / r).abs() < 1e-8, "n={n}");
            for mu in &s.mu[1..] {
                assert!((mu + 1.0 / r).abs() < 1e-8);
            }
            assert!(s.lagrange_residual < TOL_LAGRANGE);
            assert!(s.diagonal_residual < TOL_LAGRANGE);
            // on R^2 every traceless cubic is a multiple of Re((x + iy)^3)
            // rotated, which has three maximizers
            assert_eq!(s.multiplicity_one, n > 2, "n={n}");
        }
    }

    #[test]
    fn bruteforce_rejects_large_dimension() {
        assert!(matches!(
            theta_bruteforce(&calabi(5), 4),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn bruteforce_calabi2() {
        let v = theta_bruteforce(&calabi(2), default_resolution(2)).unwrap();
        assert!((v - 1.0 / 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn grid_point_count() {
        assert_eq!(cube_sphere_grid(3, 5).count(), 6 * 25);
        for x in cube_sphere_grid(4, 3) {
            assert!((linalg::norm(&x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn calabi3_has_multiplicity_one() {
        let c = calabi(3);
        let s = theta(&c, &ThetaOptions::default()).unwrap();
        assert!(multiplicity_one(&c, &s, 1e-6));
    }
}
