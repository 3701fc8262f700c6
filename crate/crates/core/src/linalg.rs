//! Small dense helpers shared by the spectrum and geometry modules.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Flips the sign so that the first coordinate with `|c| > 1e-12` is positive.
pub(crate) fn canonical_sign(v: &mut DVector<f64>) {
    if let Some(c) = v.iter().find(|c| c.abs() > 1e-12) {
        if *c < 0.0 {
            v.neg_mut();
        }
    }
}

/// Eigenpairs of a symmetric matrix, eigenvalues descending. Eigenvectors are
/// sign-normalized and, within numerically tied eigenvalues, ordered
/// lexicographically.
pub fn sym_eigen_desc(m: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let eig = m.clone().symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..m.nrows())
        .map(|i| {
            let mut v = eig.eigenvectors.column(i).into_owned();
            canonical_sign(&mut v);
            (eig.eigenvalues[i], v)
        })
        .collect();
    let scale = 1.0 + m.amax();
    pairs.sort_by(|a, b| {
        if (a.0 - b.0).abs() <= 1e-12 * scale {
            a.1.iter()
                .zip(b.1.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        } else {
            b.0.total_cmp(&a.0)
        }
    });
    pairs.into_iter().unzip()
}

/// Orthonormal basis of the complement of the unit vector `e`, as the
/// columns of an `n x (n-1)` matrix (Householder construction).
pub fn complement_basis(e: &DVector<f64>) -> DMatrix<f64> {
    let n = e.len();
    // reflect the coordinate axis farthest from e onto e
    let k = (0..n)
        .min_by(|&a, &b| e[a].abs().total_cmp(&e[b].abs()))
        .unwrap_or(0);
    let mut v = e.clone();
    v[k] -= 1.0;
    let vv = v.norm_squared();
    let h = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv);
    // h maps axis k to e, so the remaining columns span e-perp
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&c| c != k)
        .map(|c| h.column(c).into_owned())
        .collect();
    DMatrix::from_columns(&cols)
}

/// Haar-ish random orthogonal matrix from the QR factorization of a Gaussian
/// matrix, with the sign of `R`'s diagonal folded into `Q`.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut col = q.column_mut(j);
            col.neg_mut();
        }
    }
    q
}

pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm(&v);
        if r > 1e-8 {
            return v.into_iter().map(|c| c / r).collect();
        }
    }
}
