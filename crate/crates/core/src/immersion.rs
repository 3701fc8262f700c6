//! Finite-difference geometry of parametrized immersions into
//! `S^{2n+1} ⊂ C^{n+1}`.
//!
//! `C^{n+1}` is identified with `R^{2n+2}` through the ordering
//! `(x_0, y_0, x_1, y_1, ...)`, so the complex structure acts pairwise as
//! `J(x, y) = (-y, x)`. All derivatives are central differences; the
//! tangent frame is Gram–Schmidt on the coordinate vectors in index order.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::pinching::{pinching_report, PinchReport};
use crate::tensor::SymCubic;

/// Step for first and second derivatives of the immersion.
pub const DEFAULT_H: f64 = 1e-4;
/// Outer step for the Codazzi and Gauss residuals, which difference
/// quantities that are already difference quotients.
pub const DEFAULT_H_CURVATURE: f64 = 1e-2;
pub const TOL_FD: f64 = 1e-6;
pub const TOL_CODAZZI: f64 = 1e-3;
pub const TOL_GAUSS: f64 = 1e-3;

/// One coordinate of the parameter box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChartAxis {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl ChartAxis {
    pub fn periodic(lo: f64, hi: f64) -> Self {
        ChartAxis { lo, hi, periodic: true }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        ChartAxis { lo, hi, periodic: false }
    }

    /// `res` sample points: equally spaced from `lo` on a periodic axis,
    /// cell centers otherwise.
    pub fn samples(&self, res: usize) -> Vec<f64> {
        let w = (self.hi - self.lo) / res as f64;
        let offset = if self.periodic { 0.0 } else { 0.5 };
        (0..res).map(|k| self.lo + (k as f64 + offset) * w).collect()
    }
}

pub type ImmersionFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A map from a parameter box in `R^n` to the unit sphere of `C^{m+1}`,
/// `m = ambient_n`.
#[derive(Clone)]
pub struct Immersion {
    pub name: String,
    pub n: usize,
    pub ambient_n: usize,
    pub axes: Vec<ChartAxis>,
    eval: ImmersionFn,
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("ambient_n", &self.ambient_n)
            .field("axes", &self.axes)
            .finish()
    }
}

impl Immersion {
    pub fn new(
        name: impl Into<String>,
        ambient_n: usize,
        axes: Vec<ChartAxis>,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Immersion {
            name: name.into(),
            n: axes.len(),
            ambient_n,
            axes,
            eval: Arc::new(eval),
        }
    }

    /// Number of real ambient coordinates.
    pub fn ambient_dim(&self) -> usize {
        2 * self.ambient_n + 2
    }

    pub fn eval(&self, u: &[f64]) -> Vec<f64> {
        (self.eval)(u)
    }

    /// Row-major grid (first axis slowest) with `res[i]` points on axis `i`.
    pub fn grid(&self, res: &[usize]) -> Result<Vec<Vec<f64>>> {
        if res.len() != self.n || res.contains(&0) {
            return Err(Error::dim(format!(
                "grid needs {} positive resolutions, got {:?}",
                self.n, res
            )));
        }
        let axes: Vec<Vec<f64>> = self.axes.iter().zip(res).map(|(a, &r)| a.samples(r)).collect();
        let mut points = vec![Vec::with_capacity(self.n)];
        for samples in &axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    samples.iter().map(move |&s| {
                        let mut q = p.clone();
                        q.push(s);
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

/// The standard complex structure on `R^{2m+2}`.
pub fn apply_j(v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for p in 0..v.len() / 2 {
        out[2 * p] = -v[2 * p + 1];
        out[2 * p + 1] = v[2 * p];
    }
    out
}

fn shifted(u: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut v = u.to_vec();
    for &(i, d) in moves {
        v[i] += d;
    }
    v
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Value, first and second partials.
type Partials = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>);

/// Central-difference first and second partials at step `h`.
fn partials(imm: &Immersion, u: &[f64], h: f64) -> Partials {
    let n = imm.n;
    let f0 = imm.eval(u);
    let dim = f0.len();
    let plus: Vec<Vec<f64>> = (0..n).map(|i| imm.eval(&shifted(u, &[(i, h)]))).collect();
    let minus: Vec<Vec<f64>> = (0..n).map(|i| imm.eval(&shifted(u, &[(i, -h)]))).collect();
    let df: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..dim).map(|c| (plus[i][c] - minus[i][c]) / (2.0 * h)).collect())
        .collect();
    let mut d2f = vec![vec![vec![0.0; dim]; n]; n];
    for i in 0..n {
        d2f[i][i] = (0..dim)
            .map(|c| (plus[i][c] - 2.0 * f0[c] + minus[i][c]) / (h * h))
            .collect();
        for j in i + 1..n {
            let pp = imm.eval(&shifted(u, &[(i, h), (j, h)]));
            let pm = imm.eval(&shifted(u, &[(i, h), (j, -h)]));
            let mp = imm.eval(&shifted(u, &[(i, -h), (j, h)]));
            let mm = imm.eval(&shifted(u, &[(i, -h), (j, -h)]));
            let v: Vec<f64> = (0..dim)
                .map(|c| (pp[c] - pm[c] - mp[c] + mm[c]) / (4.0 * h * h))
                .collect();
            d2f[i][j] = v.clone();
            d2f[j][i] = v;
        }
    }
    (f0, df, d2f)
}

fn metric_of(df: &[Vec<f64>]) -> DMatrix<f64> {
    let n = df.len();
    DMatrix::from_fn(n, n, |i, j| dot(&df[i], &df[j]))
}

/// Induced metric from first differences only.
fn metric_at(imm: &Immersion, u: &[f64], h: f64) -> DMatrix<f64> {
    let n = imm.n;
    let df: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let p = imm.eval(&shifted(u, &[(i, h)]));
            let m = imm.eval(&shifted(u, &[(i, -h)]));
            p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    metric_of(&df)
}

/// Christoffel symbols `gamma[k][i][j]` from central differences of the
/// metric.
fn christoffel(imm: &Immersion, u: &[f64], h: f64, g_inv: &DMatrix<f64>) -> Vec<Vec<Vec<f64>>> {
    let n = imm.n;
    // dg[l] = d_l g
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|l| {
            let p = metric_at(imm, &shifted(u, &[(l, h)]), h);
            let m = metric_at(imm, &shifted(u, &[(l, -h)]), h);
            (p - m) / (2.0 * h)
        })
        .collect();
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += g_inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                gamma[k][i][j] = 0.5 * s;
            }
        }
    }
    gamma
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetOptions {
    pub h: f64,
    /// Combine steps `h` and `h/2` to cancel the `h^2` error term.
    pub richardson: bool,
}

impl Default for JetOptions {
    fn default() -> Self {
        JetOptions {
            h: DEFAULT_H,
            richardson: false,
        }
    }
}

/// Second-order data of an immersion at one parameter point.
#[derive(Debug, Clone)]
pub struct ImmersionJet {
    pub u: Vec<f64>,
    pub f: Vec<f64>,
    pub df: Vec<Vec<f64>>,
    pub d2f: Vec<Vec<Vec<f64>>>,
    pub g: DMatrix<f64>,
    /// Row `a` holds the coefficients of `e_a` in the coordinate basis.
    pub frame_coeffs: DMatrix<f64>,
    /// Orthonormal tangent frame in ambient coordinates.
    pub frame: Vec<Vec<f64>>,
    /// `gamma[k][i][j]`.
    pub gamma: Vec<Vec<Vec<f64>>>,
    /// Coordinate second fundamental form `B(d_i, d_j)`.
    pub b_coord: Vec<Vec<Vec<f64>>>,
    /// `B(e_a, e_b)` in the orthonormal frame.
    pub b: Vec<Vec<Vec<f64>>>,
    /// Mean curvature vector `trace B / n`.
    pub h: Vec<f64>,
}

pub fn jet(imm: &Immersion, u: &[f64], h: f64) -> Result<ImmersionJet> {
    jet_with(imm, u, &JetOptions { h, richardson: false })
}

pub fn jet_with(imm: &Immersion, u: &[f64], opts: &JetOptions) -> Result<ImmersionJet> {
    let n = imm.n;
    if u.len() != n {
        return Err(Error::dim(format!("parameter point of length {} for n = {n}", u.len())));
    }
    if !(opts.h > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {}", opts.h)));
    }
    let (f, mut df, mut d2f) = partials(imm, u, opts.h);
    if opts.richardson {
        let (_, df2, d2f2) = partials(imm, u, opts.h / 2.0);
        for i in 0..n {
            for c in 0..f.len() {
                df[i][c] = (4.0 * df2[i][c] - df[i][c]) / 3.0;
                for j in 0..n {
                    d2f[i][j][c] = (4.0 * d2f2[i][j][c] - d2f[i][j][c]) / 3.0;
                }
            }
        }
    }
    let dim = f.len();
    let g = metric_of(&df);

    let eig = g.clone().symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    let chol = if lo > 1e-8 * hi { g.clone().cholesky() } else { None };
    let Some(chol) = chol else {
        return Err(Error::DegenerateChart { u: u.to_vec() });
    };
    let g_inv = chol.inverse();
    // g = L L^T, so the rows of L^{-1} d F are Gram–Schmidt on d_1 F, d_2 F, ...
    let frame_coeffs = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateChart { u: u.to_vec() })?;
    let frame: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            let mut e = vec![0.0; dim];
            for i in 0..n {
                axpy(frame_coeffs[(a, i)], &df[i], &mut e);
            }
            e
        })
        .collect();

    let gamma = christoffel(imm, u, opts.h, &g_inv);

    let mut b_coord = vec![vec![vec![0.0; dim]; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut v = d2f[i][j].clone();
            // tangential part through g^{-1}
            let proj: Vec<f64> = (0..n).map(|l| dot(&d2f[i][j], &df[l])).collect();
            for k in 0..n {
                let c: f64 = (0..n).map(|l| g_inv[(k, l)] * proj[l]).sum();
                axpy(-c, &df[k], &mut v);
            }
            axpy(g[(i, j)], &f, &mut v);
            b_coord[j][i] = v.clone();
            b_coord[i][j] = v;
        }
    }
    let mut b = vec![vec![vec![0.0; dim]; n]; n];
    for a in 0..n {
        for c in 0..n {
            let mut v = vec![0.0; dim];
            for i in 0..n {
                for j in 0..n {
                    let w = frame_coeffs[(a, i)] * frame_coeffs[(c, j)];
                    if w != 0.0 {
                        axpy(w, &b_coord[i][j], &mut v);
                    }
                }
            }
            b[a][c] = v;
        }
    }
    let mut hv = vec![0.0; dim];
    for a in 0..n {
        axpy(1.0 / n as f64, &b[a][a], &mut hv);
    }
    Ok(ImmersionJet {
        u: u.to_vec(),
        f,
        df,
        d2f,
        g,
        frame_coeffs,
        frame,
        gamma,
        b_coord,
        b,
        h: hv,
    })
}

impl ImmersionJet {
    pub fn n(&self) -> usize {
        self.df.len()
    }

    /// `sum_{ab} |B(e_a, e_b)|^2`.
    pub fn b_norm_sq(&self) -> f64 {
        self.b.iter().flatten().map(|v| dot(v, v)).sum()
    }

    pub fn mean_curvature_norm(&self) -> f64 {
        dot(&self.h, &self.h).sqrt()
    }

    /// Largest of `|<B(e_a, e_b), e_c>|`, `|<B(e_a, e_b), F>|` and the
    /// asymmetry of `B`.
    pub fn normality_residual(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                let v = &self.b[a][b];
                worst = worst.max(dot(v, &self.f).abs());
                for e in &self.frame {
                    worst = worst.max(dot(v, e).abs());
                }
                let asym = v.iter().zip(&self.b[b][a]).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
                worst = worst.max(asym);
            }
        }
        worst
    }
}

/// `max |<J F, d_i F>|, |<J d_i F, d_j F>|`.
pub fn legendrian_residual(j: &ImmersionJet) -> f64 {
    let jf = apply_j(&j.f);
    let mut worst = 0.0_f64;
    for (i, di) in j.df.iter().enumerate() {
        worst = worst.max(dot(&jf, di).abs());
        let jdi = apply_j(di);
        for dj in &j.df[i + 1..] {
            worst = worst.max(dot(&jdi, dj).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSample {
    /// Symmetrized `sigma_{abc} = <B(e_a, e_b), J e_c>` in the frame.
    pub sigma: SymCubic,
    /// Largest deviation of the raw values from their symmetrization.
    pub symmetry_residual: f64,
}

fn symmetrize(n: usize, raw: impl Fn(usize, usize, usize) -> f64) -> (SymCubic, f64) {
    let sigma = SymCubic::from_fn(n, |i, j, k| {
        (raw(i, j, k) + raw(i, k, j) + raw(j, i, k) + raw(j, k, i) + raw(k, i, j) + raw(k, j, i)) / 6.0
    })
    .expect("n >= 1");
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((raw(i, j, k) - sigma.get(i, j, k)).abs());
            }
        }
    }
    (sigma, worst)
}

pub const TOL_LEGENDRIAN_GATE: f64 = 1e-6;

pub fn sigma_at(j: &ImmersionJet) -> Result<SigmaSample> {
    let residual = legendrian_residual(j);
    if residual > TOL_LEGENDRIAN_GATE {
        return Err(Error::LegendrianViolation { residual });
    }
    let je: Vec<Vec<f64>> = j.frame.iter().map(|e| apply_j(e)).collect();
    let (sigma, symmetry_residual) = symmetrize(j.n(), |a, b, c| dot(&j.b[a][b], &je[c]));
    Ok(SigmaSample {
        sigma,
        symmetry_residual,
    })
}

/// Coordinate components `<B(d_i, d_j), J d_k F>`, symmetrized.
fn sigma_coord(j: &ImmersionJet) -> SymCubic {
    let jd: Vec<Vec<f64>> = j.df.iter().map(|d| apply_j(d)).collect();
    symmetrize(j.n(), |a, b, c| dot(&j.b_coord[a][b], &jd[c])).0
}

fn checked_jet(imm: &Immersion, u: &[f64], h: f64) -> Result<ImmersionJet> {
    let jt = jet(imm, u, h)?;
    let residual = legendrian_residual(&jt);
    if residual > TOL_LEGENDRIAN_GATE {
        return Err(Error::LegendrianViolation { residual });
    }
    Ok(jt)
}

/// Inner step used for the jets that the curvature residuals difference.
fn inner_step(h: f64) -> f64 {
    DEFAULT_H.min(h / 10.0)
}

/// `nabla sigma` in the orthonormal frame, as a dense `n^4` array indexed
/// `[((i n + j) n + k) n + l]` for `sigma_{ijk,l}`.
pub fn covariant_derivative(imm: &Immersion, u: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = imm.n;
    let hi = inner_step(h);
    let center = checked_jet(imm, u, hi)?;
    let s0 = sigma_coord(&center);
    let mut ds = Vec::with_capacity(n);
    for l in 0..n {
        let p = sigma_coord(&checked_jet(imm, &shifted(u, &[(l, h)]), hi)?);
        let m = sigma_coord(&checked_jet(imm, &shifted(u, &[(l, -h)]), hi)?);
        ds.push(p.add(&m.scaled(-1.0)).scaled(0.5 / h));
    }
    let gamma = &center.gamma;
    let mut coord = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = ds[l].get(i, j, k);
                    for m in 0..n {
                        v -= gamma[m][l][i] * s0.get(m, j, k)
                            + gamma[m][l][j] * s0.get(i, m, k)
                            + gamma[m][l][k] * s0.get(i, j, m);
                    }
                    coord[((i * n + j) * n + k) * n + l] = v;
                }
            }
        }
    }
    Ok(to_frame4(&coord, &center.frame_coeffs, n))
}

fn to_frame4(t: &[f64], c: &DMatrix<f64>, n: usize) -> Vec<f64> {
    // one index at a time
    let mut cur = t.to_vec();
    for slot in 0..4 {
        let stride = n.pow(3 - slot as u32);
        let mut next = vec![0.0; cur.len()];
        for idx in 0..cur.len() {
            let a = (idx / stride) % n;
            let base = idx - a * stride;
            let mut s = 0.0;
            for i in 0..n {
                s += c[(a, i)] * cur[base + i * stride];
            }
            next[idx] = s;
        }
        cur = next;
    }
    cur
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Largest deviation of `sigma_{ijk,l}` from its full symmetrization.
pub fn codazzi_residual(imm: &Immersion, u: &[f64], h: f64) -> Result<f64> {
    let n = imm.n;
    let t = covariant_derivative(imm, u, h)?;
    let perms = permutations4();
    let at = |ix: [usize; 4]| t[((ix[0] * n + ix[1]) * n + ix[2]) * n + ix[3]];
    let mut worst = 0.0_f64;
    for idx in 0..t.len() {
        let ix = [idx / (n * n * n), (idx / (n * n)) % n, (idx / n) % n, idx % n];
        let sym: f64 = perms
            .iter()
            .map(|p| at([ix[p[0]], ix[p[1]], ix[p[2]], ix[p[3]]]))
            .sum::<f64>()
            / 24.0;
        worst = worst.max((t[idx] - sym).abs());
    }
    Ok(worst)
}

/// Intrinsic curvature `R_{ijkl}` (with `R_{ijij}` the sectional
/// curvature times the area factor) from differences of the Christoffel
/// symbols, dense in coordinates.
fn intrinsic_curvature(imm: &Immersion, u: &[f64], h: f64, center: &ImmersionJet) -> Result<Vec<f64>> {
    let n = imm.n;
    let hi = inner_step(h);
    let mut dgamma = Vec::with_capacity(n);
    for m in 0..n {
        let p = jet(imm, &shifted(u, &[(m, h)]), hi)?.gamma;
        let q = jet(imm, &shifted(u, &[(m, -h)]), hi)?.gamma;
        let mut d = vec![vec![vec![0.0; n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    d[a][b][c] = (p[a][b][c] - q[a][b][c]) / (2.0 * h);
                }
            }
        }
        dgamma.push(d);
    }
    let gm = &center.gamma;
    // riem[l][i][j][k] = R^l_{ijk}
    let mut riem = vec![0.0; n * n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for m in 0..n {
                        v += gm[l][i][m] * gm[m][j][k] - gm[l][j][m] * gm[m][i][k];
                    }
                    riem[((l * n + i) * n + j) * n + k] = v;
                }
            }
        }
    }
    let mut r = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v: f64 = (0..n)
                        .map(|m| center.g[(k, m)] * riem[((m * n + i) * n + j) * n + l])
                        .sum();
                    r[((i * n + j) * n + k) * n + l] = v;
                }
            }
        }
    }
    Ok(r)
}

/// Largest deviation, in the orthonormal frame, of the intrinsic curvature
/// from `d_ik d_jl - d_il d_jk + sum_m (sigma_ikm sigma_jlm - sigma_ilm sigma_jkm)`.
pub fn gauss_residual(imm: &Immersion, u: &[f64], h: f64) -> Result<f64> {
    let n = imm.n;
    let center = jet(imm, u, inner_step(h))?;
    let sigma = sigma_at(&center)?.sigma;
    let r = to_frame4(&intrinsic_curvature(imm, u, h, &center)?, &center.frame_coeffs, n);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                    let mut expected = d(i, k) * d(j, l) - d(i, l) * d(j, k);
                    for m in 0..n {
                        expected += sigma.get(i, k, m) * sigma.get(j, l, m)
                            - sigma.get(i, l, m) * sigma.get(j, k, m);
                    }
                    worst = worst.max((r[((i * n + j) * n + k) * n + l] - expected).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Sectional curvature of the coordinate plane `(d_0, d_1)`.
pub fn sectional_curvature(imm: &Immersion, u: &[f64], h: f64) -> Result<f64> {
    let n = imm.n;
    if n < 2 {
        return Err(Error::dim("sectional curvature needs n >= 2"));
    }
    let center = jet(imm, u, inner_step(h))?;
    let r = intrinsic_curvature(imm, u, h, &center)?;
    let g = &center.g;
    let area = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(0, 1)];
    // R_{0101} in the ((i n + j) n + k) n + l layout
    Ok(r[n * n + 1] / area)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub legendrian_residual: f64,
    pub mean_curvature: f64,
    pub normality_residual: f64,
    pub symmetry_residual: f64,
    /// Largest slice trace of the sampled `sigma` before projection.
    pub trace_residual: f64,
    pub report: PinchReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub u: Vec<f64>,
    pub record: Option<PointRecord>,
    pub error: Option<String>,
}

/// Pinching data at one parameter point. The sampled `sigma` is projected
/// onto its traceless part before the report is built; the size of the
/// removed trace is kept in `trace_residual`.
pub fn point_record(imm: &Immersion, u: &[f64], opts: &JetOptions) -> Result<PointRecord> {
    let jt = jet_with(imm, u, opts)?;
    let sample = sigma_at(&jt)?;
    let trace_residual = sample
        .sigma
        .trace_vector()
        .iter()
        .fold(0.0_f64, |m, t| m.max(t.abs()));
    let report = pinching_report(&sample.sigma.traceless_part())?;
    Ok(PointRecord {
        legendrian_residual: legendrian_residual(&jt),
        mean_curvature: jt.mean_curvature_norm(),
        normality_residual: jt.normality_residual(),
        symmetry_residual: sample.symmetry_residual,
        trace_residual,
        report,
    })
}

/// One record per grid point in row-major order. Point failures are stored
/// in the record instead of aborting the scan.
pub fn field_scan(imm: &Immersion, res: &[usize], opts: &JetOptions) -> Result<Vec<ScanPoint>> {
    let points = imm.grid(res)?;
    Ok(points
        .into_par_iter()
        .map(|u| match point_record(imm, &u, opts) {
            Ok(r) => ScanPoint {
                u,
                record: Some(r),
                error: None,
            },
            Err(e) => ScanPoint {
                u,
                record: None,
                error: Some(e.to_string()),
            },
        })
        .collect())
}

/// Unit-norm check `| |F(u)| - 1 |`.
pub fn sphere_residual(imm: &Immersion, u: &[f64]) -> f64 {
    let f = DVector::from_vec(imm.eval(u));
    (f.norm() - 1.0).abs()
}
