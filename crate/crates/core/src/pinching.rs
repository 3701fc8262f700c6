//! Pinching quantities and the algebraic inequalities behind them.
//!
//! Every gap is reported signed, positive meaning "pinched": a gap of the
//! form `bound - |B|^2` is `>= 0` exactly when the corresponding condition
//! holds at the point.

use serde::Serialize;

use crate::canonical::Canonical3;
use crate::curvature::simons_gap;
use crate::error::{Error, Result};
use crate::spectrum::{self, AdaptedSpectrum, ThetaOptions, TOL_LAGRANGE};
use crate::tensor::{SymCubic, TOL_TRACE};

/// Slack allowed on the algebraic inequalities checked by this module.
pub const TOL_INEQ: f64 = 1e-9;

/// Left side of the kappa inequality, `gram - |sigma|^4 / 5` written in
/// `(x, y, z)`.
pub fn kappa_lhs(x: f64, y: f64, z: f64) -> f64 {
    1.5 * x * x + 0.3 * y * y + 0.3 * z * z + 3.0 * x * y + 0.9 * y * z
}

/// `(2 kappa / 5) (S - (5 kappa - 3) / (2 kappa) x) S` with
/// `S = 5/2 x + 3/2 y + z`.
pub fn kappa_rhs(x: f64, y: f64, z: f64, kappa: f64) -> f64 {
    let s = crate::canonical::norm_sq_xyz(x, y, z);
    0.4 * kappa * (s - (5.0 * kappa - 3.0) / (2.0 * kappa) * x) * s
}

/// `RHS - LHS` of the kappa family; nonnegative for `kappa >= 7/5`.
pub fn kappa_inequality_gap(c: &Canonical3, kappa: f64) -> Result<f64> {
    kappa_gap_xyz(c.x, c.y, c.z, kappa)
}

/// [`kappa_inequality_gap`] directly on the reduced variables.
pub fn kappa_gap_xyz(x: f64, y: f64, z: f64, kappa: f64) -> Result<f64> {
    if !(kappa >= 1.4) {
        return Err(Error::domain(format!(
            "kappa inequality is only asserted for kappa >= 7/5, got {kappa}"
        )));
    }
    Ok(kappa_rhs(x, y, z, kappa) - kappa_lhs(x, y, z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// Round `S^7`, three-dimensional Legendrians; Simons constant 4.
    Sphere4,
    /// Nearly Kähler `S^6` Lagrangians; Simons constant 15/4.
    NearlyKahler154,
}

impl Ambient {
    pub fn simons_constant(self) -> f64 {
        match self {
            Ambient::Sphere4 => 4.0,
            Ambient::NearlyKahler154 => 15.0 / 4.0,
        }
    }

    pub fn threshold(self, theta_sq: f64) -> f64 {
        match self {
            Ambient::Sphere4 => 10.0 / 7.0 * (1.0 + theta_sq),
            Ambient::NearlyKahler154 => 75.0 / 56.0 + 10.0 / 7.0 * theta_sq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplacianBound {
    pub threshold: f64,
    /// `(14/5)(threshold - |sigma|^2)|sigma|^2`.
    pub bound: f64,
    /// `c |sigma|^2 - 5 gram + |sigma|^4`, the algebraic part of the
    /// Laplacian once `comm = 4 gram - |sigma|^4` is substituted.
    pub simons_term: f64,
    pub holds: bool,
}

/// Lower bound for `1/2 Delta |sigma|^2 - |nabla sigma|^2` on a
/// three-dimensional example.
pub fn laplacian_lower_bound(c: &Canonical3, ambient: Ambient) -> LaplacianBound {
    let s = c.norm_sq();
    let gram = c.gram();
    let threshold = ambient.threshold(c.x);
    let bound = 2.8 * (threshold - s) * s;
    let simons_term = ambient.simons_constant() * s - 5.0 * gram + s * s;
    LaplacianBound {
        threshold,
        bound,
        simons_term,
        holds: simons_term >= bound - TOL_INEQ * (1.0 + s * s),
    }
}

/// [`laplacian_lower_bound`] for a raw tensor, which must live on `R^3`.
pub fn laplacian_lower_bound_for(sigma: &SymCubic, ambient: Ambient) -> Result<LaplacianBound> {
    if sigma.dim() != 3 {
        return Err(Error::dim(format!(
            "Laplacian bound is stated for n = 3, got {}",
            sigma.dim()
        )));
    }
    let c = crate::canonical::canonical3(sigma)?;
    Ok(laplacian_lower_bound(&c, ambient))
}

/// Elementary symmetric polynomials `e1, e2, e3`.
pub(crate) fn elementary3(a: &[f64]) -> (f64, f64, f64) {
    let (mut e1, mut e2, mut e3) = (0.0, 0.0, 0.0);
    for &v in a {
        e3 += v * e2;
        e2 += v * e1;
        e1 += v;
    }
    (e1, e2, e3)
}

/// `RHS - LHS` of Newton's inequality
/// `e3 <= 2(n-3) / (3(n-2)) e2^2 / e1` for `m = n - 1` numbers.
pub fn newton_gap(a: &[f64]) -> Result<f64> {
    let m = a.len();
    if m < 2 {
        return Err(Error::dim(format!("Newton's inequality needs at least 2 numbers, got {m}")));
    }
    let (e1, e2, e3) = elementary3(a);
    if !(e1 > 0.0) {
        return Err(Error::domain(format!("sum of inputs must be positive, got {e1}")));
    }
    let n = (m + 1) as f64;
    Ok(2.0 * (n - 3.0) / (3.0 * (n - 2.0)) * e2 * e2 / e1 - e3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaChain {
    pub beta: f64,
    pub stationarity: f64,
    /// `(n+2)/sqrt(n) mu_1`.
    pub bound: f64,
    pub bound_ratio: f64,
    /// `(n+2)/(n-1) mu_1^2`.
    pub cs_bound: f64,
    /// `stationarity <= 0` and `mu_1 >= 2 mu_2`.
    pub admissible: bool,
    pub passes: bool,
}

pub fn beta_of(mu: &[f64]) -> f64 {
    mu[0] * mu[0] + 3.0 * mu[1..].iter().map(|m| m * m).sum::<f64>()
}

/// Checks that stationarity and the second-order condition force
/// `beta >= (n+2)/sqrt(n) mu_1`, and that `beta >= (n+2)/(n-1) mu_1^2`.
pub fn beta_chain_check(mu: &[f64], n: usize) -> Result<BetaChain> {
    if mu.len() != n || n < 2 {
        return Err(Error::dim(format!("expected {n} >= 2 eigenvalues, got {}", mu.len())));
    }
    let scale = 1.0 + mu.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let sum: f64 = mu.iter().sum();
    if sum.abs() > 1e-10 * scale {
        return Err(Error::domain(format!("eigenvalues must sum to zero, got {sum:e}")));
    }
    let mu1 = mu[0];
    if mu[1..].iter().any(|&m| m > mu1) {
        return Err(Error::domain("mu_1 must be the largest eigenvalue"));
    }
    if !(mu1 > 0.0) {
        return Err(Error::domain(format!("mu_1 must be positive, got {mu1}")));
    }
    let nf = n as f64;
    let rest = &mu[1..];
    let sq: f64 = rest.iter().map(|m| m * m).sum();
    let cube: f64 = rest.iter().map(|m| m * m * m).sum();
    let stationarity = (nf + 1.0) * mu1 - mu1.powi(3) + 2.0 * cube - 3.0 * mu1 * sq;
    let beta = beta_of(mu);
    let bound = (nf + 2.0) / nf.sqrt() * mu1;
    let cs_bound = (nf + 2.0) / (nf - 1.0) * mu1 * mu1;
    let mu2 = rest.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let admissible = stationarity <= 0.0 && mu1 >= 2.0 * mu2;
    let passes = (!admissible || beta >= bound - TOL_INEQ) && beta >= cs_bound - TOL_INEQ;
    Ok(BetaChain {
        beta,
        stationarity,
        bound,
        bound_ratio: beta / bound,
        cs_bound,
        admissible,
        passes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PinchFlags {
    pub main: bool,
    pub n3_quadratic: Option<bool>,
    pub sphere_threshold: Option<bool>,
    pub nearly_kahler: Option<bool>,
}

/// Pointwise pinching data for one cubic form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinchReport {
    pub n: usize,
    pub norm_sq: f64,
    pub theta: f64,
    pub beta: f64,
    pub mu: Vec<f64>,
    /// `(n+2)/sqrt(n) theta - |B|^2`.
    pub gap_main: f64,
    /// `2 + theta^2 - |B|^2`, `n = 3` only.
    pub gap_n3_quadratic: Option<f64>,
    /// `(10/7)(1 + theta^2) - |B|^2`, `n = 3` only.
    pub gap_sphere_threshold: Option<f64>,
    /// `75/56 + (10/7) theta^2 - |B|^2`, `n = 3` only.
    pub gap_nearly_kahler: Option<f64>,
    pub simons_gap: f64,
    pub lagrange_residual: f64,
    pub flags: PinchFlags,
    /// Internal consistency checks that failed on the computed values.
    pub violations: Vec<String>,
}

impl PinchReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn pinching_report(sigma: &SymCubic) -> Result<PinchReport> {
    sigma.check_traceless(TOL_TRACE)?;
    let spec = spectrum::theta(sigma, &ThetaOptions::default())?;
    pinching_report_with(sigma, &spec)
}

/// As [`pinching_report`], reusing a spectrum already computed for `sigma`.
pub fn pinching_report_with(sigma: &SymCubic, spec: &AdaptedSpectrum) -> Result<PinchReport> {
    sigma.check_traceless(TOL_TRACE)?;
    let n = sigma.dim();
    let nf = n as f64;
    let s = sigma.norm_sq();
    let theta = spec.theta;
    let t2 = theta * theta;
    let beta = beta_of(&spec.mu);
    let gap_main = (nf + 2.0) / nf.sqrt() * theta - s;
    let n3 = |v: f64| if n == 3 { Some(v) } else { None };
    let gap_n3_quadratic = n3(2.0 + t2 - s);
    let gap_sphere_threshold = n3(Ambient::Sphere4.threshold(t2) - s);
    let gap_nearly_kahler = n3(Ambient::NearlyKahler154.threshold(t2) - s);

    let slack = TOL_INEQ * (1.0 + s);
    let mut violations = Vec::new();
    if spec.lagrange_residual > TOL_LAGRANGE * (1.0 + s.sqrt()) {
        violations.push(format!("lagrange residual {:e}", spec.lagrange_residual));
    }
    if beta > s + slack {
        violations.push(format!("beta {beta} exceeds |B|^2 {s}"));
    }
    if n >= 2 {
        let lower = (nf + 2.0) / (nf - 1.0) * t2;
        if beta < lower - slack {
            violations.push(format!("beta {beta} below (n+2)/(n-1) theta^2 = {lower}"));
        }
        if spec.second_order_margin() < -TOL_LAGRANGE * (1.0 + theta) {
            violations.push(format!(
                "mu_1 - 2 mu_2 = {:e} at the maximizer",
                spec.second_order_margin()
            ));
        }
    }
    if n == 2 && (s - 4.0 * t2).abs() > 1e-8 * (1.0 + s) {
        violations.push(format!("n = 2 but |B|^2 - 4 theta^2 = {:e}", s - 4.0 * t2));
    }
    // the hypothesis is taken exactly: Calabi data sits on its boundary
    if n == 3 && gap_main >= 0.0 && gap_n3_quadratic.unwrap() < -slack {
        violations.push(format!(
            "|B|^2 <= 5/sqrt(3) theta holds but 2 + theta^2 - |B|^2 = {:e}",
            gap_n3_quadratic.unwrap()
        ));
    }

    Ok(PinchReport {
        n,
        norm_sq: s,
        theta,
        beta,
        mu: spec.mu.clone(),
        gap_main,
        gap_n3_quadratic,
        gap_sphere_threshold,
        gap_nearly_kahler,
        simons_gap: simons_gap(sigma),
        lagrange_residual: spec.lagrange_residual,
        flags: PinchFlags {
            main: gap_main >= 0.0,
            n3_quadratic: gap_n3_quadratic.map(|g| g >= 0.0),
            sphere_threshold: gap_sphere_threshold.map(|g| g >= 0.0),
            nearly_kahler: gap_nearly_kahler.map(|g| g >= 0.0),
        },
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_calabi_equality() {
        let c = Canonical3::from_params(1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 0.0, 0.0);
        assert!((c.x - 4.0 / 3.0).abs() < 1e-15);
        for kappa in [1.4, 1.5, 2.0, 5.0] {
            assert!(kappa_inequality_gap(&c, kappa).unwrap().abs() < 1e-10);
        }
        let z = Canonical3::from_params(0.0, 0.0, 0.0, 0.0);
        assert_eq!(kappa_inequality_gap(&z, 1.4).unwrap(), 0.0);
        assert!(matches!(kappa_inequality_gap(&z, 1.3), Err(Error::Domain(_))));
    }

    #[test]
    fn kappa_rhs_factorizes() {
        for &(x, y, z, k) in &[(1.0, 2.0, 3.0, 1.4), (0.3, 0.0, 5.0, 2.5), (4.0, 1.0, 0.1, 5.0)] {
            let product = 1.5 * (x + k * y + 2.0 * k / 3.0 * z) * (x + 0.6 * y + 0.4 * z);
            assert!((kappa_rhs(x, y, z, k) - product).abs() < 1e-12 * (1.0 + product));
        }
    }

    #[test]
    fn laplacian_constants() {
        let r = 1.0 / 3f64.sqrt();
        let c = Canonical3::from_params(r, r, 0.0, 0.0);
        let b = laplacian_lower_bound(&c, Ambient::Sphere4);
        assert!((b.threshold - 10.0 / 3.0).abs() < 1e-14);
        assert!(b.bound.abs() < 1e-12);
        assert!(b.holds);
        let z = Canonical3::from_params(0.0, 0.0, 0.0, 0.0);
        let b = laplacian_lower_bound(&z, Ambient::Sphere4);
        assert!((b.threshold - 10.0 / 7.0).abs() < 1e-15);
        assert_eq!(b.bound, 0.0);
        assert!((Ambient::NearlyKahler154.threshold(1.25) - 25.0 / 8.0).abs() < 1e-15);
        let four = SymCubic::zeros(4).unwrap();
        assert!(matches!(
            laplacian_lower_bound_for(&four, Ambient::Sphere4),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn newton_examples() {
        assert!(newton_gap(&[1.0, 1.0, 1.0]).unwrap().abs() < 1e-15);
        assert_eq!(newton_gap(&[0.7, 2.0]).unwrap(), 0.0);
        assert!((newton_gap(&[2.0, 1.0, 0.0]).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!(matches!(newton_gap(&[0.0, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(newton_gap(&[1.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn beta_chain_calabi() {
        let r = 3f64.sqrt();
        let b = beta_chain_check(&[2.0 / r, -1.0 / r, -1.0 / r], 3).unwrap();
        assert!((b.beta - 10.0 / 3.0).abs() < 1e-12);
        assert!((b.bound - 10.0 / 3.0).abs() < 1e-12);
        assert!(b.stationarity.abs() < 1e-12);
        assert!(b.passes);
        assert!(matches!(beta_chain_check(&[0.0, 0.0, 0.0], 3), Err(Error::Domain(_))));
        assert!(matches!(beta_chain_check(&[1.0, 0.0], 3), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_tensor_report() {
        let r = pinching_report(&SymCubic::zeros(3).unwrap()).unwrap();
        assert_eq!(r.gap_main, 0.0);
        assert_eq!(r.gap_n3_quadratic, Some(2.0));
        assert!((r.gap_sphere_threshold.unwrap() - 10.0 / 7.0).abs() < 1e-15);
        assert!((r.gap_nearly_kahler.unwrap() - 75.0 / 56.0).abs() < 1e-15);
        assert!(r.flags.main && r.flags.sphere_threshold == Some(true));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn non_traceless_rejected() {
        let t = SymCubic::from_entries(2, [((0, 0, 0), 1.0)]).unwrap();
        assert!(matches!(pinching_report(&t), Err(Error::Trace { .. })));
    }
}
