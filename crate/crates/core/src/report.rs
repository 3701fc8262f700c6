//! Batch checks and the report envelope shared by the command line tool.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canonical::canonical3;
use crate::catalog::CatalogEntry;
use crate::curvature::{algebraic_curvature, simons_gap, simons_rhs};
use crate::immersion::{field_scan, JetOptions, ScanPoint, TOL_FD};
use crate::linalg::random_orthogonal;
use crate::pinching::{
    beta_chain_check, kappa_gap_xyz, laplacian_lower_bound, newton_gap, pinching_report, Ambient,
};
use crate::error::Result;
use crate::tensor::SymCubic;

pub const REPORT_VERSION: &str = "1";

/// Overridable tolerances, addressed on the command line as `--tol-<name>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Identities that hold exactly in exact arithmetic.
    pub identity: f64,
    /// One-sided slack on inequalities.
    pub ineq: f64,
    /// Finite-difference jet residuals.
    pub fd: f64,
    /// Sampled invariants against their closed forms.
    pub invariant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-9,
            ineq: 1e-9,
            fd: TOL_FD,
            invariant: 1e-5,
        }
    }
}

/// Outcome of one batch check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl Check {
    fn at_most(name: &str, worst: f64, tolerance: f64, samples: usize) -> Self {
        Check {
            name: name.into(),
            pass: worst <= tolerance,
            worst,
            tolerance,
            samples,
        }
    }

    /// `worst` is a minimum that must stay above `-tolerance`.
    fn at_least(name: &str, worst: f64, tolerance: f64, samples: usize) -> Self {
        Check {
            name: name.into(),
            pass: worst >= -tolerance,
            worst,
            tolerance,
            samples,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// Random tensor and reduced-variable property sweeps for dimension `n`.
///
/// Checks that need the maximizer of the cubic form run on
/// `min(samples, 2000)` tensors; everything else on `samples`.
pub fn identity_suite(n: usize, samples: usize, seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let tensors: Vec<SymCubic> = (0..samples)
        .map(|_| SymCubic::random_traceless(n, &mut rng))
        .collect::<Result<_>>()?;

    let mut simons = 0.0_f64;
    let mut curvature = 0.0_f64;
    let mut weyl = 0.0_f64;
    for s in &tensors {
        let rhs = simons_rhs(s)?;
        simons = simons.max(rel(s.dot(&rhs), simons_gap(s)));
        let inv = s.invariants();
        if n == 3 {
            weyl = weyl.max(rel(inv.comm, 4.0 * inv.gram - inv.norm_sq * inv.norm_sq));
        }
        let r = algebraic_curvature(s)?;
        curvature = curvature.max(r.ricci_residual).max(r.symmetry_residual() / (1.0 + inv.norm_sq));
    }
    checks.push(Check::at_most("simons_contraction", simons, tol.identity, samples));
    checks.push(Check::at_most("curvature_symmetries", curvature, tol.identity, samples));
    if n == 3 {
        checks.push(Check::at_most("weyl_n3", weyl, tol.identity, samples));
    }

    let heavy = samples.min(2000);
    let mut lower_beta = f64::INFINITY;
    let mut invariance = 0.0_f64;
    let mut laplacian = f64::INFINITY;
    for s in &tensors[..heavy] {
        let rep = pinching_report(s)?;
        let nf = n as f64;
        if n >= 2 {
            lower_beta = lower_beta.min(rep.norm_sq - rep.beta).min(rep.beta - (nf + 2.0) / (nf - 1.0) * rep.theta * rep.theta);
        }
        let q = random_orthogonal(n, &mut rng);
        let rot = pinching_report(&s.rotated(&q))?;
        invariance = invariance
            .max(rel(rep.theta, rot.theta))
            .max(rel(rep.norm_sq, rot.norm_sq))
            .max(rel(rep.beta, rot.beta))
            .max(rel(rep.simons_gap, rot.simons_gap));
        if n == 3 {
            let c = canonical3(s)?;
            for ambient in [Ambient::Sphere4, Ambient::NearlyKahler154] {
                let b = laplacian_lower_bound(&c, ambient);
                laplacian = laplacian.min((b.simons_term - b.bound) / (1.0 + c.norm_sq().powi(2)));
            }
        }
    }
    if n >= 2 {
        checks.push(Check::at_least("beta_sandwich", lower_beta, tol.ineq, heavy));
    }
    checks.push(Check::at_most("rotation_invariance", invariance, 1e-8, heavy));
    if n == 3 {
        checks.push(Check::at_least("laplacian_bound", laplacian, tol.ineq, heavy));

        let mut kappa = f64::INFINITY;
        let mut equality = 0.0_f64;
        for _ in 0..samples {
            let (x, y, z) = (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
            for k in [1.4, 1.5, 2.0, 5.0] {
                kappa = kappa.min(kappa_gap_xyz(x, y, z, k)?);
                equality = equality.max(kappa_gap_xyz(x, 0.0, 0.0, k)?.abs());
            }
        }
        checks.push(Check::at_least("kappa_inequality", kappa, tol.ineq, samples));
        checks.push(Check::at_most("kappa_equality", equality, tol.ineq, samples));
    }

    if n >= 3 {
        let mut newton = f64::INFINITY;
        for _ in 0..samples {
            let a: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.0..1.0)).collect();
            let scale = a.iter().sum::<f64>().powi(3);
            newton = newton.min(newton_gap(&a)? / (1.0 + scale));
        }
        checks.push(Check::at_least("newton_inequality", newton, 1e-12, samples));

        let mut beta = f64::INFINITY;
        let mut admissible = 0;
        for _ in 0..samples {
            let mu = random_mu(n, &mut rng);
            let b = beta_chain_check(&mu, n)?;
            if b.admissible {
                admissible += 1;
                beta = beta.min(b.beta - b.bound);
            }
            beta = beta.min(b.beta - b.cs_bound);
        }
        checks.push(Check::at_least("beta_chain", beta, tol.ineq, admissible));
    }
    Ok(checks)
}

/// Random sorted `mu` with `sum mu = 0` and `mu_1 > 0`, scaled into
/// `(0, 3]` so that both signs of the stationarity expression occur.
pub fn random_mu<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        v.sort_by(|a, b| b.total_cmp(a));
        if v[0] <= 1e-6 {
            continue;
        }
        let scale = rng.random_range(0.0..3.0) / v[0];
        let mut mu: Vec<f64> = v.iter().map(|x| x * scale).collect();
        // restore the exact zero sum after scaling
        let drift: f64 = mu.iter().sum();
        mu[n - 1] -= drift;
        if mu[0] > 0.0 && mu[1..].iter().all(|&m| m <= mu[0]) {
            return mu;
        }
    }
}

/// Failure messages for one scanned point of a catalog entry.
pub fn scan_failures(entry: &CatalogEntry, point: &ScanPoint, tol: &Tolerances) -> Vec<String> {
    let at = format!("u={:?}", point.u);
    let Some(rec) = &point.record else {
        return vec![format!("{at}: {}", point.error.as_deref().unwrap_or("no record"))];
    };
    let mut out = Vec::new();
    let mut bound = |name: &str, value: f64, limit: f64| {
        if !(value <= limit) {
            out.push(format!("{at}: {name} = {value:e} exceeds {limit:e}"));
        }
    };
    bound("legendrian_residual", rec.legendrian_residual, tol.fd);
    bound("normality_residual", rec.normality_residual, tol.fd);
    bound("symmetry_residual", rec.symmetry_residual, 10.0 * tol.fd);
    if entry.expected.minimal == Some(true) {
        bound("mean_curvature", rec.mean_curvature, tol.invariant);
    }
    let r = &rec.report;
    if let Some(s) = entry.expected.norm_sq {
        bound("norm_sq error", (r.norm_sq - s).abs(), tol.invariant);
    }
    if let Some(t) = entry.expected.theta {
        bound("theta error", (r.theta - t).abs(), tol.invariant);
    }
    if let (Some(s), Some(t)) = (entry.expected.norm_sq, entry.expected.theta) {
        let nf = r.n as f64;
        let gap = (nf + 2.0) / nf.sqrt() * t - s;
        bound("gap_main error", (r.gap_main - gap).abs(), tol.invariant);
    }
    out.extend(r.violations.iter().map(|v| format!("{at}: {v}")));
    out
}

/// Scans a catalog entry and collects per-point failures.
pub fn scan_entry(
    entry: &CatalogEntry,
    res: &[usize],
    opts: &JetOptions,
    tol: &Tolerances,
) -> Result<(Vec<ScanPoint>, Vec<String>)> {
    let points = field_scan(&entry.immersion, res, opts)?;
    let failures = points.iter().flat_map(|p| scan_failures(entry, p, tol)).collect();
    Ok((points, failures))
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Summary {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Top-level JSON document written by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub version: &'static str,
    pub config: C,
    pub records: Vec<R>,
    pub summary: Summary,
}

impl<C: Serialize, R: Serialize> Envelope<C, R> {
    pub fn new(config: C, records: Vec<R>, failures: Vec<String>) -> Self {
        Envelope {
            version: REPORT_VERSION,
            config,
            records,
            summary: Summary {
                pass: failures.is_empty(),
                failures,
            },
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub const SCAN_CSV_HEADER: [&str; 15] = [
    "u",
    "n",
    "norm_sq",
    "theta",
    "beta",
    "gap_main",
    "gap_n3_quadratic",
    "gap_sphere_threshold",
    "gap_nearly_kahler",
    "simons_gap",
    "legendrian_residual",
    "mean_curvature",
    "symmetry_residual",
    "trace_residual",
    "error",
];

pub fn scan_csv_row(p: &ScanPoint) -> Vec<String> {
    let u = p.u.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";");
    match &p.record {
        Some(r) => {
            let rep = &r.report;
            vec![
                u,
                rep.n.to_string(),
                fmt_f64(rep.norm_sq),
                fmt_f64(rep.theta),
                fmt_f64(rep.beta),
                fmt_f64(rep.gap_main),
                fmt_opt(rep.gap_n3_quadratic),
                fmt_opt(rep.gap_sphere_threshold),
                fmt_opt(rep.gap_nearly_kahler),
                fmt_f64(rep.simons_gap),
                fmt_f64(r.legendrian_residual),
                fmt_f64(r.mean_curvature),
                fmt_f64(r.symmetry_residual),
                fmt_f64(r.trace_residual),
                String::new(),
            ]
        }
        None => {
            let mut row = vec![u];
            row.extend(std::iter::repeat_n(String::new(), SCAN_CSV_HEADER.len() - 2));
            row.push(p.error.clone().unwrap_or_default());
            row
        }
    }
}
