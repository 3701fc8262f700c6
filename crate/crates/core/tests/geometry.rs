//! Finite-difference geometry against closed forms, and the multiplicity
//! test against an independent maximizer count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use legendrian_pinching::catalog::{calabi_sigma, calabi_torus, control_non_legendrian, lookup, totally_geodesic};
use legendrian_pinching::curvature::simons_gap;
use legendrian_pinching::immersion::{
    field_scan, jet, jet_with, legendrian_residual, sectional_curvature, sigma_at, JetOptions, DEFAULT_H,
};
use legendrian_pinching::spectrum::{multiplicity_one, theta, ThetaOptions, TOL_LAGRANGE};
use legendrian_pinching::tensor::SymCubic;
use legendrian_pinching::Error;

#[test]
fn calabi2_scan_has_constant_theta() {
    let e = calabi_torus(2).unwrap();
    let pts = field_scan(&e.immersion, &[50, 50], &JetOptions::default()).unwrap();
    assert_eq!(pts.len(), 2500);
    let want = e.expected.theta.unwrap();
    for p in &pts {
        let r = p.record.as_ref().unwrap_or_else(|| panic!("{:?}: {:?}", p.u, p.error));
        assert!((r.report.theta - want).abs() < 1e-5, "{:?}: {}", p.u, r.report.theta);
        assert!(r.report.gap_main.abs() < 1e-5);
        assert!(r.legendrian_residual < 1e-8);
    }
}

#[test]
fn geodesic_spheres_are_flat_in_b() {
    for n in 2..=5 {
        let e = totally_geodesic(n).unwrap();
        let res = vec![5; n];
        for p in field_scan(&e.immersion, &res, &JetOptions::default()).unwrap() {
            let r = p.record.unwrap();
            assert!(r.report.norm_sq < 1e-10, "n={n}");
            assert!(r.report.theta < 1e-5);
            assert!(r.mean_curvature < 1e-5);
        }
    }
}

#[test]
fn control_is_rejected() {
    let e = control_non_legendrian();
    let j = jet(&e.immersion, &[0.7, 1.9], DEFAULT_H).unwrap();
    let res = legendrian_residual(&j);
    // <JF, dF/ds> = 2/3 with |dF/ds| = sqrt(2/3)
    assert!(res >= 0.1, "{res}");
    assert!(matches!(sigma_at(&j), Err(Error::LegendrianViolation { .. })));
    let scan = field_scan(&e.immersion, &[4, 4], &JetOptions::default()).unwrap();
    assert!(scan.iter().all(|p| p.record.is_none() && p.error.is_some()));
}

#[test]
fn sampled_calabi_satisfies_simons_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=6 {
        let e = calabi_torus(n).unwrap();
        for _ in 0..5 {
            let u: Vec<f64> = e
                .immersion
                .axes
                .iter()
                .map(|a| a.lo + (a.hi - a.lo) * rng.random_range(0.1..0.9))
                .collect();
            let s = sigma_at(&jet(&e.immersion, &u, DEFAULT_H).unwrap()).unwrap().sigma.traceless_part();
            assert!(simons_gap(&s).abs() < 1e-4, "n={n}");
            let closed = calabi_sigma(n).unwrap().invariants();
            let inv = s.invariants();
            assert!((inv.gram - closed.gram).abs() < 1e-4);
            assert!((inv.comm - closed.comm).abs() < 1e-4);
        }
    }
}

#[test]
fn halving_h_quarters_the_error() {
    let e = calabi_torus(3).unwrap();
    let u = [0.4, 1.3, 2.0];
    let want = e.expected.norm_sq.unwrap();
    let err = |h: f64| {
        let j = jet_with(&e.immersion, &u, &JetOptions { h, richardson: false }).unwrap();
        (j.b_norm_sq() - want).abs()
    };
    let ratio = err(4e-2) / err(2e-2);
    assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    let rich = jet_with(&e.immersion, &u, &JetOptions { h: 4e-2, richardson: true }).unwrap();
    assert!((rich.b_norm_sq() - want).abs() < err(4e-2) / 10.0);
}

#[test]
fn sectional_curvatures() {
    let k = sectional_curvature(&lookup("geodesic2").unwrap().immersion, &[1.0, 2.0], 1e-2).unwrap();
    assert!((k - 1.0).abs() < 1e-4, "{k}");
    let k = sectional_curvature(&lookup("calabi2").unwrap().immersion, &[1.0, 2.0], 1e-2).unwrap();
    assert!(k.abs() < 1e-4, "{k}");
}

/// Calabi n=3 plus `t Re((x_2 + i x_3)^3)`. The perturbation is invariant
/// under rotation by 2 pi / 3 in the (e_2, e_3) plane, so once the maximum
/// leaves the e_1 axis it is attained three times.
fn perturbed(t: f64) -> SymCubic {
    let mut s = calabi_sigma(3).unwrap();
    s.set(1, 1, 1, t);
    s.set(1, 2, 2, -t);
    s
}

/// Number of distinct global maximizers found by plain projected gradient
/// ascent from many random starts.
fn count_maximizers(s: &SymCubic, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tops: Vec<(f64, Vec<f64>)> = Vec::new();
    for _ in 0..400 {
        let mut x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        for _ in 0..4000 {
            let g = s.contract2(&x);
            let y: Vec<f64> = (0..3).map(|i| x[i] + 0.05 * g[i]).collect();
            let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            x = y.iter().map(|v| v / r).collect();
        }
        tops.push((s.cubic(&x), x));
    }
    let best = tops.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let mut distinct: Vec<Vec<f64>> = Vec::new();
    for (v, x) in tops {
        if v < best - 1e-6 {
            continue;
        }
        let far = |y: &Vec<f64>| x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() > 1e-2;
        if distinct.iter().all(far) {
            distinct.push(x);
        }
    }
    distinct.len()
}

#[test]
fn multiplicity_one_along_a_family() {
    for (t, simple) in [(0.0, true), (0.1, true), (0.3, true), (3.0, false)] {
        let s = perturbed(t);
        assert!(s.is_traceless(1e-14));
        let spec = theta(&s, &ThetaOptions::default()).unwrap();
        let count = count_maximizers(&s, 5);
        assert_eq!(count == 1, simple, "t={t}: oracle found {count} maximizers");
        assert_eq!(multiplicity_one(&s, &spec, TOL_LAGRANGE), simple, "t={t}");
        if !simple {
            assert_eq!(count, 3, "t={t}");
        }
    }
}
