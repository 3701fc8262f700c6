//! Closed-form reference immersions with their expected invariants.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::immersion::{ChartAxis, Immersion};
use crate::tensor::SymCubic;

/// Distance kept from the poles of the polar charts.
pub const POLE_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expected {
    pub norm_sq: Option<f64>,
    pub theta: Option<f64>,
    pub mu: Option<Vec<f64>>,
    /// `None` when minimality is not asserted.
    pub minimal: Option<bool>,
    pub legendrian: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub immersion: Immersion,
    pub closed_form_sigma: Option<SymCubic>,
    pub expected: Expected,
}

/// Nested polar coordinates on `S^{k-1} ⊂ R^k`: `angles` are
/// `theta_1, ..., theta_{k-2}` in `(0, pi)` followed by `psi`.
pub fn polar_point(angles: &[f64]) -> Vec<f64> {
    let k = angles.len() + 1;
    let mut out = Vec::with_capacity(k);
    let mut s = 1.0;
    for &a in &angles[..k - 2] {
        out.push(s * a.cos());
        s *= a.sin();
    }
    let psi = angles[k - 2];
    out.push(s * psi.cos());
    out.push(s * psi.sin());
    out
}

fn polar_axes(k: usize) -> Vec<ChartAxis> {
    let mut axes = vec![ChartAxis::interval(POLE_MARGIN, PI - POLE_MARGIN); k - 2];
    axes.push(ChartAxis::periodic(0.0, TAU));
    axes
}

/// Closed-form cubic form of the Calabi torus in the frame whose first
/// vector is the circle direction.
pub fn calabi_sigma(n: usize) -> Result<SymCubic> {
    if n < 2 {
        return Err(Error::dim(format!("Calabi torus needs n >= 2, got {n}")));
    }
    let r = (n as f64).sqrt();
    let mut t = SymCubic::zeros(n)?;
    t.set(0, 0, 0, (n as f64 - 1.0) / r);
    for j in 1..n {
        t.set(0, j, j, -1.0 / r);
    }
    Ok(t)
}

/// `F = (gamma_1 phi, gamma_2)` on `S^1 x S^{n-1}` with
/// `gamma(t) = (sqrt(n/(n+1)) e^{it/sqrt(n)}, sqrt(1/(n+1)) e^{-i sqrt(n) t})`.
/// Chart: `t` on `[0, 2 pi sqrt(n))`, then polar angles of `phi`.
pub fn calabi_torus(n: usize) -> Result<CatalogEntry> {
    let sigma = calabi_sigma(n)?;
    let nf = n as f64;
    let rn = nf.sqrt();
    let a1 = (nf / (nf + 1.0)).sqrt();
    let a2 = (1.0 / (nf + 1.0)).sqrt();
    let mut axes = vec![ChartAxis::periodic(0.0, TAU * rn)];
    axes.extend(polar_axes(n));
    let immersion = Immersion::new(format!("calabi{n}"), n, axes, move |u| {
        let t = u[0];
        let phi = polar_point(&u[1..]);
        let (s1, c1) = (t / rn).sin_cos();
        let (s2, c2) = (-rn * t).sin_cos();
        let mut out = Vec::with_capacity(2 * n + 2);
        for p in &phi {
            out.push(a1 * c1 * p);
            out.push(a1 * s1 * p);
        }
        out.push(a2 * c2);
        out.push(a2 * s2);
        out
    });
    let mut mu = vec![-1.0 / rn; n];
    mu[0] = (nf - 1.0) / rn;
    Ok(CatalogEntry {
        name: format!("calabi{n}"),
        immersion,
        closed_form_sigma: Some(sigma),
        expected: Expected {
            norm_sq: Some((nf - 1.0) * (nf + 2.0) / nf),
            theta: Some((nf - 1.0) / rn),
            mu: Some(mu),
            minimal: Some(true),
            legendrian: true,
        },
    })
}

/// The real unit sphere `S^n ⊂ R^{n+1} ⊂ C^{n+1}` in polar coordinates.
pub fn totally_geodesic(n: usize) -> Result<CatalogEntry> {
    if n < 1 {
        return Err(Error::dim("totally geodesic sphere needs n >= 1"));
    }
    let immersion = Immersion::new(format!("geodesic{n}"), n, polar_axes(n + 1), move |u| {
        polar_point(u).into_iter().flat_map(|x| [x, 0.0]).collect()
    });
    Ok(CatalogEntry {
        name: format!("geodesic{n}"),
        immersion,
        // cubic forms are only stored for n >= 2
        closed_form_sigma: SymCubic::zeros(n).ok(),
        expected: Expected {
            norm_sq: Some(0.0),
            theta: Some(0.0),
            mu: Some(vec![0.0; n]),
            minimal: Some(true),
            legendrian: true,
        },
    })
}

/// `F(s, t) = (e^{is}, e^{it}, e^{i(s+t)}) / sqrt(3)` in `S^5`. Here
/// `<J F, d_s F> = 2/3` everywhere, so the torus is not Legendrian.
pub fn control_non_legendrian() -> CatalogEntry {
    let r = 1.0 / 3f64.sqrt();
    let immersion = Immersion::new(
        "control",
        2,
        vec![ChartAxis::periodic(0.0, TAU), ChartAxis::periodic(0.0, TAU)],
        move |u| {
            let (s, t) = (u[0], u[1]);
            vec![
                r * s.cos(),
                r * s.sin(),
                r * t.cos(),
                r * t.sin(),
                r * (s + t).cos(),
                r * (s + t).sin(),
            ]
        },
    );
    CatalogEntry {
        name: "control".into(),
        immersion,
        closed_form_sigma: None,
        expected: Expected {
            norm_sq: None,
            theta: None,
            mu: None,
            minimal: None,
            legendrian: false,
        },
    }
}

/// Catalog names: `calabi2` .. `calabi8`, `geodesic2` .. `geodesic8`,
/// `control`. The geodesic circle is available through
/// [`totally_geodesic`] but has no cubic form to scan.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    if name == "control" {
        return Ok(control_non_legendrian());
    }
    let parse = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
    match (parse("calabi"), parse("geodesic")) {
        (Some(n), _) if (2..=8).contains(&n) => calabi_torus(n),
        (_, Some(n)) if (2..=8).contains(&n) => totally_geodesic(n),
        _ => Err(Error::UnknownEntry(name.to_string())),
    }
}

pub fn names() -> Vec<String> {
    let mut v: Vec<String> = (2..=8).map(|n| format!("calabi{n}")).collect();
    v.extend((2..=8).map(|n| format!("geodesic{n}")));
    v.push("control".into());
    v
}
