use rayon::prelude::*;
use serde::Serialize;

use super::roots::bisect;
use crate::error::Result;
use crate::geometry::{contact_normal, Point3};
use crate::grid::GridSpec;
use crate::profile::SurfaceProfile;
use crate::surface::{cross_product_direct, evaluate, frame, RulingFrame};

/// `[(s + ξ)² + δ²] θ′ + (2s + ξ) δ′ + γ′ − δ ξ′`; zero exactly at
/// singular points.
pub fn singular_residual(f: &RulingFrame) -> f64 {
    let u = f.s + f.xi;
    (u * u + f.delta * f.delta) * f.theta_prime + (2.0 * f.s + f.xi) * f.delta_prime + f.gamma_prime
        - f.delta * f.xi_prime
}

/// `|N × (−y, x, 1)| / |N|` for the surface normal `N` computed directly
/// from α, β, γ, θ. `None` where `N = 0`, since parallelism is then vacuous.
pub fn parallelism_ratio(profile: &SurfaceProfile, s: f64, t: f64) -> Result<Option<f64>> {
    let n = cross_product_direct(profile, s, t)?;
    let p = evaluate(profile, s, t)?;
    let norm = n.norm();
    if norm == 0.0 {
        return Ok(None);
    }
    Ok(Some(n.cross(contact_normal(p)).norm() / norm))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub s: f64,
    pub t: f64,
    pub position: Point3,
    pub residual: f64,
    /// `None` where the surface normal vanishes.
    pub oracle_ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SingularScan {
    pub points: Vec<SingularPoint>,
    /// Sign changes that bisection could not drive below tolerance.
    pub warnings: Vec<String>,
}

impl SingularScan {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn residual_at(profile: &SurfaceProfile, s: f64, t: f64) -> f64 {
    frame(profile, s, t).map(|f| singular_residual(&f)).unwrap_or(f64::NAN)
}

/// Scans grid lines in both directions for sign changes of the singular
/// residual and refines each one by bisection.
pub fn scan_singular_set(profile: &SurfaceProfile, grid: &GridSpec, tol: f64) -> Result<SingularScan> {
    let ss = grid.s_values();
    let ts = grid.t_values();
    let values: Vec<Vec<f64>> = ts
        .par_iter()
        .map(|&t| {
            ss.iter()
                .map(|&s| frame(profile, s, t).map(|f| singular_residual(&f)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    // (s, t) candidates and whether each came from a bisection.
    let mut candidates: Vec<(f64, f64, f64)> = Vec::new();
    let mut warnings = Vec::new();
    let mut push_refined = |s: f64, t: f64, r: f64, label: String| {
        if r.abs() < tol {
            candidates.push((s, t, r));
        } else {
            warnings.push(format!(
                "grid too coarse: sign change {label} refined only to |residual| = {:.3e}",
                r.abs()
            ));
        }
    };

    for (j, row) in values.iter().enumerate() {
        let t = ts[j];
        for (i, &r) in row.iter().enumerate() {
            if r.abs() < tol {
                push_refined(ss[i], t, r, String::new());
            }
        }
        for i in 0..ss.len() - 1 {
            let (r0, r1) = (row[i], row[i + 1]);
            if r0.abs() >= tol && r1.abs() >= tol && (r0 < 0.0) != (r1 < 0.0) {
                let (s, r) = bisect(|s| residual_at(profile, s, t), ss[i], ss[i + 1], r0);
                push_refined(s, t, r, format!("at t = {t}, s ∈ [{}, {}]", ss[i], ss[i + 1]));
            }
        }
    }
    for (i, &s) in ss.iter().enumerate() {
        for j in 0..ts.len() - 1 {
            let (r0, r1) = (values[j][i], values[j + 1][i]);
            if r0.abs() >= tol && r1.abs() >= tol && (r0 < 0.0) != (r1 < 0.0) {
                let (t, r) = bisect(|t| residual_at(profile, s, t), ts[j], ts[j + 1], r0);
                push_refined(s, t, r, format!("at s = {s}, t ∈ [{}, {}]", ts[j], ts[j + 1]));
            }
        }
    }

    candidates.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
    candidates.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);

    let points = candidates
        .into_iter()
        .map(|(s, t, residual)| {
            Ok(SingularPoint {
                s,
                t,
                position: evaluate(profile, s, t)?,
                residual,
                oracle_ratio: parallelism_ratio(profile, s, t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SingularScan { points, warnings })
}
