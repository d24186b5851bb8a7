use rayon::prelude::*;
use serde::Serialize;

use super::roots::bisect;
use crate::error::Result;
use crate::grid::GridSpec;
use crate::profile::SurfaceProfile;
use crate::surface::{frame, frame_from_values, RulingFrame};

/// The two quantities whose simultaneous vanishing makes ∂sX × ∂tX = 0:
/// `(s + ξ)θ′ + δ′` and `s δ′ + γ′ − δ(ξ′ − δθ′)`.
pub fn immersion_residuals(f: &RulingFrame) -> (f64, f64) {
    let r_a = (f.s + f.xi) * f.theta_prime + f.delta_prime;
    let r_b = f.s * f.delta_prime + f.gamma_prime - f.delta * (f.xi_prime - f.delta * f.theta_prime);
    (r_a, r_b)
}

pub fn is_immersed_at(f: &RulingFrame, tol: f64) -> bool {
    let (r_a, r_b) = immersion_residuals(f);
    r_a.abs() >= tol || r_b.abs() >= tol
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NonImmersedPoint {
    pub s: f64,
    pub t: f64,
    pub r_a: f64,
    pub r_b: f64,
}

/// Both residuals are affine in `s`: `r_a = θ′ s + c₁`, `r_b = δ′ s + c₂`.
/// They share a zero exactly where `D = θ′ c₂ − δ′ c₁` vanishes.
fn determinant(f: &RulingFrame) -> f64 {
    let c1 = f.xi * f.theta_prime + f.delta_prime;
    let c2 = f.gamma_prime - f.delta * f.b;
    f.theta_prime * c2 - f.delta_prime * c1
}

fn solve_s(f: &RulingFrame, tol: f64, grid_s: &[f64]) -> Vec<f64> {
    let c1 = f.xi * f.theta_prime + f.delta_prime;
    let c2 = f.gamma_prime - f.delta * f.b;
    if f.theta_prime.abs() >= f.delta_prime.abs() && f.theta_prime != 0.0 {
        vec![-c1 / f.theta_prime]
    } else if f.delta_prime != 0.0 {
        vec![-c2 / f.delta_prime]
    } else if c1.abs() < tol && c2.abs() < tol {
        // The whole ruling is critical.
        grid_s.to_vec()
    } else {
        Vec::new()
    }
}

/// Locates points where the parametrization fails to be an immersion.
/// Every returned point satisfies both residual bounds when re-evaluated.
pub fn scan_non_immersed(profile: &SurfaceProfile, grid: &GridSpec, tol: f64) -> Result<Vec<NonImmersedPoint>> {
    let ts = grid.t_values();
    let ss = grid.s_values();
    let frames = ts
        .par_iter()
        .map(|&t| frame(profile, 0.0, t))
        .collect::<Result<Vec<_>>>()?;
    let dets: Vec<f64> = frames.iter().map(determinant).collect();

    let mut candidates: Vec<f64> = Vec::new();
    for (i, &d) in dets.iter().enumerate() {
        if d.abs() < tol {
            candidates.push(ts[i]);
        }
    }
    for i in 0..ts.len() - 1 {
        let (d0, d1) = (dets[i], dets[i + 1]);
        if d0.abs() >= tol && d1.abs() >= tol && (d0 < 0.0) != (d1 < 0.0) {
            let (t, _) = bisect(
                |t| profile.values(t).map(|v| determinant(&frame_from_values(&v, 0.0, t))).unwrap_or(f64::NAN),
                ts[i],
                ts[i + 1],
                d0,
            );
            candidates.push(t);
        }
    }

    let mut out = Vec::new();
    for t in candidates {
        let v = profile.values(t)?;
        let f0 = frame_from_values(&v, 0.0, t);
        for s in solve_s(&f0, tol, &ss) {
            if !grid.s_range.contains(s) {
                continue;
            }
            let f = frame_from_values(&v, s, t);
            let (r_a, r_b) = immersion_residuals(&f);
            if r_a.abs() < tol && r_b.abs() < tol {
                out.push(NonImmersedPoint { s, t, r_a, r_b });
            }
        }
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.s.total_cmp(&b.s)));
    out.dedup_by(|a, b| (a.t - b.t).abs() < 1e-12 && (a.s - b.s).abs() < 1e-12);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{Interval, ProfileFunction, Topology};

    fn profile(theta: &str, alpha: &str, beta: &str, gamma: &str, r: f64) -> SurfaceProfile {
        let f = |s: &str| ProfileFunction::parse(s).unwrap();
        let r = Interval::new(-r, r).unwrap();
        SurfaceProfile::new(f(theta), f(alpha), f(beta), f(gamma), r, r, Topology::Band).unwrap()
    }

    #[test]
    fn vertical_plane_residuals_are_constant() {
        let p = profile("0.4", "0", "0", "t", 5.0);
        for &(s, t) in &[(0.0, 0.0), (2.0, -3.0)] {
            let f = frame(&p, s, t).unwrap();
            assert_eq!(immersion_residuals(&f), (0.0, 1.0));
        }
    }

    #[test]
    fn shifted_offset_profile_is_immersed() {
        // θ ≡ 0, α = t, β = 0 gives δ = t, ξ = 0, γ ≡ 0.
        let p = profile("0", "t", "0", "0", 5.0);
        let f = frame(&p, 1.7, -0.3).unwrap();
        assert_eq!(immersion_residuals(&f).0, 1.0);
        let grid = GridSpec::for_profile(&p, 21, 21).unwrap();
        assert!(scan_non_immersed(&p, &grid, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn ex21_is_immersed_on_grid() {
        let p = profile("atan(t) + pi/2", "0", "t", "-t", 10.0);
        let grid = GridSpec::for_profile(&p, 200, 200).unwrap();
        let ss = grid.s_values();
        for t in grid.t_values() {
            for &s in &ss {
                assert!(is_immersed_at(&frame(&p, s, t).unwrap(), 1e-9));
            }
        }
        assert!(scan_non_immersed(&p, &grid, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn contact_plane_profile_fails_at_apex() {
        let p = profile("t", "1", "2", "3", 3.0);
        let grid = GridSpec::for_profile(&p, 11, 7).unwrap();
        let pts = scan_non_immersed(&p, &grid, 1e-9).unwrap();
        assert_eq!(pts.len(), 7);
        assert!(pts.iter().all(|q| q.s.abs() < 1e-12));
    }

    #[test]
    fn isolated_non_immersed_point_is_refined() {
        // θ = t, α = β = 0, γ = t²/2 − t: δ = ξ = 0, so r_a = s and
        // r_b = γ′ = t − 1; the only critical point is (0, 1).
        let p = profile("t", "0", "0", "t^2/2 - t", 3.0);
        let grid = GridSpec::for_profile(&p, 9, 10).unwrap();
        let pts = scan_non_immersed(&p, &grid, 1e-9).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].s.abs() < 1e-12 && (pts[0].t - 1.0).abs() < 1e-12);
    }
}
