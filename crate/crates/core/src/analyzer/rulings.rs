//! Pairs and triples of rulings: where their planar projections cross,
//! how far apart the lifted lines are there, and what that says about
//! injectivity.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{signed_polygon_area, Point3, Vec3};
use crate::profile::SurfaceProfile;
use crate::surface::{projected_ruling, ProjectedRuling};
use crate::tolerances::OFFSET_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineIntersection {
    /// The projections meet at one point `(x, y)`; `z1`, `z2` are the
    /// heights of the two rulings above it and `gap = z2 − z1`.
    Cross { x: f64, y: f64, z1: f64, z2: f64, gap: f64 },
    ParallelDistinct { offset_gap: f64 },
    /// Same projected line; `gamma_gap` is the constant vertical
    /// separation of the two (parallel) rulings.
    Coincident { gamma_gap: f64 },
}

impl LineIntersection {
    pub fn gap(&self) -> Option<f64> {
        match self {
            LineIntersection::Cross { gap, .. } => Some(*gap),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<[f64; 2]> {
        match self {
            LineIntersection::Cross { x, y, .. } => Some([*x, *y]),
            _ => None,
        }
    }
}

/// Intersects the projections of two rulings and measures the height
/// gap between their lifts.
pub fn intersect_rulings(p1: &ProjectedRuling, p2: &ProjectedRuling, eps_parallel: f64) -> LineIntersection {
    let (s1, c1) = p1.theta.sin_cos();
    let (s2, c2) = p2.theta.sin_cos();
    let sin_psi = (p2.theta - p1.theta).sin();
    let (a1, b1, g1) = (p1.alpha, p1.beta, p1.gamma);
    let (a2, b2, g2) = (p2.alpha, p2.beta, p2.gamma);

    if sin_psi.abs() >= eps_parallel {
        let x = (a1 * c1 * s2 - a2 * c2 * s1 - (b2 - b1) * s1 * s2) / sin_psi;
        let y = (b2 * s2 * c1 - b1 * s1 * c2 + (a2 - a1) * c1 * c2) / sin_psi;
        let z1 = p1.height_at(x, y);
        let z2 = p2.height_at(x, y);
        let (da, db) = (a2 - a1, b2 - b1);
        let gap = -(da * c2 + db * s2) * (da * c1 + db * s1) / sin_psi - (a2 * b1 - a1 * b2) + g2 - g1;
        return LineIntersection::Cross { x, y, z1, z2, gap };
    }

    let sign = (p2.theta - p1.theta).cos().signum();
    let offset_gap = p2.delta - sign * p1.delta;
    if offset_gap.abs() < OFFSET_TOL {
        let (fx, fy) = (p1.delta * c1, p1.delta * s1);
        LineIntersection::Coincident {
            gamma_gap: p2.height_at(fx, fy) - p1.height_at(fx, fy),
        }
    } else {
        LineIntersection::ParallelDistinct { offset_gap }
    }
}

/// Height gap after shifting both rulings so that ξ = 0:
/// `(2δ₁δ₂ − (δ₁² + δ₂²) cos ψ) / sin ψ + γ₂ − γ₁` with ψ = θ₂ − θ₁.
/// `None` when the projections are parallel.
pub fn gap_xi_free(p1: &ProjectedRuling, p2: &ProjectedRuling, eps_parallel: f64) -> Option<f64> {
    let (q1, q2) = (p1.xi_free(), p2.xi_free());
    let psi = q2.theta - q1.theta;
    let sin_psi = psi.sin();
    if sin_psi.abs() < eps_parallel {
        return None;
    }
    let (d1, d2) = (q1.delta, q2.delta);
    Some((2.0 * d1 * d2 - (d1 * d1 + d2 * d2) * psi.cos()) / sin_psi + q2.gamma - q1.gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapFormula {
    /// Gap from the raw α, β, γ, θ.
    General,
    /// Gap after eliminating ξ.
    XiFree,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// Projections cross and the lifts meet above the crossing.
    Crossing { x: f64, y: f64, gap: f64 },
    /// Same projected line and the same lift.
    CoincidentLift { gamma_gap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InjectivityViolation {
    pub t1: f64,
    pub t2: f64,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

/// Checks every pair of sampled rulings for a collision.
pub fn injectivity_scan(
    profile: &SurfaceProfile,
    t_samples: &[f64],
    formula: GapFormula,
    eps_parallel: f64,
    tol: f64,
) -> Result<Vec<InjectivityViolation>> {
    let rulings = t_samples
        .iter()
        .map(|&t| projected_ruling(profile, t))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<InjectivityViolation> = (0..rulings.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let rulings = &rulings;
            (i + 1..rulings.len()).filter_map(move |j| {
                let (p1, p2) = (&rulings[i], &rulings[j]);
                if p1.t == p2.t {
                    return None;
                }
                let kind = match intersect_rulings(p1, p2, eps_parallel) {
                    LineIntersection::Cross { x, y, gap, .. } => {
                        let gap = match formula {
                            GapFormula::General => gap,
                            GapFormula::XiFree => gap_xi_free(p1, p2, eps_parallel).unwrap_or(gap),
                        };
                        (gap.abs() < tol).then_some(ViolationKind::Crossing { x, y, gap })
                    }
                    LineIntersection::Coincident { gamma_gap } => {
                        (gamma_gap.abs() < tol).then_some(ViolationKind::CoincidentLift { gamma_gap })
                    }
                    LineIntersection::ParallelDistinct { .. } => None,
                }?;
                Some(InjectivityViolation {
                    t1: p1.t,
                    t2: p2.t,
                    kind,
                })
            })
        })
        .collect();
    out.sort_by(|a, b| a.t1.total_cmp(&b.t1).then(a.t2.total_cmp(&b.t2)));
    Ok(out)
}

/// Both sides of the triangle identity for three rulings whose
/// projections pairwise cross at `P = Γ₁∩Γ₂`, `Q = Γ₂∩Γ₃`, `R = Γ₃∩Γ₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AreaIdentity {
    /// `(z₁ − z₂)(P) + (z₂ − z₃)(Q) + (z₃ − z₁)(R)` from the gap formula.
    pub lhs: f64,
    /// Twice the shoelace area of the triangle `P, R, Q`, signed by the
    /// orientation of that vertex order.
    pub rhs: f64,
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub r: [f64; 2],
    /// `true` when `P, R, Q` runs counterclockwise (then `rhs > 0`).
    pub counterclockwise: bool,
}

pub fn area_identity(profile: &SurfaceProfile, t1: f64, t2: f64, t3: f64, eps_parallel: f64) -> Result<AreaIdentity> {
    let g1 = projected_ruling(profile, t1)?;
    let g2 = projected_ruling(profile, t2)?;
    let g3 = projected_ruling(profile, t3)?;
    let cross = |a: &ProjectedRuling, b: &ProjectedRuling, label: &str| match intersect_rulings(a, b, eps_parallel) {
        LineIntersection::Cross { x, y, gap, .. } => Ok(([x, y], gap)),
        other => Err(Error::DegenerateTriple(format!("rulings {label} do not cross: {other:?}"))),
    };
    let (p, gap12) = cross(&g1, &g2, "1, 2")?;
    let (q, gap23) = cross(&g2, &g3, "2, 3")?;
    let (r, gap31) = cross(&g3, &g1, "3, 1")?;

    let scale = 1.0 + p.iter().chain(&q).chain(&r).fold(0.0f64, |m, v| m.max(v.abs()));
    let close = |u: [f64; 2], v: [f64; 2]| ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt() < 1e-12 * scale;
    if close(p, q) || close(q, r) || close(r, p) {
        return Err(Error::DegenerateTriple("intersection points coincide".into()));
    }

    // (z₁ − z₂)(P) = −gap₁₂ and so on around the triangle.
    let lhs = -(gap12 + gap23 + gap31);
    let rhs = 2.0 * signed_polygon_area(&[p, r, q]);
    Ok(AreaIdentity {
        lhs,
        rhs,
        p,
        q,
        r,
        counterclockwise: rhs > 0.0,
    })
}

/// Looks for neighbouring rulings that meet in space. Two consecutive
/// sample pairs must meet at the same point before it is reported, which
/// keeps far-apart returns of a ruling from counting.
pub fn ruling_intersection_probe(profile: &SurfaceProfile, t_samples: &[f64], eps_parallel: f64, tol: f64) -> Result<Option<Point3>> {
    let rulings = t_samples
        .iter()
        .map(|&t| projected_ruling(profile, t))
        .collect::<Result<Vec<_>>>()?;
    let meet = |a: &ProjectedRuling, b: &ProjectedRuling| match intersect_rulings(a, b, eps_parallel) {
        LineIntersection::Cross { x, y, z1, z2, gap } if gap.abs() < tol => Some(Vec3::new(x, y, 0.5 * (z1 + z2))),
        _ => None,
    };
    for w in rulings.windows(3) {
        if let (Some(p), Some(q)) = (meet(&w[0], &w[1]), meet(&w[1], &w[2])) {
            let scale = 1.0 + p.norm().max(q.norm());
            if (p - q).norm() < tol * scale {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}
