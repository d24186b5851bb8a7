//! Which side of a contact plane the surface lies on. Rulings are treated
//! as complete lines: any ruling not parallel to the plane crosses it.

use serde::Serialize;

use super::properness::PROBE_EXPONENTS;
use crate::classifier::Classification;
use crate::error::{Error, Result};
use crate::geometry::{Plane3, Point3};
use crate::grid::GridSpec;
use crate::profile::{SurfaceProfile, Topology};
use crate::surface::{evaluate, frame};

/// Below this `|n_z|` a plane counts as vertical.
pub const VERTICAL_TOL: f64 = 1e-9;
/// Rulings with `|n · d| / |d|` below this are treated as parallel to the plane.
pub const PARALLEL_TOL: f64 = 1e-12;
/// Points within this distance of the plane count as lying on it.
pub const ON_PLANE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// The side containing `(0, 0, +∞)`.
    Upper,
    Lower,
    /// Every sampled ruling lies in the plane.
    InPlane,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Containment {
    Contained { side: Side },
    Straddles { upper_witness: Point3, lower_witness: Point3 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub plane: Plane3,
    pub containment: Containment,
    pub rulings_checked: usize,
    /// Rulings that cross the plane.
    pub crossing_rulings: usize,
}

impl ContainmentReport {
    pub fn is_contained(&self) -> bool {
        matches!(self.containment, Containment::Contained { .. })
    }
}

/// Checks that `plane` is not vertical, i.e. is the contact plane at some point.
pub fn require_contact_plane(plane: &Plane3) -> Result<()> {
    if plane.normal.z.abs() <= VERTICAL_TOL {
        let n = plane.normal;
        return Err(Error::InvalidPlane(n.x, n.y, n.z));
    }
    Ok(())
}

fn probe_parameters(profile: &SurfaceProfile, plane: &Plane3, ts: &[f64]) -> Result<ContainmentReport> {
    require_contact_plane(plane)?;
    let mut upper: Option<Point3> = None;
    let mut lower: Option<Point3> = None;
    let mut crossing = 0;
    for &t in ts {
        let f = frame(profile, 0.0, t)?;
        let (p, d) = (f.position, f.d_s);
        let c0 = plane.upper_side_value(p);
        let c1 = plane.upper_side_value(p + d) - c0;
        if c1.abs() > PARALLEL_TOL * d.norm() {
            crossing += 1;
            let up = evaluate(profile, (1.0 - c0) / c1, t)?;
            let down = evaluate(profile, (-1.0 - c0) / c1, t)?;
            upper.get_or_insert(up);
            lower.get_or_insert(down);
        } else if c0 > ON_PLANE_TOL {
            upper.get_or_insert(p);
        } else if c0 < -ON_PLANE_TOL {
            lower.get_or_insert(p);
        }
    }
    let containment = match (upper, lower) {
        (Some(u), Some(l)) => Containment::Straddles {
            upper_witness: u,
            lower_witness: l,
        },
        (Some(_), None) => Containment::Contained { side: Side::Upper },
        (None, Some(_)) => Containment::Contained { side: Side::Lower },
        (None, None) => Containment::Contained { side: Side::InPlane },
    };
    Ok(ContainmentReport {
        plane: *plane,
        containment,
        rulings_checked: ts.len(),
        crossing_rulings: crossing,
    })
}

/// Classifies the rulings sampled at the grid's `t` values against the
/// closed half-spaces of `plane`.
pub fn halfspace_probe(profile: &SurfaceProfile, plane: &Plane3, grid: &GridSpec) -> Result<ContainmentReport> {
    probe_parameters(profile, plane, &grid.t_values())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfspaceCheck {
    pub report: ContainmentReport,
    /// For band profiles found contained on the sampled range: the same
    /// probe with the rulings at `|t| = 2^k` added, standing in for the
    /// complete surface. `None` when not needed or not evaluable there.
    pub extended: Option<ContainmentReport>,
    pub classified_contact_plane: bool,
    /// A contained surface that is not a contact plane.
    pub violation: bool,
}

/// Runs the probe and cross-checks it against a classification: only a
/// contact plane can lie in a half-space bounded by a contact plane.
pub fn halfspace_consistency(
    profile: &SurfaceProfile,
    plane: &Plane3,
    grid: &GridSpec,
    classification: &Classification,
) -> Result<HalfspaceCheck> {
    let report = halfspace_probe(profile, plane, grid)?;
    let classified_contact_plane = classification.is_contact_plane();
    let mut extended = None;
    let mut contained = report.is_contained();
    if contained && !classified_contact_plane && profile.topology == Topology::Band {
        let mut ts = grid.t_values();
        for k in PROBE_EXPONENTS {
            let tk = 2f64.powi(k);
            ts.extend([tk, -tk]);
        }
        // Tabulated profiles cannot leave their domain; keep the sampled verdict.
        if let Ok(ext) = probe_parameters(profile, plane, &ts) {
            contained = ext.is_contained();
            extended = Some(ext);
        }
    }
    Ok(HalfspaceCheck {
        report,
        extended,
        classified_contact_plane,
        violation: contained && !classified_contact_plane,
    })
}
