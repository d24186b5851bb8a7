//! One-call analysis of a profile, assembled into a serializable report.

use serde::Serialize;

use super::immersion::{scan_non_immersed, NonImmersedPoint};
use super::properness::{properness_check, PropernessReport};
use super::rulings::{injectivity_scan, ruling_intersection_probe, GapFormula, InjectivityViolation};
use super::singular::{scan_singular_set, SingularPoint};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::grid::GridSpec;
use crate::profile::SurfaceProfile;
use crate::tolerances::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalysisOptions {
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    /// Rulings compared pairwise by the injectivity scan and the probe.
    pub ruling_samples: usize,
    pub gap_formula: GapFormula,
}

impl AnalysisOptions {
    pub const DEFAULT_RULING_SAMPLES: usize = 200;

    pub fn for_profile(profile: &SurfaceProfile, ns: usize, nt: usize) -> Result<Self> {
        Ok(Self {
            grid: GridSpec::for_profile(profile, ns, nt)?,
            tolerances: Tolerances::default(),
            ruling_samples: Self::DEFAULT_RULING_SAMPLES,
            gap_formula: GapFormula::General,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub options: AnalysisOptions,
    pub non_immersed_points: Vec<NonImmersedPoint>,
    pub singular_points: Vec<SingularPoint>,
    pub singular_warnings: Vec<String>,
    pub injectivity_violations: Vec<InjectivityViolation>,
    /// `None` when the profile cannot be evaluated at the probe parameters.
    pub properness: Option<PropernessReport>,
    pub properness_error: Option<String>,
    /// A point where neighbouring rulings meet, if any.
    pub degenerate_contact_plane: Option<Point3>,
}

pub fn analyze(profile: &SurfaceProfile, options: &AnalysisOptions) -> Result<AnalysisReport> {
    let tol = &options.tolerances;
    let non_immersed_points = scan_non_immersed(profile, &options.grid, tol.immersion)?;
    let singular = scan_singular_set(profile, &options.grid, tol.singular)?;
    let ts = profile.t_range.linspace(options.ruling_samples);
    let injectivity_violations = injectivity_scan(profile, &ts, options.gap_formula, tol.parallel, tol.injectivity)?;
    let (properness, properness_error) = match properness_check(profile) {
        Ok(r) => (Some(r), None),
        Err(e @ Error::Domain { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let degenerate_contact_plane = ruling_intersection_probe(profile, &ts, tol.parallel, tol.injectivity)?;
    Ok(AnalysisReport {
        options: *options,
        non_immersed_points,
        singular_points: singular.points,
        singular_warnings: singular.warnings,
        injectivity_violations,
        properness,
        properness_error,
        degenerate_contact_plane,
    })
}
