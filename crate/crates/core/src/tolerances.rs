//! Default thresholds shared by the analysis, classification and
//! verification passes. The CLI exposes overrides for the ones marked
//! in [`Tolerances`]; everything else is fixed.

use serde::{Deserialize, Serialize};

/// |sin(θ₂ − θ₁)| below this switches ruling intersection to the parallel branch.
pub const PARALLEL_EPS: f64 = 1e-9;

/// Refined singular roots must satisfy |singular residual| below this.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Relative bound on |cross × (−y, x, 1)| / |cross| for the parallelism oracle.
pub const PARALLELISM_ORACLE_TOL: f64 = 1e-6;

/// Both immersion residuals below this marks a point as non-immersed.
pub const IMMERSION_TOL: f64 = 1e-9;

/// Height gaps (and coincident-line offsets) below this count as a collision.
pub const INJECTIVITY_TOL: f64 = 1e-9;

/// Offset agreement for projected lines that are parallel.
pub const OFFSET_TOL: f64 = 1e-9;

/// The contact form on a ruling direction must vanish to this level.
pub const LEGENDRIAN_TOL: f64 = 1e-12;

/// Angular tolerance for pairwise tangent cross products sharing one direction.
pub const COPLANAR_ANGLE_TOL: f64 = 1e-8;

/// Pointwise agreement required of a reconstructed canonical form.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// |∇u + F| cutoff for graph-patch residuals.
pub const EPS_SING: f64 = 1e-6;

/// Singular exclusion radius, in grid steps.
pub const EXCLUSION_CELLS: f64 = 10.0;

/// Periodicity tolerance for annulus-type profiles.
pub const PERIODICITY_TOL: f64 = 1e-9;

/// Runtime-overridable subset of the thresholds above.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub singular: f64,
    pub parallel: f64,
    pub oracle: f64,
    pub immersion: f64,
    pub injectivity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            singular: SINGULAR_TOL,
            parallel: PARALLEL_EPS,
            oracle: PARALLELISM_ORACLE_TOL,
            immersion: IMMERSION_TOL,
            injectivity: INJECTIVITY_TOL,
        }
    }
}
