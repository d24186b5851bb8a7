use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Interval, SurfaceProfile};

/// A rectangular `(s, t)` sampling grid with `ns × nt` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s_range: Interval,
    pub t_range: Interval,
    pub ns: usize,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(s_range: Interval, t_range: Interval, ns: usize, nt: usize) -> Result<Self> {
        if ns < 2 || nt < 2 {
            return Err(Error::InvalidGrid(format!("grid must be at least 2×2, got {ns}×{nt}")));
        }
        Ok(Self { s_range, t_range, ns, nt })
    }

    /// The profile's own ranges at the given resolution.
    pub fn for_profile(profile: &SurfaceProfile, ns: usize, nt: usize) -> Result<Self> {
        Self::new(profile.s_range, profile.t_range, ns, nt)
    }

    pub fn s_values(&self) -> Vec<f64> {
        self.s_range.linspace(self.ns)
    }

    pub fn t_values(&self) -> Vec<f64> {
        self.t_range.linspace(self.nt)
    }
}
