//! JSON profile documents.
//!
//! ```json
//! { "theta": "atan(t) + pi/2", "alpha": "0", "beta": "t", "gamma": "-t",
//!   "t_range": [-10, 10], "s_range": [-10, 10], "topology": "band" }
//! ```
//!
//! `delta`/`xi` may replace `alpha`/`beta`. Any function may be given as
//! `{"samples": [[t, f], ...]}` instead of an expression string.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Interval, ProfileFunction, SurfaceProfile, Topology};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSource {
    Expr(String),
    Samples { samples: Vec<[f64; 2]> },
}

impl FunctionSource {
    pub fn build(&self, name: &str) -> Result<ProfileFunction> {
        let f = match self {
            FunctionSource::Expr(src) => ProfileFunction::parse(src).map_err(|e| match e {
                Error::Syntax { position, message } => Error::Syntax {
                    position,
                    message: format!("in `{name}`: {message}"),
                },
                other => other,
            })?,
            FunctionSource::Samples { samples } => {
                let (ts, fs) = samples.iter().map(|p| (p[0], p[1])).unzip();
                ProfileFunction::tabulated(ts, fs)?
            }
        };
        Ok(f.named(name))
    }
}

impl From<&ProfileFunction> for FunctionSource {
    fn from(f: &ProfileFunction) -> Self {
        match f.as_table() {
            Some(table) => FunctionSource::Samples { samples: table.pairs() },
            None => FunctionSource::Expr(f.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub theta: FunctionSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<FunctionSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<FunctionSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<FunctionSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<FunctionSource>,
    pub gamma: FunctionSource,
    pub t_range: [f64; 2],
    pub s_range: [f64; 2],
    #[serde(default = "default_topology")]
    pub topology: Topology,
}

fn default_topology() -> Topology {
    Topology::Band
}

impl ProfileDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_profile(&self) -> Result<SurfaceProfile> {
        let t_range = Interval::new(self.t_range[0], self.t_range[1])?;
        let s_range = Interval::new(self.s_range[0], self.s_range[1])?;
        let theta = self.theta.build("theta")?;
        let gamma = self.gamma.build("gamma")?;
        match (&self.alpha, &self.beta, &self.delta, &self.xi) {
            (Some(a), Some(b), None, None) => SurfaceProfile::new(
                theta,
                a.build("alpha")?,
                b.build("beta")?,
                gamma,
                t_range,
                s_range,
                self.topology,
            ),
            (None, None, Some(d), Some(x)) => SurfaceProfile::from_delta_xi(
                theta,
                d.build("delta")?,
                x.build("xi")?,
                gamma,
                t_range,
                s_range,
                self.topology,
            ),
            _ => Err(Error::InvalidProfile(
                "give either both `alpha` and `beta`, or both `delta` and `xi`".into(),
            )),
        }
    }

    pub fn from_profile(profile: &SurfaceProfile) -> Self {
        Self {
            theta: (&profile.theta).into(),
            alpha: Some((&profile.alpha).into()),
            beta: Some((&profile.beta).into()),
            delta: None,
            xi: None,
            gamma: (&profile.gamma).into(),
            t_range: [profile.t_range.min, profile.t_range.max],
            s_range: [profile.s_range.min, profile.s_range.max],
            topology: profile.topology,
        }
    }
}

impl SurfaceProfile {
    pub fn from_json(text: &str) -> Result<Self> {
        ProfileDocument::from_json(text)?.to_profile()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ProfileDocument::from_profile(self))?)
    }
}
