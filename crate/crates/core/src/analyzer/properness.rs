//! Sampled evidence for properness: how the distance `r_t` from the
//! origin to the ruling at `t` behaves as `|t|` grows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{SurfaceProfile, Topology};
use crate::surface::ruling_line3;

/// Exponents `k` of the probe parameters `|t| = 2^k`; the last probe is
/// 4096 times the first.
pub const PROBE_EXPONENTS: std::ops::RangeInclusive<i32> = 0..=12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Properness {
    Proper,
    NotProper,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailVerdict {
    Diverging,
    Bounded,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailEvidence {
    /// Probe parameters, increasing in `|t|`.
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub verdict: TailVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropernessReport {
    pub verdict: Properness,
    /// `None` for annulus profiles, which are proper without probing.
    pub positive_tail: Option<TailEvidence>,
    pub negative_tail: Option<TailEvidence>,
}

/// Distance from the origin to the ruling at `t`.
pub fn ruling_distance(profile: &SurfaceProfile, t: f64) -> Result<f64> {
    Ok(ruling_line3(profile, t)?.origin_distance())
}

fn judge_tail(r: &[f64]) -> TailVerdict {
    let k = r.len() - 1;
    let half = k / 2;
    // Running lower envelope: the smallest distance from probe j onward.
    let mut lower = r.to_vec();
    for j in (0..k).rev() {
        lower[j] = lower[j].min(lower[j + 1]);
    }
    if lower[half] >= 2.0 * lower[0].max(1.0) && lower[k] >= 2.0 * lower[half] {
        return TailVerdict::Diverging;
    }
    let early = r[..=half].iter().cloned().fold(1.0f64, f64::max);
    let late = r[half..].iter().cloned().fold(0.0f64, f64::max);
    if late <= 1.5 * early {
        TailVerdict::Bounded
    } else {
        TailVerdict::Undecided
    }
}

fn probe_tail(profile: &SurfaceProfile, sign: f64) -> Result<TailEvidence> {
    let mut t = Vec::new();
    let mut r = Vec::new();
    for k in PROBE_EXPONENTS {
        let tk = sign * 2f64.powi(k);
        let rk = ruling_distance(profile, tk).map_err(|e| match e {
            Error::Domain { function, .. } => Error::Domain { function, t: tk },
            other => other,
        })?;
        if !rk.is_finite() {
            return Err(Error::Domain {
                function: "ruling distance".into(),
                t: tk,
            });
        }
        t.push(tk);
        r.push(rk);
    }
    let verdict = judge_tail(&r);
    Ok(TailEvidence { t, r, verdict })
}

/// Proper when both tails diverge, not proper when either tail stays
/// bounded, inconclusive otherwise. The probes deliberately leave the
/// declared `t_range`, since properness concerns `t → ±∞`.
pub fn properness_check(profile: &SurfaceProfile) -> Result<PropernessReport> {
    if profile.topology == Topology::Annulus {
        return Ok(PropernessReport {
            verdict: Properness::Proper,
            positive_tail: None,
            negative_tail: None,
        });
    }
    let pos = probe_tail(profile, 1.0)?;
    let neg = probe_tail(profile, -1.0)?;
    let verdict = match (pos.verdict, neg.verdict) {
        (TailVerdict::Diverging, TailVerdict::Diverging) => Properness::Proper,
        (TailVerdict::Bounded, _) | (_, TailVerdict::Bounded) => Properness::NotProper,
        _ => Properness::Inconclusive,
    };
    Ok(PropernessReport {
        verdict,
        positive_tail: Some(pos),
        negative_tail: Some(neg),
    })
}
