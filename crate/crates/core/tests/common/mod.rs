//! Random profile families shared by the property and acceptance tests.

#![allow(dead_code)]

use pmin_core::profile::{Interval, ProfileFunction, SurfaceProfile, Topology};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Seed for every sampled suite, so a failure replays exactly.
pub const SEED: u64 = 20_211_018;

pub fn rng(stream: u64) -> StdRng {
    StdRng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn func(src: &str) -> ProfileFunction {
    ProfileFunction::parse(src).unwrap_or_else(|e| panic!("`{src}`: {e}"))
}

fn interval(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

/// A smooth four-function profile on `t, s ∈ [−3, 3]` from twelve
/// coefficients in roughly `[−1, 1]`:
///
/// ```text
/// θ = c₀ + c₁t + c₂ sin t
/// α = c₃ + c₄t + c₅ cos t
/// β = c₆ + c₇ sin 2t + c₈ t
/// γ = c₉ + c₁₀ t + c₁₁ t³/8
/// ```
pub fn smooth_profile(c: &[f64; 12]) -> SurfaceProfile {
    let theta = format!("({}) + ({})*t + ({})*sin(t)", c[0], c[1], c[2]);
    let alpha = format!("({}) + ({})*t + ({})*cos(t)", c[3], c[4], c[5]);
    let beta = format!("({}) + ({})*sin(2*t) + ({})*t", c[6], c[7], c[8]);
    let gamma = format!("({}) + ({})*t + ({})*t^3/8", c[9], c[10], c[11]);
    SurfaceProfile::new(
        func(&theta),
        func(&alpha),
        func(&beta),
        func(&gamma),
        interval(-3.0, 3.0),
        interval(-3.0, 3.0),
        Topology::Band,
    )
    .unwrap()
}

pub fn random_coefficients(rng: &mut StdRng) -> [f64; 12] {
    std::array::from_fn(|_| rng.gen_range(-1.0..1.0))
}

/// A profile whose horizontal offsets have no component along the ruling
/// (`ξ ≡ 0`): `(α, β) = δ (cosθ, sinθ)`.
pub fn xi_free_profile(c: &[f64; 6]) -> SurfaceProfile {
    let theta = format!("({}) + ({})*t + ({})*sin(t)", c[0], 0.5 + c[1].abs(), c[2] * 0.4);
    let delta = format!("({}) + ({})*cos(t)", c[3], c[4]);
    let gamma = format!("({})*t + ({})*t^2", c[5], 0.3 * c[3]);
    SurfaceProfile::from_delta_xi(
        func(&theta),
        func(&delta),
        ProfileFunction::constant(0.0),
        func(&gamma),
        interval(-3.0, 3.0),
        interval(-3.0, 3.0),
        Topology::Band,
    )
    .unwrap()
}
