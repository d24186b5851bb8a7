//! The contact form on the ruling direction, `Θ(∂X/∂s)`, which vanishes
//! identically on every ruled surface of this family.

use crate::error::Result;
use crate::geometry::{contact_form, Point3, Vec3};
use crate::profile::SurfaceProfile;
use crate::surface::frame;

/// `max |Θ_X(∂X/∂s)|` over the given `(s, t)` samples.
pub fn legendrian_residual(profile: &SurfaceProfile, samples: &[(f64, f64)]) -> Result<f64> {
    legendrian_residual_with(samples, |s, t| {
        let f = frame(profile, s, t)?;
        Ok((f.position, f.d_s))
    })
}

/// Same measure for any map returning a point and its `s`-tangent, so a
/// perturbed parametrization can be checked with the same code.
pub fn legendrian_residual_with<F>(samples: &[(f64, f64)], eval: F) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<(Point3, Vec3)>,
{
    let mut worst = 0.0f64;
    for &(s, t) in samples {
        let (p, d) = eval(s, t)?;
        worst = worst.max(contact_form(p, d).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{Interval, ProfileFunction, Topology};

    fn ex21() -> SurfaceProfile {
        let f = |s: &str| ProfileFunction::parse(s).unwrap();
        SurfaceProfile::new(
            f("atan(t) + pi/2"),
            f("0"),
            f("t"),
            f("-t"),
            Interval::new(-10.0, 10.0).unwrap(),
            Interval::new(-10.0, 10.0).unwrap(),
            Topology::Band,
        )
        .unwrap()
    }

    fn samples() -> Vec<(f64, f64)> {
        let r = Interval::new(-10.0, 10.0).unwrap().linspace(100);
        r.iter().flat_map(|&s| r.iter().map(move |&t| (s, t))).collect()
    }

    #[test]
    fn ex21_is_legendrian() {
        assert!(legendrian_residual(&ex21(), &samples()).unwrap() < 1e-12);
    }

    #[test]
    fn perturbed_height_row_is_flagged() {
        // Scale the s-coefficient of z by 1 + 1e−3: Θ(∂X/∂s) becomes 1e−3·δ.
        let p = ex21();
        let eps = 1e-3;
        let r = legendrian_residual_with(&samples(), |s, t| {
            let f = frame(&p, s, t)?;
            let pos = Vec3::new(f.position.x, f.position.y, f.position.z + eps * s * f.delta);
            Ok((pos, Vec3::new(f.d_s.x, f.d_s.y, f.d_s.z * (1.0 + eps))))
        })
        .unwrap();
        let max_delta = 10.0 / 101f64.sqrt();
        assert!(r > 1e-12);
        assert!((r - eps * max_delta).abs() < 1e-6, "{r}");
    }
}
