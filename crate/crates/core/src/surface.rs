//! The ruled parametrization
//!
//! ```text
//! x = s sinθ(t) + α(t)
//! y = −s cosθ(t) + β(t)
//! z = s (β(t) sinθ(t) + α(t) cosθ(t)) + γ(t)
//! ```
//!
//! together with its tangents, the (δ, ξ) decomposition of (α, β), and
//! the rulings seen as planar lines and as lines in space.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{Line2, Line3, Point3, Vec3};
use crate::profile::{ProfileValues, SurfaceProfile};

/// Everything the analyzer needs at one `(s, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RulingFrame {
    pub s: f64,
    pub t: f64,
    pub position: Point3,
    pub d_s: Vec3,
    pub d_t: Vec3,
    /// ∂sX × ∂tX from the (δ, ξ) closed form.
    pub cross: Vec3,
    pub theta: f64,
    pub theta_prime: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub xi: f64,
    pub xi_prime: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    /// (s + ξ)θ′ + δ′
    pub a: f64,
    /// ξ′ − δθ′
    pub b: f64,
}

/// δ, ξ and their derivatives at one `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub delta: f64,
    pub xi: f64,
    pub delta_prime: f64,
    pub xi_prime: f64,
}

fn decompose_values(v: &ProfileValues) -> Decomposition {
    let (theta, dtheta) = v.theta;
    let (alpha, dalpha) = v.alpha;
    let (beta, dbeta) = v.beta;
    let (sn, cs) = theta.sin_cos();
    let delta = alpha * cs + beta * sn;
    let xi = alpha * sn - beta * cs;
    Decomposition {
        delta,
        xi,
        delta_prime: dalpha * cs + dbeta * sn - dtheta * xi,
        xi_prime: dalpha * sn - dbeta * cs + dtheta * delta,
    }
}

pub fn decompose(profile: &SurfaceProfile, t: f64) -> Result<Decomposition> {
    Ok(decompose_values(&profile.values(t)?))
}

/// Inverse of [`decompose`]: `(α, β) = δ (cosθ, sinθ) + ξ (sinθ, −cosθ)`.
pub fn recompose(theta: f64, delta: f64, xi: f64) -> (f64, f64) {
    let (sn, cs) = theta.sin_cos();
    (delta * cs + xi * sn, delta * sn - xi * cs)
}

fn position_from(v: &ProfileValues, s: f64) -> Point3 {
    let (sn, cs) = v.theta.0.sin_cos();
    let (alpha, beta, gamma) = (v.alpha.0, v.beta.0, v.gamma.0);
    Vec3::new(
        s * sn + alpha,
        -s * cs + beta,
        s * (beta * sn + alpha * cs) + gamma,
    )
}

pub fn evaluate(profile: &SurfaceProfile, s: f64, t: f64) -> Result<Point3> {
    Ok(position_from(&profile.values(t)?, s))
}

pub fn frame(profile: &SurfaceProfile, s: f64, t: f64) -> Result<RulingFrame> {
    Ok(frame_from_values(&profile.values(t)?, s, t))
}

pub(crate) fn frame_from_values(v: &ProfileValues, s: f64, t: f64) -> RulingFrame {
    let (theta, theta_prime) = v.theta;
    let (gamma, gamma_prime) = v.gamma;
    let d = decompose_values(v);
    let (sn, cs) = theta.sin_cos();
    let a = (s + d.xi) * theta_prime + d.delta_prime;
    let b = d.xi_prime - d.delta * theta_prime;
    let k = s * d.delta_prime + gamma_prime - d.delta * b;
    RulingFrame {
        s,
        t,
        position: position_from(v, s),
        d_s: Vec3::new(sn, -cs, d.delta),
        d_t: Vec3::new(a * cs + b * sn, a * sn - b * cs, s * d.delta_prime + gamma_prime),
        cross: Vec3::new(-cs * k - a * d.delta * sn, -sn * k + a * d.delta * cs, a),
        theta,
        theta_prime,
        alpha: v.alpha.0,
        beta: v.beta.0,
        delta: d.delta,
        delta_prime: d.delta_prime,
        xi: d.xi,
        xi_prime: d.xi_prime,
        gamma,
        gamma_prime,
        a,
        b,
    }
}

/// ∂sX × ∂tX written directly in α, β, γ, θ, without the (δ, ξ)
/// substitution. Serves as an independent route to [`RulingFrame::cross`].
pub fn cross_product_direct(profile: &SurfaceProfile, s: f64, t: f64) -> Result<Vec3> {
    let v = profile.values(t)?;
    let (theta, dtheta) = v.theta;
    let (alpha, dalpha) = v.alpha;
    let (beta, dbeta) = v.beta;
    let dgamma = v.gamma.1;
    let (sn, cs) = theta.sin_cos();
    let mix = dbeta * sn + dalpha * cs;
    let lift = beta * sn + alpha * cs;
    Ok(Vec3::new(
        -s * beta * dtheta - s * cs * mix - dbeta * lift - dgamma * cs,
        s * alpha * dtheta - s * sn * mix + dalpha * lift - dgamma * sn,
        s * dtheta + mix,
    ))
}

/// The planar projection `Γ_t` of a ruling and its lift
/// `z = β x − α y + γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectedRuling {
    pub t: f64,
    /// Raw angle θ(t), not reduced modulo π.
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl ProjectedRuling {
    pub fn from_values(t: f64, theta: f64, alpha: f64, beta: f64, gamma: f64) -> Self {
        let (sn, cs) = theta.sin_cos();
        Self {
            t,
            theta,
            alpha,
            beta,
            gamma,
            delta: alpha * cs + beta * sn,
        }
    }

    /// `(x − α) cosθ + (y − β) sinθ = 0` in Hesse normal form.
    pub fn line2(&self) -> Line2 {
        Line2::new(self.theta, self.delta)
    }

    /// Coefficients `(β, −α, γ)` of the lift `z = β x − α y + γ`.
    pub fn lift(&self) -> [f64; 3] {
        [self.beta, -self.alpha, self.gamma]
    }

    pub fn height_at(&self, x: f64, y: f64) -> f64 {
        self.beta * x - self.alpha * y + self.gamma
    }

    /// The same ruling with `s` shifted so that ξ = 0: `(α, β) = δ (cosθ, sinθ)`
    /// and `γ ↦ γ − ξ δ`.
    pub fn xi_free(&self) -> Self {
        let (sn, cs) = self.theta.sin_cos();
        let xi = self.alpha * sn - self.beta * cs;
        Self {
            t: self.t,
            theta: self.theta,
            alpha: self.delta * cs,
            beta: self.delta * sn,
            gamma: self.gamma - xi * self.delta,
            delta: self.delta,
        }
    }
}

pub fn projected_ruling(profile: &SurfaceProfile, t: f64) -> Result<ProjectedRuling> {
    Ok(ProjectedRuling::from_values(
        t,
        profile.theta.eval(t)?,
        profile.alpha.eval(t)?,
        profile.beta.eval(t)?,
        profile.gamma.eval(t)?,
    ))
}

/// The ruling at `t` as a line in space, through `X(0, t)`.
pub fn ruling_line3(profile: &SurfaceProfile, t: f64) -> Result<Line3> {
    let v = profile.values(t)?;
    let d = decompose_values(&v);
    let (sn, cs) = v.theta.0.sin_cos();
    Line3::new(position_from(&v, 0.0), Vec3::new(sn, -cs, d.delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{Interval, ProfileFunction, Topology};

    fn profile(theta: &str, alpha: &str, beta: &str, gamma: &str) -> SurfaceProfile {
        let f = |s: &str| ProfileFunction::parse(s).unwrap();
        let r = Interval::new(-10.0, 10.0).unwrap();
        SurfaceProfile::new(f(theta), f(alpha), f(beta), f(gamma), r, r, Topology::Band).unwrap()
    }

    fn ex21() -> SurfaceProfile {
        profile("atan(t) + pi/2", "0", "t", "-t")
    }

    #[test]
    fn evaluate_examples() {
        let p = evaluate(&ex21(), 1.0, 0.0).unwrap();
        assert!((p - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!((p.z * (p.x + 1.0) - p.y * (p.x - 1.0)).abs() < 1e-15);
        let plane = profile("0", "0", "0", "t");
        assert_eq!(evaluate(&plane, 2.0, 5.0).unwrap(), Vec3::new(0.0, -2.0, 5.0));
    }

    #[test]
    fn vertical_plane_frame_has_constant_normal() {
        let theta0: f64 = 0.7;
        let p = profile("0.7", "0", "0", "t");
        for &(s, t) in &[(0.0, 0.0), (3.0, -2.0), (-7.5, 9.0)] {
            let f = frame(&p, s, t).unwrap();
            assert_eq!(f.a, 0.0);
            assert_eq!(f.b, 0.0);
            assert!((f.cross - Vec3::new(-theta0.cos(), -theta0.sin(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn ex21_frame_at_origin() {
        let f = frame(&ex21(), 0.0, 0.0).unwrap();
        assert!((f.delta_prime - 1.0).abs() < 1e-15);
        assert!((f.a - 1.0).abs() < 1e-15);
        assert!((f.cross.z - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ex21_decomposition() {
        let p = ex21();
        for t in [-3.0f64, -0.5, 0.0, 1.0, 7.0] {
            let d = decompose(&p, t).unwrap();
            let r = (1.0 + t * t).sqrt();
            assert!((d.delta - t / r).abs() < 1e-14);
            assert!((d.xi - t * t / r).abs() < 1e-13);
        }
    }

    #[test]
    fn unit_circle_offsets_give_delta_one() {
        let p = profile("atan(t)", "cos(atan(t))", "sin(atan(t))", "t");
        for t in [-2.0, 0.0, 3.0] {
            let d = decompose(&p, t).unwrap();
            assert!((d.delta - 1.0).abs() < 1e-15 && d.xi.abs() < 1e-15);
        }
        let zero = profile("t", "0", "0", "t");
        let d = decompose(&zero, 1.3).unwrap();
        assert_eq!((d.delta, d.xi), (0.0, 0.0));
    }

    #[test]
    fn recompose_examples() {
        assert_eq!(recompose(0.0, 1.0, 0.0), (1.0, 0.0));
        let (a, b) = recompose(std::f64::consts::FRAC_PI_2, 1.0, 0.0);
        assert!(a.abs() < 1e-16 && (b - 1.0).abs() < 1e-16);
    }

    #[test]
    fn projected_ruling_examples() {
        let ex41 = profile("pi/2", "0", "t^2", "t");
        let r = projected_ruling(&ex41, 1.5).unwrap();
        let l = r.line2();
        assert!((l.angle - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((l.offset - 2.25).abs() < 1e-15);
        let [bx, ay, c] = r.lift();
        assert_eq!((bx, ay, c), (2.25, 0.0, 1.5));

        let plane = profile("0", "0", "0", "t");
        let r1 = projected_ruling(&plane, 1.0).unwrap();
        let r2 = projected_ruling(&plane, 4.0).unwrap();
        assert_eq!(r1.line2(), r2.line2());
        assert_eq!(r2.gamma - r1.gamma, 3.0);

        let r0 = projected_ruling(&ex21(), 0.0).unwrap();
        let l = r0.line2();
        assert!((l.angle - std::f64::consts::FRAC_PI_2).abs() < 1e-15 && l.offset.abs() < 1e-15);
        assert_eq!(r0.lift(), [0.0, -0.0, 0.0]);
    }

    #[test]
    fn ruling_line_examples() {
        let plane = profile("0", "0", "0", "t");
        let l = ruling_line3(&plane, 0.0).unwrap();
        assert_eq!(l.point, Vec3::ZERO);
        assert!((l.direction - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-15);

        let ex42 = profile("atan(t)", "cos(atan(t))", "sin(atan(t))", "t");
        let t: f64 = 0.8;
        let th = t.atan();
        let l = ruling_line3(&ex42, t).unwrap();
        let expected = Vec3::new(th.sin(), -th.cos(), 1.0) * (1.0 / 2f64.sqrt());
        assert!((l.direction - expected).norm() < 1e-15);
        assert!((l.origin_distance() - (1.0 + t * t / 2.0).sqrt()).abs() < 1e-14);
    }
}
