//! Helicoid-type classification: contact planes, rulings lying in a
//! family of parallel planes, and reduction to the two canonical forms
//!
//! * vertical planes `−bx + ay = w`:
//!   `z = −abx² + (a² − b²)xy + aby² + g(−bx + ay)`;
//! * tilted planes `z = y₀x − x₀y + τ`:
//!   `(x − x₀) cosθ(τ) + (y − y₀) sinθ(τ) = 0` with `τ = z − y₀x + x₀y`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analyzer::immersion::scan_non_immersed;
use crate::analyzer::rulings::ruling_intersection_probe;
use crate::error::{Error, Result};
use crate::geometry::{Point3, Vec3};
use crate::grid::GridSpec;
use crate::profile::{add, mul, reduce_mod_pi, sub, Expr, Interval, ProfileFunction, SurfaceProfile, Topology};
use crate::surface::evaluate;
use crate::tolerances::{COPLANAR_ANGLE_TOL, IMMERSION_TOL, INJECTIVITY_TOL, PARALLEL_EPS};

/// Ruling directions examined for a common plane normal.
pub const FAMILY_SAMPLES: usize = 129;
/// Samples of the plane-offset map.
pub const OFFSET_SAMPLES: usize = 1025;
/// Samples handed to the ruling-intersection probe.
pub const PROBE_SAMPLES: usize = 257;
/// Table size when a recovered function has no closed form.
pub const TABLE_SAMPLES: usize = 4097;
/// Grid (per side) on which reconstructions are compared with the input.
pub const AGREEMENT_SAMPLES: usize = 21;
/// Below this `|n_z|` the common plane normal counts as horizontal.
pub const VERTICAL_NORMAL_TOL: f64 = 1e-9;
/// `θ′` above this (i.e. `≥ −1e−12`) counts as non-negative.
pub const THETA_PRIME_TOL: f64 = 1e-12;

/// Ranges used when a builder gets no domain from its inputs.
pub const DEFAULT_T_RANGE: (f64, f64) = (-10.0, 10.0);
pub const DEFAULT_S_RANGE: (f64, f64) = (-10.0, 10.0);

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ClassificationKind {
    /// Rulings meet at `through`; the surface is the contact plane there.
    ContactPlane { through: Point3 },
    /// Rulings lie in the planes `−bx + ay = w`, sweeping the offsets in
    /// `w_range` monotonically.
    HelicoidVertical {
        a: f64,
        b: f64,
        g: ProfileFunction,
        w_range: Interval,
    },
    /// Rulings lie in the planes `z = y₀x − x₀y + τ`, sweeping `tau_range`
    /// monotonically.
    HelicoidTilted {
        x0: f64,
        y0: f64,
        theta: ProfileFunction,
        tau_range: Interval,
    },
    /// Rulings lie in parallel planes, but the offset map folds back.
    WeakHelicoid { plane_normal: Vec3 },
    NonHelicoid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Recovery {
    /// The offset is affine in `t`, so the canonical function is an exact
    /// composition.
    Exact,
    /// Tabulated on `TABLE_SAMPLES` points.
    Tabulated,
}

/// Evidence behind a classification.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Certificate {
    pub non_immersed_points: usize,
    /// Unit normal shared by every ruling direction.
    pub plane_normal: Option<Vec3>,
    /// `max |T·n| / |T|` over sampled ruling directions `T`.
    pub coplanarity_residual: Option<f64>,
    /// All ruling directions were parallel; the normal is the contact
    /// normal at the foot of the common projected line.
    pub parallel_rulings: bool,
    /// Range of the plane offset over the sampled parameters.
    pub offset_range: Option<[f64; 2]>,
    pub offset_derivative_range: Option<[f64; 2]>,
    /// Tilted case: `max |(x₀ − α) cosθ + (y₀ − β) sinθ|`.
    pub axis_residual: Option<f64>,
    pub recovery: Option<Recovery>,
    /// Largest deviation of input surface points from the canonical form.
    pub reconstruction_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    #[serde(flatten)]
    pub kind: ClassificationKind,
    pub certificate: Certificate,
}

impl Classification {
    pub fn is_contact_plane(&self) -> bool {
        matches!(self.kind, ClassificationKind::ContactPlane { .. })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ClassificationKind::ContactPlane { .. } => "ContactPlane",
            ClassificationKind::HelicoidVertical { .. } => "HelicoidVertical",
            ClassificationKind::HelicoidTilted { .. } => "HelicoidTilted",
            ClassificationKind::WeakHelicoid { .. } => "WeakHelicoid",
            ClassificationKind::NonHelicoid => "NonHelicoid",
        }
    }

    /// The canonical profile for the helicoid kinds, on the recovered
    /// parameter range.
    pub fn canonical_profile(&self, s_range: Interval) -> Option<Result<SurfaceProfile>> {
        match &self.kind {
            ClassificationKind::HelicoidVertical { a, b, g, w_range } => {
                Some(build_vertical(*a, *b, g.clone()).and_then(|p| p.with_ranges(*w_range, s_range)))
            }
            ClassificationKind::HelicoidTilted {
                x0,
                y0,
                theta,
                tau_range,
            } => Some(build_tilted(*x0, *y0, theta.clone()).and_then(|p| p.with_ranges(*tau_range, s_range))),
            _ => None,
        }
    }
}

/// Unnormalized ruling direction `(sinθ, −cosθ, β sinθ + α cosθ)`.
pub fn ruling_direction(profile: &SurfaceProfile, t: f64) -> Result<Vec3> {
    let th = profile.theta.eval(t)?;
    let (a, b) = (profile.alpha.eval(t)?, profile.beta.eval(t)?);
    let (sn, cs) = th.sin_cos();
    Ok(Vec3::new(sn, -cs, b * sn + a * cs))
}

struct FamilyFit {
    normal: Vec3,
    residual: f64,
}

/// Normal from the largest pairwise cross product, and how far the other
/// directions stray from the plane it defines. `None` when every cross
/// product vanishes.
fn fit_family(dirs: &[Vec3]) -> Option<FamilyFit> {
    let mut best = Vec3::ZERO;
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let c = dirs[i].cross(dirs[j]);
            if c.norm() > best.norm() {
                best = c;
            }
        }
    }
    let scale = dirs.iter().fold(0.0f64, |m, d| m.max(d.norm()));
    if best.norm() <= 1e-12 * scale * scale {
        return None;
    }
    let normal = best * (1.0 / best.norm());
    let residual = dirs
        .iter()
        .map(|d| d.dot(normal).abs() / d.norm())
        .fold(0.0f64, f64::max);
    Some(FamilyFit { normal, residual })
}

/// Upward if tilted; otherwise `(cos φ, sin φ, 0)` with `φ ∈ [0, π)`.
fn orient(n: Vec3) -> Vec3 {
    let flip = if n.z.abs() > VERTICAL_NORMAL_TOL {
        n.z < 0.0
    } else {
        n.y < 0.0 || (n.y == 0.0 && n.x < 0.0)
    };
    if flip {
        n * -1.0
    } else {
        n
    }
}

/// The unit normal `n` such that every sampled ruling direction is
/// orthogonal to it, when there is one.
///
/// Errors with [`Error::DegenerateDirections`] when all directions are
/// parallel, since their cross products then carry no information.
pub fn is_ruling_coplanar_family(profile: &SurfaceProfile, t_samples: &[f64]) -> Result<Option<Vec3>> {
    if t_samples.len() < 3 {
        return Err(Error::InvalidGrid("need at least 3 ruling samples".into()));
    }
    let dirs = t_samples
        .iter()
        .map(|&t| ruling_direction(profile, t))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_family(&dirs).ok_or(Error::DegenerateDirections)?;
    Ok((fit.residual < COPLANAR_ANGLE_TOL).then(|| orient(fit.normal)))
}

/// When all rulings are parallel their projections are one line; the
/// contact normal at its foot point is orthogonal to all of them.
fn parallel_rulings_normal(profile: &SurfaceProfile, t: f64) -> Result<Vec3> {
    let th = profile.theta.eval(t)?;
    let (a, b) = (profile.alpha.eval(t)?, profile.beta.eval(t)?);
    let (sn, cs) = th.sin_cos();
    let delta = a * cs + b * sn;
    let (x0, y0) = (delta * cs, delta * sn);
    Ok(Vec3::new(-y0, x0, 1.0).normalized().expect("nonzero"))
}

pub fn classify(profile: &SurfaceProfile) -> Result<Classification> {
    let mut cert = Certificate {
        non_immersed_points: scan_non_immersed(profile, &GridSpec::for_profile(profile, 41, 41)?, IMMERSION_TOL)?.len(),
        ..Certificate::default()
    };

    let probe_ts = profile.t_range.linspace(PROBE_SAMPLES);
    if let Some(p) = ruling_intersection_probe(profile, &probe_ts, PARALLEL_EPS, INJECTIVITY_TOL)? {
        return Ok(Classification {
            kind: ClassificationKind::ContactPlane { through: p },
            certificate: cert,
        });
    }

    let ts = profile.t_range.linspace(FAMILY_SAMPLES);
    let dirs = ts.iter().map(|&t| ruling_direction(profile, t)).collect::<Result<Vec<_>>>()?;
    let normal = match fit_family(&dirs) {
        Some(fit) => {
            cert.coplanarity_residual = Some(fit.residual);
            if fit.residual >= COPLANAR_ANGLE_TOL {
                return Ok(Classification {
                    kind: ClassificationKind::NonHelicoid,
                    certificate: cert,
                });
            }
            orient(fit.normal)
        }
        None => {
            cert.parallel_rulings = true;
            let n = parallel_rulings_normal(profile, profile.t_range.mid())?;
            cert.coplanarity_residual = Some(dirs.iter().map(|d| d.dot(n).abs() / d.norm()).fold(0.0, f64::max));
            n
        }
    };
    cert.plane_normal = Some(normal);

    if normal.z.abs() > VERTICAL_NORMAL_TOL {
        classify_tilted(profile, normal, cert)
    } else {
        classify_vertical(profile, normal, cert)
    }
}

/// The plane-offset map `t ↦ c_γ γ + c_α α + c_β β` sampled with its derivative.
struct OffsetSamples {
    t: Vec<f64>,
    w: Vec<f64>,
    dw: Vec<f64>,
}

impl OffsetSamples {
    fn new(profile: &SurfaceProfile, [c_gamma, c_alpha, c_beta]: [f64; 3], n: usize) -> Result<Self> {
        let t = profile.t_range.linspace(n);
        let mut w = Vec::with_capacity(n);
        let mut dw = Vec::with_capacity(n);
        for &ti in &t {
            let v = profile.values(ti)?;
            w.push(c_gamma * v.gamma.0 + c_alpha * v.alpha.0 + c_beta * v.beta.0);
            dw.push(c_gamma * v.gamma.1 + c_alpha * v.alpha.1 + c_beta * v.beta.1);
        }
        Ok(Self { t, w, dw })
    }

    fn range(v: &[f64]) -> [f64; 2] {
        v.iter()
            .fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], &x| [lo.min(x), hi.max(x)])
    }

    /// Strictly monotone: the derivative never vanishes or changes sign.
    fn strictly_monotone(&self) -> bool {
        self.dw.iter().all(|&d| d > 0.0) || self.dw.iter().all(|&d| d < 0.0)
    }

    /// `Some((m, c))` when the offset is `m t + c` on every sample.
    fn affine(&self) -> Option<(f64, f64)> {
        let mid = self.t.len() / 2;
        let m = self.dw[mid];
        let consistent = self.dw.iter().all(|&d| (d - m).abs() <= 1e-12 * (1.0 + m.abs()));
        consistent.then(|| (m, self.w[mid] - m * self.t[mid]))
    }

    fn image(&self) -> Result<Interval> {
        let [lo, hi] = Self::range(&self.w);
        Interval::new(lo, hi)
    }
}

/// The inverse `w ↦ (w − c)/m` of an affine offset, as an expression in `w`.
fn affine_inverse(m: f64, c: f64) -> Expr {
    add(mul(Expr::Num(1.0 / m), Expr::Var), Expr::Num(-c / m))
}

/// Tabulates `value(t)` against the offset `w(t)` (monotone by assumption).
fn tabulate_against_offset<F>(profile: &SurfaceProfile, coeffs: [f64; 3], value: F) -> Result<ProfileFunction>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let s = OffsetSamples::new(profile, coeffs, TABLE_SAMPLES)?;
    let mut pairs = s
        .t
        .iter()
        .zip(&s.w)
        .map(|(&t, &w)| Ok((w, value(t, w)?)))
        .collect::<Result<Vec<_>>>()?;
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (ws, fs) = pairs.into_iter().unzip();
    ProfileFunction::tabulated(ws, fs)
}

fn agreement_points(profile: &SurfaceProfile) -> Result<Vec<Point3>> {
    let grid = GridSpec::for_profile(profile, AGREEMENT_SAMPLES, AGREEMENT_SAMPLES)?;
    let mut out = Vec::new();
    for t in grid.t_values() {
        for s in grid.s_values() {
            out.push(evaluate(profile, s, t)?);
        }
    }
    Ok(out)
}

fn classify_tilted(profile: &SurfaceProfile, n: Vec3, mut cert: Certificate) -> Result<Classification> {
    let (x0, y0) = (n.y / n.z, -n.x / n.z);
    // τ = z − y₀x + x₀y evaluated at X(0, t) = (α, β, γ).
    let coeffs = [1.0, -y0, x0];
    let offsets = OffsetSamples::new(profile, coeffs, OFFSET_SAMPLES)?;
    cert.offset_range = Some(OffsetSamples::range(&offsets.w));
    cert.offset_derivative_range = Some(OffsetSamples::range(&offsets.dw));
    let mut axis = 0.0f64;
    for &t in &offsets.t {
        let (sn, cs) = profile.theta.eval(t)?.sin_cos();
        axis = axis.max(((x0 - profile.alpha.eval(t)?) * cs + (y0 - profile.beta.eval(t)?) * sn).abs());
    }
    cert.axis_residual = Some(axis);

    if !offsets.strictly_monotone() {
        return Ok(Classification {
            kind: ClassificationKind::WeakHelicoid { plane_normal: n },
            certificate: cert,
        });
    }

    // Fix the representative modulo π at the middle of the range.
    let k = (profile.theta.eval(profile.t_range.mid())? / PI).floor();
    let shift = -k * PI;
    let theta = match offsets.affine() {
        Some((m, c)) => {
            cert.recovery = Some(Recovery::Exact);
            let recovered = profile.theta.compose(&affine_inverse(m, c));
            if shift == 0.0 {
                recovered
            } else {
                recovered.shifted(shift)
            }
        }
        None => {
            cert.recovery = Some(Recovery::Tabulated);
            tabulate_against_offset(profile, coeffs, |t, _| Ok(profile.theta.eval(t)? + shift))?
        }
    };
    let tau_range = offsets.image()?;

    let mut err = 0.0f64;
    for p in agreement_points(profile)? {
        let tau = (p.z - y0 * p.x + x0 * p.y).clamp(tau_range.min, tau_range.max);
        let (sn, cs) = theta.eval(tau)?.sin_cos();
        err = err.max(((p.x - x0) * cs + (p.y - y0) * sn).abs());
    }
    cert.reconstruction_error = Some(err);

    Ok(Classification {
        kind: ClassificationKind::HelicoidTilted {
            x0,
            y0,
            theta,
            tau_range,
        },
        certificate: cert,
    })
}

fn classify_vertical(profile: &SurfaceProfile, n: Vec3, mut cert: Certificate) -> Result<Classification> {
    // n ∝ (−b, a, 0) with the canonical angle in [0, π).
    let (theta_c, _) = reduce_mod_pi(profile.theta.eval(profile.t_range.mid())?);
    let (a, b) = (theta_c.sin(), -theta_c.cos());
    // w = −bx + ay evaluated at X(0, t) = (α, β, γ).
    let coeffs = [0.0, -b, a];
    let offsets = OffsetSamples::new(profile, coeffs, OFFSET_SAMPLES)?;
    cert.offset_range = Some(OffsetSamples::range(&offsets.w));
    cert.offset_derivative_range = Some(OffsetSamples::range(&offsets.dw));

    if !offsets.strictly_monotone() {
        return Ok(Classification {
            kind: ClassificationKind::WeakHelicoid { plane_normal: n },
            certificate: cert,
        });
    }

    // g(w) = γ − w (aα + bβ) along the ruling in the plane −bx + ay = w.
    let g = match offsets.affine() {
        Some((m, c)) => {
            cert.recovery = Some(Recovery::Exact);
            let inv = affine_inverse(m, c);
            let (al, be, ga) = (
                profile.alpha.expr().substitute(&inv),
                profile.beta.expr().substitute(&inv),
                profile.gamma.expr().substitute(&inv),
            );
            ProfileFunction::from_expr(sub(ga, mul(Expr::Var, add(mul(Expr::Num(a), al), mul(Expr::Num(b), be)))))
        }
        None => {
            cert.recovery = Some(Recovery::Tabulated);
            tabulate_against_offset(profile, coeffs, |t, w| {
                Ok(profile.gamma.eval(t)? - w * (a * profile.alpha.eval(t)? + b * profile.beta.eval(t)?))
            })?
        }
    };
    let w_range = offsets.image()?;

    let mut err = 0.0f64;
    for p in agreement_points(profile)? {
        let w = (-b * p.x + a * p.y).clamp(w_range.min, w_range.max);
        let u = vertical_height(a, b, &g, p.x, p.y, w)?;
        err = err.max((p.z - u).abs());
    }
    cert.reconstruction_error = Some(err);

    Ok(Classification {
        kind: ClassificationKind::HelicoidVertical { a, b, g, w_range },
        certificate: cert,
    })
}

fn vertical_height(a: f64, b: f64, g: &ProfileFunction, x: f64, y: f64, w: f64) -> Result<f64> {
    Ok(-a * b * x * x + (a * a - b * b) * x * y + a * b * y * y + g.eval(w)?)
}

fn default_ranges() -> (Interval, Interval) {
    (
        Interval::new(DEFAULT_T_RANGE.0, DEFAULT_T_RANGE.1).expect("valid"),
        Interval::new(DEFAULT_S_RANGE.0, DEFAULT_S_RANGE.1).expect("valid"),
    )
}

fn domain_of(f: &ProfileFunction) -> Option<Interval> {
    f.as_table().map(|t| {
        let (lo, hi) = t.domain();
        Interval::new(lo, hi).expect("table domain is nondegenerate")
    })
}

/// Ruled profile of `z = −abx² + (a² − b²)xy + aby² + g(−bx + ay)`:
/// `θ = atan2(a, −b)`, `α = −bt`, `β = at`, `γ = g(t)`.
pub fn build_vertical(a: f64, b: f64, g: ProfileFunction) -> Result<SurfaceProfile> {
    let norm = a * a + b * b;
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(norm));
    }
    let (t_default, s_range) = default_ranges();
    let t_range = domain_of(&g).unwrap_or(t_default);
    SurfaceProfile::new(
        ProfileFunction::constant(a.atan2(-b)),
        ProfileFunction::affine(-b, 0.0),
        ProfileFunction::affine(a, 0.0),
        g,
        t_range,
        s_range,
        Topology::Band,
    )
}

/// Ruled profile of `(x − x₀) cosθ(t) + (y − y₀) sinθ(t) = 0` with
/// `t = z − y₀x + x₀y`: `α = x₀`, `β = y₀`, `γ = t`.
pub fn build_tilted(x0: f64, y0: f64, theta: ProfileFunction) -> Result<SurfaceProfile> {
    let (t_default, s_range) = default_ranges();
    let t_range = domain_of(&theta).unwrap_or(t_default);
    SurfaceProfile::new(
        theta,
        ProfileFunction::constant(x0),
        ProfileFunction::constant(y0),
        ProfileFunction::identity(),
        t_range,
        s_range,
        Topology::Band,
    )
}

/// Height and exact gradient of the vertical canonical form.
pub fn vertical_graph(a: f64, b: f64, g: &ProfileFunction, x: f64, y: f64) -> Result<(f64, [f64; 2])> {
    let w = -b * x + a * y;
    let (gv, gd) = g.eval_with_derivative(w)?;
    let u = -a * b * x * x + (a * a - b * b) * x * y + a * b * y * y + gv;
    let ux = -2.0 * a * b * x + (a * a - b * b) * y - b * gd;
    let uy = (a * a - b * b) * x + 2.0 * a * b * y + a * gd;
    Ok((u, [ux, uy]))
}

/// `F(x, y, z) = (x − x₀) cosθ(τ) + (y − y₀) sinθ(τ)` with `τ = z − y₀x + x₀y`.
pub fn tilted_defining_function(x0: f64, y0: f64, theta: &ProfileFunction, p: Point3) -> Result<f64> {
    let (sn, cs) = theta.eval(p.z - y0 * p.x + x0 * p.y)?.sin_cos();
    Ok((p.x - x0) * cs + (p.y - y0) * sn)
}

/// Exact gradient of [`tilted_defining_function`]. Its horizontal part is
/// `(cosθ, sinθ) + θ′K (−y₀, x₀)` and its vertical part `θ′K`, so it never
/// vanishes.
pub fn tilted_defining_gradient(x0: f64, y0: f64, theta: &ProfileFunction, p: Point3) -> Result<Vec3> {
    let (th, dth) = theta.eval_with_derivative(p.z - y0 * p.x + x0 * p.y)?;
    let (sn, cs) = th.sin_cos();
    let k = dth * (-(p.x - x0) * sn + (p.y - y0) * cs);
    Ok(Vec3::new(cs - y0 * k, sn + x0 * k, k))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularWitness {
    pub t: f64,
    pub theta_prime: f64,
    /// The two singular points `s = ±√(−1/θ′)` on that ruling.
    pub s: [f64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularFreeVerdict {
    pub singular_free: bool,
    pub min_theta_prime: f64,
    pub at_t: f64,
    pub witness: Option<SingularWitness>,
}

/// A tilted-form surface is free of singular points exactly when θ′ ≥ 0:
/// its singular set is `1 + s²θ′(t) = 0`.
pub fn singular_free_tilted(theta: &ProfileFunction, t_range: Interval) -> Result<SingularFreeVerdict> {
    const SAMPLES: usize = 2049;
    let ts = t_range.linspace(SAMPLES);
    let d = |t: f64| theta.eval_with_derivative(t).map(|v| v.1);
    let mut i_min = 0;
    let mut d_min = f64::INFINITY;
    for (i, &t) in ts.iter().enumerate() {
        let v = d(t)?;
        if v < d_min {
            d_min = v;
            i_min = i;
        }
    }
    // Golden-section refinement between the neighbouring samples.
    let (mut lo, mut hi) = (ts[i_min.saturating_sub(1)], ts[(i_min + 1).min(SAMPLES - 1)]);
    let mut t_min = ts[i_min];
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let (c, e) = (hi - r * (hi - lo), lo + r * (hi - lo));
        if d(c)? < d(e)? {
            hi = e;
        } else {
            lo = c;
        }
    }
    let refined = 0.5 * (lo + hi);
    let d_ref = d(refined)?;
    if d_ref < d_min {
        d_min = d_ref;
        t_min = refined;
    }
    let singular_free = d_min >= -THETA_PRIME_TOL;
    let witness = (!singular_free).then(|| {
        let s = (-1.0 / d_min).sqrt();
        SingularWitness {
            t: t_min,
            theta_prime: d_min,
            s: [-s, s],
        }
    });
    Ok(SingularFreeVerdict {
        singular_free,
        min_theta_prime: d_min,
        at_t: t_min,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::singular::scan_singular_set;

    fn f(s: &str) -> ProfileFunction {
        ProfileFunction::parse(s).unwrap()
    }

    fn profile(theta: &str, alpha: &str, beta: &str, gamma: &str, t: (f64, f64)) -> SurfaceProfile {
        SurfaceProfile::new(
            f(theta),
            f(alpha),
            f(beta),
            f(gamma),
            Interval::new(t.0, t.1).unwrap(),
            Interval::new(-10.0, 10.0).unwrap(),
            Topology::Band,
        )
        .unwrap()
    }

    fn ex21() -> SurfaceProfile {
        profile("atan(t) + pi/2", "0", "t", "-t", (-10.0, 10.0))
    }

    fn assert_parallel(n: Vec3, expected: Vec3) {
        let e = expected.normalized().unwrap();
        assert!(n.cross(e).norm() < 1e-9, "{n:?} vs {e:?}");
    }

    #[test]
    fn coplanar_family_examples() {
        let ts = ex21().t_range.linspace(33);
        assert_parallel(is_ruling_coplanar_family(&ex21(), &ts).unwrap().unwrap(), Vec3::new(0.0, -1.0, 1.0));

        let ex42 = profile("atan(t)", "cos(atan(t))", "sin(atan(t))", "t", (-10.0, 10.0));
        assert_eq!(is_ruling_coplanar_family(&ex42, &ts).unwrap(), None);

        let (a, b) = (0.6, 0.8);
        let vert = build_vertical(a, b, f("t^2")).unwrap();
        assert_parallel(is_ruling_coplanar_family(&vert, &ts).unwrap().unwrap(), Vec3::new(-b, a, 0.0));

        let plane = profile("0", "0", "0", "t", (0.0, 1.0));
        assert!(matches!(
            is_ruling_coplanar_family(&plane, &ts),
            Err(Error::DegenerateDirections)
        ));
    }

    #[test]
    fn ex21_reduces_to_tilted_form() {
        let c = classify(&ex21()).unwrap();
        let ClassificationKind::HelicoidTilted { x0, y0, theta, .. } = &c.kind else {
            panic!("{c:?}")
        };
        assert!((x0 + 1.0).abs() < 1e-8 && y0.abs() < 1e-8);
        for t in Interval::new(0.1, 10.0).unwrap().linspace(200) {
            assert!((theta.eval(t).unwrap().tan() * t - 2.0).abs() < 1e-7);
        }
        assert_eq!(c.certificate.recovery, Some(Recovery::Exact));
        assert!(c.certificate.reconstruction_error.unwrap() < 1e-8);
        assert_eq!(c.certificate.non_immersed_points, 0);
    }

    #[test]
    fn parabolic_planes_are_a_weak_family() {
        for range in [(0.0, 5.0), (-5.0, 0.0)] {
            let p = profile("pi/2", "0", "t^2", "t", range);
            let c = classify(&p).unwrap();
            let ClassificationKind::WeakHelicoid { plane_normal } = c.kind else {
                panic!("{c:?}")
            };
            assert_parallel(plane_normal, Vec3::new(0.0, 1.0, 0.0));
            let [lo, hi] = c.certificate.offset_range.unwrap();
            assert!(lo >= 0.0 && hi > lo);
        }
    }

    #[test]
    fn unit_offset_family_is_not_a_helicoid() {
        let p = profile("atan(t)", "cos(atan(t))", "sin(atan(t))", "t", (-10.0, 10.0));
        assert_eq!(classify(&p).unwrap().kind, ClassificationKind::NonHelicoid);
    }

    #[test]
    fn rulings_through_a_point_give_a_contact_plane() {
        let p = profile("t", "1", "2", "3", (0.0, 3.0));
        let c = classify(&p).unwrap();
        let ClassificationKind::ContactPlane { through } = c.kind else {
            panic!("{c:?}")
        };
        assert!((through - Vec3::new(1.0, 2.0, 3.0)).norm() < 1e-9);
    }

    #[test]
    fn vertical_builder_examples() {
        let cases: [(f64, f64, &str, fn(f64, f64) -> f64); 3] = [
            (1.0, 0.0, "0", |x, y| x * y),
            (0.0, 1.0, "0", |x, y| -x * y),
            (1.0, 0.0, "t^2", |x, y| x * y + y * y),
        ];
        for (a, b, g, u) in cases {
            let p = build_vertical(a, b, f(g)).unwrap();
            for t in [-3.0, 0.0, 1.5] {
                for s in [-2.0, 0.5, 4.0] {
                    let q = evaluate(&p, s, t).unwrap();
                    assert!((q.z - u(q.x, q.y)).abs() < 1e-12);
                }
            }
        }
        assert!(matches!(build_vertical(1.0, 1.0, f("0")), Err(Error::Normalization(_))));
    }

    #[test]
    fn tilted_builder_examples() {
        let p = build_tilted(0.0, 0.0, f("-acot(t)")).unwrap();
        let q = build_tilted(-1.0, 0.0, f("acot(t/2)")).unwrap();
        let r = build_tilted(0.0, 0.0, f("0.7")).unwrap();
        for t in [-3.0, 0.0, 1.5, 8.0] {
            for s in [-2.0, 0.5, 4.0] {
                let a = evaluate(&p, s, t).unwrap();
                assert!((a.y - a.x * a.z).abs() < 1e-12);
                let b = evaluate(&q, s, t).unwrap();
                assert!((b.z * (b.x + 1.0) - b.y * (b.x - 1.0)).abs() < 1e-9);
                let c = evaluate(&r, s, t).unwrap();
                assert!((c.x * 0.7f64.cos() + c.y * 0.7f64.sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vertical_round_trip_with_sign_flip() {
        // a < 0 comes back as (−a, −b) with g reflected.
        let (a, b) = (-0.6, 0.8);
        let p = build_vertical(a, b, f("sin(t) + t^2/5")).unwrap();
        let c = classify(&p).unwrap();
        let ClassificationKind::HelicoidVertical { a: ra, b: rb, g, .. } = &c.kind else {
            panic!("{c:?}")
        };
        assert!((ra + a).abs() < 1e-12 && (rb + b).abs() < 1e-12);
        assert!((g.eval(-1.0).unwrap() - (1f64.sin() + 0.2)).abs() < 1e-12);
        assert!(c.certificate.reconstruction_error.unwrap() < 1e-8);
    }

    #[test]
    fn tilted_round_trip_reduces_theta_mod_pi() {
        let p = build_tilted(0.5, -2.0, f("atan(t) + 4")).unwrap();
        let c = classify(&p).unwrap();
        let ClassificationKind::HelicoidTilted { x0, y0, theta, .. } = &c.kind else {
            panic!("{c:?}")
        };
        assert!((x0 - 0.5).abs() < 1e-8 && (y0 + 2.0).abs() < 1e-8);
        assert!((theta.eval(0.0).unwrap() - (4.0 - PI)).abs() < 1e-12);
        assert!(c.certificate.reconstruction_error.unwrap() < 1e-8);
    }

    #[test]
    fn nonlinear_offset_is_tabulated() {
        // Same tilted surface, parametrized by τ = t + t³/3.
        let p = profile("acot((t + t^3/3)/2)", "-1", "0", "t + t^3/3", (-2.0, 2.0));
        let c = classify(&p).unwrap();
        assert_eq!(c.certificate.recovery, Some(Recovery::Tabulated));
        let ClassificationKind::HelicoidTilted { theta, .. } = &c.kind else {
            panic!("{c:?}")
        };
        assert!((theta.eval(1.0).unwrap() - 2f64.atan()).abs() < 1e-9);
        assert!(c.certificate.reconstruction_error.unwrap() < 1e-8);
    }

    #[test]
    fn vertical_plane_reads_as_tilted_with_constant_angle() {
        let p = profile("0", "0", "0", "t", (0.0, 5.0));
        let c = classify(&p).unwrap();
        assert!(c.certificate.parallel_rulings);
        let ClassificationKind::HelicoidTilted { x0, y0, theta, .. } = &c.kind else {
            panic!("{c:?}")
        };
        assert_eq!((*x0, *y0), (0.0, 0.0));
        assert_eq!(theta.eval(2.0).unwrap(), 0.0);
    }

    #[test]
    fn singular_free_criterion() {
        let r = Interval::new(-20.0, 20.0).unwrap();
        assert!(singular_free_tilted(&f("-acot(t)"), r).unwrap().singular_free);
        assert!(singular_free_tilted(&f("1.25"), r).unwrap().singular_free);
        let v = singular_free_tilted(&f("-t"), r).unwrap();
        assert!(!v.singular_free);
        let w = v.witness.unwrap();
        assert!((w.s[1] - 1.0).abs() < 1e-12 && (w.s[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_free_matches_singular_scan() {
        for theta in ["-acot(t)", "-t", "atan(t)", "sin(t)", "t^3", "2"] {
            let p = build_tilted(0.3, -0.4, f(theta)).unwrap();
            let grid = GridSpec::for_profile(&p, 61, 61).unwrap();
            let verdict = singular_free_tilted(&p.theta, p.t_range).unwrap();
            let scan = scan_singular_set(&p, &grid, 1e-10).unwrap();
            assert_eq!(verdict.singular_free, scan.points.is_empty(), "{theta}");
        }
    }

    #[test]
    fn defining_gradient_matches_differences() {
        let th = f("acot(t/2)");
        let p = Vec3::new(0.3, -1.2, 2.5);
        let g = tilted_defining_gradient(-1.0, 0.0, &th, p).unwrap();
        let h = 1e-6;
        let fd = |e: Vec3| {
            (tilted_defining_function(-1.0, 0.0, &th, p + e * h).unwrap()
                - tilted_defining_function(-1.0, 0.0, &th, p - e * h).unwrap())
                / (2.0 * h)
        };
        let num = Vec3::new(fd(Vec3::new(1.0, 0.0, 0.0)), fd(Vec3::new(0.0, 1.0, 0.0)), fd(Vec3::new(0.0, 0.0, 1.0)));
        assert!((g - num).norm() < 1e-8);
    }
}
