//! End-to-end checks on the bundled example surfaces. Each check is an
//! identity or classification that must hold for that surface; results
//! are collected, never thrown.

use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::legendrian::legendrian_residual;
use super::pde::{pde_residual, GraphPatch, ImplicitTiltedGraph};
use crate::analyzer::halfspace::{halfspace_consistency, halfspace_probe, Containment, Side};
use crate::analyzer::immersion::scan_non_immersed;
use crate::analyzer::properness::{properness_check, ruling_distance, Properness};
use crate::analyzer::rulings::{injectivity_scan, intersect_rulings, GapFormula, LineIntersection};
use crate::analyzer::singular::scan_singular_set;
use crate::classifier::{classify, singular_free_tilted, Classification, ClassificationKind};
use crate::error::Result;
use crate::geometry::{contact_plane_at, Plane3, Point3, Vec3};
use crate::grid::GridSpec;
use crate::profile::{Interval, SurfaceProfile};
use crate::surface::{evaluate, projected_ruling};
use crate::tolerances::{INJECTIVITY_TOL, PARALLEL_EPS, SINGULAR_TOL};

/// File stems of the bundled profiles, in suite order.
pub const GOLDEN_NAMES: [&str; 8] = ["ex21", "ex31", "ex41a", "ex41b", "ex42", "plane", "contactplane", "y_eq_xz"];

const BUILTIN: [&str; 8] = [
    include_str!("../../../../profiles/ex21.json"),
    include_str!("../../../../profiles/ex31.json"),
    include_str!("../../../../profiles/ex41a.json"),
    include_str!("../../../../profiles/ex41b.json"),
    include_str!("../../../../profiles/ex42.json"),
    include_str!("../../../../profiles/plane.json"),
    include_str!("../../../../profiles/contactplane.json"),
    include_str!("../../../../profiles/y_eq_xz.json"),
];

/// Seed for the random ruling pairs.
pub const GOLDEN_SEED: u64 = 2021;

/// Points whose contact planes every profile is probed against.
pub const PROBE_POINTS: [[f64; 3]; 5] = [
    [0.0, 0.0, 0.0],
    [1.0, 2.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.5, -0.5, 1.0],
    [1.0, 2.0, 5.0],
];

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenProfiles {
    pub ex21: SurfaceProfile,
    pub ex31: SurfaceProfile,
    pub ex41a: SurfaceProfile,
    pub ex41b: SurfaceProfile,
    pub ex42: SurfaceProfile,
    pub plane: SurfaceProfile,
    pub contactplane: SurfaceProfile,
    pub y_eq_xz: SurfaceProfile,
}

impl GoldenProfiles {
    fn from_list(mut p: Vec<SurfaceProfile>) -> Self {
        let mut next = || p.remove(0);
        Self {
            ex21: next(),
            ex31: next(),
            ex41a: next(),
            ex41b: next(),
            ex42: next(),
            plane: next(),
            contactplane: next(),
            y_eq_xz: next(),
        }
    }

    /// The copies compiled into the library.
    pub fn builtin() -> Self {
        Self::from_list(
            BUILTIN
                .iter()
                .map(|src| SurfaceProfile::from_json(src).expect("bundled profile parses"))
                .collect(),
        )
    }

    /// Reads `<name>.json` for every name in [`GOLDEN_NAMES`].
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let list = GOLDEN_NAMES
            .iter()
            .map(|n| SurfaceProfile::load(dir.join(format!("{n}.json"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_list(list))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &SurfaceProfile)> {
        GOLDEN_NAMES.into_iter().zip([
            &self.ex21,
            &self.ex31,
            &self.ex41a,
            &self.ex41b,
            &self.ex42,
            &self.plane,
            &self.contactplane,
            &self.y_eq_xz,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoldenAssertion {
    pub example: String,
    pub check: String,
    pub passed: bool,
    /// Measured value or outcome, with the threshold it was held to.
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GoldenReport {
    pub assertions: Vec<GoldenAssertion>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GoldenAssertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }

    fn push(&mut self, example: &str, check: &str, passed: bool, detail: String) {
        self.assertions.push(GoldenAssertion {
            example: example.into(),
            check: check.into(),
            passed,
            detail,
        });
    }

    /// Records `value < bound`.
    fn below(&mut self, example: &str, check: &str, value: Result<f64>, bound: f64) {
        match value {
            Ok(v) => self.push(example, check, v < bound, format!("{v:.3e} (< {bound:.0e})")),
            Err(e) => self.push(example, check, false, format!("error: {e}")),
        }
    }

    fn outcome(&mut self, example: &str, check: &str, result: Result<(bool, String)>) {
        match result {
            Ok((ok, detail)) => self.push(example, check, ok, detail),
            Err(e) => self.push(example, check, false, format!("error: {e}")),
        }
    }
}

/// Largest `|f(X(s, t))|` over an `n × n` grid on the profile's ranges.
fn implicit_residual<F: Fn(Point3) -> f64>(profile: &SurfaceProfile, n: usize, f: F) -> Result<f64> {
    let grid = GridSpec::for_profile(profile, n, n)?;
    let mut worst = 0.0f64;
    for t in grid.t_values() {
        for s in grid.s_values() {
            worst = worst.max(f(evaluate(profile, s, t)?).abs());
        }
    }
    Ok(worst)
}

fn grid_samples(profile: &SurfaceProfile, n: usize) -> Vec<(f64, f64)> {
    let (ss, ts) = (profile.s_range.linspace(n), profile.t_range.linspace(n));
    ts.iter().flat_map(|&t| ss.iter().map(move |&s| (s, t))).collect()
}

fn vertical_axis_fixed(c: &Classification, x0: f64, y0: f64) -> (bool, String) {
    match &c.kind {
        ClassificationKind::HelicoidTilted { x0: a, y0: b, .. } => {
            let err = (a - x0).abs().max((b - y0).abs());
            (err < 1e-8, format!("HelicoidTilted (x0, y0) = ({a}, {b}); error {err:.1e} (< 1e-8)"))
        }
        _ => (false, format!("got {}", c.name())),
    }
}

fn zxy_membership(p: Point3) -> f64 {
    p.z * (p.x + 1.0) - p.y * (p.x - 1.0)
}

fn negative_gaps(profile: &SurfaceProfile, pairs: usize) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(GOLDEN_SEED);
    let (lo, hi) = (profile.t_range.min, profile.t_range.max);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..pairs {
        let (a, b): (f64, f64) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        let (t1, t2) = (a.min(b), a.max(b));
        let r1 = projected_ruling(profile, t1)?;
        let r2 = projected_ruling(profile, t2)?;
        let gap = match intersect_rulings(&r1, &r2, PARALLEL_EPS) {
            LineIntersection::Cross { gap, .. } => gap,
            _ => f64::INFINITY,
        };
        worst = worst.max(gap);
    }
    Ok((worst < 0.0, format!("max gap over {pairs} pairs = {worst:.3e} (< 0)")))
}

fn check_ex21(rep: &mut GoldenReport, p: &SurfaceProfile, class: &Result<Classification>) {
    let ex = "ex21";
    rep.below(ex, "z(x+1) = y(x-1) on a 200x200 grid", implicit_residual(p, 200, zxy_membership), 1e-9);
    rep.outcome(ex, "height gap negative for t1 < t2", negative_gaps(p, 200));
    rep.outcome(
        ex,
        "no non-immersed point on a 200x200 grid",
        GridSpec::for_profile(p, 200, 200)
            .and_then(|g| scan_non_immersed(p, &g, 1e-9))
            .map(|v| (v.is_empty(), format!("{} non-immersed points", v.len()))),
    );
    rep.outcome(
        ex,
        "no colliding ruling pairs",
        injectivity_scan(p, &p.t_range.linspace(100), GapFormula::General, PARALLEL_EPS, INJECTIVITY_TOL)
            .map(|v| (v.is_empty(), format!("{} violations", v.len()))),
    );
    match class {
        Ok(c) => {
            let (ok, detail) = vertical_axis_fixed(c, -1.0, 0.0);
            rep.push(ex, "classifies as HelicoidTilted through (-1, 0)", ok, detail);
            let tan_err = match &c.kind {
                ClassificationKind::HelicoidTilted { theta, .. } => Interval::new(0.1, 10.0).and_then(|r| {
                    r.linspace(1000)
                        .into_iter()
                        .map(|t| theta.eval(t).map(|th| (th.tan() * t - 2.0).abs()))
                        .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
                }),
                _ => Ok(f64::INFINITY),
            };
            rep.below(ex, "recovered angle has tan(theta) * t = 2 on [0.1, 10]", tan_err, 1e-7);
        }
        Err(e) => rep.push(ex, "classification", false, format!("error: {e}")),
    }
    rep.below(ex, "Legendrian rulings", legendrian_residual(p, &grid_samples(p, 100)), 1e-12);
    rep.outcome(
        ex,
        "proper",
        properness_check(p).map(|r| (r.verdict == Properness::Proper, format!("{:?}", r.verdict))),
    );
    let straddles = PROBE_POINTS.iter().try_fold((true, 0usize), |(ok, n), q| {
        let plane = contact_plane_at(Vec3::new(q[0], q[1], q[2]));
        let rep = halfspace_probe(p, &plane, &GridSpec::for_profile(p, 21, 41)?)?;
        let s = matches!(rep.containment, Containment::Straddles { .. });
        Ok((ok && s, n + usize::from(s)))
    });
    rep.outcome(
        ex,
        "straddles every probed contact plane",
        straddles.map(|(ok, n)| (ok, format!("{n} of {} planes straddled", PROBE_POINTS.len()))),
    );
}

fn check_ex31(rep: &mut GoldenReport, p: &SurfaceProfile, class: &Result<Classification>) {
    let ex = "ex31";
    rep.below(ex, "z(x+1) = y(x-1) on a 200x200 grid", implicit_residual(p, 200, zxy_membership), 1e-9);
    match class {
        Ok(c) => {
            let (ok, detail) = vertical_axis_fixed(c, -1.0, 0.0);
            rep.push(ex, "classifies as HelicoidTilted through (-1, 0)", ok, detail);
            let err = match &c.kind {
                ClassificationKind::HelicoidTilted { theta, .. } => p
                    .t_range
                    .linspace(401)
                    .into_iter()
                    .map(|t| Ok((theta.eval(t)? - (0.5 * t).atan().mul_add(-1.0, std::f64::consts::FRAC_PI_2)).abs()))
                    .try_fold(0.0f64, |m, v: Result<f64>| v.map(|v| m.max(v))),
                _ => Ok(f64::INFINITY),
            };
            rep.below(ex, "recovered angle equals acot(t/2)", err, 1e-12);
        }
        Err(e) => rep.push(ex, "classification", false, format!("error: {e}")),
    }
    rep.below(ex, "Legendrian rulings", legendrian_residual(p, &grid_samples(p, 100)), 1e-12);
}

fn check_ex41(rep: &mut GoldenReport, ex: &str, p: &SurfaceProfile, class: &Result<Classification>) {
    rep.below(
        ex,
        "(z - xy)^2 = y on a 200x200 grid",
        implicit_residual(p, 200, |q| (q.z - q.x * q.y).powi(2) - q.y),
        1e-9,
    );
    rep.below(ex, "Legendrian rulings", legendrian_residual(p, &grid_samples(p, 100)), 1e-12);
    match class {
        Ok(c) => {
            let (ok, detail) = match c.kind {
                ClassificationKind::WeakHelicoid { plane_normal } => {
                    let err = plane_normal.cross(Vec3::new(0.0, 1.0, 0.0)).norm();
                    (err < 1e-9, format!("WeakHelicoid, normal {:?}; deviation {err:.1e}", plane_normal.to_array()))
                }
                _ => (false, format!("got {}", c.name())),
            };
            rep.push(ex, "classifies as WeakHelicoid with planes y = const", ok, detail);
            let (ok, detail) = match c.certificate.offset_range {
                Some([lo, hi]) => (lo >= 0.0, format!("plane offsets y in [{lo}, {hi}] (within y >= 0)")),
                None => (false, "no offset range".into()),
            };
            rep.push(ex, "planes stay in the half-space y >= 0", ok, detail);
        }
        Err(e) => rep.push(ex, "classification", false, format!("error: {e}")),
    }
}

fn check_ex42(rep: &mut GoldenReport, p: &SurfaceProfile, class: &Result<Classification>) {
    let ex = "ex42";
    rep.outcome(
        ex,
        "proper",
        properness_check(p).map(|r| (r.verdict == Properness::Proper, format!("{:?}", r.verdict))),
    );
    let fit = [-100.0, -10.0, -1.0, 1.0, 10.0, 100.0]
        .into_iter()
        .map(|t: f64| ruling_distance(p, t).map(|r| (r - (1.0 + t * t / 2.0).sqrt()).abs()))
        .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)));
    rep.below(ex, "ruling distance equals sqrt(1 + t^2/2) at |t| = 1, 10, 100", fit, 1e-9);
    rep.outcome(
        ex,
        "no singular points",
        GridSpec::for_profile(p, 101, 101)
            .and_then(|g| scan_singular_set(p, &g, SINGULAR_TOL))
            .map(|s| (s.points.is_empty(), format!("{} singular points", s.points.len()))),
    );
    match class {
        Ok(c) => rep.push(
            ex,
            "classifies as NonHelicoid",
            c.kind == ClassificationKind::NonHelicoid,
            c.name().into(),
        ),
        Err(e) => rep.push(ex, "classification", false, format!("error: {e}")),
    }
}

fn check_plane(rep: &mut GoldenReport, p: &SurfaceProfile) {
    let ex = "plane";
    let grid = GridSpec::for_profile(p, 101, 101);
    rep.outcome(
        ex,
        "immersed everywhere",
        grid.as_ref()
            .map_err(|e| crate::Error::InvalidGrid(e.to_string()))
            .and_then(|g| scan_non_immersed(p, g, 1e-9))
            .map(|v| (v.is_empty(), format!("{} non-immersed points", v.len()))),
    );
    rep.outcome(
        ex,
        "no singular points",
        grid.and_then(|g| scan_singular_set(p, &g, SINGULAR_TOL))
            .map(|s| (s.points.is_empty(), format!("{} singular points", s.points.len()))),
    );
    rep.outcome(
        ex,
        "no colliding ruling pairs",
        injectivity_scan(p, &p.t_range.linspace(100), GapFormula::General, PARALLEL_EPS, INJECTIVITY_TOL)
            .map(|v| (v.is_empty(), format!("{} violations", v.len()))),
    );
    rep.below(ex, "Legendrian rulings", legendrian_residual(p, &grid_samples(p, 100)), 1e-12);
}

fn check_contactplane(rep: &mut GoldenReport, p: &SurfaceProfile, class: &Result<Classification>) {
    let ex = "contactplane";
    let c = match class {
        Ok(c) => c,
        Err(e) => return rep.push(ex, "classification", false, format!("error: {e}")),
    };
    let (ok, detail) = match c.kind {
        ClassificationKind::ContactPlane { through } => {
            let err = (through - Vec3::new(1.0, 2.0, 3.0)).norm();
            (err < 1e-9, format!("ContactPlane through {:?}; error {err:.1e}", through.to_array()))
        }
        _ => (false, format!("got {}", c.name())),
    };
    rep.push(ex, "classifies as ContactPlane through (1, 2, 3)", ok, detail);
    // The parallel contact plane z = 2x − y lies three units below.
    let below = Plane3::graph(2.0, -1.0, 0.0);
    rep.outcome(
        ex,
        "lies above the parallel contact plane z = 2x - y",
        GridSpec::for_profile(p, 21, 41)
            .and_then(|g| halfspace_probe(p, &below, &g))
            .map(|r| {
                let ok = r.containment == Containment::Contained { side: Side::Upper };
                (ok, format!("{:?}", r.containment))
            }),
    );
}

fn check_y_eq_xz(rep: &mut GoldenReport, p: &SurfaceProfile) {
    let ex = "y_eq_xz";
    rep.below(ex, "y = xz on a 200x200 grid", implicit_residual(p, 200, |q| q.y - q.x * q.z), 1e-9);
    rep.outcome(
        ex,
        "angle is non-decreasing, so no singular points",
        singular_free_tilted(&p.theta, p.t_range).map(|v| {
            (v.singular_free, format!("min theta' = {:.3e}", v.min_theta_prime))
        }),
    );
    rep.outcome(
        ex,
        "singular scan is empty",
        GridSpec::for_profile(p, 101, 101)
            .and_then(|g| scan_singular_set(p, &g, SINGULAR_TOL))
            .map(|s| (s.points.is_empty(), format!("{} singular points", s.points.len()))),
    );
    let patch = (|| -> Result<_> {
        Ok(GraphPatch {
            field: ImplicitTiltedGraph {
                x0: 0.0,
                y0: 0.0,
                theta: p.theta.clone(),
                tau_range: p.t_range,
            },
            x_range: Interval::new(0.5, 2.0)?,
            y_range: Interval::new(-1.0, 1.0)?,
            h: 1.0 / 32.0,
        })
    })();
    rep.outcome(
        ex,
        "graph z = y/x has second-order residual on [0.5, 2] x [-1, 1]",
        patch.and_then(|patch| pde_residual(&patch)).map(|r| {
            (r.second_order, format!("max residuals {:?}, ratios {:?} (in [3.5, 4.5])",
                r.levels.iter().map(|l| l.max_residual).collect::<Vec<_>>(), r.ratios))
        }),
    );
}

fn check_halfspace(rep: &mut GoldenReport, name: &str, p: &SurfaceProfile, class: &Result<Classification>) {
    let Ok(c) = class else { return };
    let result = PROBE_POINTS.iter().try_fold(0usize, |n, q| {
        let plane = contact_plane_at(Vec3::new(q[0], q[1], q[2]));
        let check = halfspace_consistency(p, &plane, &GridSpec::for_profile(p, 21, 41)?, c)?;
        Ok(n + usize::from(check.violation))
    });
    rep.outcome(
        name,
        "half-space containment only for contact planes",
        result.map(|n| (n == 0, format!("{n} violations over {} contact planes", PROBE_POINTS.len()))),
    );
}

/// Runs every check on every bundled profile.
pub fn golden_examples(profiles: &GoldenProfiles) -> GoldenReport {
    let classes: Vec<(&str, &SurfaceProfile, Result<Classification>)> =
        profiles.iter().map(|(n, p)| (n, p, classify(p))).collect();
    let class_of = |name: &str| &classes.iter().find(|c| c.0 == name).expect("known name").2;
    let mut rep = GoldenReport::default();
    check_ex21(&mut rep, &profiles.ex21, class_of("ex21"));
    check_ex31(&mut rep, &profiles.ex31, class_of("ex31"));
    check_ex41(&mut rep, "ex41a", &profiles.ex41a, class_of("ex41a"));
    check_ex41(&mut rep, "ex41b", &profiles.ex41b, class_of("ex41b"));
    check_ex42(&mut rep, &profiles.ex42, class_of("ex42"));
    check_plane(&mut rep, &profiles.plane);
    check_contactplane(&mut rep, &profiles.contactplane, class_of("contactplane"));
    check_y_eq_xz(&mut rep, &profiles.y_eq_xz);
    for (name, p, class) in &classes {
        check_halfspace(&mut rep, name, p, class);
    }
    rep
}
