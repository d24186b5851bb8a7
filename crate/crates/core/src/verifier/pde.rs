//! Discrete residual of `div((∇u + F)/|∇u + F|) = 0`, `F = (−y, x)`, for
//! height functions `z = u(x, y)` given with exact gradients.
//!
//! The unit field `N` is evaluated at grid nodes and differentiated with
//! second-order centred differences. Nodes where `|∇u + F|` is tiny, or
//! that lie near a cell where both components of `∇u + F` change sign
//! (the singular curve, across which `N` jumps), are left out.

use rayon::prelude::*;
use serde::Serialize;
use std::io::{self, Write};

use crate::classifier::{tilted_defining_function, tilted_defining_gradient, vertical_graph};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::profile::{Interval, ProfileFunction};
use crate::tolerances::{EPS_SING, EXCLUSION_CELLS};

/// Tolerance for the implicit solve behind [`ImplicitTiltedGraph`].
pub const ROOT_TOL: f64 = 1e-11;
/// More than this fraction of excluded nodes is an error.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.5;
/// Acceptable band for the error ratio when `h` is halved.
pub const SECOND_ORDER_RATIO: (f64, f64) = (3.5, 4.5);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightSample {
    pub z: f64,
    pub gradient: [f64; 2],
    /// How well `z` solves its defining equation; zero for closed forms.
    pub root_residual: f64,
}

pub trait HeightField: Sync {
    fn sample(&self, x: f64, y: f64) -> Result<HeightSample>;
}

/// A height function given by a closure returning `(u, ∇u)`.
pub struct ClosedForm<F>(pub F);

impl<F> HeightField for ClosedForm<F>
where
    F: Fn(f64, f64) -> (f64, [f64; 2]) + Sync,
{
    fn sample(&self, x: f64, y: f64) -> Result<HeightSample> {
        let (z, gradient) = (self.0)(x, y);
        Ok(HeightSample {
            z,
            gradient,
            root_residual: 0.0,
        })
    }
}

/// `z = −abx² + (a² − b²)xy + aby² + g(−bx + ay)`.
pub struct VerticalGraph {
    pub a: f64,
    pub b: f64,
    pub g: ProfileFunction,
}

impl HeightField for VerticalGraph {
    fn sample(&self, x: f64, y: f64) -> Result<HeightSample> {
        let (z, gradient) = vertical_graph(self.a, self.b, &self.g, x, y)?;
        Ok(HeightSample {
            z,
            gradient,
            root_residual: 0.0,
        })
    }
}

/// The tilted form `(x − x₀) cosθ(τ) + (y − y₀) sinθ(τ) = 0`,
/// `τ = z − y₀x + x₀y`, solved for `z` where it is a graph over the patch.
pub struct ImplicitTiltedGraph {
    pub x0: f64,
    pub y0: f64,
    pub theta: ProfileFunction,
    /// Interval of `τ` searched for the root.
    pub tau_range: Interval,
}

impl ImplicitTiltedGraph {
    const BRACKETS: usize = 64;

    fn f(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        tilted_defining_function(self.x0, self.y0, &self.theta, Vec3::new(x, y, z))
    }

    /// The unique root `z` of `F(x, y, ·)` over the search interval.
    pub fn solve(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let base = self.y0 * x - self.x0 * y;
        let zs: Vec<f64> = self.tau_range.linspace(Self::BRACKETS + 1).iter().map(|t| t + base).collect();
        let fs = zs.iter().map(|&z| self.f(x, y, z)).collect::<Result<Vec<_>>>()?;
        let mut brackets = Vec::new();
        for i in 0..Self::BRACKETS {
            if fs[i] == 0.0 {
                brackets.push((zs[i], zs[i]));
            } else if fs[i] * fs[i + 1] < 0.0 {
                brackets.push((zs[i], zs[i + 1]));
            }
        }
        if fs[Self::BRACKETS] == 0.0 {
            brackets.push((zs[Self::BRACKETS], zs[Self::BRACKETS]));
        }
        let [(lo, hi)] = brackets[..] else {
            return Err(Error::InvalidGrid(format!(
                "surface is not a graph at ({x}, {y}): {} roots in the search interval",
                brackets.len()
            )));
        };
        let (mut lo, mut hi) = (lo, hi);
        let mut flo = self.f(x, y, lo)?;
        let mut z = 0.5 * (lo + hi);
        for _ in 0..60 {
            if hi - lo <= 1e-9 * (1.0 + z.abs()) {
                break;
            }
            let fz = self.f(x, y, z)?;
            if fz == 0.0 {
                break;
            }
            if (fz < 0.0) == (flo < 0.0) {
                lo = z;
                flo = fz;
            } else {
                hi = z;
            }
            z = 0.5 * (lo + hi);
        }
        // Newton polish with the exact z-derivative.
        let mut fz = self.f(x, y, z)?;
        for _ in 0..8 {
            if fz.abs() < ROOT_TOL * 1e-2 {
                break;
            }
            let dz = tilted_defining_gradient(self.x0, self.y0, &self.theta, Vec3::new(x, y, z))?.z;
            if dz == 0.0 {
                break;
            }
            let next = z - fz / dz;
            let fnext = self.f(x, y, next)?;
            if fnext.abs() >= fz.abs() {
                break;
            }
            z = next;
            fz = fnext;
        }
        Ok((z, fz.abs()))
    }
}

impl HeightField for ImplicitTiltedGraph {
    fn sample(&self, x: f64, y: f64) -> Result<HeightSample> {
        let (z, root_residual) = self.solve(x, y)?;
        let g = tilted_defining_gradient(self.x0, self.y0, &self.theta, Vec3::new(x, y, z))?;
        if g.z == 0.0 {
            return Err(Error::InvalidGrid(format!("surface is vertical at ({x}, {y})")));
        }
        Ok(HeightSample {
            z,
            gradient: [-g.x / g.z, -g.y / g.z],
            root_residual,
        })
    }
}

/// A height field over a rectangle, sampled with spacing `h`.
pub struct GraphPatch<H> {
    pub field: H,
    pub x_range: Interval,
    pub y_range: Interval,
    pub h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualSample {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
}

/// The residual on one grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelResidual {
    pub h: f64,
    pub nodes: usize,
    /// Nodes dropped for a small `|∇u + F|` or for nearness to the singular set.
    pub excluded: usize,
    /// Retained nodes whose four neighbours are retained too.
    pub evaluated: usize,
    pub max_residual: f64,
    pub max_root_residual: f64,
    #[serde(skip)]
    pub samples: Vec<ResidualSample>,
}

impl LevelResidual {
    /// CSV with header `x,y,residual`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,residual")?;
        for s in &self.samples {
            writeln!(out, "{:e},{:e},{:e}", s.x, s.y, s.residual)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    /// One entry per spacing, coarsest first.
    pub levels: Vec<LevelResidual>,
    /// `max_residual(h) / max_residual(h/2)` for consecutive levels; only
    /// present when all three levels were computed.
    pub ratios: Option<Vec<f64>>,
    pub exact_zero: bool,
    /// Every ratio lies in [`SECOND_ORDER_RATIO`], or the residual is exactly zero.
    pub second_order: bool,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.levels.iter().map(|l| l.max_residual).fold(0.0, f64::max)
    }

    pub fn finest(&self) -> &LevelResidual {
        self.levels.last().expect("at least one level")
    }
}

fn node_count(range: Interval, h: f64) -> Result<usize> {
    let n = (range.len() / h).round();
    if !(n >= 2.0) || ((n * h) - range.len()).abs() > 1e-9 * range.len() {
        return Err(Error::InvalidGrid(format!(
            "spacing {h} does not divide [{}, {}] into at least two cells",
            range.min, range.max
        )));
    }
    Ok(n as usize + 1)
}

fn sign_both(vals: [f64; 4]) -> bool {
    vals.iter().any(|&v| v >= 0.0) && vals.iter().any(|&v| v <= 0.0)
}

/// The residual on the grid with spacing `patch.h`.
pub fn level_residual<H: HeightField>(patch: &GraphPatch<H>) -> Result<LevelResidual> {
    let h = patch.h;
    let nx = node_count(patch.x_range, h)?;
    let ny = node_count(patch.y_range, h)?;
    let xs: Vec<f64> = (0..nx).map(|i| patch.x_range.min + i as f64 * h).collect();
    let ys: Vec<f64> = (0..ny).map(|j| patch.y_range.min + j as f64 * h).collect();
    let idx = |i: usize, j: usize| j * nx + i;

    // ∇u + F at every node, row by row.
    let rows = (0..ny)
        .into_par_iter()
        .map(|j| {
            xs.iter()
                .map(|&x| {
                    let y = ys[j];
                    let s = patch.field.sample(x, y)?;
                    Ok(([s.gradient[0] - y, s.gradient[1] + x], s.root_residual))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<([f64; 2], f64)> = rows.into_iter().flatten().collect();
    let g: Vec<[f64; 2]> = cells.iter().map(|c| c.0).collect();
    let max_root_residual = cells.iter().map(|c| c.1).fold(0.0, f64::max);

    let mut keep: Vec<bool> = g.iter().map(|v| v[0].hypot(v[1]) >= EPS_SING).collect();

    // Cells on the singular set, and every node within EXCLUSION_CELLS·h of one.
    let reach = EXCLUSION_CELLS.ceil() as isize + 1;
    let radius = EXCLUSION_CELLS * h;
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1)];
            let gx = corners.map(|k| g[k][0]);
            let gy = corners.map(|k| g[k][1]);
            if !(sign_both(gx) && sign_both(gy)) {
                continue;
            }
            let (cx0, cx1, cy0, cy1) = (xs[i], xs[i + 1], ys[j], ys[j + 1]);
            for dj in -reach..=reach + 1 {
                for di in -reach..=reach + 1 {
                    let (ii, jj) = (i as isize + di, j as isize + dj);
                    if ii < 0 || jj < 0 || ii >= nx as isize || jj >= ny as isize {
                        continue;
                    }
                    let (px, py) = (xs[ii as usize], ys[jj as usize]);
                    let dx = (cx0 - px).max(0.0).max(px - cx1);
                    let dy = (cy0 - py).max(0.0).max(py - cy1);
                    if dx.hypot(dy) <= radius * (1.0 + 1e-12) {
                        keep[idx(ii as usize, jj as usize)] = false;
                    }
                }
            }
        }
    }
    let nodes = nx * ny;
    let excluded = keep.iter().filter(|k| !**k).count();
    if excluded as f64 > MAX_EXCLUDED_FRACTION * nodes as f64 {
        return Err(Error::SingularContamination { removed: excluded, total: nodes });
    }

    let unit: Vec<[f64; 2]> = g
        .iter()
        .map(|v| {
            let n = v[0].hypot(v[1]);
            [v[0] / n, v[1] / n]
        })
        .collect();
    let mut samples = Vec::new();
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let stencil = [idx(i, j), idx(i - 1, j), idx(i + 1, j), idx(i, j - 1), idx(i, j + 1)];
            if !stencil.iter().all(|&k| keep[k]) {
                continue;
            }
            let div = (unit[idx(i + 1, j)][0] - unit[idx(i - 1, j)][0] + unit[idx(i, j + 1)][1]
                - unit[idx(i, j - 1)][1])
                / (2.0 * h);
            samples.push(ResidualSample {
                x: xs[i],
                y: ys[j],
                residual: div,
            });
        }
    }
    let max_residual = samples.iter().map(|s| s.residual.abs()).fold(0.0, f64::max);
    Ok(LevelResidual {
        h,
        nodes,
        excluded,
        evaluated: samples.len(),
        max_residual,
        max_root_residual,
        samples,
    })
}

/// Residuals at spacings `h`, `h/2` and `h/4`, with the convergence ratios.
pub fn pde_residual<H: HeightField>(patch: &GraphPatch<H>) -> Result<ResidualReport> {
    let mut levels = Vec::with_capacity(3);
    for k in 0..3 {
        let level = GraphPatch {
            field: &patch.field,
            x_range: patch.x_range,
            y_range: patch.y_range,
            h: patch.h / f64::from(1u32 << k),
        };
        levels.push(level_residual(&level)?);
    }
    let exact_zero = levels.iter().all(|l| l.max_residual == 0.0);
    let ratios: Vec<f64> = levels.windows(2).map(|w| w[0].max_residual / w[1].max_residual).collect();
    let second_order = exact_zero
        || ratios
            .iter()
            .all(|r| (SECOND_ORDER_RATIO.0..=SECOND_ORDER_RATIO.1).contains(r));
    Ok(ResidualReport {
        levels,
        ratios: (!exact_zero).then_some(ratios),
        exact_zero,
        second_order,
    })
}

impl<H: HeightField> HeightField for &H {
    fn sample(&self, x: f64, y: f64) -> Result<HeightSample> {
        (**self).sample(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn y_eq_xz() -> ImplicitTiltedGraph {
        ImplicitTiltedGraph {
            x0: 0.0,
            y0: 0.0,
            theta: ProfileFunction::parse("-acot(t)").unwrap(),
            tau_range: unit(-10.0, 10.0),
        }
    }

    #[test]
    fn saddle_has_exactly_zero_residual() {
        let patch = GraphPatch {
            field: VerticalGraph {
                a: 1.0,
                b: 0.0,
                g: ProfileFunction::constant(0.0),
            },
            x_range: unit(-1.0, 1.0),
            y_range: unit(-1.0, 1.0),
            h: 1.0 / 32.0,
        };
        let rep = pde_residual(&patch).unwrap();
        assert!(rep.exact_zero && rep.second_order);
        assert!(rep.ratios.is_none());
        // The column x = 0 and its neighbourhood are excluded.
        assert!(rep.levels.iter().all(|l| l.excluded > 0 && l.evaluated > 0));
    }

    #[test]
    fn implicit_solve_recovers_quotient() {
        let f = y_eq_xz();
        for (x, y) in [(0.5, -1.0), (1.3, 0.2), (2.0, 1.0)] {
            let s = f.sample(x, y).unwrap();
            assert!((s.z - y / x).abs() < 1e-10);
            assert!(s.root_residual < ROOT_TOL);
            assert!((s.gradient[0] + y / (x * x)).abs() < 1e-9);
            assert!((s.gradient[1] - 1.0 / x).abs() < 1e-9);
        }
    }

    #[test]
    fn quotient_patch_converges_at_second_order() {
        let patch = GraphPatch {
            field: y_eq_xz(),
            x_range: unit(0.5, 2.0),
            y_range: unit(-1.0, 1.0),
            h: 1.0 / 32.0,
        };
        let rep = pde_residual(&patch).unwrap();
        assert!(rep.second_order, "{:?}", rep.ratios);
        assert!(rep.levels.iter().all(|l| l.excluded == 0 && l.max_root_residual < ROOT_TOL));
    }

    #[test]
    fn paraboloid_is_not_p_minimal() {
        let patch = GraphPatch {
            field: ClosedForm(|x: f64, y: f64| (x * x + y * y, [2.0 * x, 2.0 * y])),
            x_range: unit(0.0, 1.0),
            y_range: unit(0.0, 1.0),
            h: 1.0 / 32.0,
        };
        let rep = pde_residual(&patch).unwrap();
        assert!(rep.finest().max_residual > 0.1);
        assert!(!rep.second_order);
    }

    #[test]
    fn cubic_is_not_p_minimal() {
        let patch = GraphPatch {
            field: ClosedForm(|x: f64, _y: f64| (x * x * x, [3.0 * x * x, 0.0])),
            x_range: unit(0.0, 1.0),
            y_range: unit(0.0, 1.0),
            h: 1.0 / 128.0,
        };
        assert!(level_residual(&patch).unwrap().max_residual > 0.1);
    }

    #[test]
    fn heavy_exclusion_is_an_error() {
        // For u = 0, ∇u + F = (−y, x) vanishes only at the origin; a small
        // patch around it lies almost entirely within the exclusion radius.
        let patch = GraphPatch {
            field: ClosedForm(|_x: f64, _y: f64| (0.0, [0.0, 0.0])),
            x_range: unit(-0.25, 0.25),
            y_range: unit(-0.25, 0.25),
            h: 1.0 / 32.0,
        };
        assert!(matches!(level_residual(&patch), Err(Error::SingularContamination { .. })));
    }

    #[test]
    fn spacing_must_divide_the_patch() {
        let patch = GraphPatch {
            field: ClosedForm(|_x: f64, _y: f64| (0.0, [0.0, 0.0])),
            x_range: unit(0.0, 1.0),
            y_range: unit(0.0, 1.0),
            h: 0.3,
        };
        assert!(matches!(level_residual(&patch), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn residual_csv_has_header() {
        let patch = GraphPatch {
            field: y_eq_xz(),
            x_range: unit(0.5, 1.0),
            y_range: unit(0.0, 0.5),
            h: 1.0 / 8.0,
        };
        let level = level_residual(&patch).unwrap();
        let mut buf = Vec::new();
        level.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,y,residual\n"));
        assert_eq!(text.lines().count(), level.evaluated + 1);
    }
}
