//! Grid sampling of a surface and its OBJ / CSV export.

use std::io::{self, Write};

use crate::error::Result;
use crate::geometry::Point3;
use crate::grid::GridSpec;
use crate::profile::SurfaceProfile;
use crate::surface::evaluate;

/// Surface samples on an `(s, t)` grid, stored with `s` varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub ns: usize,
    pub nt: usize,
    pub params: Vec<(f64, f64)>,
    pub points: Vec<Point3>,
}

impl SurfaceMesh {
    pub fn sample(profile: &SurfaceProfile, grid: &GridSpec) -> Result<Self> {
        let ss = grid.s_values();
        let ts = grid.t_values();
        let mut params = Vec::with_capacity(ss.len() * ts.len());
        let mut points = Vec::with_capacity(ss.len() * ts.len());
        for &t in &ts {
            for &s in &ss {
                params.push((s, t));
                points.push(evaluate(profile, s, t)?);
            }
        }
        Ok(Self {
            ns: ss.len(),
            nt: ts.len(),
            params,
            points,
        })
    }

    pub fn triangle_count(&self) -> usize {
        2 * (self.ns - 1) * (self.nt - 1)
    }

    /// Zero-based vertex triples, two per grid quad.
    pub fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let ns = self.ns;
        (0..self.nt - 1).flat_map(move |j| {
            (0..ns - 1).flat_map(move |i| {
                let v00 = j * ns + i;
                let (v10, v01, v11) = (v00 + 1, v00 + ns, v00 + ns + 1);
                [[v00, v10, v11], [v00, v11, v01]]
            })
        })
    }

    /// Wavefront OBJ with `v` and `f` records only; 17 significant digits.
    pub fn write_obj<W: Write>(&self, mut out: W) -> io::Result<()> {
        for p in &self.points {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z)?;
        }
        for [a, b, c] in self.triangles() {
            writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1)?;
        }
        Ok(())
    }

    /// CSV with header `s,t,x,y,z`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "s,t,x,y,z")?;
        for (&(s, t), p) in self.params.iter().zip(&self.points) {
            writeln!(out, "{s:.16e},{t:.16e},{:.16e},{:.16e},{:.16e}", p.x, p.y, p.z)?;
        }
        Ok(())
    }
}
