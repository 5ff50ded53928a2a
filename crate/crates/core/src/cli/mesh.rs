//! Meshes in display coordinates with per-vertex scalars.

use std::fmt::Write as _;

use nalgebra::DVector;

use crate::ambient::{AmbientSpace, SpaceKind};
use crate::error::Result;
use crate::surface::{sample_grid, GridSpec, Immersion, JetMode};

/// Scalar columns of the sidecar CSV, in order.
pub const SCALAR_COLUMNS: [&str; 3] = ["theta", "h_residual", "causal"];

#[derive(Debug, Clone, Default)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based triangle indices.
    pub faces: Vec<[usize; 3]>,
    /// theta, H and 2 theta^2 - 1 per vertex; NaN where undefined.
    pub scalars: Vec<[f64; 3]>,
    pub display: String,
    /// Set when coordinates were dropped to reach three.
    pub projected: bool,
}

/// Display coordinates of a point (x, t) of M x R: chart coordinates and
/// height; e^t p for S^2 x R; Poincare disc and height for H^2 x R; the
/// first three coordinates otherwise.
pub fn display_point(space: &AmbientSpace, q: &DVector<f64>) -> ([f64; 3], bool) {
    let m = q.len();
    let t = q[m - 1];
    match space.kind() {
        SpaceKind::SphereQuadric { n: 2 } => {
            let e = t.exp();
            ([e * q[0], e * q[1], e * q[2]], false)
        }
        SpaceKind::HyperbolicQuadric { n: 2 } => {
            let d = 1.0 + q[2];
            ([q[0] / d, q[1] / d, t], false)
        }
        _ if space.is_chart() && m == 3 => ([q[0], q[1], q[2]], false),
        _ => ([q[0], q[1], q[2]], true),
    }
}

pub fn display_label(space: &AmbientSpace, projected: bool) -> String {
    match space.kind() {
        SpaceKind::SphereQuadric { n: 2 } => "e^t p for (p, t) in S^2 x R".into(),
        SpaceKind::HyperbolicQuadric { n: 2 } => "Poincare disc x height".into(),
        _ if !projected => "chart coordinates x height".into(),
        _ => "first three coordinates".into(),
    }
}

impl Mesh {
    /// Append the grid of one immersion. Faces triangulate the quads of the
    /// first two parameter axes in every slice of the remaining ones.
    pub fn add_piece(&mut self, surf: &Immersion, grid: &GridSpec, mode: JetMode) -> Result<()> {
        let offset = self.vertices.len();
        let space = &surf.ambient.base;
        for s in sample_grid(surf, grid, mode)? {
            let (v, projected) = display_point(space, &surf.eval(&s.u));
            self.projected |= projected;
            self.vertices.push(v);
            self.scalars.push(match s.data() {
                Some(d) => [d.theta, d.h, 2.0 * d.theta * d.theta - 1.0],
                None => [f64::NAN; 3],
            });
        }
        self.display = display_label(space, self.projected);
        let c = &grid.counts;
        for k in 0..grid.len() {
            let idx = grid.index(k);
            if idx[0] + 1 >= c[0] || idx[1] + 1 >= c[1] {
                continue;
            }
            let at = |di: usize, dj: usize| {
                let mut j = idx.clone();
                j[0] += di;
                j[1] += dj;
                offset + grid.flat(&j)
            };
            let (a, b, cc, d) = (at(0, 0), at(1, 0), at(1, 1), at(0, 1));
            self.faces.push([a, b, cc]);
            self.faces.push([a, cc, d]);
        }
        Ok(())
    }

    pub fn to_obj(&self, title: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {title}");
        let _ = writeln!(s, "# display: {}", self.display);
        if self.projected {
            let _ = writeln!(s, "# warning: projected to the first three coordinates");
        }
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]));
        }
        for f in &self.faces {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        s
    }

    pub fn scalars_csv(&self) -> String {
        let mut s = format!("vertex,{}\r\n", SCALAR_COLUMNS.join(","));
        for (i, row) in self.scalars.iter().enumerate() {
            let _ = write!(s, "{i}");
            for x in row {
                let _ = write!(s, ",{}", num(*x));
            }
            s.push_str("\r\n");
        }
        s
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".into()
    }
}
