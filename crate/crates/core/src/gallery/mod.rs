//! Explicit vertical helicoids: twistings of minimal hypersurfaces by
//! one-parameter isometry groups, and graphs of harmonic, horizontally
//! homothetic functions.

mod bases;
mod graphs;
mod twisting;
mod verify;

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::ambient::{hopf_matrix, AmbientSpace};
use crate::error::{GeomError, Result};
use crate::params::Params;
use crate::surface::{Immersion, ParamBox};
use crate::tolerances::{MAX_CLIFFORD_N, MAX_TWISTED_RN_DIM};

pub use bases::{inverse_stereographic, Base};
pub use graphs::{GraphField, GraphSurface};
pub use twisting::{
    expm, numeric_base_normal, pitched_twisting, rotation_generator, twisting_point, twisting_theta_check,
    IsometryGroupAction, NormalField, TwistingCheck, TwistingPoint, TwistingSurface,
};
pub use verify::{graph_checks, isocurved_sign_check, verify_gallery, verify_helicoid, HelicoidTolerances};

/// One catalog line: kind tag, parameters with defaults, description.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub kind: &'static str,
    pub params: &'static str,
    pub ambient: &'static str,
    pub doc: &'static str,
}

pub const GALLERY: &[CatalogEntry] = &[
    CatalogEntry {
        kind: "r3_helicoid",
        params: "a=1",
        ambient: "R^2 x R",
        doc: "Standard helicoid (x cos y, x sin y, a y); twisting of a line by rotations.",
    },
    CatalogEntry {
        kind: "s2xr",
        params: "a=1",
        ambient: "S^2 x R",
        doc: "Helicoid (cos x cos y, cos x sin y, sin x, a y) of S^2 x R.",
    },
    CatalogEntry {
        kind: "h2xr",
        params: "a=1",
        ambient: "H^2 x R",
        doc: "Helicoid (sinh x cos y, sinh x sin y, cosh x, a y) of H^2 x R.",
    },
    CatalogEntry {
        kind: "twisted_plane",
        params: "a=1,k=2",
        ambient: "R^3 x R",
        doc: "Vertical twisting of the plane x_2 = 0 by rotations e^{ksJ}.",
    },
    CatalogEntry {
        kind: "twisted_helicoid_rn",
        params: "n=3,a=1,k=2",
        ambient: "R^n x R",
        doc: "Twisted helicoid (x_1 cos(S+ks), x_1 sin(S+ks), x_2..x_{n-1}, a s), S = x_2+..+x_{n-1}; 3 <= n <= 7.",
    },
    CatalogEntry {
        kind: "twisted_clifford_s3",
        params: "a=1,k=3",
        ambient: "S^3 x R",
        doc: "Twisted Clifford torus (cos(x+ks) cos y, sin(x+ks) cos y, cos x sin y, sin x sin y, a s).",
    },
    CatalogEntry {
        kind: "twisted_clifford_s2n1",
        params: "n=1,a=1,k=3",
        ambient: "S^{2n+1} x R",
        doc: "Twisting of the minimal Clifford torus S^n(1/sqrt2) x S^n(1/sqrt2) by e^{ksJ}; 1 <= n <= 3.",
    },
    CatalogEntry {
        kind: "twisted_cone_r2n2",
        params: "n=1,a=1,k=3",
        ambient: "R^{2n+2} x R",
        doc: "Twisting of the cone over the Clifford torus by e^{ksJ}; parameters (x, y, r, s).",
    },
    CatalogEntry {
        kind: "twisted_hyperbolic_h3",
        params: "a=1,k=2",
        ambient: "H^3 x R",
        doc: "Twisted hyperbolic helicoid (sinh x cos(y+ks), sinh x sin(y+ks), cosh x sinh y, cosh x cosh y, a s).",
    },
    CatalogEntry {
        kind: "berger_helicoid",
        params: "alpha=2,a=1,delta=0.8",
        ambient: "S^3_delta x R",
        doc: "Hopf twisting (e^{i(alpha s+u)} cos tau, e^{i(s+u)} sin tau, a u) of a Berger-sphere helicoid.",
    },
    CatalogEntry {
        kind: "qcn_totally_geodesic",
        params: "c=-1,n=3,a=1,k=2",
        ambient: "Q_c^n x R",
        doc: "Twisting of the totally geodesic {x_2 = 0} of Q_c^n (c in {-1, 0, 1}) by block rotations.",
    },
    CatalogEntry {
        kind: "ou_graph",
        params: "space=hyp,a=0.5,i=1,n=3",
        ambient: "H^n, Nil_3 or Sol_3 x R",
        doc: "Graphs of a x_i (half-space H^n), a(z - xy/2) (Nil_3), a z (Sol_3).",
    },
    CatalogEntry {
        kind: "arctan_graph",
        params: "n=3,a=0.3,b=1",
        ambient: "R^n x R",
        doc: "Graph of sum a_i x_i + b atan(x_n/x_{n-1}) on x_{n-1} > 0; a is a ';'-separated list.",
    },
    CatalogEntry {
        kind: "parabola_graph",
        params: "",
        ambient: "R^2 x R",
        doc: "Negative control: graph of x_1^2, not a vertical helicoid.",
    },
];

/// The twelve helicoid kinds (excluding the auxiliary arctan example and the
/// negative control).
pub const HELICOID_KINDS: [&str; 12] = [
    "r3_helicoid",
    "s2xr",
    "h2xr",
    "twisted_plane",
    "twisted_helicoid_rn",
    "twisted_clifford_s3",
    "twisted_clifford_s2n1",
    "twisted_cone_r2n2",
    "twisted_hyperbolic_h3",
    "berger_helicoid",
    "qcn_totally_geodesic",
    "ou_graph",
];

/// How a gallery surface was constructed.
#[derive(Debug, Clone)]
pub enum Construction {
    Twisting(TwistingSurface),
    Graph(GraphSurface),
}

#[derive(Debug, Clone)]
pub struct GallerySurface {
    pub kind: String,
    pub params: String,
    pub construction: Construction,
    /// Extra values reported next to the verification (for example the
    /// Berger omega(tau) of the printed angle formula).
    pub notes: Vec<(String, f64)>,
}

impl GallerySurface {
    pub fn immersion(&self) -> &Immersion {
        match &self.construction {
            Construction::Twisting(t) => &t.immersion,
            Construction::Graph(g) => &g.immersion,
        }
    }

    pub fn twisting(&self) -> Option<&TwistingSurface> {
        match &self.construction {
            Construction::Twisting(t) => Some(t),
            _ => None,
        }
    }

    pub fn graph(&self) -> Option<&GraphSurface> {
        match &self.construction {
            Construction::Graph(g) => Some(g),
            _ => None,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(GeomError::spec(format!("{name} must be positive, got {v}")))
    }
}

/// Block rotation acting on the first 2 floor(d/2) of `m` coordinates.
fn block_generator(m: usize, d: usize, k: f64) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(m, m);
    for b in 0..d / 2 {
        g += rotation_generator(m, 2 * b, 2 * b + 1);
    }
    g * k
}

/// The (2n+2)-square matrix [[0, -I], [I, 0]].
pub fn clifford_generator(n: usize) -> DMatrix<f64> {
    let m = 2 * n + 2;
    let h = n + 1;
    let mut g = DMatrix::zeros(m, m);
    for i in 0..h {
        g[(h + i, i)] = 1.0;
        g[(i, h + i)] = -1.0;
    }
    g
}

#[allow(clippy::too_many_arguments)]
fn twist(
    kind: &str,
    params: &Params,
    space: AmbientSpace,
    base: Base,
    generator: DMatrix<f64>,
    pitch: f64,
    base_box: ParamBox,
    s_range: (f64, f64),
    base_point: Vec<f64>,
) -> Result<GallerySurface> {
    let normal: Option<NormalField> = if base.normal(&base_box.center()).is_some() {
        let b = base.clone();
        Some(Arc::new(move |p: &[f64]| b.normal(p).expect("analytic normal")))
    } else {
        None
    };
    let tw = pitched_twisting(
        space,
        Arc::new(base),
        normal,
        IsometryGroupAction::matrix(generator),
        pitch,
        base_box,
        s_range,
        base_point,
        kind,
    )?;
    Ok(GallerySurface {
        kind: kind.to_string(),
        params: params.canonical(),
        construction: Construction::Twisting(tw),
        notes: Vec::new(),
    })
}

/// omega(tau) of the printed Berger angle formula.
pub fn berger_omega(alpha: f64, a: f64, delta: f64, tau: f64) -> f64 {
    let c2 = tau.cos().powi(2);
    let d2 = delta * delta;
    let q = c2 * c2 * ((1.0 - d2) * d2 * (alpha + 1.0).powi(2) * a * a - alpha * alpha)
        + c2 * (d2 * (alpha + 1.0) * (d2 * (alpha + 1.0) - 2.0) * a * a + alpha * alpha)
        + d2 * a * a;
    q.sqrt()
}

/// Build a gallery surface from its kind tag and parameters. Unknown
/// parameters are rejected.
pub fn make_helicoid(kind: &str, params: &Params) -> Result<GallerySurface> {
    let g = build(kind, params)?;
    params.finish(kind)?;
    Ok(g)
}

fn build(kind: &str, p: &Params) -> Result<GallerySurface> {
    let soft = ParamBox::soft;
    match kind {
        "r3_helicoid" => {
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            twist(
                kind,
                p,
                AmbientSpace::euclidean(2)?,
                Base::Line,
                rotation_generator(2, 0, 1),
                a,
                soft(vec![-2.0], vec![2.0]),
                (-PI, PI),
                vec![1.0, 0.0],
            )
        }
        "s2xr" => {
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            twist(
                kind,
                p,
                AmbientSpace::sphere(2)?,
                Base::SphereMeridian,
                rotation_generator(3, 0, 1),
                a,
                soft(vec![-1.4], vec![1.4]),
                (-PI, PI),
                vec![0.0, 0.0],
            )
        }
        "h2xr" => {
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            twist(
                kind,
                p,
                AmbientSpace::hyperbolic(2)?,
                Base::HyperbolicMeridian,
                rotation_generator(3, 0, 1),
                a,
                soft(vec![-2.0], vec![2.0]),
                (-PI, PI),
                vec![1.0, 0.0],
            )
        }
        "twisted_plane" => {
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            let k = positive("k", p.f64_or("k", 2.0)?)?;
            twist(
                kind,
                p,
                AmbientSpace::euclidean(3)?,
                Base::Plane,
                rotation_generator(3, 0, 1) * k,
                a,
                soft(vec![-2.0, -1.0], vec![2.0, 1.0]),
                (-1.0, 1.0),
                vec![1.0, 0.0, 0.0],
            )
        }
        "twisted_helicoid_rn" => {
            let n = p.usize_or("n", 3)?;
            if !(3..=MAX_TWISTED_RN_DIM).contains(&n) {
                return Err(GeomError::spec(format!("twisted_helicoid_rn needs 3 <= n <= {MAX_TWISTED_RN_DIM}, got {n}")));
            }
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            let k = positive("k", p.f64_or("k", 2.0)?)?;
            let mut lo = vec![-1.0; n - 1];
            let mut hi = vec![1.0; n - 1];
            lo[0] = -2.0;
            hi[0] = 2.0;
            let mut bp = vec![0.0; n];
            bp[0] = 1.0;
            twist(
                kind,
                p,
                AmbientSpace::euclidean(n)?,
                Base::HelicoidRn { n },
                rotation_generator(n, 0, 1) * k,
                a,
                soft(lo, hi),
                (-1.0, 1.0),
                bp,
            )
        }
        "twisted_clifford_s3" => {
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            let k = positive("k", p.f64_or("k", 3.0)?)?;
            twist(
                kind,
                p,
                AmbientSpace::sphere(3)?,
                Base::CliffordS3,
                rotation_generator(4, 0, 1) * k,
                a,
                soft(vec![-PI, 0.1], vec![PI, 1.4]),
                (-1.0, 1.0),
                vec![0.0, FRAC_PI_4, 0.0],
            )
        }
        "twisted_clifford_s2n1" | "twisted_cone_r2n2" => {
            let n = p.usize_or("n", 1)?;
            if !(1..=MAX_CLIFFORD_N).contains(&n) {
                return Err(GeomError::spec(format!("{kind} needs 1 <= n <= {MAX_CLIFFORD_N}, got {n}")));
            }
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            let k = positive("k", p.f64_or("k", 3.0)?)?;
            let generator = clifford_generator(n) * k;
            let mut lo = vec![-2.0; 2 * n];
            let mut hi = vec![2.0; 2 * n];
            let mut bp = vec![0.0; 2 * n];
            if kind == "twisted_clifford_s2n1" {
                bp.push(0.0);
                twist(kind, p, AmbientSpace::sphere(2 * n + 1)?, Base::CliffordTorus { n }, generator, a, soft(lo, hi), (-1.0, 1.0), bp)
            } else {
                lo.push(0.5);
                hi.push(2.0);
                bp.extend([1.0, 0.0]);
                twist(kind, p, AmbientSpace::euclidean(2 * n + 2)?, Base::CliffordCone { n }, generator, a, soft(lo, hi), (-1.0, 1.0), bp)
            }
        }
        "twisted_hyperbolic_h3" => {
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            let k = positive("k", p.f64_or("k", 2.0)?)?;
            twist(
                kind,
                p,
                AmbientSpace::hyperbolic(3)?,
                Base::HyperbolicHelicoid,
                rotation_generator(4, 0, 1) * k,
                a,
                soft(vec![-1.5, -1.0], vec![1.5, 1.0]),
                (-1.0, 1.0),
                vec![1.0, 0.0, 0.0],
            )
        }
        "berger_helicoid" => {
            let alpha = p.f64_or("alpha", 2.0)?;
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            let delta = positive("delta", p.f64_or("delta", 0.8)?)?;
            let mut g = twist(
                kind,
                p,
                AmbientSpace::berger(delta)?,
                Base::BergerHelicoid { alpha },
                hopf_matrix(),
                a,
                soft(vec![-1.0, 0.1], vec![1.0, 1.4]),
                (-1.0, 1.0),
                vec![0.0, 0.75, 0.0],
            )?;
            for tau in [0.25, 0.5, 0.75, 1.0, 1.25] {
                g.notes.push((format!("omega(tau={tau})"), berger_omega(alpha, a, delta, tau)));
            }
            Ok(g)
        }
        "qcn_totally_geodesic" => {
            let c = p.i64_or("c", -1)?;
            let n = p.usize_or("n", 3)?;
            if !(-1..=1).contains(&c) {
                return Err(GeomError::spec(format!("c must be -1, 0 or 1, got {c}")));
            }
            if !(2..=MAX_TWISTED_RN_DIM).contains(&n) {
                return Err(GeomError::spec(format!("qcn_totally_geodesic needs 2 <= n <= {MAX_TWISTED_RN_DIM}, got {n}")));
            }
            let a = positive("a", p.f64_or("a", 1.0)?)?;
            let k = positive("k", p.f64_or("k", 2.0)?)?;
            let (space, m, spatial) = match c {
                0 => (AmbientSpace::euclidean(n)?, n, n),
                1 => (AmbientSpace::sphere(n)?, n + 1, n + 1),
                _ => (AmbientSpace::hyperbolic(n)?, n + 1, n),
            };
            let mut bp = vec![0.0; n];
            bp[0] = 1.0;
            twist(
                kind,
                p,
                space,
                Base::TotallyGeodesic { c: c as i32, n },
                block_generator(m, spatial, k),
                a,
                soft(vec![-1.5; n - 1], vec![1.5; n - 1]),
                (-1.0, 1.0),
                bp,
            )
        }
        "ou_graph" => {
            let a = p.f64_or("a", 0.5)?;
            let which = p.str_or("space", "hyp").to_string();
            let (space, field, lo, hi) = match which.as_str() {
                "hyp" => {
                    let n = p.usize_or("n", 3)?;
                    let i = p.usize_or("i", 1)?;
                    if n < 2 || i == 0 || i >= n {
                        return Err(GeomError::spec(format!("ou_graph hyp needs n >= 2 and 1 <= i <= n-1, got n={n}, i={i}")));
                    }
                    let mut lo = vec![-1.0; n];
                    let mut hi = vec![1.0; n];
                    lo[n - 1] = 0.5;
                    hi[n - 1] = 2.0;
                    (AmbientSpace::halfspace(n)?, GraphField::Linear { a, i }, lo, hi)
                }
                "nil" => (AmbientSpace::nil3(), GraphField::NilHeight { a }, vec![-1.0; 3], vec![1.0; 3]),
                "sol" => (AmbientSpace::sol3(), GraphField::SolHeight { a }, vec![-1.0; 3], vec![1.0; 3]),
                other => return Err(GeomError::spec(format!("ou_graph space must be hyp, nil or sol, got '{other}'"))),
            };
            let bp = ParamBox::soft(lo.clone(), hi.clone()).center();
            let g = GraphSurface::new(space, field, soft(lo, hi), bp, kind);
            Ok(GallerySurface {
                kind: kind.into(),
                params: p.canonical(),
                construction: Construction::Graph(g),
                notes: Vec::new(),
            })
        }
        "arctan_graph" => {
            let n = p.usize_or("n", 3)?;
            if !(2..=MAX_TWISTED_RN_DIM).contains(&n) {
                return Err(GeomError::spec(format!("arctan_graph needs 2 <= n <= {MAX_TWISTED_RN_DIM}, got {n}")));
            }
            let a = p.list_or("a", &[0.3])?;
            let b = p.f64_or("b", 1.0)?;
            if a.len() > n - 2 {
                return Err(GeomError::spec(format!("arctan_graph takes at most n-2 = {} linear coefficients", n - 2)));
            }
            let mut lo = vec![-1.0; n];
            let mut hi = vec![1.0; n];
            lo[n - 2] = 0.5;
            hi[n - 2] = 2.0;
            let bp = ParamBox::soft(lo.clone(), hi.clone()).center();
            let g = GraphSurface::new(AmbientSpace::euclidean(n)?, GraphField::Arctan { a, b, n }, soft(lo, hi), bp, kind);
            Ok(GallerySurface {
                kind: kind.into(),
                params: p.canonical(),
                construction: Construction::Graph(g),
                notes: Vec::new(),
            })
        }
        "parabola_graph" => {
            let g = GraphSurface::new(
                AmbientSpace::euclidean(2)?,
                GraphField::Parabola,
                soft(vec![-1.0, -1.0], vec![1.0, 1.0]),
                vec![0.5, 0.0],
                kind,
            );
            Ok(GallerySurface {
                kind: kind.into(),
                params: p.canonical(),
                construction: Construction::Graph(g),
                notes: Vec::new(),
            })
        }
        other => Err(GeomError::spec(format!("unknown surface kind '{other}'"))),
    }
}

#[cfg(test)]
mod tests;
