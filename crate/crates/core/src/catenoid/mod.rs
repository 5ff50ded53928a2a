//! Rotational catenoids and (f_s, a)-graphs over isoparametric families.

mod family;
mod graph;
mod profile;
mod verify;


use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

pub use family::{FamilyKind, ParallelFamily, FAMILY_KINDS};
pub use graph::{
    assemble_catenoid, build_fs_a_graph, piece_residual, seam_theta, CatenoidSurface, FsAGraph, FsAGraphMap, GlueMode,
    SEAM_MARGIN, SEAM_PROBE,
};
pub use profile::{closed_rho, solve_profile, ProfileSolution};
pub use verify::{
    height_derivatives, piece_grid, seam_trend, verify_catenoid, verify_constant_angle, CatenoidTolerances,
    HEIGHT_FD_STEP, SEAM_OFFSETS,
};

use crate::error::{GeomError, Result};
use crate::params::Params;
use crate::tolerances::{MAX_ABS_S, PROFILE_STEPS};

/// Catalog entry for a family kind.
pub struct FamilyEntry {
    pub kind: &'static str,
    pub params: &'static str,
    pub ambient: &'static str,
    pub doc: &'static str,
}

pub const FAMILY_CATALOG: [FamilyEntry; 5] = [
    FamilyEntry {
        kind: "spheres_euclidean",
        params: "n=2, r=1, center=0;..;0, mode=reflect, s_max=r+10, span=2, steps=4096, perturb=0",
        ambient: "R^n x R",
        doc: "Geodesic spheres o + s w, H_s = (1-n)/s; rho = (r/s)^{n-1}.",
    },
    FamilyEntry {
        kind: "spheres_hyperbolic",
        params: "n=2, r=1, mode=reflect, s_max=r+10, span=2, steps=4096, perturb=0",
        ambient: "H^n x R (hyperboloid)",
        doc: "Geodesic spheres cosh(s) o + sinh(s) w, H_s = (1-n) coth s; height below pi/(2(n-1)).",
    },
    FamilyEntry {
        kind: "spheres_spherical",
        params: "n=3, r=pi/4, mode=delaunay, copies=3, steps=4096, perturb=0",
        ambient: "S^n x R",
        doc: "Geodesic spheres cos(s) o + sin(s) w, H_s = -(n-1) cot s; periodic Delaunay-type surface.",
    },
    FamilyEntry {
        kind: "horospheres_hyperbolic",
        params: "n=2, s_min=-10, mode=reflect, span=3, steps=4096, perturb=0",
        ambient: "H^n x R (half-space)",
        doc: "Horospheres {x_n = e^s}, H_0 = n-1; asymptotic to the planes t = +-pi/(2 H_0).",
    },
    FamilyEntry {
        kind: "equidistants_hyperbolic",
        params: "n=2, sigma=-1, s_min=sigma-10, mode=reflect, span=3, steps=4096, perturb=0",
        ambient: "H^n x R (hyperboloid)",
        doc: "Equidistants of a totally geodesic hyperplane, H_s = -(n-1) tanh s, built on s <= sigma < 0.",
    },
];

/// Parsed catenoid recipe.
#[derive(Debug, Clone)]
pub struct CatenoidRecipe {
    pub kind: String,
    pub family: Arc<ParallelFamily>,
    pub h_target: f64,
    /// Seam (start) of the profile.
    pub seam: f64,
    /// Far end of the profile.
    pub s_end: f64,
    pub steps: usize,
    pub mode: GlueMode,
    pub sample: (f64, f64),
    pub perturb: f64,
    pub params: String,
}

impl CatenoidRecipe {
    pub fn parse(kind: &str, params: &Params) -> Result<Self> {
        let fk = FamilyKind::parse(kind)?;
        if fk == FamilyKind::Planes {
            return Err(GeomError::spec("planes_euclidean has no seam; use a constant-angle graph instead"));
        }
        let n = params.usize_or("n", if fk == FamilyKind::SpheresSpherical { 3 } else { 2 })?;
        let mut family = ParallelFamily::new(fk, n)?;
        if fk == FamilyKind::SpheresEuclidean && params.contains("center") {
            family = family.with_center(params.list_or("center", &[])?)?;
        }
        let h_target = params.f64_or("h", 0.0)?;
        let steps = params.usize_or("steps", PROFILE_STEPS)?;
        let perturb = params.f64_or("perturb", 0.0)?;
        let default_mode = if fk == FamilyKind::SpheresSpherical { "delaunay" } else { "reflect" };
        let mode_tag = params.str_or("mode", default_mode).to_string();
        let copies = params.usize_or("copies", 3)?;
        let mode = match mode_tag.as_str() {
            "reflect" => GlueMode::Reflect,
            "delaunay" => GlueMode::Delaunay { copies },
            other => return Err(GeomError::spec(format!("unknown gluing mode '{other}'"))),
        };
        let (seam, s_end, sample) = match fk {
            FamilyKind::SpheresEuclidean | FamilyKind::SpheresHyperbolic => {
                let r = params.f64_or("r", 1.0)?;
                let s_max = params.f64_or("s_max", (r + 10.0).min(MAX_ABS_S))?;
                let span = params.f64_or("span", 2.0)?;
                if !(r > 0.0) {
                    return Err(GeomError::spec(format!("radius r={r} must be positive")));
                }
                if !(s_max > r + SEAM_MARGIN + span / 4.0) || s_max > MAX_ABS_S {
                    return Err(GeomError::spec(format!("s_max={s_max} must exceed r and stay within {MAX_ABS_S}")));
                }
                let top = (r + SEAM_MARGIN + span).min(s_max - SEAM_MARGIN);
                (r, s_max, (r + SEAM_MARGIN, top))
            }
            FamilyKind::SpheresSpherical => {
                let r = params.f64_or("r", FRAC_PI_4)?;
                if !(r > 0.0 && r < FRAC_PI_2 - SEAM_MARGIN) {
                    return Err(GeomError::spec(format!("radius r={r} must lie in (0, pi/2 - {SEAM_MARGIN})")));
                }
                (r, PI - r, (r + SEAM_MARGIN, PI - r - SEAM_MARGIN))
            }
            FamilyKind::Horospheres | FamilyKind::Equidistants => {
                let sigma = if fk == FamilyKind::Equidistants { params.f64_or("sigma", -1.0)? } else { 0.0 };
                if fk == FamilyKind::Equidistants && !(sigma < 0.0) {
                    return Err(GeomError::spec(format!(
                        "equidistant seam sigma={sigma} must be negative (H_s > 0 only for s < 0)"
                    )));
                }
                let s_min = params.f64_or("s_min", sigma - 10.0)?;
                let span = params.f64_or("span", 3.0)?;
                if !(s_min < sigma - SEAM_MARGIN - span / 4.0) || s_min < -MAX_ABS_S {
                    return Err(GeomError::spec(format!("s_min={s_min} must lie below the seam and above -{MAX_ABS_S}")));
                }
                let bottom = (sigma - SEAM_MARGIN - span).max(s_min + SEAM_MARGIN);
                (sigma, s_min, (bottom, sigma - SEAM_MARGIN))
            }
            FamilyKind::Planes => unreachable!(),
        };
        params.finish(kind)?;
        Ok(Self {
            kind: kind.to_string(),
            family: Arc::new(family),
            h_target,
            seam,
            s_end,
            steps,
            mode,
            sample,
            perturb,
            params: params.canonical(),
        })
    }

    pub fn profile(&self) -> Result<Arc<ProfileSolution>> {
        Ok(Arc::new(solve_profile(self.family.clone(), self.h_target, self.seam, 1.0, self.s_end, self.steps)?))
    }

    /// The open half (f_s, a)-graph.
    pub fn half(&self) -> Result<FsAGraph> {
        let profile = self.profile()?;
        build_fs_a_graph(profile, self.sample, self.perturb, &self.kind)
    }

    pub fn build(&self) -> Result<CatenoidSurface> {
        if self.h_target != 0.0 {
            return Err(GeomError::spec("only minimal (h = 0) profiles are glued into catenoids"));
        }
        let half = self.half()?;
        let mut cat = assemble_catenoid(&half, self.mode)?;
        cat.params = self.params.clone();
        Ok(cat)
    }
}

pub fn make_catenoid(kind: &str, params: &Params) -> Result<CatenoidSurface> {
    CatenoidRecipe::parse(kind, params)?.build()
}

pub fn is_family_kind(kind: &str) -> bool {
    FAMILY_KINDS.contains(&kind)
}

/// Supremum estimate of the height of a half catenoid over a Hadamard sphere
/// family.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightBound {
    /// a(S) at the end S of the integrated range.
    pub height_at_end: f64,
    pub s_end: f64,
    /// Bound on int_S^inf of the integrand; infinite when the tail diverges.
    pub tail_bound: f64,
    /// height_at_end + tail_bound.
    pub sup_upper: f64,
    pub unbounded: bool,
}

/// Quadrature up to `s_end` plus an analytic bound on the remaining tail,
/// using rho/sqrt(1-rho^2) <= rho(s)/sqrt(1-rho(S)^2) for s >= S.
pub fn height_bound(family: Arc<ParallelFamily>, r: f64, s_end: f64) -> Result<HeightBound> {
    let m = (family.n - 1) as i32;
    let kind = family.kind;
    if !matches!(kind, FamilyKind::SpheresEuclidean | FamilyKind::SpheresHyperbolic) {
        return Err(GeomError::spec("height bounds apply to sphere families of R^n and H^n"));
    }
    let profile = solve_profile(family, 0.0, r, 1.0, s_end, PROFILE_STEPS)?;
    if profile.truncated {
        return Err(GeomError::Numerical("profile truncated before the tail".into()));
    }
    let s = profile.hi();
    let height_at_end = profile.end_height();
    let (rho_s, _) = profile.rho_at(s)?;
    let denom = (1.0 - rho_s * rho_s).sqrt();
    let mf = m as f64;
    let tail_rho = match kind {
        FamilyKind::SpheresEuclidean if m == 1 => f64::INFINITY,
        FamilyKind::SpheresEuclidean => r.powi(m) * s.powf(1.0 - mf) / (mf - 1.0),
        _ => (2.0 * r.sinh() / (1.0 - (-2.0 * s).exp())).powi(m) * (-mf * s).exp() / mf,
    };
    let tail_bound = tail_rho / denom;
    Ok(HeightBound {
        height_at_end,
        s_end: s,
        tail_bound,
        sup_upper: height_at_end + tail_bound,
        unbounded: !tail_bound.is_finite(),
    })
}

/// A constant-angle (f_s, a)-graph over parallel hyperplanes of R^n with
/// rho = rho0 throughout.
pub fn constant_angle_graph(n: usize, rho0: f64, s_range: (f64, f64)) -> Result<FsAGraph> {
    if !(rho0 > 0.0 && rho0 < 1.0) {
        return Err(GeomError::spec(format!("rho0={rho0} must lie in (0, 1)")));
    }
    let family = Arc::new(ParallelFamily::new(FamilyKind::Planes, n)?);
    let profile = Arc::new(solve_profile(family, 0.0, s_range.0, rho0, s_range.1, PROFILE_STEPS)?);
    build_fs_a_graph(profile, s_range, 0.0, "constant_angle")
}
