//! (f_s, a)-graphs over parallel families and their gluing into catenoids.

use std::sync::Arc;

use nalgebra::DVector;

use crate::ambient::AmbientProduct;
use crate::error::{GeomError, Result};
use crate::real::Real;
use crate::surface::{GenericMap, Immersion, JetMode, ParamBox};
use crate::tolerances::SEAM_TOL;

use super::family::ParallelFamily;
use super::profile::ProfileSolution;

/// Offset from the seam at which verticality is measured, relative to the
/// profile length.
pub const SEAM_PROBE: f64 = 1e-8;
/// Distance kept from seams when sampling.
pub const SEAM_MARGIN: f64 = 0.1;

/// Psi(w, s) = (f_s(w), sign a(s) + shift + bump s^2).
#[derive(Clone)]
pub struct FsAGraphMap {
    pub family: Arc<ParallelFamily>,
    pub profile: Arc<ProfileSolution>,
    pub sign: f64,
    pub shift: f64,
    /// Coefficient of the s^2 perturbation (negative controls).
    pub bump: f64,
}

impl FsAGraphMap {
    /// Height and its first two s-derivatives.
    pub fn height_jet(&self, s: f64) -> Result<(f64, f64, f64)> {
        let (a, a1, a2) = self.profile.height_jet(s)?;
        Ok((
            self.sign * a + self.shift + self.bump * s * s,
            self.sign * a1 + 2.0 * self.bump * s,
            self.sign * a2 + 2.0 * self.bump,
        ))
    }

    /// Height value only, valid up to the seam.
    pub fn height(&self, s: f64) -> Result<f64> {
        Ok(self.sign * self.profile.height(s)? + self.shift + self.bump * s * s)
    }
}

impl GenericMap for FsAGraphMap {
    fn param_dim(&self) -> usize {
        self.family.leaf_dim() + 1
    }

    fn out_dim(&self) -> usize {
        self.family.out_dim() + 1
    }

    fn map<T: Real>(&self, u: &[T]) -> Vec<T> {
        let d = self.family.leaf_dim();
        let s = u[d];
        let mut p = self.family.leaf(&u[..d], s);
        let t = match self.height_jet(s.value()) {
            Ok((h0, h1, h2)) => s.compose(h0, h1, h2),
            // At the seam only the value is finite; plain evaluation
            // (meshes, symmetry residuals) still works there.
            Err(_) => T::cst(self.height(s.value()).unwrap_or(f64::NAN)),
        };
        p.push(t);
        p
    }
}

/// An (f_s, a)-graph together with its immersion.
#[derive(Clone)]
pub struct FsAGraph {
    pub map: Arc<FsAGraphMap>,
    pub immersion: Immersion,
}

impl std::fmt::Debug for FsAGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FsAGraph")
            .field("family", &self.map.family.kind)
            .field("sign", &self.map.sign)
            .field("shift", &self.map.shift)
            .finish()
    }
}

/// Build the graph over the profile's s-range. `s_sample` bounds the default
/// sampling box in s; it must lie inside the profile range.
pub fn build_fs_a_graph(
    profile: Arc<ProfileSolution>,
    s_sample: (f64, f64),
    bump: f64,
    name: &str,
) -> Result<FsAGraph> {
    // Far from the seam the increments may drop below rounding of a.
    if profile.a.windows(2).any(|w| w[1] < w[0]) {
        return Err(GeomError::Numerical("height profile is not increasing".into()));
    }
    piece(profile, 1.0, 0.0, bump, s_sample, name)
}

fn piece(
    profile: Arc<ProfileSolution>,
    sign: f64,
    shift: f64,
    bump: f64,
    s_sample: (f64, f64),
    name: &str,
) -> Result<FsAGraph> {
    let family = profile.family.clone();
    if !(profile.contains(s_sample.0) && profile.contains(s_sample.1) && s_sample.0 < s_sample.1) {
        return Err(GeomError::Domain(format!(
            "sample range [{}, {}] outside profile range [{}, {}]",
            s_sample.0,
            s_sample.1,
            profile.lo(),
            profile.hi()
        )));
    }
    let map = Arc::new(FsAGraphMap { family: family.clone(), profile: profile.clone(), sign, shift, bump });
    let leaf_box = family.leaf_box();
    let d = family.leaf_dim();
    let mut lo = leaf_box.lo.clone();
    let mut hi = leaf_box.hi.clone();
    lo.push(s_sample.0);
    hi.push(s_sample.1);
    let sample_box = ParamBox::soft(lo, hi);
    let mut dlo = vec![-1e9; d];
    let mut dhi = vec![1e9; d];
    dlo.push(profile.lo());
    dhi.push(profile.hi());
    let mut base_point = family.leaf_center();
    base_point.push(0.5 * (s_sample.0 + s_sample.1));
    let ambient = AmbientProduct::riemannian(family.space.clone());
    let immersion = Immersion::new(ambient, map.clone(), sample_box, base_point, name).with_domain(ParamBox::hard(dlo, dhi));
    Ok(FsAGraph { map, immersion })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlueMode {
    /// The half and its mirror image under t -> -t.
    Reflect,
    /// Alternating reflections translated by the period 2 t_2.
    Delaunay { copies: usize },
}

#[derive(Debug, Clone)]
pub struct CatenoidSurface {
    pub kind: String,
    pub params: String,
    pub pieces: Vec<FsAGraph>,
    pub mode: GlueMode,
    /// Height of the reflection plane between the first two pieces.
    pub symmetry_t: f64,
    pub period: Option<f64>,
    /// Seam values of s.
    pub seams: Vec<f64>,
}

impl CatenoidSurface {
    pub fn half(&self) -> &FsAGraph {
        &self.pieces[0]
    }

    pub fn profile(&self) -> &ProfileSolution {
        &self.pieces[0].map.profile
    }

    pub fn family(&self) -> &ParallelFamily {
        &self.pieces[0].map.family
    }
}

/// |theta| of the graph at distance `offset` from the seam (inside the range),
/// from closed jets at the leaf centre.
pub fn seam_theta(half: &FsAGraph, seam: f64, offset: f64) -> Result<f64> {
    let profile = &half.map.profile;
    let s = if seam == profile.lo() { seam + offset } else { seam - offset };
    let mut u = half.map.family.leaf_center();
    u.push(s);
    let fd = half.immersion.fundamental(&u, JetMode::Closed)?;
    Ok(fd.theta.abs())
}

/// Glue a half catenoid built on a profile whose anchor is a seam.
pub fn assemble_catenoid(half: &FsAGraph, mode: GlueMode) -> Result<CatenoidSurface> {
    let profile = half.map.profile.clone();
    let seam = profile.anchor;
    if !profile.is_singular_at(seam) {
        return Err(GeomError::Degenerate(format!(
            "profile has no seam at s={seam} (rho != 1 there); nothing to glue"
        )));
    }
    let scale = profile.hi() - profile.lo();
    let theta = seam_theta(half, seam, SEAM_PROBE * scale)?;
    if theta > SEAM_TOL {
        return Err(GeomError::Degenerate(format!("seam tangency violated: |theta| = {theta:e} near the seam")));
    }
    let sample = {
        let b = &half.immersion.sample_box;
        let d = b.dim() - 1;
        (b.lo[d], b.hi[d])
    };
    let name = half.immersion.name.clone();
    let bump = half.map.bump;
    let (pieces, symmetry_t, period, seams) = match mode {
        GlueMode::Reflect => {
            let mirror = piece(profile.clone(), -half.map.sign, -half.map.shift, -bump, sample, &format!("{name} (mirror)"))?;
            (vec![half.clone(), mirror], 0.0, None, vec![seam])
        }
        GlueMode::Delaunay { copies } => {
            if copies < 2 {
                return Err(GeomError::spec("a Delaunay surface needs at least 2 copies"));
            }
            let far = if seam == profile.lo() { profile.hi() } else { profile.lo() };
            if !profile.is_singular_at(far) {
                return Err(GeomError::Degenerate("Delaunay gluing needs seams at both ends of the profile".into()));
            }
            let t2 = profile.end_height();
            let mut pieces = Vec::with_capacity(copies);
            for j in 0..copies {
                let (sign, shift) = if j % 2 == 0 { (1.0, j as f64 * t2) } else { (-1.0, (j + 1) as f64 * t2) };
                pieces.push(piece(profile.clone(), sign, shift, bump * sign, sample, &format!("{name} (copy {j})"))?);
            }
            (pieces, t2, Some(2.0 * t2), vec![seam, far])
        }
    };
    Ok(CatenoidSurface {
        kind: name,
        params: String::new(),
        pieces,
        mode,
        symmetry_t,
        period,
        seams,
    })
}

/// Max coordinate distance between piece `j` and the image of piece `i`
/// under `transform` over the parameter points.
pub fn piece_residual(
    cat: &CatenoidSurface,
    i: usize,
    j: usize,
    points: &[Vec<f64>],
    transform: impl Fn(DVector<f64>) -> DVector<f64>,
) -> f64 {
    points
        .iter()
        .map(|u| (cat.pieces[j].immersion.eval(u) - transform(cat.pieces[i].immersion.eval(u))).amax())
        .fold(0.0, f64::max)
}
