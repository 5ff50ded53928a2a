//! Isoparametric parallel families f_s of hypersurfaces of M.

use nalgebra::DVector;

use crate::ambient::AmbientSpace;
use crate::error::{GeomError, Result};
use crate::gallery::inverse_stereographic;
use crate::real::{seed, unpack, Jet, Real};
use crate::surface::{base_hypersurface_data, jet_of, GenericMap, JetMode, ParamBox};
use crate::tolerances::{CROSS_TOL, GEODESIC_STEP, MAX_ABS_S, MAX_FAMILY_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Geodesic spheres o + s w of R^n.
    SpheresEuclidean,
    /// cosh(s) o + sinh(s) w on the hyperboloid.
    SpheresHyperbolic,
    /// cos(s) o + sin(s) w on the unit sphere.
    SpheresSpherical,
    /// {x_n = e^s} in the half-space chart.
    Horospheres,
    /// Equidistants of the totally geodesic {x_1 = 0} of the hyperboloid.
    Equidistants,
    /// Parallel hyperplanes {x_n = s} of R^n.
    Planes,
}

/// Family kinds that build catenoids, in catalog order.
pub const FAMILY_KINDS: [&str; 5] = [
    "spheres_euclidean",
    "spheres_hyperbolic",
    "spheres_spherical",
    "horospheres_hyperbolic",
    "equidistants_hyperbolic",
];

impl FamilyKind {
    pub fn parse(tag: &str) -> Result<Self> {
        Ok(match tag {
            "spheres_euclidean" => FamilyKind::SpheresEuclidean,
            "spheres_hyperbolic" => FamilyKind::SpheresHyperbolic,
            "spheres_spherical" => FamilyKind::SpheresSpherical,
            "horospheres_hyperbolic" => FamilyKind::Horospheres,
            "equidistants_hyperbolic" => FamilyKind::Equidistants,
            "planes_euclidean" => FamilyKind::Planes,
            other => return Err(GeomError::spec(format!("unknown family kind '{other}'"))),
        })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            FamilyKind::SpheresEuclidean => "spheres_euclidean",
            FamilyKind::SpheresHyperbolic => "spheres_hyperbolic",
            FamilyKind::SpheresSpherical => "spheres_spherical",
            FamilyKind::Horospheres => "horospheres_hyperbolic",
            FamilyKind::Equidistants => "equidistants_hyperbolic",
            FamilyKind::Planes => "planes_euclidean",
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self, FamilyKind::SpheresEuclidean | FamilyKind::SpheresHyperbolic | FamilyKind::SpheresSpherical)
    }
}

/// A family of parallel hypersurfaces f_s(w), s the signed distance along
/// the unit normal eta_s = d f_s / ds.
#[derive(Debug, Clone)]
pub struct ParallelFamily {
    pub kind: FamilyKind,
    pub n: usize,
    pub space: AmbientSpace,
    /// Interval of admissible s; see [`ParallelFamily::check_s`].
    pub s_domain: (f64, f64),
    /// Centre o of Euclidean spheres.
    center: Vec<f64>,
}

fn dot<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::cst(0.0), |acc, &v| acc + v * v)
}

impl ParallelFamily {
    pub fn new(kind: FamilyKind, n: usize) -> Result<Self> {
        if !(2..=MAX_FAMILY_DIM).contains(&n) {
            return Err(GeomError::spec(format!("family dimension n={n} must lie in 2..={MAX_FAMILY_DIM}")));
        }
        let (space, s_domain) = match kind {
            FamilyKind::SpheresEuclidean => (AmbientSpace::euclidean(n)?, (0.0, MAX_ABS_S)),
            FamilyKind::SpheresHyperbolic => (AmbientSpace::hyperbolic(n)?, (0.0, MAX_ABS_S)),
            FamilyKind::SpheresSpherical => (AmbientSpace::sphere(n)?, (0.0, std::f64::consts::PI)),
            FamilyKind::Horospheres => (AmbientSpace::halfspace(n)?, (-MAX_ABS_S, MAX_ABS_S)),
            FamilyKind::Equidistants => (AmbientSpace::hyperbolic(n)?, (-MAX_ABS_S, MAX_ABS_S)),
            FamilyKind::Planes => (AmbientSpace::euclidean(n)?, (-MAX_ABS_S, MAX_ABS_S)),
        };
        Ok(Self { kind, n, space, s_domain, center: vec![0.0; n] })
    }

    /// Euclidean spheres about `center`.
    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if self.kind != FamilyKind::SpheresEuclidean {
            return Err(GeomError::spec("a centre can only be set for Euclidean spheres"));
        }
        if center.len() != self.n {
            return Err(GeomError::spec(format!("centre needs {} coordinates", self.n)));
        }
        self.center = center;
        Ok(self)
    }

    pub fn leaf_dim(&self) -> usize {
        self.n - 1
    }

    pub fn out_dim(&self) -> usize {
        self.space.coord_dim()
    }

    /// Point of the unit sphere S^{n-1} in R^n: an angle for n = 2, inverse
    /// stereographic coordinates otherwise.
    fn sphere_dir<T: Real>(&self, w: &[T]) -> Vec<T> {
        if self.n == 2 {
            vec![w[0].cos(), w[0].sin()]
        } else {
            inverse_stereographic(w)
        }
    }

    pub fn leaf<T: Real>(&self, w: &[T], s: T) -> Vec<T> {
        match self.kind {
            FamilyKind::SpheresEuclidean => {
                self.sphere_dir(w).into_iter().zip(&self.center).map(|(d, &c)| d * s + c).collect()
            }
            FamilyKind::SpheresHyperbolic => {
                let mut p: Vec<T> = self.sphere_dir(w).into_iter().map(|d| d * s.sinh()).collect();
                p.push(s.cosh());
                p
            }
            FamilyKind::SpheresSpherical => {
                let mut p: Vec<T> = self.sphere_dir(w).into_iter().map(|d| d * s.sin()).collect();
                p.push(s.cos());
                p
            }
            FamilyKind::Horospheres => {
                let mut p = w.to_vec();
                p.push(s.exp());
                p
            }
            FamilyKind::Equidistants => {
                let (c, sh) = (s.cosh(), s.sinh());
                let mut p = vec![sh];
                p.extend(w.iter().map(|&x| x * c));
                p.push((dot(w) + 1.0).sqrt() * c);
                p
            }
            FamilyKind::Planes => {
                let mut p = w.to_vec();
                p.push(s);
                p
            }
        }
    }

    pub fn leaf_point(&self, w: &[f64], s: f64) -> DVector<f64> {
        DVector::from_vec(self.leaf(w, s))
    }

    /// eta_s(w) = d f_s(w) / ds.
    pub fn normal(&self, w: &[f64], s: f64) -> DVector<f64> {
        let sj = seed(&[s])[0];
        let wj: Vec<Jet> = w.iter().map(|&x| Jet::from(x)).collect();
        let p = self.leaf(&wj, sj);
        DVector::from_iterator(p.len(), p.iter().map(|x| unpack(x, 1).1[0]))
    }

    /// Default sampling box for the leaf parameter.
    pub fn leaf_box(&self) -> ParamBox {
        let d = self.leaf_dim();
        let half = match self.kind {
            _ if self.kind.is_sphere() && self.n == 2 => std::f64::consts::PI,
            _ if self.kind.is_sphere() => 1.5,
            _ => 1.0,
        };
        ParamBox::soft(vec![-half; d], vec![half; d])
    }

    pub fn leaf_center(&self) -> Vec<f64> {
        vec![0.0; self.leaf_dim()]
    }

    /// Spheres exclude the centre s = 0 (and the antipode s = pi on S^n).
    pub fn check_s(&self, s: f64) -> Result<()> {
        let (lo, hi) = self.s_domain;
        let above = if self.kind.is_sphere() { s > lo } else { s >= lo };
        let below = if self.kind == FamilyKind::SpheresSpherical { s < hi } else { s <= hi };
        if s.is_finite() && above && below {
            Ok(())
        } else {
            Err(GeomError::Domain(format!("s={s} outside [{lo}, {hi}] for {}", self.kind.tag())))
        }
    }

    /// Closed-form leaf mean curvature for the normal eta_s, where known.
    pub fn closed_h(&self, s: f64) -> Option<f64> {
        let m = (self.n - 1) as f64;
        match self.kind {
            FamilyKind::SpheresEuclidean => Some(-m / s),
            FamilyKind::SpheresHyperbolic => Some(-m / s.tanh()),
            FamilyKind::SpheresSpherical => Some(-m * s.cos() / s.sin()),
            FamilyKind::Horospheres => Some(m),
            FamilyKind::Planes => Some(0.0),
            FamilyKind::Equidistants => None,
        }
    }

    /// Mean curvature of the leaf at f_s(w), computed from the leaf as a
    /// hypersurface of M with its normal oriented along eta_s.
    pub fn numeric_h(&self, w: &[f64], s: f64) -> Result<f64> {
        self.check_s(s)?;
        let leaf = LeafMap { family: self.clone(), s };
        let jet = jet_of(&leaf, None, w, JetMode::Closed)?;
        let mut data = base_hypersurface_data(&self.space, &jet)?;
        let eta = self.normal(w, s);
        if self.space.inner(jet.value.as_slice(), &data.normal, &eta) < 0.0 {
            data.flip();
        }
        Ok(data.h)
    }

    /// H_s: the closed form where one exists (cross-checked against the
    /// numeric leaf curvature at the leaf centre), numeric otherwise.
    pub fn leaf_mean_curvature(&self, s: f64) -> Result<f64> {
        let numeric = self.numeric_h(&self.leaf_center(), s)?;
        match self.closed_h(s) {
            Some(h) => {
                if (h - numeric).abs() > CROSS_TOL * (1.0 + h.abs()) {
                    return Err(GeomError::Numerical(format!(
                        "leaf curvature {numeric} disagrees with closed form {h} at s={s}"
                    )));
                }
                Ok(h)
            }
            None => Ok(numeric),
        }
    }

    /// H_s for the profile equation: closed form when available, numeric
    /// leaf curvature otherwise.
    pub fn h_s(&self, s: f64) -> Result<f64> {
        match self.closed_h(s) {
            Some(h) => Ok(h),
            None => self.numeric_h(&self.leaf_center(), s),
        }
    }

    /// Spread (max - min) of the numeric leaf curvature over `samples` leaf
    /// points at fixed s.
    pub fn isoparametric_spread(&self, s: f64, samples: &[Vec<f64>]) -> Result<f64> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for w in samples {
            let h = self.numeric_h(w, s)?;
            lo = lo.min(h);
            hi = hi.max(h);
        }
        Ok(hi - lo)
    }

    /// Coordinate distance between f_{s+ds}(w) and the end of the unit-speed
    /// geodesic of length ds leaving f_s(w) along eta_s.
    pub fn parallel_residual(&self, w: &[f64], s: f64, ds: f64) -> Result<f64> {
        let p = self.leaf_point(w, s);
        let v = self.normal(w, s) * ds.signum();
        let end = self.space.geodesic_flow(p.as_slice(), v.as_slice(), ds.abs(), GEODESIC_STEP)?;
        Ok((end.point - self.leaf_point(w, s + ds)).norm())
    }
}

/// w -> f_s(w) for a fixed s.
pub(crate) struct LeafMap {
    pub family: ParallelFamily,
    pub s: f64,
}

impl GenericMap for LeafMap {
    fn param_dim(&self) -> usize {
        self.family.leaf_dim()
    }

    fn out_dim(&self) -> usize {
        self.family.out_dim()
    }

    fn map<T: Real>(&self, u: &[T]) -> Vec<T> {
        self.family.leaf(u, T::cst(self.s))
    }
}
