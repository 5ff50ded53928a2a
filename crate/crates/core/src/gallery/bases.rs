//! Base hypersurfaces of M that the gallery twists, with their unit normals.

use nalgebra::DVector;

use crate::real::Real;
use crate::surface::GenericMap;

/// Inverse stereographic projection R^n -> S^n in R^{n+1}.
pub fn inverse_stereographic<T: Real>(x: &[T]) -> Vec<T> {
    let r2 = x.iter().fold(T::cst(0.0), |acc, &v| acc + v * v);
    let den = r2 + 1.0;
    let mut out: Vec<T> = x.iter().map(|&v| v * 2.0 / den).collect();
    out.push((r2 - 1.0) / den);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Base {
    /// x -> (x, 0) in R^2.
    Line,
    /// x -> (cos x, 0, sin x) in S^2.
    SphereMeridian,
    /// x -> (sinh x, 0, cosh x) in H^2.
    HyperbolicMeridian,
    /// (x, y) -> (x, 0, y) in R^3.
    Plane,
    /// (x_1..x_{n-1}) -> (x_1 cos S, x_1 sin S, x_2, .., x_{n-1}), S = x_2 + .. + x_{n-1}.
    HelicoidRn { n: usize },
    /// (x, y) -> (cos x cos y, sin x cos y, cos x sin y, sin x sin y) in S^3.
    CliffordS3,
    /// (x, y) -> (phi(x), psi(y))/sqrt 2 in S^{2n+1}.
    CliffordTorus { n: usize },
    /// (x, y, r) -> r (phi(x), psi(y))/sqrt 2 in R^{2n+2}.
    CliffordCone { n: usize },
    /// (x, y) -> (sinh x cos y, sinh x sin y, cosh x sinh y, cosh x cosh y) in H^3.
    HyperbolicHelicoid,
    /// (s, tau) -> (e^{i alpha s} cos tau, e^{i s} sin tau) in S^3.
    BergerHelicoid { alpha: f64 },
    /// Totally geodesic {x_2 = 0} of Q_c^n.
    TotallyGeodesic { c: i32, n: usize },
}

impl Base {
    /// Dimension of the ambient representation coordinates.
    pub fn out_dim(&self) -> usize {
        match self {
            Base::Line => 2,
            Base::SphereMeridian | Base::HyperbolicMeridian | Base::Plane => 3,
            Base::HelicoidRn { n } => *n,
            Base::CliffordS3 | Base::HyperbolicHelicoid | Base::BergerHelicoid { .. } => 4,
            Base::CliffordTorus { n } | Base::CliffordCone { n } => 2 * n + 2,
            Base::TotallyGeodesic { c, n } => {
                if *c == 0 {
                    *n
                } else {
                    n + 1
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Base::Line | Base::SphereMeridian | Base::HyperbolicMeridian => 1,
            Base::Plane | Base::CliffordS3 | Base::HyperbolicHelicoid | Base::BergerHelicoid { .. } => 2,
            Base::HelicoidRn { n } => n - 1,
            Base::CliffordTorus { n } => 2 * n,
            Base::CliffordCone { n } => 2 * n + 1,
            Base::TotallyGeodesic { n, .. } => n - 1,
        }
    }

    /// Analytic unit normal inside M, where one is known.
    pub fn normal(&self, p: &[f64]) -> Option<DVector<f64>> {
        let v = match self {
            Base::Line => vec![0.0, 1.0],
            Base::SphereMeridian | Base::HyperbolicMeridian => vec![0.0, 1.0, 0.0],
            Base::Plane => vec![0.0, -1.0, 0.0],
            Base::HelicoidRn { n } => {
                let x1 = p[0];
                let s: f64 = p[1..].iter().sum();
                let mut v = vec![s.sin(), -s.cos()];
                v.extend(std::iter::repeat_n(x1, n - 2));
                let norm = (1.0 + (n - 2) as f64 * x1 * x1).sqrt();
                v.iter().map(|c| c / norm).collect()
            }
            Base::CliffordS3 => {
                let (x, y) = (p[0], p[1]);
                vec![x.sin() * y.sin(), -x.cos() * y.sin(), -x.sin() * y.cos(), x.cos() * y.cos()]
            }
            Base::CliffordTorus { n } | Base::CliffordCone { n } => {
                let phi = inverse_stereographic(&p[..*n]);
                let psi = inverse_stereographic(&p[*n..2 * n]);
                let r = std::f64::consts::FRAC_1_SQRT_2;
                phi.iter().map(|v| v * r).chain(psi.iter().map(|v| -v * r)).collect()
            }
            Base::HyperbolicHelicoid => {
                let (x, y) = (p[0], p[1]);
                let norm = (x.cosh().powi(2) + x.sinh().powi(2)).sqrt();
                vec![
                    x.cosh() * y.sin() / norm,
                    -x.cosh() * y.cos() / norm,
                    x.sinh() * y.cosh() / norm,
                    x.sinh() * y.sinh() / norm,
                ]
            }
            Base::BergerHelicoid { .. } => return None,
            Base::TotallyGeodesic { .. } => {
                let mut v = vec![0.0; self.out_dim()];
                v[1] = 1.0;
                v
            }
        };
        Some(DVector::from_vec(v))
    }
}

impl GenericMap for Base {
    fn param_dim(&self) -> usize {
        self.dim()
    }

    fn out_dim(&self) -> usize {
        Base::out_dim(self)
    }

    fn map<T: Real>(&self, u: &[T]) -> Vec<T> {
        let z = T::cst(0.0);
        match self {
            Base::Line => vec![u[0], z],
            Base::SphereMeridian => vec![u[0].cos(), z, u[0].sin()],
            Base::HyperbolicMeridian => vec![u[0].sinh(), z, u[0].cosh()],
            Base::Plane => vec![u[0], z, u[1]],
            Base::HelicoidRn { .. } => {
                let s = u[1..].iter().fold(z, |acc, &v| acc + v);
                let mut out = vec![u[0] * s.cos(), u[0] * s.sin()];
                out.extend_from_slice(&u[1..]);
                out
            }
            Base::CliffordS3 => {
                let (x, y) = (u[0], u[1]);
                vec![x.cos() * y.cos(), x.sin() * y.cos(), x.cos() * y.sin(), x.sin() * y.sin()]
            }
            Base::CliffordTorus { n } => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                let mut out = inverse_stereographic(&u[..*n]);
                out.extend(inverse_stereographic(&u[*n..2 * n]));
                out.into_iter().map(|v| v * r).collect()
            }
            Base::CliffordCone { n } => {
                let rad = u[2 * n] * std::f64::consts::FRAC_1_SQRT_2;
                let mut out = inverse_stereographic(&u[..*n]);
                out.extend(inverse_stereographic(&u[*n..2 * n]));
                out.into_iter().map(|v| v * rad).collect()
            }
            Base::HyperbolicHelicoid => {
                let (x, y) = (u[0], u[1]);
                vec![x.sinh() * y.cos(), x.sinh() * y.sin(), x.cosh() * y.sinh(), x.cosh() * y.cosh()]
            }
            Base::BergerHelicoid { alpha } => {
                let (s, t) = (u[0], u[1]);
                let a = s * *alpha;
                vec![a.cos() * t.cos(), a.sin() * t.cos(), s.cos() * t.sin(), s.sin() * t.sin()]
            }
            Base::TotallyGeodesic { c, n } => {
                let v = &u[..n - 1];
                match c {
                    0 => {
                        let mut out = vec![v[0], z];
                        out.extend_from_slice(&v[1..]);
                        out
                    }
                    1 => {
                        let w = inverse_stereographic(v);
                        let mut out = vec![w[0], z];
                        out.extend_from_slice(&w[1..]);
                        out
                    }
                    _ => {
                        let r2 = v.iter().fold(z, |acc, &x| acc + x * x);
                        let mut out = vec![v[0], z];
                        out.extend_from_slice(&v[1..]);
                        out.push((r2 + 1.0).sqrt());
                        out
                    }
                }
            }
        }
    }
}
