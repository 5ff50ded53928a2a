//! Base manifolds M and the products M x R.
//!
//! Every space is represented in coordinates x in R^m with a (possibly
//! indefinite) metric G(x). Chart spaces have m = n and no constraint. Quadric
//! spaces live on a level set <x,x>_flat = c of a flat R^{n+1}; the Berger
//! sphere reuses the unit S^3 in R^4 with a non-flat extension of its metric.

mod geodesic;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::params::Params;
use crate::tolerances::{FD_STEP, LEVEL_TOL};

pub use geodesic::GeodesicEnd;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    Euclidean { n: usize },
    SphereQuadric { n: usize },
    HyperbolicQuadric { n: usize },
    HyperbolicHalfspace { n: usize },
    Nil3,
    Sol3,
    Berger { delta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Chart,
    Quadric { signature: Vec<f64>, level: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientSpace {
    kind: SpaceKind,
    dim: usize,
    repr: Representation,
    name: String,
}

/// Christoffel symbols at a point: `gamma[k][(i, j)] = Γ^k_{ij}`.
#[derive(Debug, Clone)]
pub struct ChristoffelTensor {
    pub point: DVector<f64>,
    pub gamma: Vec<DMatrix<f64>>,
}

impl ChristoffelTensor {
    pub fn zero(point: DVector<f64>) -> Self {
        let m = point.len();
        ChristoffelTensor { point, gamma: vec![DMatrix::zeros(m, m); m] }
    }

    /// Γ(X, Y)^k = Γ^k_{ij} X^i Y^j.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.gamma.len(), |k, _| (x.transpose() * &self.gamma[k] * y)[(0, 0)])
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[k][(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(|g| g.iter().all(|&v| v == 0.0))
    }
}

pub const SPACE_KINDS: [&str; 7] = [
    "euclidean",
    "sphere_quadric",
    "hyperbolic_quadric",
    "hyperbolic_halfspace",
    "nil3",
    "sol3",
    "berger",
];

/// Hopf field generator on R^4 = C^2: x -> i x.
pub(crate) fn hopf_matrix() -> DMatrix<f64> {
    let mut j = DMatrix::zeros(4, 4);
    j[(0, 1)] = -1.0;
    j[(1, 0)] = 1.0;
    j[(2, 3)] = -1.0;
    j[(3, 2)] = 1.0;
    j
}

/// Build a space from its tag and parameters (`n`, `delta`).
pub fn make_space(kind: &str, params: &Params) -> Result<AmbientSpace> {
    let space = match kind {
        "euclidean" => AmbientSpace::euclidean(params.usize_or("n", 3)?),
        "sphere_quadric" => AmbientSpace::sphere(params.usize_or("n", 2)?),
        "hyperbolic_quadric" => AmbientSpace::hyperbolic(params.usize_or("n", 2)?),
        "hyperbolic_halfspace" => AmbientSpace::halfspace(params.usize_or("n", 2)?),
        "nil3" => Ok(AmbientSpace::nil3()),
        "sol3" => Ok(AmbientSpace::sol3()),
        "berger" => AmbientSpace::berger(params.f64_or("delta", 0.8)?),
        other => Err(GeomError::spec(format!("unknown space kind '{other}'"))),
    }?;
    params.finish(kind)?;
    Ok(space)
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(GeomError::spec(format!("dimension n={n} must be at least 2")))
    } else {
        Ok(())
    }
}

impl AmbientSpace {
    pub fn euclidean(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { kind: SpaceKind::Euclidean { n }, dim: n, repr: Representation::Chart, name: format!("R^{n}") })
    }

    pub fn sphere(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            kind: SpaceKind::SphereQuadric { n },
            dim: n,
            repr: Representation::Quadric { signature: vec![1.0; n + 1], level: 1.0 },
            name: format!("S^{n}"),
        })
    }

    pub fn hyperbolic(n: usize) -> Result<Self> {
        check_dim(n)?;
        let mut signature = vec![1.0; n + 1];
        signature[n] = -1.0;
        Ok(Self {
            kind: SpaceKind::HyperbolicQuadric { n },
            dim: n,
            repr: Representation::Quadric { signature, level: -1.0 },
            name: format!("H^{n} (hyperboloid)"),
        })
    }

    pub fn halfspace(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            kind: SpaceKind::HyperbolicHalfspace { n },
            dim: n,
            repr: Representation::Chart,
            name: format!("H^{n} (half-space)"),
        })
    }

    pub fn nil3() -> Self {
        Self { kind: SpaceKind::Nil3, dim: 3, repr: Representation::Chart, name: "Nil3".into() }
    }

    pub fn sol3() -> Self {
        Self { kind: SpaceKind::Sol3, dim: 3, repr: Representation::Chart, name: "Sol3".into() }
    }

    pub fn berger(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(GeomError::spec(format!("Berger parameter delta={delta} must be positive")));
        }
        Ok(Self {
            kind: SpaceKind::Berger { delta },
            dim: 3,
            repr: Representation::Quadric { signature: vec![1.0; 4], level: 1.0 },
            name: format!("Berger S^3 (delta={delta})"),
        })
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Intrinsic dimension n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of coordinates of the active representation (n or n+1).
    pub fn coord_dim(&self) -> usize {
        match self.repr {
            Representation::Chart => self.dim,
            Representation::Quadric { .. } => self.dim + 1,
        }
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn is_chart(&self) -> bool {
        matches!(self.repr, Representation::Chart)
    }

    pub fn is_flat_quadric(&self) -> bool {
        matches!(self.repr, Representation::Quadric { .. }) && !matches!(self.kind, SpaceKind::Berger { .. })
    }

    /// Chart domain predicate; quadrics test the level equation.
    pub fn in_domain(&self, x: &[f64]) -> bool {
        if x.len() != self.coord_dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match (&self.kind, &self.repr) {
            (SpaceKind::HyperbolicHalfspace { n }, _) => x[n - 1] > 0.0,
            (_, Representation::Chart) => true,
            (_, Representation::Quadric { .. }) => self.level_residual(x).unwrap_or(f64::INFINITY) <= LEVEL_TOL,
        }
    }

    /// |<x,x>_flat - c| for quadric spaces.
    pub fn level_residual(&self, x: &[f64]) -> Option<f64> {
        match &self.repr {
            Representation::Chart => None,
            Representation::Quadric { signature, level } => {
                let q: f64 = x.iter().zip(signature).map(|(v, s)| s * v * v).sum();
                Some((q - level).abs())
            }
        }
    }

    /// Distance from x to the chart boundary (infinite for boundaryless charts).
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::HyperbolicHalfspace { n } => x[n - 1],
            _ => f64::INFINITY,
        }
    }

    pub(crate) fn check_chart_point(&self, p: &[f64], margin: f64) -> Result<()> {
        if !self.is_chart() {
            return Err(GeomError::spec(format!("{} is a quadric space; chart operations do not apply", self.name)));
        }
        if p.len() != self.dim {
            return Err(GeomError::spec(format!("point has {} coordinates, expected {}", p.len(), self.dim)));
        }
        if !self.in_domain(p) {
            return Err(GeomError::Domain(format!("{p:?} is outside the chart of {}", self.name)));
        }
        if self.boundary_distance(p) <= margin {
            return Err(GeomError::Domain(format!(
                "{p:?} lies within {margin:e} of the chart boundary of {}",
                self.name
            )));
        }
        Ok(())
    }

    /// Base metric G(p) of a chart space.
    pub fn metric_at(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.check_chart_point(p, 0.0)?;
        Ok(self.coord_metric(p))
    }

    /// Metric of the representation at coordinates x: the chart metric, the flat
    /// quadric metric, or the Berger extension I + (delta^2 - 1) V V^T, V = ix.
    pub fn coord_metric(&self, x: &[f64]) -> DMatrix<f64> {
        let m = self.coord_dim();
        match &self.kind {
            SpaceKind::Euclidean { .. } => DMatrix::identity(m, m),
            SpaceKind::HyperbolicHalfspace { n } => DMatrix::identity(m, m) / (x[n - 1] * x[n - 1]),
            SpaceKind::Nil3 => {
                let xx = x[0];
                DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0 + xx * xx, -xx, 0.0, -xx, 1.0])
            }
            SpaceKind::Sol3 => {
                let z = x[2];
                DMatrix::from_diagonal(&DVector::from_vec(vec![(2.0 * z).exp(), (-2.0 * z).exp(), 1.0]))
            }
            SpaceKind::SphereQuadric { .. } | SpaceKind::HyperbolicQuadric { .. } => match &self.repr {
                Representation::Quadric { signature, .. } => DMatrix::from_diagonal(&DVector::from_column_slice(signature)),
                Representation::Chart => unreachable!(),
            },
            SpaceKind::Berger { delta } => {
                let v = hopf_matrix() * DVector::from_column_slice(x);
                DMatrix::identity(4, 4) + (delta * delta - 1.0) * &v * v.transpose()
            }
        }
    }

    /// Closed-form partial derivatives dG/dx_k, when the space provides them.
    pub fn metric_derivs(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let m = self.coord_dim();
        let zero = || DMatrix::<f64>::zeros(m, m);
        match &self.kind {
            SpaceKind::Euclidean { .. } | SpaceKind::SphereQuadric { .. } | SpaceKind::HyperbolicQuadric { .. } => {
                Some(vec![zero(); m])
            }
            SpaceKind::HyperbolicHalfspace { n } => {
                let mut d = vec![zero(); m];
                let xn = x[n - 1];
                d[n - 1] = DMatrix::identity(m, m) * (-2.0 / (xn * xn * xn));
                Some(d)
            }
            SpaceKind::Nil3 => {
                let mut d = vec![zero(); 3];
                d[0] = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 2.0 * x[0], -1.0, 0.0, -1.0, 0.0]);
                Some(d)
            }
            SpaceKind::Sol3 => {
                let mut d = vec![zero(); 3];
                let z = x[2];
                d[2] = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0 * (2.0 * z).exp(), -2.0 * (-2.0 * z).exp(), 0.0]));
                Some(d)
            }
            SpaceKind::Berger { delta } => {
                let j = hopf_matrix();
                let w = &j * DVector::from_column_slice(x);
                let c = delta * delta - 1.0;
                Some(
                    (0..4)
                        .map(|k| {
                            let jk = j.column(k).into_owned();
                            c * (&jk * w.transpose() + &w * jk.transpose())
                        })
                        .collect(),
                )
            }
        }
    }

    /// Central-difference metric derivatives.
    pub fn metric_derivs_fd(&self, x: &[f64], h: f64) -> Vec<DMatrix<f64>> {
        (0..self.coord_dim())
            .map(|k| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[k] += h;
                xm[k] -= h;
                (self.coord_metric(&xp) - self.coord_metric(&xm)) / (2.0 * h)
            })
            .collect()
    }

    fn christoffel_from(&self, x: &[f64], dg: &[DMatrix<f64>]) -> Result<ChristoffelTensor> {
        let m = self.coord_dim();
        let ginv = self
            .coord_metric(x)
            .try_inverse()
            .ok_or_else(|| GeomError::Degenerate(format!("singular metric at {x:?}")))?;
        let mut gamma = vec![DMatrix::zeros(m, m); m];
        for k in 0..m {
            for i in 0..m {
                for j in i..m {
                    let mut s = 0.0;
                    for l in 0..m {
                        s += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                    }
                    gamma[k][(i, j)] = 0.5 * s;
                    gamma[k][(j, i)] = 0.5 * s;
                }
            }
        }
        Ok(ChristoffelTensor { point: DVector::from_column_slice(x), gamma })
    }

    /// Christoffel symbols of a chart metric: exact where closed-form metric
    /// derivatives exist, central differences of step `h` otherwise.
    pub fn christoffel_at(&self, p: &[f64], h: f64) -> Result<ChristoffelTensor> {
        self.check_chart_point(p, 2.0 * h)?;
        match self.metric_derivs(p) {
            Some(dg) => self.christoffel_from(p, &dg),
            None => self.christoffel_from(p, &self.metric_derivs_fd(p, h)),
        }
    }

    /// Christoffel symbols from central differences only.
    pub fn christoffel_fd(&self, p: &[f64], h: f64) -> Result<ChristoffelTensor> {
        self.check_chart_point(p, 2.0 * h)?;
        self.christoffel_from(p, &self.metric_derivs_fd(p, h))
    }

    /// Connection of the representation metric at coordinates x (zero for flat
    /// quadrics). Used for second fundamental forms.
    pub fn coord_christoffel(&self, x: &[f64]) -> Result<ChristoffelTensor> {
        match self.metric_derivs(x) {
            Some(dg) => {
                if dg.iter().all(|d| d.iter().all(|&v| v == 0.0)) {
                    Ok(ChristoffelTensor::zero(DVector::from_column_slice(x)))
                } else {
                    self.christoffel_from(x, &dg)
                }
            }
            None => self.christoffel_from(x, &self.metric_derivs_fd(x, FD_STEP)),
        }
    }

    /// Gradient of the defining constraint c(x) = <x,x>_flat (quadrics only).
    pub fn constraint_grad(&self, x: &[f64]) -> Option<DVector<f64>> {
        match &self.repr {
            Representation::Chart => None,
            Representation::Quadric { signature, .. } => {
                Some(DVector::from_fn(x.len(), |i, _| 2.0 * signature[i] * x[i]))
            }
        }
    }

    pub fn constraint_hessian(&self) -> Option<DMatrix<f64>> {
        match &self.repr {
            Representation::Chart => None,
            Representation::Quadric { signature, .. } => {
                Some(DMatrix::from_diagonal(&DVector::from_iterator(signature.len(), signature.iter().map(|s| 2.0 * s))))
            }
        }
    }

    /// Inner product of two vectors at coordinates x in the representation metric.
    pub fn inner(&self, x: &[f64], a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a.transpose() * self.coord_metric(x) * b)[(0, 0)]
    }

    /// Laplace-Beltrami operator of a scalar field on a chart, in divergence
    /// form with nested central differences of step `h`.
    pub fn laplace_beltrami(&self, u: &dyn Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Result<f64> {
        self.check_chart_point(p, 2.0 * h)?;
        let n = self.dim;
        let grad = |x: &[f64]| -> Result<DVector<f64>> {
            let mut g = DVector::zeros(n);
            for j in 0..n {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[j] += h;
                xm[j] -= h;
                let (fp, fm) = (u(&xp), u(&xm));
                if !fp.is_finite() || !fm.is_finite() {
                    return Err(GeomError::Numerical(format!("non-finite field value near {x:?}")));
                }
                g[j] = (fp - fm) / (2.0 * h);
            }
            Ok(g)
        };
        let flux = |x: &[f64]| -> Result<DVector<f64>> {
            let g = self.coord_metric(x);
            let det = g.determinant();
            let ginv = g
                .try_inverse()
                .ok_or_else(|| GeomError::Degenerate(format!("singular metric at {x:?}")))?;
            Ok(det.sqrt() * ginv * grad(x)?)
        };
        let mut div = 0.0;
        for i in 0..n {
            let mut xp = p.to_vec();
            let mut xm = p.to_vec();
            xp[i] += h;
            xm[i] -= h;
            div += (flux(&xp)?[i] - flux(&xm)?[i]) / (2.0 * h);
        }
        Ok(div / self.coord_metric(p).determinant().sqrt())
    }

    /// Unit-speed geodesic from p with initial velocity v, integrated by RK4.
    pub fn geodesic_flow(&self, p: &[f64], v: &[f64], length: f64, step: f64) -> Result<GeodesicEnd> {
        geodesic::flow(self, p, v, length, step)
    }
}

/// Riemannian or Lorentzian sign of the R factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeSign {
    Riemannian,
    Lorentzian,
}

impl TimeSign {
    pub fn value(self) -> f64 {
        match self {
            TimeSign::Riemannian => 1.0,
            TimeSign::Lorentzian => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientProduct {
    pub base: AmbientSpace,
    pub time_sign: TimeSign,
}

impl AmbientProduct {
    pub fn new(base: AmbientSpace, time_sign: TimeSign) -> Self {
        Self { base, time_sign }
    }

    pub fn riemannian(base: AmbientSpace) -> Self {
        Self::new(base, TimeSign::Riemannian)
    }

    pub fn lorentzian(&self) -> Self {
        Self::new(self.base.clone(), TimeSign::Lorentzian)
    }

    /// Coordinates of a product point: base representation plus height.
    pub fn coord_dim(&self) -> usize {
        self.base.coord_dim() + 1
    }

    /// Block-diagonal product metric at q = (x, t).
    pub fn product_metric_at(&self, q: &[f64]) -> Result<DMatrix<f64>> {
        let m = self.base.coord_dim();
        if q.len() != m + 1 {
            return Err(GeomError::spec(format!("product point has {} coordinates, expected {}", q.len(), m + 1)));
        }
        if self.base.is_chart() {
            self.base.check_chart_point(&q[..m], 0.0)?;
        }
        Ok(self.coord_metric(q))
    }

    pub(crate) fn coord_metric(&self, q: &[f64]) -> DMatrix<f64> {
        let m = self.base.coord_dim();
        let mut g = DMatrix::zeros(m + 1, m + 1);
        g.view_mut((0, 0), (m, m)).copy_from(&self.base.coord_metric(&q[..m]));
        g[(m, m)] = self.time_sign.value();
        g
    }

    pub fn inner(&self, q: &[f64], a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a.transpose() * self.coord_metric(q) * b)[(0, 0)]
    }

    /// The unit vertical field d/dt.
    pub fn dt(&self) -> DVector<f64> {
        let mut e = DVector::zeros(self.coord_dim());
        e[self.base.coord_dim()] = 1.0;
        e
    }

    /// Phi(X) = X - 2<X, dt> dt.
    pub fn phi(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = x.clone();
        let m = self.base.coord_dim();
        y[m] = -y[m];
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn nil_metric_at_unit_x() {
        let g = AmbientSpace::nil3().metric_at(&[1.0, 0.0, 0.0]).unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        assert_eq!(g, expected);
    }

    #[test]
    fn halfspace_and_sol_metrics() {
        let h = AmbientSpace::halfspace(2).unwrap();
        assert_eq!(h.metric_at(&[0.0, 1.0]).unwrap(), DMatrix::identity(2, 2));
        assert_eq!(h.metric_at(&[0.0, 2.0]).unwrap(), DMatrix::identity(2, 2) * 0.25);
        let g = AmbientSpace::sol3().metric_at(&[0.0, 0.0, 1.0]).unwrap();
        assert!(close(g[(0, 0)], std::f64::consts::E.powi(2), 1e-15));
        assert!(close(g[(1, 1)], (-2.0f64).exp(), 1e-15));
        assert_eq!(g[(2, 2)], 1.0);
    }

    #[test]
    fn metric_at_rejects_quadrics_and_outside_points() {
        assert!(AmbientSpace::sphere(2).unwrap().metric_at(&[1.0, 0.0, 0.0]).unwrap_err().is_spec());
        assert!(matches!(
            AmbientSpace::halfspace(2).unwrap().metric_at(&[0.0, -1.0]),
            Err(GeomError::Domain(_))
        ));
    }

    #[test]
    fn make_space_errors() {
        assert!(make_space("torus", &Params::new()).is_err());
        assert!(make_space("euclidean", &Params::parse("n=1").unwrap()).is_err());
        assert!(make_space("berger", &Params::parse("delta=0").unwrap()).is_err());
        assert!(make_space("berger", &Params::parse("delta=-1").unwrap()).is_err());
        assert!(make_space("berger", &Params::parse("delta=1.5").unwrap()).is_ok());
    }

    #[test]
    fn halfspace_christoffels_at_unit_height() {
        let h = AmbientSpace::halfspace(2).unwrap();
        let c = h.christoffel_at(&[0.0, 1.0], 1e-4).unwrap();
        // indices: 0 = x1, 1 = x2
        assert!(close(c.get(0, 0, 1), -1.0, 1e-14));
        assert!(close(c.get(1, 0, 0), 1.0, 1e-14));
        assert!(close(c.get(1, 1, 1), -1.0, 1e-14));
        assert!(close(c.get(0, 0, 0), 0.0, 1e-14));
        assert!(close(c.get(1, 0, 1), 0.0, 1e-14));
        let fd = h.christoffel_fd(&[0.0, 1.0], 1e-4).unwrap();
        for k in 0..2 {
            assert!((&fd.gamma[k] - &c.gamma[k]).amax() < 1e-6);
        }
    }

    #[test]
    fn sol_christoffels_at_origin() {
        let s = AmbientSpace::sol3();
        let c = s.christoffel_at(&[0.0, 0.0, 0.0], 1e-4).unwrap();
        let mut expected = [[[0.0; 3]; 3]; 3];
        expected[0][0][2] = 1.0;
        expected[0][2][0] = 1.0;
        expected[1][1][2] = -1.0;
        expected[1][2][1] = -1.0;
        expected[2][0][0] = -1.0;
        expected[2][1][1] = 1.0;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!(close(c.get(k, i, j), expected[k][i][j], 1e-14), "Γ^{k}_{i}{j}");
                }
            }
        }
    }

    #[test]
    fn euclidean_christoffels_vanish() {
        let c = AmbientSpace::euclidean(4).unwrap().christoffel_at(&[0.3, 1.0, -2.0, 5.0], 1e-4).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn christoffel_rejects_boundary_margin() {
        let h = AmbientSpace::halfspace(2).unwrap();
        assert!(h.christoffel_at(&[0.0, 1e-4], 1e-4).is_err());
    }

    #[test]
    fn berger_metric_on_hopf_field() {
        let b = AmbientSpace::berger(0.5).unwrap();
        let x = [0.6, 0.0, 0.0, 0.8];
        let v = hopf_matrix() * DVector::from_column_slice(&x);
        assert!(close(b.inner(&x, &v, &v), 0.25, 1e-15));
        // horizontal vectors keep their round length
        let h = DVector::from_vec(vec![-0.8, 0.0, 0.0, 0.6]);
        assert!(close(v.dot(&h), 0.0, 1e-15));
        assert!(close(b.inner(&x, &h, &h), 1.0, 1e-15));
    }

    #[test]
    fn laplacian_examples() {
        let e = AmbientSpace::euclidean(2).unwrap();
        let u = |x: &[f64]| x[0] * x[0] - x[1] * x[1];
        assert!(e.laplace_beltrami(&u, &[0.4, -1.3], 1e-4).unwrap().abs() < 1e-6);
        let h = AmbientSpace::halfspace(3).unwrap();
        let lin = |x: &[f64]| 0.7 * x[0];
        assert!(h.laplace_beltrami(&lin, &[0.2, 0.1, 1.3], 1e-4).unwrap().abs() < 1e-6);
        let nil = AmbientSpace::nil3();
        let un = |x: &[f64]| 0.5 * (x[2] - x[0] * x[1] / 2.0);
        assert!(nil.laplace_beltrami(&un, &[0.3, -0.6, 0.2], 1e-4).unwrap().abs() < 1e-6);
        let q = |x: &[f64]| x[0] * x[0];
        assert!(close(e.laplace_beltrami(&q, &[0.1, 0.2], 1e-4).unwrap(), 2.0, 1e-6));
    }

    #[test]
    fn product_metrics() {
        let e = AmbientProduct::riemannian(AmbientSpace::euclidean(2).unwrap());
        assert_eq!(e.product_metric_at(&[0.0, 0.0, 0.0]).unwrap(), DMatrix::identity(3, 3));
        let l = e.lorentzian();
        assert_eq!(
            l.product_metric_at(&[0.0, 0.0, 0.0]).unwrap(),
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0]))
        );
        let h = AmbientProduct::new(AmbientSpace::halfspace(2).unwrap(), TimeSign::Lorentzian);
        assert_eq!(
            h.product_metric_at(&[0.0, 2.0, 5.0]).unwrap(),
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.25, 0.25, -1.0]))
        );
        let s = AmbientProduct::riemannian(AmbientSpace::hyperbolic(2).unwrap());
        assert_eq!(
            s.product_metric_at(&[0.0, 0.0, 1.0, 0.0]).unwrap(),
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0, 1.0]))
        );
    }

    #[test]
    fn phi_is_involution() {
        let p = AmbientProduct::riemannian(AmbientSpace::euclidean(3).unwrap());
        let x = DVector::from_vec(vec![0.3, -1.0, 2.0, 0.7]);
        assert_eq!(p.phi(&p.phi(&x)), x);
    }
}
