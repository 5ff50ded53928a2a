use nalgebra::DVector;

use super::AmbientSpace;
use crate::error::{GeomError, Result};
use crate::tolerances::GEODESIC_SPEED_TOL;

/// End point and velocity of a geodesic segment.
#[derive(Debug, Clone)]
pub struct GeodesicEnd {
    pub point: DVector<f64>,
    pub velocity: DVector<f64>,
    pub steps: usize,
    /// | ||v(s)|| - 1 | at the end of the segment.
    pub speed_drift: f64,
}

/// Acceleration of a geodesic in representation coordinates. Quadrics add the
/// Lagrange term keeping c(x) = <x,x>_flat constant.
fn acceleration(space: &AmbientSpace, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
    let xs = x.as_slice();
    let gamma = space.coord_christoffel(xs)?;
    let mut acc = -gamma.apply(v, v);
    if let (Some(grad), Some(hess)) = (space.constraint_grad(xs), space.constraint_hessian()) {
        let ginv = space
            .coord_metric(xs)
            .try_inverse()
            .ok_or_else(|| GeomError::Degenerate("singular metric on geodesic".into()))?;
        let normal = &ginv * &grad;
        let denom = grad.dot(&normal);
        let lambda = (-grad.dot(&acc) - (v.transpose() * &hess * v)[(0, 0)]) / denom;
        acc += lambda * normal;
    }
    Ok(acc)
}

pub(super) fn flow(space: &AmbientSpace, p: &[f64], v: &[f64], length: f64, step: f64) -> Result<GeodesicEnd> {
    let m = space.coord_dim();
    if p.len() != m || v.len() != m {
        return Err(GeomError::spec(format!("geodesic data must have {m} coordinates")));
    }
    if !(step > 0.0) {
        return Err(GeomError::spec("geodesic step must be positive"));
    }
    if !space.in_domain(p) {
        return Err(GeomError::Domain(format!("geodesic start {p:?} outside {}", space.name())));
    }
    let x0 = DVector::from_column_slice(p);
    let v0 = DVector::from_column_slice(v);
    let speed = space.inner(p, &v0, &v0);
    if (speed - 1.0).abs() > GEODESIC_SPEED_TOL {
        return Err(GeomError::spec(format!("initial velocity has squared speed {speed}, expected 1")));
    }
    let steps = ((length.abs() / step).ceil() as usize).max(1);
    let h = length / steps as f64;
    let mut x = x0;
    let mut vel = v0;
    for _ in 0..steps {
        let k1x = vel.clone();
        let k1v = acceleration(space, &x, &vel)?;
        let x2 = &x + &k1x * (h / 2.0);
        let v2 = &vel + &k1v * (h / 2.0);
        let k2v = acceleration(space, &x2, &v2)?;
        let x3 = &x + &v2 * (h / 2.0);
        let v3 = &vel + &k2v * (h / 2.0);
        let k3v = acceleration(space, &x3, &v3)?;
        let x4 = &x + &v3 * h;
        let v4 = &vel + &k3v * h;
        let k4v = acceleration(space, &x4, &v4)?;
        x += (k1x + v2 * 2.0 + v3 * 2.0 + v4) * (h / 6.0);
        vel += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        if x.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::Numerical("geodesic flow produced non-finite values".into()));
        }
        if space.is_chart() && !space.in_domain(x.as_slice()) {
            return Err(GeomError::Domain(format!("geodesic left the chart of {}", space.name())));
        }
    }
    let speed_drift = (space.inner(x.as_slice(), &vel, &vel).sqrt() - 1.0).abs();
    Ok(GeodesicEnd { point: x, velocity: vel, steps, speed_drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn euclidean_straight_line() {
        let e = AmbientSpace::euclidean(3).unwrap();
        let end = e.geodesic_flow(&[1.0, 2.0, 3.0], &[0.0, 0.6, 0.8], 2.5, 1e-3).unwrap();
        let expected = [1.0, 2.0 + 1.5, 3.0 + 2.0];
        for i in 0..3 {
            assert!((end.point[i] - expected[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn halfspace_vertical_geodesic() {
        let h = AmbientSpace::halfspace(2).unwrap();
        let t = 1.3;
        let end = h.geodesic_flow(&[0.0, 1.0], &[0.0, 1.0], t, 1e-3).unwrap();
        assert!(end.point[0].abs() < 1e-8);
        assert!((end.point[1] - t.exp()).abs() < 1e-8);
    }

    #[test]
    fn sphere_great_circle() {
        let s = AmbientSpace::sphere(2).unwrap();
        let end = s.geodesic_flow(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], FRAC_PI_2, 1e-3).unwrap();
        assert!((end.point - DVector::from_vec(vec![0.0, 1.0, 0.0])).norm() < 1e-8);
        assert!(end.speed_drift < 1e-6);
    }

    #[test]
    fn rejects_non_unit_velocity() {
        let e = AmbientSpace::euclidean(2).unwrap();
        assert!(e.geodesic_flow(&[0.0, 0.0], &[2.0, 0.0], 1.0, 1e-3).is_err());
    }
}
