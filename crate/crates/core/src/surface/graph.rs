use nalgebra::DVector;

use crate::ambient::AmbientSpace;
use crate::error::{GeomError, Result};

/// Residuals of the graph equations for u at a chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphResiduals {
    /// Delta u - (|grad u|/(1+|grad u|^2)) <grad u, grad |grad u|>.
    pub minimal_residual: f64,
    /// Delta u.
    pub harmonic_residual: f64,
    /// <grad u, grad |grad u|>.
    pub homothety_residual: f64,
    /// Mean curvature of the level set through p: Delta u/|grad u| - <grad u, grad |grad u|>/|grad u|^2.
    pub section_h: f64,
    pub grad_norm: f64,
}

fn partials(u: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Result<DVector<f64>> {
    let mut g = DVector::zeros(x.len());
    for j in 0..x.len() {
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
}

fn grad_norm(space: &AmbientSpace, u: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Result<(f64, DVector<f64>)> {
    let du = partials(u, x, h)?;
    let ginv = space
        .coord_metric(x)
        .try_inverse()
        .ok_or_else(|| GeomError::Degenerate(format!("singular metric at {x:?}")))?;
    let grad = ginv * &du;
    Ok((du.dot(&grad).max(0.0).sqrt(), grad))
}

/// All four graph quantities of u at p, with central differences of step h
/// and gradients taken in the metric of `space`.
pub fn graph_residuals(space: &AmbientSpace, u: &dyn Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Result<GraphResiduals> {
    space.check_chart_point(p, 2.0 * h)?;
    let lap = space.laplace_beltrami(u, p, h)?;
    let (norm, grad) = grad_norm(space, u, p, h)?;
    if norm <= h {
        return Err(GeomError::Domain(format!("grad u vanishes at {p:?}")));
    }
    let norm_field = |x: &[f64]| grad_norm(space, u, x, h).map(|(n, _)| n).unwrap_or(f64::NAN);
    let d_norm = partials(&norm_field, p, h)?;
    let homothety = d_norm.dot(&grad);
    Ok(GraphResiduals {
        minimal_residual: lap - norm / (1.0 + norm * norm) * homothety,
        harmonic_residual: lap,
        homothety_residual: homothety,
        section_h: lap / norm - homothety / (norm * norm),
        grad_norm: norm,
    })
}
