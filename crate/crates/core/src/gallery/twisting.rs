use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::ambient::{AmbientProduct, AmbientSpace};
use crate::error::{GeomError, Result};
use crate::real::Real;
use crate::report::{Check, VerificationReport};
use crate::surface::{
    base_hypersurface_data, jet_of, GenericMap, GridSpec, Immersion, JetMode, ParamBox, SurfaceMap,
};
use crate::tolerances::{EXPM_SQUARINGS, NU_STEP, EXPM_TAYLOR_DEGREE};

/// e^A by scaling and squaring with a fixed Taylor degree and a fixed number
/// of squarings, so results are reproducible bit for bit.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let scale = 2f64.powi(EXPM_SQUARINGS as i32);
    let b = a / scale;
    let mut term = DMatrix::identity(n, n);
    let mut sum = DMatrix::identity(n, n);
    for k in 1..=EXPM_TAYLOR_DEGREE {
        term = &term * &b / k as f64;
        sum += &term;
    }
    for _ in 0..EXPM_SQUARINGS {
        sum = &sum * &sum;
    }
    sum
}

/// Planar rotation generator on coordinates (i, j): e_i -> e_j, e_j -> -e_i.
pub fn rotation_generator(dim: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(dim, dim);
    k[(j, i)] = 1.0;
    k[(i, j)] = -1.0;
    k
}

/// One-parameter isometry group s -> Gamma_s of the base space.
#[derive(Debug, Clone, PartialEq)]
pub enum IsometryGroupAction {
    /// Gamma_s = e^{sK} acting linearly on representation coordinates.
    MatrixExp { generator: DMatrix<f64> },
    /// Gamma_s(x) = x + s * rate * e_axis on a chart.
    ChartFlow { axis: usize, rate: f64 },
}

impl IsometryGroupAction {
    pub fn matrix(generator: DMatrix<f64>) -> Self {
        IsometryGroupAction::MatrixExp { generator }
    }

    pub fn dim_ok(&self, m: usize) -> bool {
        match self {
            IsometryGroupAction::MatrixExp { generator } => generator.nrows() == m && generator.ncols() == m,
            IsometryGroupAction::ChartFlow { axis, .. } => *axis < m,
        }
    }

    /// Gamma_s as a matrix (chart flows are affine; this is their linear part).
    pub fn linear_part(&self, s: f64) -> DMatrix<f64> {
        match self {
            IsometryGroupAction::MatrixExp { generator } => expm(&(generator * s)),
            IsometryGroupAction::ChartFlow { .. } => DMatrix::identity(1, 1),
        }
    }

    pub fn apply(&self, s: f64, x: &DVector<f64>) -> DVector<f64> {
        match self {
            IsometryGroupAction::MatrixExp { generator } => expm(&(generator * s)) * x,
            IsometryGroupAction::ChartFlow { axis, rate } => {
                let mut y = x.clone();
                y[*axis] += s * rate;
                y
            }
        }
    }

    /// d/ds Gamma_s(x).
    pub fn velocity(&self, s: f64, x: &DVector<f64>) -> DVector<f64> {
        match self {
            IsometryGroupAction::MatrixExp { generator } => generator * (expm(&(generator * s)) * x),
            IsometryGroupAction::ChartFlow { axis, rate } => {
                let mut v = DVector::zeros(x.len());
                v[*axis] = *rate;
                v
            }
        }
    }

    /// Differential of Gamma_s applied to a vector.
    pub fn push(&self, s: f64, v: &DVector<f64>) -> DVector<f64> {
        match self {
            IsometryGroupAction::MatrixExp { generator } => expm(&(generator * s)) * v,
            IsometryGroupAction::ChartFlow { .. } => v.clone(),
        }
    }

    /// max |<Gamma_s x, Gamma_s y> - <x, y>| for the given pairs, in the metric
    /// of `space` at the respective points.
    pub fn isometry_defect(&self, space: &AmbientSpace, s: f64, p: &DVector<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let q = self.apply(s, p);
        let before = space.inner(p.as_slice(), x, y);
        let after = space.inner(q.as_slice(), &self.push(s, x), &self.push(s, y));
        (before - after).abs()
    }

    fn apply_generic<T: Real>(&self, s: T, x: &[T]) -> Vec<T> {
        match self {
            IsometryGroupAction::MatrixExp { generator } => {
                let s0 = s.value();
                let e = expm(&(generator * s0));
                let ke = generator * &e;
                let kke = generator * &ke;
                let m = x.len();
                (0..m)
                    .map(|i| {
                        let mut acc = T::cst(0.0);
                        for j in 0..m {
                            if e[(i, j)] == 0.0 && ke[(i, j)] == 0.0 && kke[(i, j)] == 0.0 {
                                continue;
                            }
                            acc += s.compose(e[(i, j)], ke[(i, j)], kke[(i, j)]) * x[j];
                        }
                        acc
                    })
                    .collect()
            }
            IsometryGroupAction::ChartFlow { axis, rate } => {
                let mut y = x.to_vec();
                y[*axis] += s * *rate;
                y
            }
        }
    }
}

/// Psi(p, s) = (Gamma_s f0(p), a s).
struct TwistMap {
    base: Arc<dyn SurfaceMap>,
    action: IsometryGroupAction,
    pitch: f64,
}

impl GenericMap for TwistMap {
    fn param_dim(&self) -> usize {
        self.base.param_dim() + 1
    }

    fn out_dim(&self) -> usize {
        self.base.out_dim() + 1
    }

    fn map<T: Real>(&self, u: &[T]) -> Vec<T> {
        let d = u.len() - 1;
        let s = u[d];
        let f0 = T::eval_on(self.base.as_ref(), &u[..d]);
        let mut out = self.action.apply_generic(s, &f0);
        out.push(s * self.pitch);
        out
    }
}

/// Unit normal of the base hypersurface at a base parameter.
pub type NormalField = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;

/// The a-pitched twisting of a base hypersurface by a one-parameter group.
#[derive(Clone)]
pub struct TwistingSurface {
    pub space: AmbientSpace,
    pub base: Arc<dyn SurfaceMap>,
    pub base_normal: NormalField,
    pub action: IsometryGroupAction,
    pub pitch: f64,
    pub immersion: Immersion,
}

impl std::fmt::Debug for TwistingSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwistingSurface")
            .field("space", &self.space.name())
            .field("action", &self.action)
            .field("pitch", &self.pitch)
            .finish()
    }
}

/// Unit normal of a base hypersurface computed from its jets (no analytic
/// formula available). The sign is the cofactor orientation, which is
/// continuous in the parameters.
pub fn numeric_base_normal(space: AmbientSpace, base: Arc<dyn SurfaceMap>) -> NormalField {
    Arc::new(move |p: &[f64]| {
        let jet = jet_of(base.as_ref(), None, p, JetMode::Closed).expect("base jet");
        base_hypersurface_data(&space, &jet).expect("base hypersurface data").normal
    })
}

pub fn pitched_twisting(
    space: AmbientSpace,
    base: Arc<dyn SurfaceMap>,
    base_normal: Option<NormalField>,
    action: IsometryGroupAction,
    pitch: f64,
    base_box: ParamBox,
    s_range: (f64, f64),
    base_point: Vec<f64>,
    name: &str,
) -> Result<TwistingSurface> {
    if !(pitch > 0.0) {
        return Err(GeomError::spec(format!("pitch must be positive, got {pitch}")));
    }
    let m = space.coord_dim();
    if base.out_dim() != m {
        return Err(GeomError::spec(format!(
            "base maps into {} coordinates, {} uses {m}",
            base.out_dim(),
            space.name()
        )));
    }
    if base.param_dim() + 1 != space.dim() {
        return Err(GeomError::spec("base is not a hypersurface of the ambient space"));
    }
    if !action.dim_ok(m) {
        return Err(GeomError::spec("isometry action does not match the base representation"));
    }
    if matches!(action, IsometryGroupAction::ChartFlow { .. }) && !space.is_chart() {
        return Err(GeomError::spec("chart flows act on chart spaces only"));
    }
    let base_normal = base_normal.unwrap_or_else(|| numeric_base_normal(space.clone(), base.clone()));
    let map = TwistMap { base: base.clone(), action: action.clone(), pitch };
    let mut lo = base_box.lo.clone();
    let mut hi = base_box.hi.clone();
    lo.push(s_range.0);
    hi.push(s_range.1);
    let mut bp = base_point;
    if bp.len() == base.param_dim() {
        bp.push(0.5 * (s_range.0 + s_range.1));
    }
    let immersion = Immersion::new(
        AmbientProduct::riemannian(space.clone()),
        Arc::new(map),
        ParamBox::soft(lo, hi),
        bp,
        name,
    );
    Ok(TwistingSurface { space, base, base_normal, action, pitch, immersion })
}

impl TwistingSurface {
    /// nu = <alpha_p'(s), eta_s(alpha_p(s))> in the metric of M.
    pub fn nu(&self, p: &[f64], s: f64) -> f64 {
        let x0 = DVector::from_vec(self.base.eval(p));
        let eta = (self.base_normal)(p);
        let q = self.action.apply(s, &x0);
        let vel = self.action.velocity(s, &x0);
        let eta_s = self.action.push(s, &eta);
        self.space.inner(q.as_slice(), &vel, &eta_s)
    }

    fn nu_at(&self, u: &[f64]) -> f64 {
        let d = u.len() - 1;
        self.nu(&u[..d], u[d])
    }

    pub fn theta_from_nu(&self, nu: f64) -> f64 {
        nu / (self.pitch * self.pitch + nu * nu).sqrt()
    }
}

/// Per-point diagnostics of a twisting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistingPoint {
    pub nu: f64,
    pub theta: f64,
    /// ||theta| - |nu|/sqrt(a^2+nu^2)|.
    pub theta_residual: f64,
    /// |(2 theta^2 - 1) - (nu^2 - a^2)/(nu^2 + a^2)|.
    pub causal_residual: f64,
    /// <grad nu, d_t>.
    pub nu_vertical: f64,
    /// d nu / d s.
    pub dnu_ds: f64,
    /// Coordinate of grad nu along dPsi/ds.
    pub nu_last_coord: f64,
    pub causal: f64,
}

pub fn twisting_point(tw: &TwistingSurface, u: &[f64], mode: JetMode) -> Result<TwistingPoint> {
    let surf = &tw.immersion;
    let jet = surf.jet(u, mode)?;
    let fd = crate::surface::fundamental_data(surf, &jet)?;
    let nu = tw.nu_at(u);
    let a = tw.pitch;
    let expected = tw.theta_from_nu(nu);
    let d = u.len();
    let h = NU_STEP;
    let mut dnu = DVector::zeros(d);
    for i in 0..d {
        let at = |k: f64| {
            let mut v = u.to_vec();
            v[i] += k * h;
            tw.nu_at(&v)
        };
        dnu[i] = (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h);
    }
    let grad = &fd.g_inv * &dnu;
    let m = surf.ambient.base.coord_dim();
    let e = DVector::from_fn(d, |i, _| jet.j[(m, i)]);
    let causal = 2.0 * fd.theta * fd.theta - 1.0;
    Ok(TwistingPoint {
        nu,
        theta: fd.theta,
        theta_residual: (fd.theta.abs() - expected.abs()).abs(),
        causal_residual: (causal - (nu * nu - a * a) / (nu * nu + a * a)).abs(),
        nu_vertical: grad.dot(&e),
        dnu_ds: dnu[d - 1],
        nu_last_coord: grad[d - 1],
        causal,
    })
}

/// Summary of the angle/nu relations over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistingCheck {
    pub samples: usize,
    pub max_theta_residual: f64,
    pub max_causal_residual: f64,
    pub max_nu_vertical: f64,
    pub max_dnu_ds: f64,
    pub max_nu_last_coord: f64,
    /// Samples with |nu| > a.
    pub spacelike_samples: Vec<Vec<f64>>,
    /// min(2 theta^2 - 1) over the spacelike samples.
    pub min_spacelike_causal: Option<f64>,
    /// Samples where the measured causal sign disagrees with |nu| > a.
    pub sign_mismatches: usize,
}

impl TwistingCheck {
    pub fn into_checks(&self, report: &mut VerificationReport, tol_theta: f64, tol_horizontal: f64) {
        report.push(Check {
            name: "theta_nu".into(),
            max_residual: self.max_theta_residual,
            tolerance: tol_theta,
            pass: self.samples > 0 && self.max_theta_residual <= tol_theta,
            samples: self.samples,
        });
        report.push(Check {
            name: "causal_nu".into(),
            max_residual: self.max_causal_residual,
            tolerance: tol_theta,
            pass: self.samples > 0 && self.max_causal_residual <= tol_theta,
            samples: self.samples,
        });
        report.push(Check {
            name: "nu_horizontal".into(),
            max_residual: self.max_nu_vertical,
            tolerance: tol_horizontal,
            pass: self.samples > 0 && self.max_nu_vertical <= tol_horizontal,
            samples: self.samples,
        });
    }
}

pub fn twisting_theta_check(tw: &TwistingSurface, grid: &GridSpec, mode: JetMode) -> Result<TwistingCheck> {
    use rayon::prelude::*;
    if grid.is_empty() {
        return Err(GeomError::spec("empty sample set"));
    }
    let points: Vec<(Vec<f64>, Result<TwistingPoint>)> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let u = grid.point(&grid.index(k));
            let r = twisting_point(tw, &u, mode);
            (u, r)
        })
        .collect();
    let mut out = TwistingCheck {
        samples: 0,
        max_theta_residual: 0.0,
        max_causal_residual: 0.0,
        max_nu_vertical: 0.0,
        max_dnu_ds: 0.0,
        max_nu_last_coord: 0.0,
        spacelike_samples: Vec::new(),
        min_spacelike_causal: None,
        sign_mismatches: 0,
    };
    for (u, r) in points {
        let Ok(p) = r else { continue };
        out.samples += 1;
        out.max_theta_residual = out.max_theta_residual.max(p.theta_residual);
        out.max_causal_residual = out.max_causal_residual.max(p.causal_residual);
        out.max_nu_vertical = out.max_nu_vertical.max(p.nu_vertical.abs());
        out.max_dnu_ds = out.max_dnu_ds.max(p.dnu_ds.abs());
        out.max_nu_last_coord = out.max_nu_last_coord.max(p.nu_last_coord.abs());
        let predicted = p.nu.abs() > tw.pitch;
        if predicted != (p.causal > 0.0) {
            out.sign_mismatches += 1;
        }
        if predicted {
            out.min_spacelike_causal = Some(out.min_spacelike_causal.map_or(p.causal, |m: f64| m.min(p.causal)));
            out.spacelike_samples.push(u);
        }
    }
    if out.samples == 0 {
        return Err(GeomError::Numerical("no valid samples in twisting check".into()));
    }
    Ok(out)
}
