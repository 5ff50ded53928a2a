use nalgebra::DVector;

use super::{GallerySurface, GraphSurface};
use crate::error::Result;
use crate::report::{Check, ToleranceSet, VerificationReport};
use crate::surface::{
    asymptotic_residual, lorentz_data, mixed_sign_residual, sample_grid, section_mean_curvature, FundamentalData, GridSpec, Immersion,
    JetMode, Sample,
};
use crate::tolerances::{CLOSED_TOL, DIAG_STEP, FD_STEP, FD_TOL, GRAPH_TOL, LORENTZ_TOL};

use super::twisting_theta_check;

/// Points integrated along grad(xi) in the helix check.
const HELIX_SAMPLES: usize = 64;
const HELIX_LENGTH: f64 = 0.1;
const HELIX_STEPS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct HelicoidTolerances {
    pub minimal: f64,
    pub asymptotic: f64,
    pub section_minimal: f64,
    pub lorentz_minimal: f64,
    pub lorentz_identity: f64,
    pub identity_xi: f64,
    pub nabla_theta: f64,
    pub helix: f64,
    pub theta_nu: f64,
    pub nu_horizontal: f64,
    pub graph: f64,
}

impl HelicoidTolerances {
    pub fn for_mode(mode: JetMode) -> Self {
        let (base, xi) = match mode {
            JetMode::Closed => (CLOSED_TOL, 1e-10),
            JetMode::Fd(_) => (FD_TOL, 1e-6),
        };
        Self {
            minimal: base,
            asymptotic: base,
            section_minimal: base,
            lorentz_minimal: LORENTZ_TOL,
            lorentz_identity: LORENTZ_TOL,
            identity_xi: xi,
            nabla_theta: if matches!(mode, JetMode::Closed) { 1e-6 } else { FD_TOL },
            helix: if matches!(mode, JetMode::Closed) { 1e-6 } else { FD_TOL },
            theta_nu: base,
            nu_horizontal: 1e-6,
            graph: GRAPH_TOL,
        }
    }

    /// Defaults for the mode with overrides by check name.
    pub fn from_set(set: &ToleranceSet, mode: JetMode) -> Self {
        let d = Self::for_mode(mode);
        Self {
            minimal: set.get("minimal", d.minimal),
            asymptotic: set.get("asymptotic", d.asymptotic),
            section_minimal: set.get("section_minimal", d.section_minimal),
            lorentz_minimal: set.get("lorentz_minimal", d.lorentz_minimal),
            lorentz_identity: set.get("lorentz_identity", d.lorentz_identity),
            identity_xi: set.get("identity_xi", d.identity_xi),
            nabla_theta: set.get("nabla_theta", d.nabla_theta),
            helix: set.get("helix", d.helix),
            theta_nu: set.get("theta_nu", d.theta_nu),
            nu_horizontal: set.get("nu_horizontal", d.nu_horizontal),
            graph: set.get("graph", d.graph),
        }
    }
}

/// ||grad theta + A grad xi||_g with grad theta from central differences of
/// theta (neighbour normals aligned with the centre normal).
fn nabla_theta_residual(surf: &Immersion, fd: &FundamentalData, mode: JetMode) -> Result<f64> {
    let d = fd.u.len();
    let h = DIAG_STEP;
    let mut dtheta = DVector::zeros(d);
    for i in 0..d {
        let mut vals = [0.0; 2];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            let mut u = fd.u.clone();
            u[i] += sign * h;
            let mut n = surf.fundamental(&u, mode)?;
            if n.normal.dot(&fd.normal) < 0.0 {
                n.flip();
            }
            vals[k] = n.theta;
        }
        dtheta[i] = (vals[0] - vals[1]) / (2.0 * h);
    }
    let grad_theta = &fd.g_inv * dtheta;
    let w = grad_theta + &fd.a * &fd.grad_xi;
    Ok(fd.g_norm(&w))
}

/// Integrate the unit grad(xi) field from u and return ||theta| - |theta_0||
/// at the end point.
fn helix_drift(surf: &Immersion, u0: &[f64], theta0: f64, mode: JetMode) -> Result<f64> {
    let field = |u: &[f64]| -> Result<DVector<f64>> {
        let fd = surf.fundamental(u, mode)?;
        let n = fd.grad_xi_norm2.sqrt();
        if n <= 1e-8 {
            return Err(crate::error::GeomError::Horizontal(fd.theta * fd.theta));
        }
        Ok(&fd.grad_xi / n)
    };
    let dt = HELIX_LENGTH / HELIX_STEPS as f64;
    let mut u = DVector::from_column_slice(u0);
    let shift = |u: &DVector<f64>, k: &DVector<f64>, c: f64| (u + k * c).as_slice().to_vec();
    for _ in 0..HELIX_STEPS {
        let k1 = field(u.as_slice())?;
        let k2 = field(&shift(&u, &k1, dt / 2.0))?;
        let k3 = field(&shift(&u, &k2, dt / 2.0))?;
        let k4 = field(&shift(&u, &k3, dt))?;
        u += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    let end = surf.fundamental(u.as_slice(), mode)?;
    Ok((end.theta.abs() - theta0.abs()).abs())
}

/// Vertical-helicoid checks on a grid: minimality, asymptotic grad(xi),
/// minimal horizontal sections, Lorentzian minimality where spacelike, the
/// grad(xi) identity, grad(theta) = -A grad(xi), and constancy of theta
/// along grad(xi) lines.
pub fn verify_helicoid(
    surf: &Immersion,
    grid: &GridSpec,
    mode: JetMode,
    tols: &HelicoidTolerances,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("helicoid", &surf.name, "");
    report.env("jet_mode", mode.label());
    report.env("grid", format!("{:?}", grid.counts));
    let samples = sample_grid(surf, grid, mode)?;
    let ok: Vec<&Sample> = samples.iter().filter(|s| s.outcome.is_ok()).collect();
    for s in &samples {
        if let Err(e) = &s.outcome {
            report.exclude(e.kind());
        }
    }
    report.env("valid_samples", ok.len());
    let data = || ok.iter().filter_map(|s| s.data());

    report.push(Check::max("minimal", data().map(|d| d.h), tols.minimal));
    report.push(Check::max("asymptotic", data().map(asymptotic_residual), tols.asymptotic));

    let mut section = Vec::new();
    for d in data() {
        match section_mean_curvature(d) {
            Ok(h) => section.push(h),
            Err(_) => report.exclude("horizontal"),
        }
    }
    report.push(Check::max("section_minimal", section, tols.section_minimal));

    let mut lor_h = Vec::new();
    let mut lor_id = Vec::new();
    for s in &ok {
        let (jet, d) = s.outcome.as_ref().expect("filtered");
        if let Ok(l) = lorentz_data(surf, jet, d) {
            lor_h.push(l.h_l_direct);
            lor_id.push(l.identity_residual());
        }
    }
    report.env("spacelike_samples", lor_h.len());
    if !lor_h.is_empty() {
        report.push(Check::max("lorentz_minimal", lor_h, tols.lorentz_minimal));
        report.push(Check::max("lorentz_identity", lor_id, tols.lorentz_identity));
    }

    report.push(Check::max("identity_xi", data().map(|d| d.xi_identity_residual()), tols.identity_xi));

    let nabla: Vec<f64> = {
        use rayon::prelude::*;
        ok.par_iter()
            .filter_map(|s| s.data())
            .map(|d| nabla_theta_residual(surf, d, mode).unwrap_or(f64::NAN))
            .collect()
    };
    report.push(Check::max("nabla_theta", nabla, tols.nabla_theta));

    let stride = ok.len().div_ceil(HELIX_SAMPLES).max(1);
    let starts: Vec<&FundamentalData> = data().step_by(stride).filter(|d| !d.is_horizontal()).collect();
    let drifts: Vec<Result<f64>> = {
        use rayon::prelude::*;
        starts.par_iter().map(|d| helix_drift(surf, &d.u, d.theta, mode)).collect()
    };
    let mut helix = Vec::new();
    for r in drifts {
        match r {
            Ok(v) => helix.push(v),
            Err(e) => report.exclude(&format!("helix_{}", e.kind())),
        }
    }
    report.push(Check::max("helix", helix, tols.helix));
    Ok(report)
}

/// The four graph equations at grid points where grad u does not vanish.
pub fn graph_checks(graph: &GraphSurface, grid: &GridSpec, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new("graph", &graph.immersion.name, "");
    let n = graph.space.dim();
    let mut res = Vec::new();
    for k in 0..grid.len() {
        let u = grid.point(&grid.index(k));
        match graph.residuals(&u[..n], FD_STEP) {
            Ok(r) => res.push(r),
            Err(e) => report.exclude(e.kind()),
        }
    }
    report.push(Check::max("graph_harmonic", res.iter().map(|r| r.harmonic_residual), tol));
    report.push(Check::max("graph_homothety", res.iter().map(|r| r.homothety_residual), tol));
    report.push(Check::max("graph_minimal", res.iter().map(|r| r.minimal_residual), tol));
    report.push(Check::max("graph_section", res.iter().map(|r| r.section_h), tol));
    report
}

/// Helicoid checks plus the construction-specific ones (angle/nu relations
/// for twistings, graph equations for graphs).
pub fn verify_gallery(
    g: &GallerySurface,
    grid: &GridSpec,
    mode: JetMode,
    tols: &HelicoidTolerances,
) -> Result<VerificationReport> {
    let mut report = verify_helicoid(g.immersion(), grid, mode, tols)?;
    report.surface = g.kind.clone();
    report.params = g.params.clone();
    if let Some(tw) = g.twisting() {
        let tc = twisting_theta_check(tw, grid, mode)?;
        tc.into_checks(&mut report, tols.theta_nu, tols.nu_horizontal);
        report.env("twisting_spacelike_samples", tc.spacelike_samples.len());
        report.env("twisting_sign_mismatches", tc.sign_mismatches);
        if let Some(m) = tc.min_spacelike_causal {
            report.env("min_spacelike_causal", format!("{m:e}"));
        }
    }
    if let Some(gr) = g.graph() {
        let gc = graph_checks(gr, grid, tols.graph);
        report.merge(gc, "");
    }
    for (k, v) in &g.notes {
        report.env(k, format!("{v:.12}"));
    }
    Ok(report)
}

/// Sign pattern of the shape operators at zero mean-isocurved points (both
/// H and H_L vanish to `tol`): the eigenvalues of A and of A_L must have
/// mixed signs or all lie within `tol` of zero.
pub fn isocurved_sign_check(surfaces: &[&GallerySurface], count: usize, mode: JetMode, tol: f64) -> Result<Check> {
    let mut res = Vec::new();
    for g in surfaces {
        let surf = g.immersion();
        let grid = GridSpec::uniform(surf, count)?;
        for s in sample_grid(surf, &grid, mode)? {
            let Ok((jet, d)) = &s.outcome else { continue };
            let Ok(l) = lorentz_data(surf, jet, d) else { continue };
            if d.h.abs() > tol || l.h_l_direct.abs() > tol {
                continue;
            }
            let riem = mixed_sign_residual(&d.principal_curvatures());
            let lor: Vec<f64> = l.a_l.complex_eigenvalues().iter().map(|z| z.re).collect();
            res.push(riem.max(mixed_sign_residual(&lor)));
        }
    }
    Ok(Check::max("isocurved_eigen_sign", res, tol))
}
