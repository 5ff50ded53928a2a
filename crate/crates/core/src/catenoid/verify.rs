use std::collections::BTreeMap;

use nalgebra::DVector;
use rayon::prelude::*;

use super::family::FamilyKind;
use super::graph::{piece_residual, seam_theta, CatenoidSurface, FsAGraph, GlueMode};
use super::profile::ProfileSolution;
use crate::error::{GeomError, Result};
use crate::report::{Check, ToleranceSet, VerificationReport};
use crate::surface::{principal_data, sample_grid, section_mean_curvature, GridSpec, JetMode};
use crate::tolerances::{CATENOID_TOL, CROSS_TOL, FD_TOL, SEAM_TOL};

/// Step of the five-point stencils for a' and a'' of the height profile.
pub const HEIGHT_FD_STEP: f64 = 1e-3;
/// Step along s for the derivative of zeta = a' theta.
const ZETA_STEP: f64 = 1e-3;
/// Seam offsets for the verticality trend.
pub const SEAM_OFFSETS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];
/// Where the horosphere half should be within 1e-3 of its asymptotic plane.
const ASYMPTOTE_S: f64 = -8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CatenoidTolerances {
    pub minimal: f64,
    pub principal: f64,
    pub lambda_profile: f64,
    pub section: f64,
    pub theta_profile: f64,
    pub section_constant: f64,
    pub section_leaf: f64,
    pub zeta: f64,
    pub symmetry: f64,
    pub seam: f64,
    pub seam_rate: f64,
    pub asymptote: f64,
    pub leaf_curvature: f64,
}

impl CatenoidTolerances {
    pub fn for_mode(mode: JetMode) -> Self {
        let base = match mode {
            JetMode::Closed => CATENOID_TOL,
            JetMode::Fd(_) => FD_TOL,
        };
        Self {
            minimal: base,
            principal: base,
            lambda_profile: base,
            section: base,
            theta_profile: base,
            section_constant: base,
            section_leaf: base,
            zeta: FD_TOL,
            symmetry: 1e-10,
            seam: SEAM_TOL,
            seam_rate: 0.05,
            asymptote: 1e-3,
            leaf_curvature: CROSS_TOL,
        }
    }

    pub fn from_set(set: &ToleranceSet, mode: JetMode) -> Self {
        let d = Self::for_mode(mode);
        Self {
            minimal: set.get("minimal", d.minimal),
            principal: set.get("principal", d.principal),
            lambda_profile: set.get("lambda_profile", d.lambda_profile),
            section: set.get("section", d.section),
            theta_profile: set.get("theta_profile", d.theta_profile),
            section_constant: set.get("section_constant", d.section_constant),
            section_leaf: set.get("section_leaf", d.section_leaf),
            zeta: set.get("zeta", d.zeta),
            symmetry: set.get("symmetry", d.symmetry),
            seam: set.get("seam", d.seam),
            seam_rate: set.get("seam_rate", d.seam_rate),
            asymptote: set.get("asymptote", d.asymptote),
            leaf_curvature: set.get("leaf_curvature", d.leaf_curvature),
        }
    }
}

/// Five-point first and second derivatives of the height of a piece.
pub fn height_derivatives(piece: &FsAGraph, s: f64) -> Result<(f64, f64)> {
    let h = HEIGHT_FD_STEP;
    let f = |x: f64| piece.map.height(x);
    let (m2, m1, z, p1, p2) = (f(s - 2.0 * h)?, f(s - h)?, f(s)?, f(s + h)?, f(s + 2.0 * h)?);
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    Ok((d1, d2))
}

/// Sampling grid for one piece: `counts` per parameter (leaf first, s last).
pub fn piece_grid(piece: &FsAGraph, counts: &[usize]) -> Result<GridSpec> {
    let d = piece.immersion.param_dim();
    let counts = match counts.len() {
        1 => vec![counts[0]; d],
        k if k == d => counts.to_vec(),
        k => return Err(GeomError::spec(format!("grid has {k} axes, the surface has {d} parameters"))),
    };
    GridSpec::new(counts, piece.immersion.sample_box.clone())
}

#[derive(Default)]
struct Residuals {
    minimal: Vec<f64>,
    principal: Vec<f64>,
    lambda: Vec<f64>,
    section: Vec<f64>,
    theta: Vec<f64>,
    section_leaf: Vec<f64>,
    zeta: Vec<f64>,
    /// Section curvatures grouped by piece and s-index.
    leaves: BTreeMap<(usize, usize), (f64, f64)>,
}

/// zeta'(s) - (H_s zeta + sign H) with zeta = a' theta, theta taken from the
/// surface at s and s +- ZETA_STEP.
fn zeta_residual(piece: &FsAGraph, u: &[f64], mode: JetMode) -> Result<f64> {
    let d = u.len() - 1;
    let zeta_at = |s: f64| -> Result<f64> {
        let mut v = u.to_vec();
        v[d] = s;
        let fd = piece.immersion.fundamental(&v, mode)?;
        let (a1, _) = height_derivatives(piece, s)?;
        Ok(a1 * fd.theta.abs())
    };
    let s = u[d];
    let z = zeta_at(s)?;
    let dz = (zeta_at(s + ZETA_STEP)? - zeta_at(s - ZETA_STEP)?) / (2.0 * ZETA_STEP);
    let profile = &piece.map.profile;
    let hs = profile.family.h_s(s)?;
    Ok((dz - (hs * z + piece.map.sign * profile.h_target)).abs())
}

fn sweep(cat: &CatenoidSurface, counts: &[usize], mode: JetMode, report: &mut VerificationReport) -> Result<Residuals> {
    let mut res = Residuals::default();
    let mut valid = 0usize;
    for (pi, piece) in cat.pieces.iter().enumerate() {
        let grid = piece_grid(piece, counts)?;
        let samples = sample_grid(&piece.immersion, &grid, mode)?;
        let d = piece.immersion.param_dim() - 1;
        let family = &piece.map.family;
        let rows: Vec<Result<(usize, [f64; 7], Option<f64>)>> = samples
            .par_iter()
            .map(|smp| {
                let fd = match &smp.outcome {
                    Ok((_, fd)) => fd,
                    Err(e) => return Err(e.clone()),
                };
                let s = smp.u[d];
                let (lambda, principal) = principal_data(fd)?;
                let (a1, a2) = height_derivatives(piece, s)?;
                let theta = fd.theta;
                let h_sigma = section_mean_curvature(fd)?;
                let hs = family.h_s(s)?;
                let zeta = if pi == 0 { Some(zeta_residual(piece, &smp.u, mode)?) } else { None };
                Ok((
                    smp.index[d],
                    [
                        fd.h.abs(),
                        principal,
                        (lambda - a2 * theta.powi(3)).abs(),
                        (h_sigma - lambda / (1.0 - theta * theta).sqrt()).abs(),
                        (theta - 1.0 / (1.0 + a1 * a1).sqrt()).abs(),
                        (h_sigma.abs() - hs.abs()).abs(),
                        h_sigma,
                    ],
                    zeta,
                ))
            })
            .collect();
        for row in rows {
            match row {
                Ok((leaf, r, zeta)) => {
                    valid += 1;
                    res.minimal.push(r[0]);
                    res.principal.push(r[1]);
                    res.lambda.push(r[2]);
                    res.section.push(r[3]);
                    res.theta.push(r[4]);
                    res.section_leaf.push(r[5]);
                    let e = res.leaves.entry((pi, leaf)).or_insert((f64::INFINITY, f64::NEG_INFINITY));
                    e.0 = e.0.min(r[6]);
                    e.1 = e.1.max(r[6]);
                    if let Some(z) = zeta {
                        res.zeta.push(z);
                    }
                }
                Err(e) => report.exclude(e.kind()),
            }
        }
    }
    report.env("valid_samples", valid);
    Ok(res)
}

/// |theta| at the seam offsets and the fitted exponent between the two
/// smallest offsets.
pub fn seam_trend(half: &FsAGraph, seam: f64) -> Result<(Vec<f64>, f64)> {
    let thetas: Vec<f64> = SEAM_OFFSETS.iter().map(|&o| seam_theta(half, seam, o)).collect::<Result<_>>()?;
    let k = thetas.len();
    let rate = (thetas[k - 2] / thetas[k - 1]).ln() / (SEAM_OFFSETS[k - 2] / SEAM_OFFSETS[k - 1]).ln();
    Ok((thetas, rate))
}

fn structural_checks(cat: &CatenoidSurface, counts: &[usize], tols: &CatenoidTolerances, report: &mut VerificationReport) -> Result<()> {
    let grid = piece_grid(cat.half(), counts)?;
    // Include the seam itself, where only values are defined.
    let mut points: Vec<Vec<f64>> = (0..grid.len()).map(|k| grid.point(&grid.index(k))).collect();
    for seam in &cat.seams {
        let mut u = cat.family().leaf_center();
        u.push(*seam);
        points.push(u);
    }
    if cat.pieces.len() >= 2 {
        let t0 = cat.symmetry_t;
        let refl = piece_residual(cat, 0, 1, &points, |mut p| {
            let m = p.len() - 1;
            p[m] = 2.0 * t0 - p[m];
            p
        });
        report.push(Check::max("reflection", [refl], tols.symmetry));
    }
    if let (GlueMode::Delaunay { copies }, Some(period)) = (cat.mode, cat.period) {
        report.env("period", format!("{period:.17e}"));
        report.env("t2", format!("{:.17e}", period / 2.0));
        let mut worst = Vec::new();
        for j in 0..copies.saturating_sub(2) {
            worst.push(piece_residual(cat, j, j + 2, &points, |mut p: DVector<f64>| {
                let m = p.len() - 1;
                p[m] += period;
                p
            }));
        }
        if !worst.is_empty() {
            report.push(Check::max("periodicity", worst, tols.symmetry));
        }
    }
    Ok(())
}

fn seam_checks(cat: &CatenoidSurface, tols: &CatenoidTolerances, report: &mut VerificationReport) -> Result<()> {
    let mut thetas = Vec::new();
    let mut rates = Vec::new();
    for (i, &seam) in cat.seams.iter().enumerate() {
        let (t, rate) = seam_trend(cat.half(), seam)?;
        report.env(
            &format!("seam{i}_theta"),
            t.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(";"),
        );
        report.env(&format!("seam{i}_rate"), format!("{rate:.6}"));
        thetas.push(*t.last().expect("offsets"));
        rates.push((rate - 0.5).abs());
        if t.windows(2).any(|w| w[1] >= w[0]) {
            rates.push(f64::INFINITY);
        }
    }
    report.push(Check::max("seam_theta", thetas, tols.seam));
    report.push(Check::max("seam_rate", rates, tols.seam_rate));
    Ok(())
}

fn leaf_checks(profile: &ProfileSolution, counts: &[usize], s_lo: f64, s_hi: f64, tols: &CatenoidTolerances, report: &mut VerificationReport) -> Result<()> {
    let family = &profile.family;
    let k = counts.last().copied().unwrap_or(5).clamp(2, 8);
    let leaf_box = family.leaf_box();
    let leaf_points: Vec<Vec<f64>> = (0..5)
        .map(|i| {
            let t = i as f64 / 4.0;
            leaf_box.lo.iter().zip(&leaf_box.hi).enumerate().map(|(j, (a, b))| a + (b - a) * ((t + 0.13 * j as f64) % 1.0)).collect()
        })
        .collect();
    let mut closed = Vec::new();
    let mut spread = Vec::new();
    for i in 0..k {
        let s = s_lo + (s_hi - s_lo) * i as f64 / (k - 1) as f64;
        spread.push(family.isoparametric_spread(s, &leaf_points)?);
        if let Some(h) = family.closed_h(s) {
            closed.push((family.numeric_h(&family.leaf_center(), s)? - h).abs());
        }
    }
    report.push(Check::max("isoparametric", spread, tols.leaf_curvature));
    if !closed.is_empty() {
        report.push(Check::max("leaf_curvature", closed, tols.leaf_curvature));
    }
    Ok(())
}

/// Catenoid residuals on a grid per piece, symmetry of the gluing and the
/// verticality of the seams.
pub fn verify_catenoid(
    cat: &CatenoidSurface,
    counts: &[usize],
    mode: JetMode,
    tols: &CatenoidTolerances,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("catenoid", &cat.kind, &cat.params);
    report.env("jet_mode", mode.label());
    report.env("grid", format!("{counts:?}"));
    report.env("pieces", cat.pieces.len());
    let profile = cat.profile();
    report.env("profile_steps", profile.steps());
    report.env("h_target", profile.h_target);
    report.env("seams", cat.seams.iter().map(|s| format!("{s:.17e}")).collect::<Vec<_>>().join(";"));

    let res = sweep(cat, counts, mode, &mut report)?;
    report.push(Check::max("minimal", res.minimal, tols.minimal));
    report.push(Check::max("principal", res.principal, tols.principal));
    report.push(Check::max("lambda_profile", res.lambda, tols.lambda_profile));
    report.push(Check::max("section", res.section, tols.section));
    report.push(Check::max("theta_profile", res.theta, tols.theta_profile));
    report.push(Check::max("section_constant", res.leaves.values().map(|(lo, hi)| hi - lo), tols.section_constant));
    report.push(Check::max("section_leaf", res.section_leaf, tols.section_leaf));
    report.push(Check::max("zeta", res.zeta, tols.zeta));

    let b = &cat.half().immersion.sample_box;
    let d = b.dim() - 1;
    leaf_checks(profile, counts, b.lo[d], b.hi[d], tols, &mut report)?;
    structural_checks(cat, counts, tols, &mut report)?;
    seam_checks(cat, tols, &mut report)?;

    if profile.family.kind == FamilyKind::Horospheres && profile.lo() <= ASYMPTOTE_S {
        let h0 = (profile.family.n - 1) as f64;
        let gap = (cat.half().map.height(ASYMPTOTE_S)? + std::f64::consts::FRAC_PI_2 / h0).abs();
        report.push(Check::max("asymptote", [gap], tols.asymptote));
    }
    Ok(report)
}

/// Constant-angle graph: theta spread over the grid, distance from
/// sqrt(1 - rho^2), and minimality.
pub fn verify_constant_angle(g: &FsAGraph, counts: &[usize], mode: JetMode, tol: f64) -> Result<VerificationReport> {
    let profile = &g.map.profile;
    let mut report = VerificationReport::new("constant_angle", &g.immersion.name, "");
    report.env("jet_mode", mode.label());
    report.env("grid", format!("{counts:?}"));
    let (rho, _) = profile.rho_at(profile.lo())?;
    let expected = (1.0 - rho * rho).sqrt();
    report.env("rho", format!("{rho:.17e}"));
    let grid = piece_grid(g, counts)?;
    let mut thetas = Vec::new();
    let mut h = Vec::new();
    for s in sample_grid(&g.immersion, &grid, mode)? {
        match s.data() {
            Some(d) => {
                thetas.push(d.theta.abs());
                h.push(d.h);
            }
            None => report.exclude("degenerate"),
        }
    }
    let lo = thetas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    report.push(Check::max("theta_spread", [hi - lo], tol));
    report.push(Check::max("theta_value", thetas.iter().map(|t| t - expected), tol));
    report.push(Check::max("minimal", h, CATENOID_TOL));
    Ok(report)
}
