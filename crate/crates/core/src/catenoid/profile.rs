//! The profile equation rho' = H_s rho + H and the height a(s) = int rho/sqrt(1 - rho^2).

use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::tolerances::SINGULAR_ZONE;

use super::family::ParallelFamily;

/// |rho - 1| below which an end value counts as the singular limit rho = 1.
const END_SNAP: f64 = 1e-9;
/// RK4 steps per output grid cell.
const SUBSTEPS: usize = 4;
/// Fewest RK4 steps a truncated profile may keep.
const MIN_STEPS: usize = 16;
/// Gauss panels across a singular zone (in the square-root variable).
const ZONE_PANELS: usize = 16;

/// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

pub(crate) fn gauss(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        sum += w * (f(m - r * x) + f(m + r * x));
    }
    sum * r
}

/// A solved profile on a uniform grid, with rho interpolated by cubic
/// Hermite pieces using the ODE slopes.
#[derive(Debug, Clone)]
pub struct ProfileSolution {
    pub family: Arc<ParallelFamily>,
    pub h_target: f64,
    pub s_grid: Vec<f64>,
    pub rho: Vec<f64>,
    pub drho: Vec<f64>,
    pub h_s: Vec<f64>,
    /// a(s_k), measured from `anchor`.
    pub a: Vec<f64>,
    pub singular_endpoints: Vec<f64>,
    /// The integration stopped early because rho left (0, 1).
    pub truncated: bool,
    /// Where a = 0: the start point of the integration.
    pub anchor: f64,
    lo_singular: bool,
    hi_singular: bool,
    zone: f64,
    /// int from the regular start to s_k, for the cumulative height.
    regular_cum: Vec<f64>,
    zone_lo_value: f64,
    anchor_raw: f64,
}

/// Integrate the profile equation by fixed-step RK4 from (s0, rho0) to s_end,
/// reporting `steps` uniform cells.
///
/// The equation is linear with smooth coefficients, so a start at rho0 = 1
/// needs no special treatment; only the height integral is singular there.
pub fn solve_profile(
    family: Arc<ParallelFamily>,
    h_target: f64,
    s0: f64,
    rho0: f64,
    s_end: f64,
    steps: usize,
) -> Result<ProfileSolution> {
    family.check_s(s0)?;
    if !(rho0 > 0.0 && rho0 <= 1.0) {
        return Err(GeomError::spec(format!("rho0={rho0} must lie in (0, 1]")));
    }
    if !s_end.is_finite() || s_end == s0 {
        return Err(GeomError::spec("profile range must have positive length"));
    }
    family.check_s(s_end)?;
    if steps < MIN_STEPS {
        return Err(GeomError::spec(format!("at least {MIN_STEPS} profile steps required")));
    }
    let step = (s_end - s0) / steps as f64;
    if step.abs() < 1e-12 {
        return Err(GeomError::Numerical("profile step underflow".into()));
    }
    let rhs = |s: f64, y: f64| -> Result<f64> { Ok(family.h_s(s)? * y + h_target) };
    let start_singular = rho0 == 1.0;
    if start_singular && rhs(s0, 1.0)?.abs() < 1e-8 {
        return Err(GeomError::Degenerate(format!("rho' vanishes at the singular start s={s0}")));
    }

    let mut s_vals = vec![s0];
    let mut y_vals = vec![rho0];
    let mut truncated = false;
    let mut end_singular = false;
    for k in 0..steps {
        let s = s0 + step * k as f64;
        let y = *y_vals.last().expect("non-empty");
        let last = k + 1 == steps;
        let mut y_next = y;
        let sub = step / SUBSTEPS as f64;
        for j in 0..SUBSTEPS {
            let x = s + sub * j as f64;
            let k1 = rhs(x, y_next)?;
            let k2 = rhs(x + sub / 2.0, y_next + sub / 2.0 * k1)?;
            let k3 = rhs(x + sub / 2.0, y_next + sub / 2.0 * k2)?;
            let k4 = rhs(x + sub, y_next + sub * k3)?;
            y_next += sub / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if last && (y_next - 1.0).abs() <= END_SNAP {
            // Returned to the singular value: the far seam of a compact family.
            y_next = 1.0;
            end_singular = true;
        } else if !(y_next > 0.0 && y_next < 1.0) {
            truncated = true;
            break;
        }
        s_vals.push(if last { s_end } else { s0 + step * (k + 1) as f64 });
        y_vals.push(y_next);
    }
    if s_vals.len() <= MIN_STEPS {
        return Err(GeomError::Domain(format!(
            "rho leaves (0, 1) after {} steps: no catenoid branch for these parameters",
            s_vals.len() - 1
        )));
    }
    let slopes: Vec<f64> = s_vals.iter().zip(&y_vals).map(|(&s, &y)| rhs(s, y)).collect::<Result<_>>()?;
    let h_vals: Vec<f64> = s_vals.iter().map(|&s| family.h_s(s).unwrap_or(f64::NAN)).collect();

    let forward = step > 0.0;
    let (lo_singular, hi_singular) = if forward { (start_singular, end_singular) } else { (end_singular, start_singular) };
    let mut s_grid = s_vals;
    let mut rho = y_vals;
    let mut drho = slopes;
    let mut h_s = h_vals;
    if !forward {
        s_grid.reverse();
        rho.reverse();
        drho.reverse();
        h_s.reverse();
    }
    let mut singular_endpoints = Vec::new();
    if lo_singular {
        singular_endpoints.push(s_grid[0]);
    }
    if hi_singular {
        singular_endpoints.push(*s_grid.last().expect("non-empty"));
    }
    let zone = SINGULAR_ZONE.min((s_grid[s_grid.len() - 1] - s_grid[0]) / 4.0);
    let mut ps = ProfileSolution {
        family,
        h_target,
        s_grid,
        rho,
        drho,
        h_s,
        a: Vec::new(),
        singular_endpoints,
        truncated,
        anchor: s0,
        lo_singular,
        hi_singular,
        zone,
        regular_cum: Vec::new(),
        zone_lo_value: 0.0,
        anchor_raw: 0.0,
    };
    ps.prepare_quadrature();
    Ok(ps)
}

impl ProfileSolution {
    pub fn lo(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn hi(&self) -> f64 {
        self.s_grid[self.s_grid.len() - 1]
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.lo() && s <= self.hi()
    }

    pub fn is_singular_at(&self, s: f64) -> bool {
        self.singular_endpoints.contains(&s)
    }

    fn cell(&self, s: f64) -> usize {
        let n = self.s_grid.len() - 1;
        let h = (self.hi() - self.lo()) / n as f64;
        let k = ((s - self.lo()) / h).floor();
        let mut k = if k.is_finite() && k > 0.0 { (k as usize).min(n - 1) } else { 0 };
        // Uniform spacing up to rounding; settle on the bracketing cell.
        while k > 0 && s < self.s_grid[k] {
            k -= 1;
        }
        while k + 1 < n && s > self.s_grid[k + 1] {
            k += 1;
        }
        k
    }

    /// 1 - rho and rho' at s by cubic Hermite interpolation of the deficit
    /// 1 - rho, which keeps its relative accuracy next to a seam.
    pub fn deficit_at(&self, s: f64) -> Result<(f64, f64)> {
        if !self.contains(s) {
            return Err(GeomError::Domain(format!("s={s} outside profile range [{}, {}]", self.lo(), self.hi())));
        }
        let k = self.cell(s);
        let (s0, s1) = (self.s_grid[k], self.s_grid[k + 1]);
        let h = s1 - s0;
        let t = (s - s0) / h;
        let (y0, y1) = (1.0 - self.rho[k], 1.0 - self.rho[k + 1]);
        let (d0, d1) = (-self.drho[k] * h, -self.drho[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1;
        let slope = ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * d0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * d1) / h;
        Ok((value.max(0.0), -slope))
    }

    /// rho and rho' at s.
    pub fn rho_at(&self, s: f64) -> Result<(f64, f64)> {
        let (q, d) = self.deficit_at(s)?;
        Ok((1.0 - q, d))
    }

    /// rho / sqrt(1 - rho^2) and 1 - rho^2.
    fn slope_parts(&self, s: f64) -> Result<(f64, f64, f64)> {
        let (q, _) = self.deficit_at(s)?;
        let one_minus_sq = q * (2.0 - q);
        Ok((1.0 - q, one_minus_sq, (1.0 - q) / one_minus_sq.sqrt()))
    }

    fn integrand(&self, s: f64) -> f64 {
        self.slope_parts(s).expect("quadrature node inside the profile").2
    }

    /// int_{lo}^{s} near a singular lower end, with s = lo + w^2.
    fn zone_lo(&self, s: f64) -> f64 {
        let lo = self.lo();
        let top = (s - lo).max(0.0).sqrt();
        if top == 0.0 {
            return 0.0;
        }
        let f = |w: f64| self.integrand(lo + w * w) * 2.0 * w;
        (0..ZONE_PANELS)
            .map(|i| gauss(&f, top * i as f64 / ZONE_PANELS as f64, top * (i + 1) as f64 / ZONE_PANELS as f64))
            .sum()
    }

    /// int_{s}^{hi} near a singular upper end, with s = hi - w^2.
    fn zone_hi(&self, s: f64) -> f64 {
        let hi = self.hi();
        let top = (hi - s).max(0.0).sqrt();
        if top == 0.0 {
            return 0.0;
        }
        let f = |w: f64| self.integrand(hi - w * w) * 2.0 * w;
        (0..ZONE_PANELS)
            .map(|i| gauss(&f, top * i as f64 / ZONE_PANELS as f64, top * (i + 1) as f64 / ZONE_PANELS as f64))
            .sum()
    }

    fn regular_start(&self) -> f64 {
        if self.lo_singular {
            self.lo() + self.zone
        } else {
            self.lo()
        }
    }

    fn regular_end(&self) -> f64 {
        if self.hi_singular {
            self.hi() - self.zone
        } else {
            self.hi()
        }
    }

    fn prepare_quadrature(&mut self) {
        let start = self.regular_start();
        let f = |s: f64| self.integrand(s);
        let mut cum = vec![0.0; self.s_grid.len()];
        for k in 1..self.s_grid.len() {
            let a = self.s_grid[k - 1].max(start);
            let b = self.s_grid[k];
            cum[k] = cum[k - 1] + if b > a { gauss(&f, a, b) } else { 0.0 };
        }
        self.regular_cum = cum;
        self.zone_lo_value = if self.lo_singular { self.zone_lo(start) } else { 0.0 };
        self.anchor_raw = 0.0;
        self.anchor_raw = self.raw_height(self.anchor);
        self.a = self.s_grid.iter().map(|&s| self.raw_height(s) - self.anchor_raw).collect();
    }

    /// int_{regular start}^{s} for s in the regular part.
    fn regular(&self, s: f64) -> f64 {
        let start = self.regular_start();
        let k = self.cell(s);
        let from = self.s_grid[k].max(start);
        let base = if self.s_grid[k] >= start { self.regular_cum[k] } else { 0.0 };
        let f = |x: f64| self.integrand(x);
        base + if s > from { gauss(&f, from, s) } else { 0.0 }
    }

    /// int_{lo}^{s}.
    fn raw_height(&self, s: f64) -> f64 {
        if self.lo_singular && s <= self.regular_start() {
            return self.zone_lo(s);
        }
        if self.hi_singular && s >= self.regular_end() {
            let end = self.regular_end();
            return self.zone_lo_value + self.regular(end) + self.zone_hi(end) - self.zone_hi(s);
        }
        self.zone_lo_value + self.regular(s)
    }

    /// a(s) = int_{anchor}^{s} rho / sqrt(1 - rho^2).
    pub fn height(&self, s: f64) -> Result<f64> {
        if !self.contains(s) {
            return Err(GeomError::Domain(format!("s={s} outside profile range [{}, {}]", self.lo(), self.hi())));
        }
        Ok(self.raw_height(s) - self.anchor_raw)
    }

    /// a, a' and a'' at an interior point; a' and a'' from rho and the
    /// profile equation.
    pub fn height_jet(&self, s: f64) -> Result<(f64, f64, f64)> {
        let a = self.height(s)?;
        let (rho, q, a1) = self.slope_parts(s)?;
        if q <= 0.0 {
            return Err(GeomError::Domain(format!("height derivative unbounded at the seam s={s}")));
        }
        let drho = self.family.h_s(s)? * rho + self.h_target;
        Ok((a, a1, drho / (q * q.sqrt())))
    }

    /// Angle function 1/sqrt(1 + a'^2) = sqrt(1 - rho^2) of the graph.
    pub fn theta_at(&self, s: f64) -> Result<f64> {
        Ok(self.slope_parts(s)?.1.sqrt())
    }

    /// a at the far end of the range: t_2 = a_r(pi - r) for Delaunay profiles.
    pub fn end_height(&self) -> f64 {
        if self.anchor == self.lo() {
            self.a[self.a.len() - 1]
        } else {
            self.a[0]
        }
    }

    pub fn steps(&self) -> usize {
        self.s_grid.len() - 1
    }
}

/// Closed-form rho for families that have one (H = 0, rho(r) = 1).
pub fn closed_rho(family: &ParallelFamily, r: f64, s: f64) -> Option<f64> {
    use super::family::FamilyKind::*;
    let m = (family.n - 1) as i32;
    match family.kind {
        SpheresEuclidean => Some((r / s).powi(m)),
        SpheresHyperbolic => Some((r.sinh() / s.sinh()).powi(m)),
        SpheresSpherical => Some((r.sin() / s.sin()).powi(m)),
        Horospheres => Some((m as f64 * (s - r)).exp()),
        Planes => Some(1.0),
        Equidistants => None,
    }
}
