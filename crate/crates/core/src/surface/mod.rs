//! Pointwise geometry of hypersurfaces of M x R: fundamental forms, unit
//! normal, angle function, shape operator, Riemannian and Lorentzian mean
//! curvature, and the height-gradient diagnostics built on them.

mod graph;
mod grid;
mod map;
mod patches;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::ambient::{AmbientProduct, AmbientSpace};
use crate::error::{GeomError, Result};
use crate::real::{seed, unpack, MAX_PARAMS};
use crate::tolerances::{FD_STEP, HORIZONTAL_TOL, RANK_TOL, SPACELIKE_TOL};

pub use graph::{graph_residuals, GraphResiduals};
pub use grid::{grid_points, sample_grid, GridSpec, Sample};
pub use map::{FdOnly, FnMap, GenericMap, ParamBox, SurfaceMap};
pub use patches::{lorentz_identity_suite, mixed_sign_residual, patch_spaces, RandomPatch};

/// How derivatives of a parametrization are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JetMode {
    /// Exact forward-mode jets where the map provides them, else central
    /// differences with the default step.
    Closed,
    /// Central differences with the given step.
    Fd(f64),
}

impl JetMode {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "closed" {
            return Ok(JetMode::Closed);
        }
        if t == "fd" {
            return Ok(JetMode::Fd(FD_STEP));
        }
        if let Some(h) = t.strip_prefix("fd:") {
            let h: f64 = h
                .parse()
                .map_err(|_| GeomError::spec(format!("bad finite-difference step in '{t}'")))?;
            if !(h > 0.0) {
                return Err(GeomError::spec("finite-difference step must be positive"));
            }
            return Ok(JetMode::Fd(h));
        }
        Err(GeomError::spec(format!("jet mode '{t}' is not 'closed' or 'fd:<h>'")))
    }

    pub fn label(&self) -> String {
        match self {
            JetMode::Closed => "closed".into(),
            JetMode::Fd(h) => format!("fd:{h:e}"),
        }
    }
}

/// A parametrized hypersurface of M x R.
#[derive(Clone)]
pub struct Immersion {
    pub ambient: AmbientProduct,
    pub map: Arc<dyn SurfaceMap>,
    /// True parameter domain when the map is not defined everywhere.
    pub domain: Option<ParamBox>,
    /// Default sampling box.
    pub sample_box: ParamBox,
    /// Parameter point where the normal is oriented so that theta >= 0.
    pub base_point: Vec<f64>,
    pub name: String,
}

impl std::fmt::Debug for Immersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Immersion")
            .field("name", &self.name)
            .field("ambient", &self.ambient.base.name())
            .field("param_dim", &self.param_dim())
            .finish()
    }
}

impl Immersion {
    pub fn new(
        ambient: AmbientProduct,
        map: Arc<dyn SurfaceMap>,
        sample_box: ParamBox,
        base_point: Vec<f64>,
        name: impl Into<String>,
    ) -> Self {
        Self { ambient, map, domain: None, sample_box, base_point, name: name.into() }
    }

    pub fn with_domain(mut self, domain: ParamBox) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn param_dim(&self) -> usize {
        self.map.param_dim()
    }

    pub fn eval(&self, u: &[f64]) -> DVector<f64> {
        DVector::from_vec(self.map.eval(u))
    }

    /// The same surface with closed-form jets hidden.
    pub fn fd_only(&self) -> Self {
        let mut s = self.clone();
        s.map = Arc::new(FdOnly(self.map.clone()));
        s
    }

    pub fn jet(&self, u: &[f64], mode: JetMode) -> Result<ImmersionJet> {
        jet_of(self.map.as_ref(), self.domain.as_ref(), u, mode)
    }

    pub fn fundamental(&self, u: &[f64], mode: JetMode) -> Result<FundamentalData> {
        let jet = self.jet(u, mode)?;
        fundamental_data(self, &jet)
    }
}

/// Value and first/second derivatives of a parametrization at u.
#[derive(Debug, Clone)]
pub struct ImmersionJet {
    pub u: Vec<f64>,
    pub value: DVector<f64>,
    /// Columns are dPsi/du_i.
    pub j: DMatrix<f64>,
    /// `h2[i * d + j]` = d^2 Psi / du_i du_j, symmetric by construction.
    pub h2: Vec<DVector<f64>>,
    pub exact: bool,
}

impl ImmersionJet {
    pub fn dim(&self) -> usize {
        self.j.ncols()
    }

    pub fn second(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.h2[i * self.dim() + j]
    }
}

/// Jet of an arbitrary map (also used for hypersurfaces of M).
pub fn jet_of(map: &dyn SurfaceMap, domain: Option<&ParamBox>, u: &[f64], mode: JetMode) -> Result<ImmersionJet> {
    let d = map.param_dim();
    if u.len() != d {
        return Err(GeomError::spec(format!("parameter point has {} entries, expected {d}", u.len())));
    }
    if mode == JetMode::Closed && d <= MAX_PARAMS {
        if let Some(out) = map.eval_jet(&seed(u)) {
            let m = out.len();
            let mut value = DVector::zeros(m);
            let mut j = DMatrix::zeros(m, d);
            let mut h2 = vec![DVector::zeros(m); d * d];
            for (k, x) in out.iter().enumerate() {
                let (v, g, h) = unpack(x, d);
                value[k] = v;
                for a in 0..d {
                    j[(k, a)] = g[a];
                    for b in 0..d {
                        h2[a * d + b][k] = h[(a, b)];
                    }
                }
            }
            check_finite(&value, u)?;
            return Ok(ImmersionJet { u: u.to_vec(), value, j, h2, exact: true });
        }
    }
    let h = match mode {
        JetMode::Fd(h) => h,
        JetMode::Closed => FD_STEP,
    };
    fd_jet(map, domain, u, h)
}

fn check_finite(v: &DVector<f64>, u: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(GeomError::Numerical(format!("non-finite evaluation at {u:?}")))
    }
}

fn fd_jet(map: &dyn SurfaceMap, domain: Option<&ParamBox>, u: &[f64], h: f64) -> Result<ImmersionJet> {
    let d = u.len();
    if let Some(dom) = domain {
        if !dom.contains(u, 2.0 * h) {
            return Err(GeomError::Domain(format!("{u:?} is within 2h of the parameter domain boundary")));
        }
    }
    let f = |shift: &[(usize, f64)]| -> Result<DVector<f64>> {
        let mut x = u.to_vec();
        for &(i, s) in shift {
            x[i] += s;
        }
        let v = DVector::from_vec(map.eval(&x));
        check_finite(&v, &x)?;
        Ok(v)
    };
    let value = f(&[])?;
    let m = value.len();
    let mut j = DMatrix::zeros(m, d);
    let mut h2 = vec![DVector::zeros(m); d * d];
    for a in 0..d {
        let fp = f(&[(a, h)])?;
        let fm = f(&[(a, -h)])?;
        j.set_column(a, &((&fp - &fm) / (2.0 * h)));
        h2[a * d + a] = (&fp - &value * 2.0 + &fm) / (h * h);
        for b in 0..a {
            let mixed = (f(&[(a, h), (b, h)])? - f(&[(a, h), (b, -h)])? - f(&[(a, -h), (b, h)])?
                + f(&[(a, -h), (b, -h)])?)
                / (4.0 * h * h);
            h2[a * d + b] = mixed.clone();
            h2[b * d + a] = mixed;
        }
    }
    Ok(ImmersionJet { u: u.to_vec(), value, j, h2, exact: false })
}

/// Signed cofactor vector of an r x (r+1) matrix: the generalized cross
/// product, orthogonal to every row and nonzero iff the rows are independent.
pub(crate) fn cofactor_null_vector(rows: &DMatrix<f64>) -> DVector<f64> {
    let r = rows.nrows();
    let c = rows.ncols();
    debug_assert_eq!(r + 1, c);
    DVector::from_fn(c, |k, _| {
        let minor = rows.clone().remove_column(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor.determinant()
    })
}

/// Normal and second fundamental form of a hypersurface with tangent frame
/// `j`, second derivatives `h2`, at coordinates `value`, inside a space whose
/// coordinates are the base representation optionally followed by a height
/// coordinate with metric sign `time_sign`.
pub(crate) struct Hypersurface {
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub normal: DVector<f64>,
    pub b: DMatrix<f64>,
}

pub(crate) fn hypersurface(
    base: &AmbientSpace,
    time_sign: Option<f64>,
    value: &DVector<f64>,
    j: &DMatrix<f64>,
    h2: &[DVector<f64>],
) -> Result<Hypersurface> {
    let m = base.coord_dim();
    let total = m + usize::from(time_sign.is_some());
    let d = j.ncols();
    if value.len() != total || j.nrows() != total {
        return Err(GeomError::spec(format!(
            "surface coordinates have length {}, ambient expects {total}",
            value.len()
        )));
    }
    let x = &value.as_slice()[..m];
    let mut gm = DMatrix::zeros(total, total);
    gm.view_mut((0, 0), (m, m)).copy_from(&base.coord_metric(x));
    if let Some(s) = time_sign {
        gm[(m, m)] = s;
    }
    let g = j.transpose() * &gm * j;
    let g = (&g + g.transpose()) * 0.5;
    let riemannian = time_sign.is_none_or(|s| s > 0.0);
    if riemannian {
        let min_eig = g.clone().symmetric_eigenvalues().min();
        if !(min_eig > RANK_TOL * RANK_TOL) {
            return Err(GeomError::Degenerate(format!("parametrization not of full rank (min eigenvalue of g = {min_eig:e})")));
        }
    }
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| GeomError::Degenerate("induced metric is not invertible".into()))?;

    let constraint = base.constraint_grad(x);
    let rows_n = d + usize::from(constraint.is_some());
    if rows_n + 1 != total {
        return Err(GeomError::spec(format!(
            "a {d}-dimensional map is not a hypersurface of a {}-dimensional space",
            total - usize::from(constraint.is_some())
        )));
    }
    let mut rows = DMatrix::zeros(rows_n, total);
    let gj = &gm * j;
    for a in 0..d {
        // scale rows so the cofactor vector is well conditioned
        let col = gj.column(a);
        let s = col.amax().max(f64::MIN_POSITIVE);
        rows.set_row(a, &(col.transpose() / s));
    }
    if let Some(cg) = &constraint {
        let s = cg.amax().max(f64::MIN_POSITIVE);
        for k in 0..m {
            rows[(d, k)] = cg[k] / s;
        }
    }
    let mut normal = cofactor_null_vector(&rows);
    let norm2 = (normal.transpose() * &gm * &normal)[(0, 0)];
    let scale = normal.amax();
    if !(scale > 0.0) || norm2 == 0.0 || !norm2.is_finite() {
        return Err(GeomError::Degenerate("normal space is not one-dimensional".into()));
    }
    if riemannian {
        if norm2 <= 0.0 {
            return Err(GeomError::Degenerate("normal has non-positive length".into()));
        }
        normal /= norm2.sqrt();
    } else {
        if norm2 >= 0.0 {
            return Err(GeomError::NotSpacelike(norm2));
        }
        normal /= (-norm2).sqrt();
    }

    let gamma = base.coord_christoffel(x)?;
    let flat_connection = gamma.is_zero();
    let gn = &gm * &normal;
    let mut b = DMatrix::zeros(d, d);
    for a in 0..d {
        for c in a..d {
            let mut acc = h2[a * d + c].clone();
            if !flat_connection {
                let ja = j.column(a).rows(0, m).into_owned();
                let jc = j.column(c).rows(0, m).into_owned();
                let corr = gamma.apply(&ja, &jc);
                for k in 0..m {
                    acc[k] += corr[k];
                }
            }
            let v = acc.dot(&gn);
            b[(a, c)] = v;
            b[(c, a)] = v;
        }
    }
    Ok(Hypersurface { g, g_inv, normal, b })
}

/// Pointwise geometric data of a hypersurface of M x R.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    pub u: Vec<f64>,
    pub point: DVector<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// Unit normal in ambient coordinates.
    pub normal: DVector<f64>,
    pub theta: f64,
    /// Second fundamental form b_ij = <D_i d_j Psi, N>.
    pub b: DMatrix<f64>,
    /// Shape operator g^{-1} b.
    pub a: DMatrix<f64>,
    /// Non-normalized mean curvature trace(A).
    pub h: f64,
    /// Components of grad(xi) in the parameter basis.
    pub grad_xi: DVector<f64>,
    /// <grad xi, grad xi>.
    pub grad_xi_norm2: f64,
    /// -(1 - theta^2)^{-1/2}; `None` at horizontal points.
    pub phi: Option<f64>,
    /// grad(xi)/|grad(xi)|; `None` at horizontal points.
    pub t: Option<DVector<f64>>,
}

impl FundamentalData {
    /// Reverse the orientation of the normal.
    pub fn flip(&mut self) {
        self.normal = -&self.normal;
        self.theta = -self.theta;
        self.b = -&self.b;
        self.a = -&self.a;
        self.h = -self.h;
    }

    pub fn is_horizontal(&self) -> bool {
        self.theta * self.theta > 1.0 - HORIZONTAL_TOL
    }

    /// ||grad xi||^2 + theta^2 - 1.
    pub fn xi_identity_residual(&self) -> f64 {
        self.grad_xi_norm2 + self.theta * self.theta - 1.0
    }

    /// <A X, Y> for parameter-basis vectors.
    pub fn second_form(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.b * y)[(0, 0)]
    }

    pub fn g_norm(&self, x: &DVector<f64>) -> f64 {
        (x.transpose() * &self.g * x)[(0, 0)].max(0.0).sqrt()
    }

    fn phi_t(&self) -> Result<(f64, &DVector<f64>)> {
        match (self.phi, &self.t) {
            (Some(p), Some(t)) => Ok((p, t)),
            _ => Err(GeomError::Horizontal(self.theta * self.theta)),
        }
    }

    /// Eigenvalues of the (g-self-adjoint) shape operator, ascending.
    pub fn principal_curvatures(&self) -> Vec<f64> {
        let l = match self.g.clone().cholesky() {
            Some(c) => c.l(),
            None => return vec![],
        };
        let linv = l.try_inverse().unwrap_or_else(|| DMatrix::identity(self.g.nrows(), self.g.nrows()));
        let s = &linv * &self.b * linv.transpose();
        let s = (&s + s.transpose()) * 0.5;
        let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}

/// All pointwise data from a jet. The normal is the raw cofactor normal; grid
/// sweeps orient it (see [`sample_grid`]).
pub fn fundamental_data(surf: &Immersion, jet: &ImmersionJet) -> Result<FundamentalData> {
    let hs = hypersurface(&surf.ambient.base, Some(surf.ambient.time_sign.value()), &jet.value, &jet.j, &jet.h2)?;
    let m = surf.ambient.base.coord_dim();
    let a = &hs.g_inv * &hs.b;
    let h = a.trace();
    let theta = surf.ambient.time_sign.value() * hs.normal[m];
    let e = DVector::from_fn(jet.dim(), |i, _| jet.j[(m, i)] * surf.ambient.time_sign.value());
    let grad_xi = &hs.g_inv * &e;
    let grad_xi_norm2 = e.dot(&grad_xi);
    let (phi, t) = if theta * theta < 1.0 - HORIZONTAL_TOL && grad_xi_norm2 > 0.0 {
        (Some(-1.0 / (1.0 - theta * theta).sqrt()), Some(&grad_xi / grad_xi_norm2.sqrt()))
    } else {
        (None, None)
    };
    Ok(FundamentalData {
        u: jet.u.clone(),
        point: jet.value.clone(),
        g: hs.g,
        g_inv: hs.g_inv,
        normal: hs.normal,
        theta,
        b: hs.b,
        a,
        h,
        grad_xi,
        grad_xi_norm2,
        phi,
        t,
    })
}

/// <A grad xi, grad xi>; zero exactly when grad xi is an asymptotic direction.
pub fn asymptotic_residual(fd: &FundamentalData) -> f64 {
    fd.second_form(&fd.grad_xi, &fd.grad_xi)
}

/// lambda = <A grad xi, grad xi>/|grad xi|^2 and |A grad xi - lambda grad xi|.
pub fn principal_data(fd: &FundamentalData) -> Result<(f64, f64)> {
    if fd.grad_xi_norm2 <= HORIZONTAL_TOL {
        return Err(GeomError::Horizontal(fd.theta * fd.theta));
    }
    let lambda = asymptotic_residual(fd) / fd.grad_xi_norm2;
    let w = &fd.a * &fd.grad_xi - &fd.grad_xi * lambda;
    Ok((lambda, fd.g_norm(&w)))
}

/// Mean curvature of the horizontal section through the point, phi (H - <AT,T>).
pub fn section_mean_curvature(fd: &FundamentalData) -> Result<f64> {
    let (phi, t) = fd.phi_t()?;
    Ok(phi * (fd.h - fd.second_form(t, t)))
}

/// Lorentzian data at a spacelike point.
#[derive(Debug, Clone)]
pub struct LorentzData {
    /// 2 theta^2 - 1.
    pub causal: f64,
    pub mu: f64,
    /// mu Phi(N).
    pub n_l: DVector<f64>,
    /// <N_L, N_L>_L.
    pub n_l_norm: f64,
    /// Lorentz unit normal computed directly, sign-aligned with `n_l`.
    pub n_l_direct: DVector<f64>,
    pub a_l: DMatrix<f64>,
    pub h_l_direct: f64,
    pub h_l_identity: f64,
}

impl LorentzData {
    pub fn identity_residual(&self) -> f64 {
        (self.h_l_direct - self.h_l_identity).abs()
    }
}

pub fn lorentz_data(surf: &Immersion, jet: &ImmersionJet, fd: &FundamentalData) -> Result<LorentzData> {
    let causal = 2.0 * fd.theta * fd.theta - 1.0;
    if causal <= SPACELIKE_TOL {
        return Err(GeomError::NotSpacelike(causal));
    }
    let (_, t) = fd.phi_t()?;
    let mu = -1.0 / causal.sqrt();
    let lor = surf.ambient.lorentzian();
    let q = jet.value.as_slice();
    let n_l = surf.ambient.phi(&fd.normal) * mu;
    let n_l_norm = lor.inner(q, &n_l, &n_l);

    let hs = hypersurface(&lor.base, Some(-1.0), &jet.value, &jet.j, &jet.h2)?;
    let mut n_d = hs.normal;
    let mut b_l = hs.b;
    if lor.inner(q, &n_d, &n_l) > 0.0 {
        n_d = -n_d;
        b_l = -b_l;
    }
    let a_l = &hs.g_inv * &b_l;
    let h_l_direct = -a_l.trace();
    let att = fd.second_form(t, t);
    let h_l_identity = mu * (1.0 - mu * mu) * att - mu * fd.h;
    Ok(LorentzData { causal, mu, n_l, n_l_norm, n_l_direct: n_d, a_l, h_l_direct, h_l_identity })
}

/// Geometric data of a hypersurface of M itself (leaves, sections, bases of
/// twistings).
#[derive(Debug, Clone)]
pub struct BaseData {
    pub point: DVector<f64>,
    pub g: DMatrix<f64>,
    pub normal: DVector<f64>,
    pub b: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub h: f64,
}

impl BaseData {
    pub fn flip(&mut self) {
        self.normal = -&self.normal;
        self.b = -&self.b;
        self.a = -&self.a;
        self.h = -self.h;
    }
}

pub fn base_hypersurface_data(space: &AmbientSpace, jet: &ImmersionJet) -> Result<BaseData> {
    let hs = hypersurface(space, None, &jet.value, &jet.j, &jet.h2)?;
    let a = &hs.g_inv * &hs.b;
    let h = a.trace();
    Ok(BaseData { point: jet.value.clone(), g: hs.g, normal: hs.normal, b: hs.b, a, h })
}

#[cfg(test)]
mod tests;
