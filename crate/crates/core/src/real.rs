//! Scalar abstraction shared by plain `f64` evaluation and second-order jets.
//!
//! Surface maps are written once, generically over [`Real`], and evaluated
//! either on `f64` (values, finite differences) or on [`Jet`] (exact first and
//! second derivatives by forward-mode differentiation).

use nalgebra::{Const, DMatrix, DVector, U1};
use num_dual::{Dual2SVec64, DualNum};

use crate::surface::SurfaceMap;

/// Largest number of surface parameters supported by the jet type.
pub const MAX_PARAMS: usize = 8;

/// Second-order forward jet in up to [`MAX_PARAMS`] variables.
pub type Jet = Dual2SVec64<MAX_PARAMS>;

pub trait Real: DualNum<Primitive = f64> + Copy + Send + Sync {
    fn value(&self) -> f64;

    /// Apply a scalar function g to `self`, given g(x0), g'(x0), g''(x0) at the
    /// real part x0.
    fn compose(&self, f0: f64, f1: f64, f2: f64) -> Self;

    fn cst(x: f64) -> Self {
        Self::from(x)
    }

    /// Evaluate a type-erased surface map on this scalar type. Lets generic
    /// maps compose with stored sub-maps (twisting of a base, leaf of a family).
    fn eval_on(map: &dyn SurfaceMap, u: &[Self]) -> Vec<Self>;
}

impl Real for f64 {
    fn value(&self) -> f64 {
        *self
    }

    fn compose(&self, f0: f64, _f1: f64, _f2: f64) -> Self {
        f0
    }

    fn eval_on(map: &dyn SurfaceMap, u: &[Self]) -> Vec<Self> {
        map.eval(u)
    }
}

impl Real for Jet {
    fn value(&self) -> f64 {
        self.re
    }

    fn compose(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let v1 = self.v1 * f1;
        let v2 = self.v2 * f1 + self.v1.tr_mul(&self.v1) * f2;
        Jet::new(f0, v1, v2)
    }

    fn eval_on(map: &dyn SurfaceMap, u: &[Self]) -> Vec<Self> {
        map.eval_jet(u).expect("sub-map without closed-form jets used inside a closed-form map")
    }
}

/// Seed jets for the parameter point `u`.
pub fn seed(u: &[f64]) -> Vec<Jet> {
    assert!(u.len() <= MAX_PARAMS, "at most {MAX_PARAMS} parameters");
    u.iter()
        .enumerate()
        .map(|(i, &x)| Jet::from_re(x).derivative(i))
        .collect()
}

pub fn constant(x: f64) -> Jet {
    Jet::from(x)
}

/// Value, gradient and Hessian of a jet restricted to the first `d` variables.
pub fn unpack(x: &Jet, d: usize) -> (f64, DVector<f64>, DMatrix<f64>) {
    let g = x.v1.unwrap_generic(U1, Const::<MAX_PARAMS>);
    let h = x
        .v2
        .unwrap_generic(Const::<MAX_PARAMS>, Const::<MAX_PARAMS>);
    let grad = DVector::from_fn(d, |i, _| g[(0, i)]);
    let hess = DMatrix::from_fn(d, d, |i, j| 0.5 * (h[(i, j)] + h[(j, i)]));
    (x.re, grad, hess)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_matches_builtin_sin() {
        let u = seed(&[0.3, -0.7]);
        let x = u[0] * u[1] + u[0];
        let a = x.sin();
        let b = x.compose(x.re.sin(), x.re.cos(), -x.re.sin());
        let (va, ga, ha) = unpack(&a, 2);
        let (vb, gb, hb) = unpack(&b, 2);
        assert!((va - vb).abs() < 1e-15);
        assert!((ga - gb).norm() < 1e-14);
        assert!((ha - hb).norm() < 1e-14);
    }

    #[test]
    fn unpack_quadratic() {
        let u = seed(&[2.0, 3.0]);
        let f = u[0] * u[0] * u[1];
        let (v, g, h) = unpack(&f, 2);
        assert_eq!(v, 12.0);
        assert_eq!(g.as_slice(), &[12.0, 4.0]);
        assert_eq!(h[(0, 0)], 6.0);
        assert_eq!(h[(0, 1)], 4.0);
        assert_eq!(h[(1, 1)], 0.0);
    }
}
