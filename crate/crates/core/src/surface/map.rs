use std::sync::Arc;

use crate::real::{Jet, Real};

/// A smooth map from a parameter box into representation coordinates.
///
/// `eval_jet` returns `None` when the map has no closed-form derivatives; jets
/// are then taken by central differences.
pub trait SurfaceMap: Send + Sync {
    fn param_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn eval(&self, u: &[f64]) -> Vec<f64>;
    fn eval_jet(&self, u: &[Jet]) -> Option<Vec<Jet>>;
}

/// Maps written once for every [`Real`] scalar type.
pub trait GenericMap: Send + Sync {
    fn param_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn map<T: Real>(&self, u: &[T]) -> Vec<T>;
}

impl<G: GenericMap> SurfaceMap for G {
    fn param_dim(&self) -> usize {
        GenericMap::param_dim(self)
    }

    fn out_dim(&self) -> usize {
        GenericMap::out_dim(self)
    }

    fn eval(&self, u: &[f64]) -> Vec<f64> {
        self.map(u)
    }

    fn eval_jet(&self, u: &[Jet]) -> Option<Vec<Jet>> {
        Some(self.map(u))
    }
}

type PlainFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A map known only through plain evaluation (finite-difference jets).
pub struct FnMap {
    param_dim: usize,
    out_dim: usize,
    f: Arc<PlainFn>,
}

impl FnMap {
    pub fn new(param_dim: usize, out_dim: usize, f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self { param_dim, out_dim, f: Arc::new(f) }
    }
}

impl SurfaceMap for FnMap {
    fn param_dim(&self) -> usize {
        self.param_dim
    }

    fn out_dim(&self) -> usize {
        self.out_dim
    }

    fn eval(&self, u: &[f64]) -> Vec<f64> {
        (self.f)(u)
    }

    fn eval_jet(&self, _u: &[Jet]) -> Option<Vec<Jet>> {
        None
    }
}

/// Hides the closed-form jets of another map, forcing finite differences.
pub struct FdOnly(pub Arc<dyn SurfaceMap>);

impl SurfaceMap for FdOnly {
    fn param_dim(&self) -> usize {
        self.0.param_dim()
    }

    fn out_dim(&self) -> usize {
        self.0.out_dim()
    }

    fn eval(&self, u: &[f64]) -> Vec<f64> {
        self.0.eval(u)
    }

    fn eval_jet(&self, _u: &[Jet]) -> Option<Vec<Jet>> {
        None
    }
}

/// Axis-aligned parameter box. `hard` boxes are the true domain of the map,
/// so finite-difference stencils must stay inside; soft boxes only bound
/// sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub hard: bool,
}

impl ParamBox {
    pub fn soft(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        Self { lo, hi, hard: false }
    }

    pub fn hard(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        Self { lo, hi, hard: true }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, u: &[f64], margin: f64) -> bool {
        u.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (a, b))| *x >= a + margin && *x <= b - margin)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }
}
