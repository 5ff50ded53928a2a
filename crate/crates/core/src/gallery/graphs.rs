use std::sync::Arc;

use crate::ambient::{AmbientProduct, AmbientSpace};
use crate::error::Result;
use crate::real::Real;
use crate::surface::{graph_residuals, GenericMap, GraphResiduals, Immersion, ParamBox};

/// Height functions whose graphs the gallery builds.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphField {
    /// a * x_i (1-based i) on the half-space model.
    Linear { a: f64, i: usize },
    /// a (z - x y / 2) on Nil.
    NilHeight { a: f64 },
    /// a z on Sol.
    SolHeight { a: f64 },
    /// sum a_i x_i + b atan(x_n / x_{n-1}).
    Arctan { a: Vec<f64>, b: f64, n: usize },
    /// x_1^2 (negative control).
    Parabola,
}

impl GraphField {
    pub fn eval<T: Real>(&self, x: &[T]) -> T {
        match self {
            GraphField::Linear { a, i } => x[i - 1] * *a,
            GraphField::NilHeight { a } => (x[2] - x[0] * x[1] * 0.5) * *a,
            GraphField::SolHeight { a } => x[2] * *a,
            GraphField::Arctan { a, b, n } => {
                let mut acc = T::cst(0.0);
                for (ai, xi) in a.iter().zip(x) {
                    acc += *xi * *ai;
                }
                acc + (x[n - 1] / x[n - 2]).atan() * *b
            }
            GraphField::Parabola => x[0] * x[0],
        }
    }
}

struct GraphMap {
    field: GraphField,
    n: usize,
}

impl GenericMap for GraphMap {
    fn param_dim(&self) -> usize {
        self.n
    }

    fn out_dim(&self) -> usize {
        self.n + 1
    }

    fn map<T: Real>(&self, u: &[T]) -> Vec<T> {
        let mut out = u.to_vec();
        out.push(self.field.eval(u));
        out
    }
}

/// graph(u) = {(x, u(x))} over a chart space.
#[derive(Debug, Clone)]
pub struct GraphSurface {
    pub space: AmbientSpace,
    pub field: GraphField,
    pub immersion: Immersion,
}

impl GraphSurface {
    pub fn new(space: AmbientSpace, field: GraphField, sample_box: ParamBox, base_point: Vec<f64>, name: &str) -> Self {
        let n = space.dim();
        let map = GraphMap { field: field.clone(), n };
        let immersion = Immersion::new(AmbientProduct::riemannian(space.clone()), Arc::new(map), sample_box, base_point, name);
        Self { space, field, immersion }
    }

    pub fn u(&self, x: &[f64]) -> f64 {
        self.field.eval(x)
    }

    pub fn residuals(&self, p: &[f64], h: f64) -> Result<GraphResiduals> {
        let f = |x: &[f64]| self.field.eval(x);
        graph_residuals(&self.space, &f, p, h)
    }
}
