use nalgebra::DVector;
use rayon::prelude::*;

use super::{fundamental_data, FundamentalData, Immersion, ImmersionJet, JetMode, ParamBox};
use crate::error::{GeomError, Result};
use crate::tolerances::MAX_GRID_POINTS;

/// Number of steps used to carry the base-point orientation to grid point 0.
const ORIENTATION_WALK: usize = 64;

/// Tensor grid over a parameter box, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub counts: Vec<usize>,
    pub bounds: ParamBox,
}

impl GridSpec {
    pub fn new(counts: Vec<usize>, bounds: ParamBox) -> Result<Self> {
        if counts.len() != bounds.dim() {
            return Err(GeomError::spec(format!(
                "grid has {} axes, parameter box has {}",
                counts.len(),
                bounds.dim()
            )));
        }
        if counts.iter().any(|&c| c < 2) {
            return Err(GeomError::spec("grid counts must be at least 2 per axis"));
        }
        let total = counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c));
        match total {
            Some(t) if t <= MAX_GRID_POINTS => Ok(Self { counts, bounds }),
            _ => Err(GeomError::spec(format!("grid exceeds {MAX_GRID_POINTS} points"))),
        }
    }

    /// Same count on every axis of the surface's sampling box.
    pub fn uniform(surf: &Immersion, count: usize) -> Result<Self> {
        Self::new(vec![count; surf.param_dim()], surf.sample_box.clone())
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multi-index of flat position k (last axis fastest).
    pub fn index(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.counts.len()];
        for a in (0..self.counts.len()).rev() {
            idx[a] = k % self.counts[a];
            k /= self.counts[a];
        }
        idx
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.counts).fold(0, |acc, (i, c)| acc * c + i)
    }

    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(a, &i)| {
                let (lo, hi) = (self.bounds.lo[a], self.bounds.hi[a]);
                lo + (hi - lo) * i as f64 / (self.counts[a] - 1) as f64
            })
            .collect()
    }

    /// Earlier grid point used to propagate orientation: the last nonzero axis
    /// index decremented.
    pub fn predecessor(&self, k: usize) -> Option<usize> {
        let mut idx = self.index(k);
        let a = idx.iter().rposition(|&i| i > 0)?;
        idx[a] -= 1;
        Some(self.flat(&idx))
    }
}

pub fn grid_points(spec: &GridSpec) -> Vec<Vec<f64>> {
    (0..spec.len()).map(|k| spec.point(&spec.index(k))).collect()
}

/// Geometric data at one grid point.
#[derive(Debug, Clone)]
pub struct Sample {
    pub index: Vec<usize>,
    pub u: Vec<f64>,
    pub outcome: Result<(ImmersionJet, FundamentalData)>,
}

impl Sample {
    pub fn data(&self) -> Option<&FundamentalData> {
        self.outcome.as_ref().ok().map(|(_, d)| d)
    }

    pub fn jet(&self) -> Option<&ImmersionJet> {
        self.outcome.as_ref().ok().map(|(j, _)| j)
    }
}

fn align(data: &mut FundamentalData, reference: &DVector<f64>) {
    if data.normal.dot(reference) < 0.0 {
        data.flip();
    }
}

/// Orient at the base point (theta >= 0) and walk a straight parameter path
/// to `target`, returning the carried normal there.
fn walk_orientation(surf: &Immersion, target: &[f64], mode: JetMode) -> Result<DVector<f64>> {
    let base = &surf.base_point;
    let mut data = surf.fundamental(base, mode)?;
    if data.theta < 0.0 {
        data.flip();
    }
    let mut normal = data.normal.clone();
    for step in 1..=ORIENTATION_WALK {
        let t = step as f64 / ORIENTATION_WALK as f64;
        let u: Vec<f64> = base.iter().zip(target).map(|(b, x)| b + t * (x - b)).collect();
        if let Ok(mut d) = surf.fundamental(&u, mode) {
            align(&mut d, &normal);
            normal = d.normal;
        }
    }
    Ok(normal)
}

/// Sample a grid in parallel and orient the normals continuously, starting
/// from theta >= 0 at the surface's base point.
pub fn sample_grid(surf: &Immersion, spec: &GridSpec, mode: JetMode) -> Result<Vec<Sample>> {
    let mut samples: Vec<Sample> = (0..spec.len())
        .into_par_iter()
        .map(|k| {
            let index = spec.index(k);
            let u = spec.point(&index);
            let outcome = surf.jet(&u, mode).and_then(|jet| {
                let data = fundamental_data(surf, &jet)?;
                Ok((jet, data))
            });
            Sample { index, u, outcome }
        })
        .collect();
    if samples.is_empty() {
        return Err(GeomError::spec("empty sample grid"));
    }
    let start = walk_orientation(surf, &samples[0].u, mode)?;
    // Reference normal per point after alignment; failed points inherit the
    // reference of the last aligned point.
    let mut reference: Vec<DVector<f64>> = Vec::with_capacity(samples.len());
    let mut last = start;
    for k in 0..samples.len() {
        let r = match spec.predecessor(k) {
            Some(p) => reference[p].clone(),
            None => last.clone(),
        };
        if let Ok((_, data)) = &mut samples[k].outcome {
            align(data, &r);
            last = data.normal.clone();
            reference.push(data.normal.clone());
        } else {
            reference.push(last.clone());
        }
    }
    Ok(samples)
}
