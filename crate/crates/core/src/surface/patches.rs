//! Seeded random spacelike patches for the Lorentzian mean-curvature identity.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{fundamental_data, lorentz_data, GenericMap, Immersion, JetMode, ParamBox};
use crate::ambient::{AmbientProduct, AmbientSpace, Representation, SpaceKind};
use crate::error::{GeomError, Result};
use crate::real::Real;
use crate::report::{Check, VerificationReport};

/// Draws allowed per accepted patch before giving up.
const MAX_DRAWS: usize = 50;
const PATCH_HALF: f64 = 0.2;

/// Graph patch u -> (x(u), t(u)) over a chart or quadric of dimension n:
/// x = base + u + bend u_0 u_1 e_n (projected to the quadric), t a random
/// cubic with small gradient.
#[derive(Debug, Clone)]
pub struct RandomPatch {
    pub space: AmbientSpace,
    base: Vec<f64>,
    bend: f64,
    lin: Vec<f64>,
    quad: Vec<f64>,
    cubic: f64,
}

impl RandomPatch {
    pub fn draw(space: AmbientSpace, rng: &mut ChaCha8Rng) -> Self {
        let n = space.dim();
        let mut base = vec![0.0; space.coord_dim()];
        match space.representation() {
            Representation::Chart => {
                if matches!(space.kind(), SpaceKind::HyperbolicHalfspace { .. }) {
                    base[n - 1] = 1.0;
                }
            }
            Representation::Quadric { .. } => base[n] = 1.0,
        }
        for b in base.iter_mut().take(n) {
            *b += rng.gen_range(-0.3..0.3);
        }
        let bend = rng.gen_range(-0.5..0.5);
        let lin = (0..n).map(|_| rng.gen_range(-0.35..0.35)).collect();
        let quad = (0..n * n).map(|_| rng.gen_range(-0.8..0.8)).collect();
        let cubic = rng.gen_range(-1.0..1.0);
        Self { space, base, bend, lin, quad, cubic }
    }

    pub fn immersion(self, name: &str) -> Immersion {
        let n = self.space.dim();
        let ambient = AmbientProduct::riemannian(self.space.clone());
        let b = ParamBox::soft(vec![-PATCH_HALF; n], vec![PATCH_HALF; n]);
        Immersion::new(ambient, Arc::new(self), b, vec![0.0; n], name)
    }
}

impl GenericMap for RandomPatch {
    fn param_dim(&self) -> usize {
        self.space.dim()
    }

    fn out_dim(&self) -> usize {
        self.space.coord_dim() + 1
    }

    fn map<T: Real>(&self, u: &[T]) -> Vec<T> {
        let n = self.space.dim();
        let mut x: Vec<T> = self.base.iter().map(|&b| T::cst(b)).collect();
        for i in 0..n {
            x[i] += u[i];
        }
        let bump = u[0] * u[1] * self.bend;
        match self.space.representation() {
            Representation::Chart => x[n - 1] += bump,
            Representation::Quadric { signature, level } => {
                x[n] += bump;
                let q = x.iter().zip(signature).fold(T::cst(0.0), |acc, (&v, &s)| acc + v * v * s);
                let scale = (q * (1.0 / level)).sqrt();
                for v in x.iter_mut() {
                    *v /= scale;
                }
            }
        }
        let mut t = u[0] * u[0] * u[0] * self.cubic;
        for i in 0..n {
            t += u[i] * self.lin[i];
            for j in 0..n {
                t += u[i] * u[j] * (0.5 * self.quad[i * n + j]);
            }
        }
        x.push(t);
        x
    }
}

/// Spaces cycled through by the suite.
pub fn patch_spaces() -> Result<Vec<AmbientSpace>> {
    Ok(vec![
        AmbientSpace::euclidean(3)?,
        AmbientSpace::halfspace(3)?,
        AmbientSpace::sphere(3)?,
        AmbientSpace::hyperbolic(2)?,
        AmbientSpace::nil3(),
        AmbientSpace::sol3(),
        AmbientSpace::euclidean(4)?,
    ])
}

/// Compare the direct Lorentzian mean curvature with the identity
/// mu (1 - mu^2) <AT,T> - mu H at one random spacelike point of each of
/// `samples` random patches.
pub fn lorentz_identity_suite(samples: usize, seed: u64, mode: JetMode, tol: f64) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(GeomError::spec("lorentz-identity needs at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spaces = patch_spaces()?;
    let mut report = VerificationReport::new("lorentz_identity", "random_spacelike_patches", &format!("samples={samples}"));
    report.env("seed", seed);
    report.env("jet_mode", mode.label());
    let mut residuals = Vec::with_capacity(samples);
    let mut norms = Vec::with_capacity(samples);
    let mut draws = 0;
    while residuals.len() < samples {
        draws += 1;
        if draws > MAX_DRAWS * samples {
            return Err(GeomError::Numerical(format!("only {} spacelike patches in {draws} draws", residuals.len())));
        }
        let space = spaces[residuals.len() % spaces.len()].clone();
        let patch = RandomPatch::draw(space, &mut rng).immersion("patch");
        let n = patch.param_dim();
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-PATCH_HALF..PATCH_HALF)).collect();
        let jet = patch.jet(&u, mode)?;
        let fd = match fundamental_data(&patch, &jet) {
            Ok(fd) => fd,
            Err(e) => {
                report.exclude(e.kind());
                continue;
            }
        };
        match lorentz_data(&patch, &jet, &fd) {
            Ok(ld) => {
                residuals.push(ld.identity_residual());
                norms.push(ld.n_l_norm + 1.0);
            }
            Err(e) => report.exclude(e.kind()),
        }
    }
    report.env("draws", draws);
    report.push(Check::max("lorentz_identity", residuals, tol));
    report.push(Check::max("lorentz_unit_normal", norms, tol));
    Ok(report)
}

/// Residual of the sign condition on shape-operator eigenvalues: zero when
/// they have mixed signs, otherwise the largest magnitude.
pub fn mixed_sign_residual(eigenvalues: &[f64]) -> f64 {
    let lo = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo <= 0.0 && hi >= 0.0 {
        0.0
    } else {
        lo.abs().max(hi.abs())
    }
}
