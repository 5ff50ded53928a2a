//! Surface specifications from a config file and command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::catenoid::{constant_angle_graph, is_family_kind, CatenoidRecipe, CatenoidSurface, FsAGraph};
use crate::error::{GeomError, Result};
use crate::gallery::{make_helicoid, GallerySurface, GALLERY};
use crate::params::Params;
use crate::report::ToleranceSet;
use crate::surface::{GridSpec, Immersion, JetMode};
use crate::tolerances::{CLI_GRID, CLI_GRID_BUDGET, CLI_SAMPLES, CLI_SEED};

/// Pseudo-kind of the randomized Lorentz identity suite.
pub const LORENTZ_SUITE: &str = "lorentz-identity";
/// Constant-angle (f_s, a)-graph over parallel hyperplanes.
pub const CONSTANT_ANGLE: &str = "constant_angle";

/// Config file layout. Command-line flags override every field.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub kind: Option<String>,
    #[serde(default)]
    pub params: toml::Table,
    pub grid: Option<String>,
    pub jet: Option<String>,
    #[serde(default)]
    pub tol: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeomError::spec(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| GeomError::spec(format!("invalid config {}: {e}", path.display())))
    }
}

fn toml_param(key: &str, v: &toml::Value) -> Result<String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => format!("{f:?}"),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(items) => {
            items.iter().map(|x| toml_param(key, x)).collect::<Result<Vec<_>>>()?.join(";")
        }
        _ => return Err(GeomError::spec(format!("parameter '{key}' must be a scalar or a list"))),
    })
}

/// Flags shared by `build`, `verify` and `profile`, before merging.
#[derive(Debug, Clone, Default)]
pub struct SpecArgs {
    pub config: Option<std::path::PathBuf>,
    pub kind: Option<String>,
    pub params: Vec<String>,
    pub grid: Option<String>,
    pub jet: Option<String>,
    pub tol: Vec<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

/// A resolved surface specification.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub kind: String,
    pub params: Params,
    /// Per-axis counts; `None` means the command default.
    pub grid: Option<Vec<usize>>,
    pub jet: JetMode,
    pub tols: ToleranceSet,
    pub seed: u64,
    pub samples: usize,
}

pub fn parse_grid(text: &str) -> Result<Vec<usize>> {
    let counts = text
        .split(['x', 'X'])
        .map(|c| c.trim().parse::<usize>().map_err(|_| GeomError::spec(format!("grid '{text}' is not AxBxC"))))
        .collect::<Result<Vec<_>>>()?;
    if counts.iter().any(|&c| c < 2) {
        return Err(GeomError::spec("grid counts must be at least 2 per axis"));
    }
    Ok(counts)
}

impl SurfaceSpec {
    pub fn resolve(args: &SpecArgs) -> Result<Self> {
        let cfg = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let kind = args
            .kind
            .clone()
            .or(cfg.kind)
            .ok_or_else(|| GeomError::spec("no surface kind given (use --kind or a config file)"))?;
        let mut params = Params::new();
        for (k, v) in &cfg.params {
            params.insert(k, &toml_param(k, v)?);
        }
        for item in &args.params {
            for (k, v) in Params::parse(item)?.iter() {
                params.insert(k, v);
            }
        }
        let grid = match args.grid.as_ref().or(cfg.grid.as_ref()) {
            Some(g) => Some(parse_grid(g)?),
            None => None,
        };
        let jet = JetMode::parse(args.jet.as_deref().or(cfg.jet.as_deref()).unwrap_or("closed"))?;
        let mut tols = ToleranceSet::new();
        for (k, v) in &cfg.tol {
            if !(*v >= 0.0) {
                return Err(GeomError::spec(format!("tolerance {k}={v} is not a non-negative number")));
            }
            tols.set(k, *v);
        }
        tols.extend(&ToleranceSet::parse(args.tol.iter().map(String::as_str))?);
        Ok(Self {
            kind,
            params,
            grid,
            jet,
            tols,
            seed: args.seed.or(cfg.seed).unwrap_or(CLI_SEED),
            samples: args.samples.or(cfg.samples).unwrap_or(CLI_SAMPLES),
        })
    }

    /// Counts for a surface with `dim` parameters: the given grid (one
    /// count is broadcast), else CLI_GRID per axis within CLI_GRID_BUDGET.
    pub fn counts(&self, dim: usize) -> Result<Vec<usize>> {
        match &self.grid {
            Some(c) if c.len() == 1 => Ok(vec![c[0]; dim]),
            Some(c) if c.len() == dim => Ok(c.clone()),
            Some(c) => Err(GeomError::spec(format!("grid has {} axes, the surface has {dim} parameters", c.len()))),
            None if dim <= 3 => Ok(vec![CLI_GRID; dim]),
            None => {
                let per = (CLI_GRID_BUDGET as f64).powf(1.0 / dim as f64).floor() as usize;
                Ok(vec![per.max(2); dim])
            }
        }
    }

    pub fn grid_for(&self, surf: &Immersion) -> Result<GridSpec> {
        GridSpec::new(self.counts(surf.param_dim())?, surf.sample_box.clone())
    }
}

/// A constructed surface.
#[derive(Debug, Clone)]
pub enum Built {
    Gallery(GallerySurface),
    Catenoid(CatenoidSurface),
    ConstantAngle(FsAGraph),
}

pub fn is_gallery_kind(kind: &str) -> bool {
    GALLERY.iter().any(|e| e.kind == kind)
}

/// Parameters of the constant-angle graph: n, rho, s_min, s_max.
pub fn constant_angle_from(params: &Params) -> Result<FsAGraph> {
    let n = params.usize_or("n", 2)?;
    let rho = params.f64_or("rho", 0.6)?;
    let lo = params.f64_or("s_min", -1.0)?;
    let hi = params.f64_or("s_max", 1.0)?;
    params.finish(CONSTANT_ANGLE)?;
    if !(lo < hi) {
        return Err(GeomError::spec(format!("s_min={lo} must be below s_max={hi}")));
    }
    constant_angle_graph(n, rho, (lo, hi))
}

pub fn build_surface(spec: &SurfaceSpec) -> Result<Built> {
    let kind = spec.kind.as_str();
    if is_gallery_kind(kind) {
        Ok(Built::Gallery(make_helicoid(kind, &spec.params)?))
    } else if is_family_kind(kind) {
        Ok(Built::Catenoid(CatenoidRecipe::parse(kind, &spec.params)?.build()?))
    } else if kind == CONSTANT_ANGLE {
        Ok(Built::ConstantAngle(constant_angle_from(&spec.params)?))
    } else if kind == LORENTZ_SUITE {
        Err(GeomError::spec("lorentz-identity is a verification suite, not a surface"))
    } else {
        Err(GeomError::spec(format!("unknown surface kind '{kind}' (see `helicat list`)")))
    }
}
