//! The `helicat` command line: list, build, verify, profile, report.
//!
//! Exit status is 0 when every check passes, 1 when a check fails, 2 for
//! usage, specification and I/O errors, 3 for numerical failures.

mod mesh;
mod spec;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::catenoid::{
    verify_catenoid, verify_constant_angle, CatenoidRecipe, CatenoidTolerances, FamilyKind, FAMILY_CATALOG,
};
use crate::error::GeomError;
use crate::gallery::{isocurved_sign_check, make_helicoid, verify_gallery, HelicoidTolerances, GALLERY};
use crate::params::Params;
use crate::report::VerificationReport;
use crate::surface::lorentz_identity_suite;
use crate::tolerances::{CONSTANT_ANGLE_TOL, LORENTZ_TOL};

pub use mesh::{display_point, num, Mesh, SCALAR_COLUMNS};
pub use spec::{
    build_surface, parse_grid, Built, ConfigFile, SpecArgs, SurfaceSpec, CONSTANT_ANGLE, LORENTZ_SUITE,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Geom(GeomError),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Geom(GeomError::Spec(_)) | CliError::Io(_) => EXIT_SPEC,
            CliError::Geom(_) => EXIT_NUMERICAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Geom(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Geom(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "helicat", version, about = "Vertical helicoids and catenoids in M x R")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpecFlags {
    /// Surface kind, family kind, `constant_angle` or `lorentz-identity`.
    #[arg(value_name = "KIND")]
    kind_pos: Option<String>,
    #[arg(long)]
    kind: Option<String>,
    /// TOML file with kind, params, grid, jet, tol, seed, samples.
    #[arg(long)]
    config: Option<PathBuf>,
    /// k=v pairs, comma separated; lists use ';'.
    #[arg(long)]
    params: Vec<String>,
    /// Samples per axis, AxBxC (one count applies to every axis).
    #[arg(long)]
    grid: Option<String>,
    /// `closed` or `fd:<h>`.
    #[arg(long)]
    jet: Option<String>,
    /// Tolerance overrides NAME=VAL.
    #[arg(long)]
    tol: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Patch count of the lorentz-identity suite.
    #[arg(long)]
    samples: Option<usize>,
}

impl SpecFlags {
    fn resolve(&self) -> CliResult<SurfaceSpec> {
        if let (Some(a), Some(b)) = (&self.kind_pos, &self.kind) {
            if a != b {
                return Err(GeomError::spec(format!("conflicting kinds '{a}' and '{b}'")).into());
            }
        }
        Ok(SurfaceSpec::resolve(&SpecArgs {
            config: self.config.clone(),
            kind: self.kind.clone().or(self.kind_pos.clone()),
            params: self.params.clone(),
            grid: self.grid.clone(),
            jet: self.jet.clone(),
            tol: self.tol.clone(),
            seed: self.seed,
            samples: self.samples,
        })?)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the catalog of surface and family kinds.
    List {
        /// `helicoid`, `catenoid` or `suite`.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Sample a surface and write an OBJ mesh with a scalar CSV sidecar.
    Build {
        #[command(flatten)]
        spec: SpecFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite for a kind and emit a JSON report.
    Verify {
        #[command(flatten)]
        spec: SpecFlags,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the report instead of the summary.
        #[arg(long)]
        json: bool,
    },
    /// Write the profile (s, rho, a, theta, H_s) of a family recipe as CSV.
    Profile {
        #[command(flatten)]
        spec: SpecFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate JSON reports into one pass/fail table.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

/// Run the command line; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_SPEC
            } else {
                let _ = write!(out, "{text}");
                EXIT_PASS
            };
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "helicat: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::List { kind, json } => cmd_list(kind.as_deref(), *json, out),
        Command::Build { spec, out: path } => cmd_build(&spec.resolve()?, path, out, err),
        Command::Verify { spec, out: path, json } => cmd_verify(&spec.resolve()?, path.as_deref(), *json, out),
        Command::Profile { spec, out: path } => cmd_profile(&spec.resolve()?, path.as_deref(), out),
        Command::Report { paths, out: path, json } => cmd_report(paths, path.as_deref(), *json, out),
    }
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Serialize)]
struct ListEntry {
    kind: &'static str,
    params: &'static str,
    ambient: &'static str,
    doc: &'static str,
}

#[derive(Serialize)]
struct Catalog {
    helicoids: Vec<ListEntry>,
    catenoids: Vec<ListEntry>,
    suites: Vec<ListEntry>,
}

const SUITES: [ListEntry; 2] = [
    ListEntry {
        kind: LORENTZ_SUITE,
        params: "--samples 200 --seed 42",
        ambient: "random spacelike patches in seven product spaces",
        doc: "Direct Lorentzian mean curvature against the identity in H, <AT,T> and mu; shape-operator signs at zero mean-isocurved points.",
    },
    ListEntry {
        kind: CONSTANT_ANGLE,
        params: "n=2,rho=0.6,s_min=-1,s_max=1",
        ambient: "R^n x R",
        doc: "(f_s, a)-graph over parallel hyperplanes with constant a'; theta = sqrt(1 - rho^2).",
    },
];

fn catalog(filter: Option<&str>) -> CliResult<Catalog> {
    let helicoids = || {
        GALLERY.iter().map(|e| ListEntry { kind: e.kind, params: e.params, ambient: e.ambient, doc: e.doc }).collect()
    };
    let catenoids = || {
        FAMILY_CATALOG.iter().map(|e| ListEntry { kind: e.kind, params: e.params, ambient: e.ambient, doc: e.doc }).collect()
    };
    let (h, c, s) = match filter {
        None => (true, true, true),
        Some("helicoid") => (true, false, false),
        Some("catenoid") => (false, true, false),
        Some("suite") => (false, false, true),
        Some(other) => {
            return Err(GeomError::spec(format!("list filter '{other}' is not helicoid, catenoid or suite")).into())
        }
    };
    Ok(Catalog {
        helicoids: if h { helicoids() } else { vec![] },
        catenoids: if c { catenoids() } else { vec![] },
        suites: if s { SUITES.into_iter().collect() } else { vec![] },
    })
}

fn cmd_list(filter: Option<&str>, json: bool, out: &mut dyn Write) -> CliResult<i32> {
    let cat = catalog(filter)?;
    if json {
        let text = serde_json::to_string_pretty(&cat).map_err(io)?;
        writeln!(out, "{text}").map_err(io)?;
        return Ok(EXIT_PASS);
    }
    let mut s = String::new();
    for (title, entries) in [("helicoids", &cat.helicoids), ("catenoid families", &cat.catenoids), ("suites", &cat.suites)] {
        if entries.is_empty() {
            continue;
        }
        let _ = writeln!(s, "{title}:");
        for e in entries {
            let _ = writeln!(s, "  {:<24} {:<28} {}", e.kind, e.ambient, e.params);
            let _ = writeln!(s, "  {:<24} {}", "", e.doc);
        }
    }
    write!(out, "{s}").map_err(io)?;
    Ok(EXIT_PASS)
}

fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

/// Mesh of every piece of the requested surface.
pub fn build_mesh(spec: &SurfaceSpec) -> crate::error::Result<Mesh> {
    let mut mesh = Mesh::default();
    match build_surface(spec)? {
        Built::Gallery(g) => mesh.add_piece(g.immersion(), &spec.grid_for(g.immersion())?, spec.jet)?,
        Built::Catenoid(c) => {
            for p in &c.pieces {
                mesh.add_piece(&p.immersion, &spec.grid_for(&p.immersion)?, spec.jet)?;
            }
        }
        Built::ConstantAngle(g) => mesh.add_piece(&g.immersion, &spec.grid_for(&g.immersion)?, spec.jet)?,
    }
    spec.tols.finish()?;
    Ok(mesh)
}

fn cmd_build(spec: &SurfaceSpec, path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let mesh = build_mesh(spec)?;
    let title = format!("helicat {} {}", spec.kind, spec.params.canonical());
    write_atomic(path, mesh.to_obj(&title).as_bytes()).map_err(io)?;
    let csv = sidecar_path(path);
    write_atomic(&csv, mesh.scalars_csv().as_bytes()).map_err(io)?;
    if mesh.projected {
        writeln!(err, "helicat: warning: {} has more than three coordinates; exported the first three", spec.kind)
            .map_err(io)?;
    }
    writeln!(
        out,
        "wrote {} ({} vertices, {} faces) and {}",
        path.display(),
        mesh.vertices.len(),
        mesh.faces.len(),
        csv.display()
    )
    .map_err(io)?;
    Ok(EXIT_PASS)
}

/// Run the suite for the requested kind.
pub fn verify_spec(spec: &SurfaceSpec) -> crate::error::Result<VerificationReport> {
    let mode = spec.jet;
    let mut report = if spec.kind == LORENTZ_SUITE {
        spec.params.finish(LORENTZ_SUITE)?;
        let tol = spec.tols.get("lorentz_identity", LORENTZ_TOL);
        let mut r = lorentz_identity_suite(spec.samples, spec.seed, mode, tol)?;
        let plane = make_helicoid("twisted_plane", &Params::new())?;
        let heli = make_helicoid("r3_helicoid", &Params::new())?;
        let count = spec.counts(2)?[0].max(2);
        let sign_tol = spec.tols.get("isocurved_eigen_sign", LORENTZ_TOL);
        r.push(isocurved_sign_check(&[&plane, &heli], count, mode, sign_tol)?);
        r.env("isocurved_grid", count);
        r
    } else {
        match build_surface(spec)? {
            Built::Gallery(g) => {
                let tols = HelicoidTolerances::from_set(&spec.tols, mode);
                verify_gallery(&g, &spec.grid_for(g.immersion())?, mode, &tols)?
            }
            Built::Catenoid(c) => {
                let tols = CatenoidTolerances::from_set(&spec.tols, mode);
                let counts = spec.counts(c.half().immersion.param_dim())?;
                verify_catenoid(&c, &counts, mode, &tols)?
            }
            Built::ConstantAngle(g) => {
                let tol = spec.tols.get("constant_angle", CONSTANT_ANGLE_TOL);
                let mut r = verify_constant_angle(&g, &spec.counts(g.immersion.param_dim())?, mode, tol)?;
                r.params = spec.params.canonical();
                r
            }
        }
    };
    spec.tols.finish()?;
    report.env("seed", spec.seed);
    Ok(report)
}

fn cmd_verify(spec: &SurfaceSpec, path: Option<&Path>, json: bool, out: &mut dyn Write) -> CliResult<i32> {
    let report = verify_spec(spec)?;
    let text = report.to_json();
    if let Some(p) = path {
        write_atomic(p, text.as_bytes()).map_err(io)?;
    }
    if json {
        write!(out, "{text}").map_err(io)?;
    } else {
        write!(out, "{}", summary(&report)).map_err(io)?;
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn summary(r: &VerificationReport) -> String {
    let mut s = format!("{} {} [{}]\n", r.suite, r.surface, r.params);
    for c in &r.checks {
        let _ = writeln!(
            s,
            "  {} {:<22} max {:>12.4e}  tol {:>9.2e}  n={}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.max_residual,
            c.tolerance,
            c.samples
        );
    }
    for (k, v) in &r.excluded {
        let _ = writeln!(s, "  excluded {k}: {v}");
    }
    let _ = writeln!(s, "overall: {}", if r.pass { "PASS" } else { "FAIL" });
    s
}

fn closed_forms(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::SpheresEuclidean => "H_s = -(n-1)/s; rho = (r/s)^(n-1)",
        FamilyKind::SpheresHyperbolic => "H_s = -(n-1) coth s; rho = (sinh r / sinh s)^(n-1)",
        FamilyKind::SpheresSpherical => "H_s = -(n-1) cot s; rho = (sin r / sin s)^(n-1)",
        FamilyKind::Horospheres => "H_s = n-1; rho = e^((n-1) s); a = (arcsin e^((n-1) s) - pi/2)/(n-1)",
        FamilyKind::Equidistants => "H_s from the leaf geometry (closed form -(n-1) tanh s)",
        FamilyKind::Planes => "H_s = 0; rho constant",
    }
}

fn cmd_profile(spec: &SurfaceSpec, path: Option<&Path>, out: &mut dyn Write) -> CliResult<i32> {
    let recipe = CatenoidRecipe::parse(&spec.kind, &spec.params)?;
    spec.tols.finish()?;
    let p = recipe.profile()?;
    let mut s = String::new();
    let _ = write!(s, "# helicat profile {} {}\r\n", spec.kind, recipe.params);
    let _ = write!(s, "# n={} h={} seam={} steps={}\r\n", p.family.n, num(p.h_target), num(recipe.seam), p.steps());
    let _ = write!(s, "# closed forms: {}\r\n", closed_forms(p.family.kind));
    let far = if p.anchor == p.lo() { p.hi() } else { p.lo() };
    if p.is_singular_at(far) {
        let _ = write!(s, "# t2 = {}\r\n", num(p.end_height()));
    }
    if p.truncated {
        let _ = write!(s, "# truncated: rho left (0, 1) before the requested end\r\n");
    }
    s.push_str("s,rho,a,theta,H_s\r\n");
    for i in 0..p.s_grid.len() {
        let theta = p.theta_at(p.s_grid[i]).unwrap_or(f64::NAN);
        let _ = write!(s, "{},{},{},{},{}\r\n", num(p.s_grid[i]), num(p.rho[i]), num(p.a[i]), num(theta), num(p.h_s[i]));
    }
    match path {
        Some(path) => {
            write_atomic(path, s.as_bytes()).map_err(io)?;
            let end = if far == p.lo() { 0 } else { p.a.len() - 1 };
            writeln!(
                out,
                "wrote {} ({} rows); a at the far end s={} is {}",
                path.display(),
                p.s_grid.len(),
                num(p.s_grid[end]),
                num(p.a[end])
            )
            .map_err(io)?;
        }
        None => write!(out, "{s}").map_err(io)?,
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct AggregateEntry {
    path: String,
    suite: String,
    surface: String,
    params: String,
    pass: bool,
    failing: Vec<String>,
}

#[derive(Serialize)]
struct Aggregate {
    reports: Vec<AggregateEntry>,
    pass: bool,
}

fn cmd_report(paths: &[PathBuf], path: Option<&Path>, json: bool, out: &mut dyn Write) -> CliResult<i32> {
    let mut agg = Aggregate { reports: Vec::new(), pass: true };
    let mut table = String::new();
    for p in paths {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        let r = VerificationReport::from_json(&text)?;
        let failing: Vec<String> = r.failing().map(|c| c.name.clone()).collect();
        let _ = writeln!(
            table,
            "{} {:<18} {:<26} {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.suite,
            r.surface,
            p.display()
        );
        for c in r.failing() {
            let _ = writeln!(table, "       failing {:<22} max {:.4e} tol {:.2e}", c.name, c.max_residual, c.tolerance);
        }
        agg.pass &= r.pass;
        agg.reports.push(AggregateEntry {
            path: p.display().to_string(),
            suite: r.suite,
            surface: r.surface,
            params: r.params,
            pass: r.pass,
            failing,
        });
    }
    let _ = writeln!(table, "overall: {}", if agg.pass { "PASS" } else { "FAIL" });
    let mut text = serde_json::to_string_pretty(&agg).map_err(io)?;
    text.push('\n');
    if let Some(p) = path {
        write_atomic(p, text.as_bytes()).map_err(io)?;
    }
    if json {
        write!(out, "{text}").map_err(io)?;
    } else {
        write!(out, "{table}").map_err(io)?;
    }
    Ok(if agg.pass { EXIT_PASS } else { EXIT_FAIL })
}
