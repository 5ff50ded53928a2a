//! Numeric defaults. Every tolerance and step size used by the library and the
//! command line lives here so that reports can echo them verbatim.

/// Residual bound for checks driven by exact (forward-mode) jets.
pub const CLOSED_TOL: f64 = 1e-8;
/// Residual bound for checks driven by central-difference jets.
pub const FD_TOL: f64 = 1e-4;
/// Default central-difference step for jets and metric derivatives.
pub const FD_STEP: f64 = 1e-4;
/// Step used when differentiating scalar diagnostics (theta, nu) numerically.
pub const DIAG_STEP: f64 = 1e-5;
/// Five-point stencil step for derivatives of nu. nu goes through a matrix
/// exponential, so a smaller step would amplify its rounding above 1e-8.
pub const NU_STEP: f64 = 1e-3;
/// Smallest admissible singular value of a parametrization Jacobian.
pub const RANK_TOL: f64 = 1e-10;
/// Points with theta^2 > 1 - HORIZONTAL_TOL count as horizontal.
pub const HORIZONTAL_TOL: f64 = 1e-10;
/// Points with 2 theta^2 - 1 <= SPACELIKE_TOL are not treated as spacelike.
pub const SPACELIKE_TOL: f64 = 1e-9;
/// Quadric membership tolerance |<p,p> - c|.
pub const LEVEL_TOL: f64 = 1e-10;
/// Geodesic flow: default RK4 step and unit-speed drift bound.
pub const GEODESIC_STEP: f64 = 1e-3;
pub const GEODESIC_SPEED_TOL: f64 = 1e-6;
/// Graph residuals (harmonic, homothetic, minimal, section) with FD derivatives.
pub const GRAPH_TOL: f64 = 1e-5;
/// Lorentz identity dual-path bound.
pub const LORENTZ_TOL: f64 = 1e-6;
/// Catenoid residual bound.
pub const CATENOID_TOL: f64 = 1e-6;
/// Largest |theta| accepted at a gluing seam.
pub const SEAM_TOL: f64 = 1e-3;
/// Profile ODE vs closed form, and quadrature vs closed form.
pub const ODE_TOL: f64 = 1e-8;
pub const QUAD_TOL: f64 = 1e-8;
/// Default number of RK4 steps across a profile range.
pub const PROFILE_STEPS: usize = 4096;
/// Width of the zone next to a singular endpoint integrated after the
/// substitution s = end +- w^2.
pub const SINGULAR_ZONE: f64 = 1e-2;
/// Leaf-curvature constancy and closed-form cross-check bound.
pub const CROSS_TOL: f64 = 1e-6;
/// Group-law and isometry checks on matrix exponentials.
pub const GROUP_TOL: f64 = 1e-10;
/// Scaling-and-squaring: fixed number of squarings and Taylor degree.
pub const EXPM_SQUARINGS: u32 = 8;
pub const EXPM_TAYLOR_DEGREE: usize = 14;
/// Desk-scale caps.
pub const MAX_TWISTED_RN_DIM: usize = 7;
pub const MAX_CLIFFORD_N: usize = 3;
pub const MAX_FAMILY_DIM: usize = 6;
pub const MAX_ABS_S: f64 = 20.0;
pub const MAX_GRID_POINTS: usize = 256 * 4096;
/// Spread of theta over a constant-angle graph.
pub const CONSTANT_ANGLE_TOL: f64 = 1e-10;
/// Command-line defaults: points per axis for two- and three-parameter
/// surfaces, total budget for higher ones, lorentz-identity sample count
/// and seed.
pub const CLI_GRID: usize = 20;
pub const CLI_GRID_BUDGET: usize = 8000;
pub const CLI_SAMPLES: usize = 200;
pub const CLI_SEED: u64 = 42;
