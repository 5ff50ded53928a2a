use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use super::*;
use crate::surface::{GridSpec, JetMode};

fn build(kind: &str, pairs: &[(&str, f64)]) -> GallerySurface {
    let mut p = Params::new();
    for (k, v) in pairs {
        p = p.with(k, v);
    }
    make_helicoid(kind, &p).unwrap()
}

fn theta(g: &GallerySurface, u: &[f64]) -> f64 {
    g.immersion().fundamental(u, JetMode::Closed).unwrap().theta
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
    }
}

#[test]
fn catalog_kinds_build_with_defaults() {
    for e in GALLERY {
        let g = make_helicoid(e.kind, &Params::new()).unwrap();
        assert_eq!(g.kind, e.kind);
        let u = &g.immersion().base_point;
        assert_eq!(u.len(), g.immersion().param_dim());
        assert!(g.immersion().fundamental(u, JetMode::Closed).is_ok(), "{}", e.kind);
    }
    for k in HELICOID_KINDS {
        assert!(GALLERY.iter().any(|e| e.kind == k));
    }
}

#[test]
fn rejects_bad_input() {
    let p = Params::new().with("kk", 1.0);
    assert!(make_helicoid("twisted_plane", &p).unwrap_err().is_spec());
    assert!(make_helicoid("nope", &Params::new()).unwrap_err().is_spec());
    assert!(make_helicoid("twisted_helicoid_rn", &Params::new().with("n", 8)).is_err());
    assert!(make_helicoid("twisted_helicoid_rn", &Params::new().with("n", 2)).is_err());
    assert!(make_helicoid("twisted_plane", &Params::new().with("a", 0.0)).is_err());
    assert!(make_helicoid("qcn_totally_geodesic", &Params::new().with("c", 2)).is_err());
    assert!(make_helicoid("ou_graph", &Params::new().with("space", "euc")).is_err());
    assert!(make_helicoid("ou_graph", &Params::new().with("i", 3)).is_err());
}

#[test]
fn standard_helicoids_match_explicit_parametrizations() {
    let a = 0.7;
    let (x, y) = (0.4, 1.1);
    let r3 = build("r3_helicoid", &[("a", a)]);
    assert_close(r3.immersion().eval(&[x, y]).as_slice(), &[x * y.cos(), x * y.sin(), a * y], 1e-12);
    assert!((theta(&r3, &[x, y]).abs() - x / (x * x + a * a).sqrt()).abs() < 1e-12);

    let s = build("s2xr", &[("a", a)]);
    let want = [x.cos() * y.cos(), x.cos() * y.sin(), x.sin(), a * y];
    assert_close(s.immersion().eval(&[x, y]).as_slice(), &want, 1e-12);

    let h = build("h2xr", &[("a", a)]);
    let want = [x.sinh() * y.cos(), x.sinh() * y.sin(), x.cosh(), a * y];
    assert_close(h.immersion().eval(&[x, y]).as_slice(), &want, 1e-12);
}

#[test]
fn r3_helicoid_spacelike_iff_x_exceeds_pitch() {
    let a = 0.8;
    let g = build("r3_helicoid", &[("a", a)]);
    for (x, spacelike) in [(a + 0.01, true), (a - 0.01, false), (-a - 0.01, true)] {
        let t = theta(&g, &[x, 0.3]);
        assert_eq!(2.0 * t * t - 1.0 > 0.0, spacelike, "x = {x}");
    }
}

proptest! {
    #[test]
    fn twisted_plane_matches_explicit(
        a in 0.2f64..3.0, k in 0.2f64..3.0,
        x in -2.0f64..2.0, y in -1.0f64..1.0, s in -1.0f64..1.0,
    ) {
        let g = build("twisted_plane", &[("a", a), ("k", k)]);
        let want = [x * (k * s).cos(), x * (k * s).sin(), y, a * s];
        assert_close(g.immersion().eval(&[x, y, s]).as_slice(), &want, 1e-12);
        let kx = k * x;
        let t = theta(&g, &[x, y, s]);
        prop_assert!((t.abs() - kx.abs() / (a * a + kx * kx).sqrt()).abs() < 1e-12);
        let causal = (kx * kx - a * a) / (kx * kx + a * a);
        prop_assert!((2.0 * t * t - 1.0 - causal).abs() < 1e-12);
    }

    #[test]
    fn twisted_helicoid_r3_matches_explicit(
        a in 0.2f64..2.0, k in 0.2f64..3.0,
        x in -2.0f64..2.0, y in -1.0f64..1.0, s in -1.0f64..1.0,
    ) {
        let g = build("twisted_helicoid_rn", &[("n", 3.0), ("a", a), ("k", k)]);
        let want = [x * (y + k * s).cos(), x * (y + k * s).sin(), y, a * s];
        assert_close(g.immersion().eval(&[x, y, s]).as_slice(), &want, 1e-12);
        let t = theta(&g, &[x, y, s]);
        let expect = (k * x).abs() / (a * a * (1.0 + x * x) + (k * x).powi(2)).sqrt();
        prop_assert!((t.abs() - expect).abs() < 1e-12);
    }

    #[test]
    fn twisted_helicoid_rn_matches_explicit(n in 4usize..=7, seed in proptest::collection::vec(-1.0f64..1.0, 8)) {
        let (a, k) = (0.9, 1.7);
        let g = build("twisted_helicoid_rn", &[("n", n as f64), ("a", a), ("k", k)]);
        let u: Vec<f64> = seed[..n].to_vec();
        let s = u[n - 1];
        let sum: f64 = u[1..n - 1].iter().sum::<f64>() + k * s;
        let mut want = vec![u[0] * sum.cos(), u[0] * sum.sin()];
        want.extend_from_slice(&u[1..n - 1]);
        want.push(a * s);
        assert_close(g.immersion().eval(&u).as_slice(), &want, 1e-12);
    }

    #[test]
    fn clifford_s3_matches_explicit(k in 0.5f64..5.0, x in -3.0f64..3.0, y in 0.1f64..1.4, s in -1.0f64..1.0) {
        let g = build("twisted_clifford_s3", &[("k", k)]);
        let want = [
            (x + k * s).cos() * y.cos(),
            (x + k * s).sin() * y.cos(),
            x.cos() * y.sin(),
            x.sin() * y.sin(),
            s,
        ];
        assert_close(g.immersion().eval(&[x, y, s]).as_slice(), &want, 1e-12);
        let fd = g.immersion().fundamental(&[x, y, s], JetMode::Closed).unwrap();
        let q = k * y.cos() * y.sin();
        prop_assert!((fd.theta.abs() - q.abs() / (1.0 + q * q).sqrt()).abs() < 1e-12);
        let c2 = y.cos().powi(2);
        let g_want = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, k * c2, 0.0, 1.0, 0.0, k * c2, 0.0, k * k * c2 + 1.0]);
        // Gamma_s carries a few hundred ulp of rounding from the squarings.
        prop_assert!((&fd.g - &g_want).amax() < 1e-12 * (1.0 + g_want.amax()));
        let sin2 = (2.0 * y).sin();
        let causal = (k * k * sin2 * sin2 - 4.0) / (k * k * sin2 * sin2 + 4.0);
        prop_assert!((2.0 * fd.theta * fd.theta - 1.0 - causal).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_h3_matches_explicit(a in 0.3f64..2.0, k in 0.3f64..3.0, x in -1.5f64..1.5, y in -1.0f64..1.0, s in -1.0f64..1.0) {
        let g = build("twisted_hyperbolic_h3", &[("a", a), ("k", k)]);
        let want = [
            x.sinh() * (y + k * s).cos(),
            x.sinh() * (y + k * s).sin(),
            x.cosh() * y.sinh(),
            x.cosh() * y.cosh(),
            a * s,
        ];
        assert_close(g.immersion().eval(&[x, y, s]).as_slice(), &want, 1e-10);
        // With pitch a the printed (a = 1) angle becomes
        // k sinh x cosh x / sqrt(a^2 (cosh^2 x + sinh^2 x) + (k sinh x cosh x)^2).
        let q = k * x.sinh() * x.cosh();
        let expect = q.abs() / (a * a * (x.cosh().powi(2) + x.sinh().powi(2)) + q * q).sqrt();
        prop_assert!((theta(&g, &[x, y, s]).abs() - expect).abs() < 1e-11);
    }

    #[test]
    fn clifford_s2n1_nu_is_minus_k_phi_psi(n in 1usize..=3, seed in proptest::collection::vec(-2.0f64..2.0, 7)) {
        let k = 2.5;
        let g = build("twisted_clifford_s2n1", &[("n", n as f64), ("k", k)]);
        let tw = g.twisting().unwrap();
        let p = &seed[..2 * n];
        let s = seed[6] / 2.0;
        let stereo = |x: &[f64]| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let mut out: Vec<f64> = x.iter().map(|v| 2.0 * v / (1.0 + r2)).collect();
            out.push((r2 - 1.0) / (1.0 + r2));
            out
        };
        let phi = stereo(&p[..n]);
        let psi = stereo(&p[n..]);
        let dot: f64 = phi.iter().zip(&psi).map(|(a, b)| a * b).sum();
        prop_assert!((tw.nu(p, s) + k * dot).abs() < 1e-12, "{} {}", tw.nu(p, s), -k * dot);
    }

    #[test]
    fn qcn_nu_is_k_times_first_coordinate(c in -1i64..=1, n in 2usize..=5, seed in proptest::collection::vec(-1.5f64..1.5, 5)) {
        let k = 1.3;
        let g = build("qcn_totally_geodesic", &[("c", c as f64), ("n", n as f64), ("k", k)]);
        let tw = g.twisting().unwrap();
        let p = &seed[..n - 1];
        let x0 = tw.base.eval(p);
        prop_assert!((tw.nu(p, 0.3) - k * x0[0]).abs() < 1e-12);
    }

    #[test]
    fn berger_theta_matches_reduced_frame(
        alpha in -3.0f64..3.0, a in 0.3f64..2.0, delta in 0.3f64..1.5,
        s in -1.0f64..1.0, tau in 0.1f64..1.4, u in -1.0f64..1.0,
    ) {
        let g = build("berger_helicoid", &[("alpha", alpha), ("a", a), ("delta", delta)]);
        let x = g.immersion().eval(&[s, tau, u]);
        let expect_point = [
            (alpha * s + u).cos() * tau.cos(),
            (alpha * s + u).sin() * tau.cos(),
            (s + u).cos() * tau.sin(),
            (s + u).sin() * tau.sin(),
            a * u,
        ];
        assert_close(x.as_slice(), &expect_point, 1e-12);
        // Spatial tangent space spanned by X = (i z1, 0), Y = (0, i z2) and
        // Psi_tau; Psi_s = alpha X + Y, spatial Psi_u = X + Y.
        let z = DVector::from_column_slice(&x.as_slice()[..4]);
        let w = DVector::from_column_slice(&[-z[1], z[0], -z[3], z[2]]);
        let metric = DMatrix::identity(4, 4) + &w * w.transpose() * (delta * delta - 1.0);
        let bx = DVector::from_column_slice(&[-z[1], z[0], 0.0, 0.0]);
        let by = DVector::from_column_slice(&[0.0, 0.0, -z[3], z[2]]);
        let bt = DVector::from_column_slice(&[
            -(alpha * s + u).cos() * tau.sin(),
            -(alpha * s + u).sin() * tau.sin(),
            (s + u).cos() * tau.cos(),
            (s + u).sin() * tau.cos(),
        ]);
        let basis = DMatrix::from_columns(&[bx, by, bt]);
        let gram = basis.transpose() * metric * &basis;
        let zc = DVector::from_column_slice(&[1.0, -alpha, 0.0]);
        let n2 = (zc.transpose() * gram.try_inverse().unwrap() * &zc)[(0, 0)];
        let nt = (1.0 - alpha) / a;
        let expect = nt.abs() / (n2 + nt * nt).sqrt();
        prop_assert!((theta(&g, &[s, tau, u]).abs() - expect).abs() < 1e-10);
    }

    #[test]
    fn cone_nu_scales_with_radius(r in 0.5f64..2.0, x in -2.0f64..2.0, y in -2.0f64..2.0, s in -1.0f64..1.0) {
        let cone = build("twisted_cone_r2n2", &[]);
        let sphere = build("twisted_clifford_s2n1", &[]);
        let nu_c = cone.twisting().unwrap().nu(&[x, y, r], s);
        let nu_s = sphere.twisting().unwrap().nu(&[x, y], s);
        prop_assert!((nu_c - r * nu_s).abs() < 1e-12);
    }
}

#[test]
fn cone_and_sphere_twisting_angles_agree_at_unit_radius() {
    let cone = build("twisted_cone_r2n2", &[]);
    let sphere = build("twisted_clifford_s2n1", &[]);
    for (x, y, s) in [(0.3, -0.8, 0.2), (1.2, 0.4, -0.5), (-1.5, 1.7, 0.9)] {
        let tc = theta(&cone, &[x, y, 1.0, s]);
        let ts = theta(&sphere, &[x, y, s]);
        assert!((tc.abs() - ts.abs()).abs() < 1e-10);
        let t2 = theta(&cone, &[x, y, 2.0, s]);
        assert!((t2.abs() - ts.abs()).abs() > 1e-3);
    }
}

#[test]
fn twisted_plane_spacelike_edge() {
    let (a, k): (f64, f64) = (1.0, 2.0);
    let g = build("twisted_plane", &[]);
    let edge = a / k;
    for (x, want) in [(edge + 1e-3, true), (edge - 1e-3, false), (-edge - 1e-3, true)] {
        let t = theta(&g, &[x, 0.2, 0.1]);
        assert_eq!(2.0 * t * t - 1.0 > 0.0, want, "x = {x}");
    }
}

#[test]
fn twisted_helicoid_spacelike_edge() {
    let (a, k): (f64, f64) = (1.0, 2.0);
    let g = build("twisted_helicoid_rn", &[]);
    let edge = a / (k * k - a * a).sqrt();
    for (x, want) in [(edge + 1e-3, true), (edge - 1e-3, false)] {
        let t = theta(&g, &[x, 0.2, 0.1]);
        assert_eq!(2.0 * t * t - 1.0 > 0.0, want, "x = {x}");
    }
}

#[test]
fn clifford_s3_spacelike_band_has_two_edges() {
    let k = 3.0;
    let g = build("twisted_clifford_s3", &[("k", k)]);
    let lo = (2.0 / k).asin() / 2.0;
    let hi = FRAC_PI_2 - lo;
    for (y, want) in [(lo - 1e-3, false), (lo + 1e-3, true), (hi - 1e-3, true), (hi + 1e-3, false)] {
        let t = theta(&g, &[0.4, y, 0.2]);
        assert_eq!(2.0 * t * t - 1.0 > 0.0, want, "y = {y}");
    }
}

#[test]
fn berger_alpha_one_has_vanishing_angle() {
    let g = build("berger_helicoid", &[("alpha", 1.0), ("delta", 0.7)]);
    for u in [[0.2, 0.3, 0.1], [-0.7, 1.2, 0.5]] {
        assert!(theta(&g, &u).abs() < 1e-12);
    }
}

#[test]
fn berger_omega_is_reported() {
    let g = build("berger_helicoid", &[]);
    assert_eq!(g.notes.len(), 5);
    assert!(g.notes.iter().all(|(_, v)| v.is_finite() && *v > 0.0));
}

#[test]
fn arctan_gradient_norm_and_spacelike_region() {
    let (a1, b): (f64, f64) = (0.3, 1.0);
    let g = build("arctan_graph", &[("b", b)]);
    let gr = g.graph().unwrap();
    for p in [[0.1, 0.6, 0.2], [-0.5, 1.5, -0.9], [0.9, 2.0, 1.0]] {
        let r = gr.residuals(&p, 1e-4).unwrap();
        let want = (a1 * a1 + b * b / (p[1] * p[1] + p[2] * p[2])).sqrt();
        assert!((r.grad_norm - want).abs() < 1e-7);
        let t = theta(&g, &p);
        assert_eq!(2.0 * t * t - 1.0 > 0.0, want < 1.0);
    }
}

#[test]
fn parabola_control_values() {
    let g = build("parabola_graph", &[]);
    let gr = g.graph().unwrap();
    for x1 in [0.3, -0.6, 0.9] {
        let r = gr.residuals(&[x1, 0.1], 1e-4).unwrap();
        assert!((r.harmonic_residual - 2.0).abs() < 1e-5);
        assert!((r.homothety_residual - 4.0 * x1.abs()).abs() < 1e-5);
    }
}

#[test]
fn every_helicoid_kind_verifies_and_control_fails() {
    let mode = JetMode::Closed;
    let tols = HelicoidTolerances::for_mode(mode);
    for kind in HELICOID_KINDS {
        let g = make_helicoid(kind, &Params::new()).unwrap();
        let grid = GridSpec::uniform(g.immersion(), 5).unwrap();
        let r = verify_gallery(&g, &grid, mode, &tols).unwrap();
        let failing: Vec<_> = r.failing().map(|c| c.name.clone()).collect();
        assert!(r.pass, "{kind}: {failing:?}");
    }
    let g = make_helicoid("parabola_graph", &Params::new()).unwrap();
    let grid = GridSpec::uniform(g.immersion(), 5).unwrap();
    let r = verify_gallery(&g, &grid, mode, &tols).unwrap();
    assert!(!r.pass);
    assert!(!r.check("graph_harmonic").unwrap().pass);
    assert!(!r.check("asymptotic").unwrap().pass);
}

#[test]
fn ou_graphs_in_nil_and_sol() {
    let mode = JetMode::Closed;
    let tols = HelicoidTolerances::for_mode(mode);
    for space in ["nil", "sol"] {
        let p = Params::new().with("space", space);
        let g = make_helicoid("ou_graph", &p).unwrap();
        let grid = GridSpec::uniform(g.immersion(), 5).unwrap();
        let r = verify_gallery(&g, &grid, mode, &tols).unwrap();
        assert!(r.pass, "{space}: {:?}", r.failing().collect::<Vec<_>>());
    }
}

#[test]
fn fd_jets_verify_with_fd_tolerances() {
    let mode = JetMode::Fd(1e-4);
    let tols = HelicoidTolerances::for_mode(mode);
    let g = make_helicoid("twisted_clifford_s3", &Params::new()).unwrap();
    let grid = GridSpec::uniform(g.immersion(), 4).unwrap();
    let r = verify_gallery(&g, &grid, mode, &tols).unwrap();
    assert!(r.pass, "{:?}", r.failing().collect::<Vec<_>>());
}

#[test]
fn isocurved_points_have_mixed_principal_signs() {
    let plane = build("twisted_plane", &[("a", 1.0), ("k", 2.0)]);
    let heli = build("r3_helicoid", &[]);
    let c = isocurved_sign_check(&[&plane, &heli], 12, JetMode::Closed, 1e-6).unwrap();
    assert!(c.pass && c.samples > 10, "{c:?}");
}
