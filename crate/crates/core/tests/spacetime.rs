#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Matrix4;
use qlm::error::QlmError;
use qlm::spacetime::*;

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn catalog() -> Vec<SpacetimeModel> {
    vec![
        SpacetimeModel::lookup("minkowski-cartesian", &params(&[])).unwrap(),
        SpacetimeModel::lookup("minkowski-spherical", &params(&[])).unwrap(),
        SpacetimeModel::lookup("schwarzschild", &params(&[("M", 1.0)])).unwrap(),
        SpacetimeModel::lookup("schwarzschild-isotropic", &params(&[("M", 1.0)])).unwrap(),
        SpacetimeModel::lookup("weak-field", &params(&[("eps", 0.01), ("R", 2.0)])).unwrap(),
    ]
}

#[test]
fn lookup_and_guards() {
    let flat = SpacetimeModel::lookup("minkowski-cartesian", &params(&[])).unwrap();
    for p in flat.sample_points(10, 1) {
        let g = flat.metric(&p).unwrap();
        assert_eq!(g[0][0], -1.0);
        assert!((1..4).all(|i| g[i][i] == 1.0));
        assert!(flat.christoffel(&p).unwrap().iter().flatten().flatten().all(|c| *c == 0.0));
    }

    let s = SpacetimeModel::lookup("schwarzschild", &params(&[("M", 1.0)])).unwrap();
    let g = s.metric(&[0.0, 10.0, PI / 2.0, 0.0]).unwrap();
    let f = 1.0 - 2.0 / 10.0;
    assert!((g[0][0] + f).abs() <= 1e-15 && (g[1][1] - 1.0 / f).abs() <= 1e-15);
    assert!((g[2][2] - 100.0).abs() <= 1e-12 && (g[3][3] - 100.0).abs() <= 1e-12);

    for bad in [-1.0, 0.0] {
        let err = SpacetimeModel::lookup("schwarzschild", &params(&[("M", bad)])).unwrap_err();
        assert!(matches!(err, QlmError::Parameter { .. }));
    }
    assert!(matches!(SpacetimeModel::lookup("kerr", &params(&[])), Err(QlmError::Unknown { .. })));
    assert!(matches!(s.event([0.0, 1.5, 1.0, 0.0]), Err(QlmError::Domain { .. })));
    assert!(s.event([0.0, 3.0, 1.0, 0.0]).is_ok());
}

#[test]
fn signature_and_symmetry() {
    for m in catalog() {
        for p in m.sample_points(25, 2) {
            let g = m.metric(&p).unwrap();
            let mat = Matrix4::from_fn(|i, j| g[i][j]);
            assert_eq!(mat, mat.transpose());
            let mut ev: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!(ev[0] < 0.0 && ev[1] > 0.0, "{}: {ev:?}", m.name());
            let gam = m.christoffel(&p).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        assert_eq!(gam[a][b][c], gam[a][c][b]);
                    }
                }
            }
        }
    }
}

#[test]
fn christoffels_match_finite_differences() {
    let flat = SpacetimeModel::lookup("minkowski-cartesian", &params(&[])).unwrap();
    let r = connection_consistency_check(&flat, 100).unwrap();
    assert_eq!(r.christoffel, 0.0);
    assert_eq!(r.ricci, 0.0);
    for m in catalog() {
        let r = connection_consistency_check(&m, 100).unwrap();
        assert!(r.christoffel <= 1e-6, "{}: {r:?}", m.name());
        if m.is_vacuum() {
            assert!(r.ricci <= 1e-6, "{}: {r:?}", m.name());
        }
    }
    let s = SpacetimeModel::lookup("schwarzschild", &params(&[("M", 1.0)])).unwrap();
    assert!(matches!(connection_consistency_at(&s, &[[0.0, 1.5, 1.0, 0.0]]), Err(QlmError::Domain { .. })));
    assert!(matches!(connection_consistency_check(&s, 0), Err(QlmError::Parameter { .. })));
}

#[test]
fn einstein_tensor_and_vacuum() {
    for m in catalog() {
        for p in m.sample_points(30, 3) {
            let (g, ric, r, t) = (m.metric(&p).unwrap(), m.ricci(&p).unwrap(), m.scalar_curvature(&p).unwrap(), m.stress_energy(&p).unwrap());
            for a in 0..4 {
                for b in 0..4 {
                    assert!((8.0 * PI * t[a][b] - (ric[a][b] - 0.5 * g[a][b] * r)).abs() <= 1e-14);
                    if m.is_vacuum() {
                        assert!(ric[a][b].abs() <= 1e-14 && t[a][b] == 0.0);
                    }
                }
            }
        }
    }
}

#[test]
fn weak_field_ricci_is_linearized() {
    // the analytic Ricci drops O(ε²); the mismatch against finite differences
    // of the exact Christoffels must scale like ε²
    let mismatch = |eps: f64| {
        let m = SpacetimeModel::lookup("weak-field", &params(&[("eps", eps), ("R", 2.0)])).unwrap();
        connection_consistency_check(&m, 40).unwrap().ricci
    };
    let (a, b) = (mismatch(0.02), mismatch(0.01));
    assert!(a > 0.0 && (a / b - 4.0).abs() < 0.5, "{a} {b}");
    let m = SpacetimeModel::lookup("weak-field", &params(&[("eps", 0.01), ("R", 2.0)])).unwrap();
    assert!(!m.is_vacuum());
    let rho = m.stress_energy(&[0.0, 0.3, 0.2, -0.1]).unwrap()[0][0];
    assert!(rho > 0.0);
}

#[test]
fn isotropic_chart_matches_areal_chart() {
    let iso = SpacetimeModel::lookup("schwarzschild-isotropic", &params(&[("M", 1.0)])).unwrap();
    let s = SpacetimeModel::lookup("schwarzschild", &params(&[("M", 1.0)])).unwrap();
    for rho in [1.0f64, 3.0, 12.0] {
        let r: f64 = rho * (1.0 + 0.5 / rho).powi(2);
        let (gi, gs) = (iso.metric(&[0.0, rho, 1.1, 0.0]).unwrap(), s.metric(&[0.0, r, 1.1, 0.0]).unwrap());
        assert!((gi[0][0] - gs[0][0]).abs() <= 1e-13);
        assert!((gi[2][2] - gs[2][2]).abs() <= 1e-12 * r * r);
        assert!(iso.scalar_curvature(&[0.0, rho, 1.1, 0.0]).unwrap().abs() <= 1e-14);
    }
}
