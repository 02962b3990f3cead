#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use qlm::geometry::{verify_frame_invariance, SurfacePatch};
use qlm::mass::MassSurface;
use qlm::spacetime::SpacetimeModel;
use qlm::sphere::{SphereGrid, SpinCoeffs};
use qlm::spinor::{GammaRep, Spinor, WeylPair};
use qlm::surface::SurfaceFamily;

type C = Complex64;

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn spinor() -> impl Strategy<Value = Spinor> {
    prop::array::uniform8(-1.0f64..1.0).prop_map(|v| Spinor::new(C::new(v[0], v[1]), C::new(v[2], v[3]), C::new(v[4], v[5]), C::new(v[6], v[7])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dirac_current_is_future_causal(psi in spinor()) {
        let x = GammaRep::standard().current(&psi);
        prop_assert!(x[0] >= 0.0);
        prop_assert!(-x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] <= 1e-12 * x[0] * x[0]);
        let pair = WeylPair::split(&psi);
        prop_assert!((pair.assemble() - psi).norm() <= 1e-15);
    }

    #[test]
    fn lifts_compose(a in -2.0f64..2.0, b in -2.0f64..2.0, t in -3.0f64..3.0) {
        let r = GammaRep::standard();
        let boost = r.boost_lift(a) * r.boost_lift(b) - r.boost_lift(a + b);
        prop_assert!(boost.norm() <= 1e-12 * (a.abs() + b.abs()).exp());
        let rot = r.rotation_lift(2, 3, t) * r.rotation_lift(2, 3, -t) - qlm::spinor::GammaMatrix::identity();
        prop_assert!(rot.norm() <= 1e-13);
        // boosts commute with the chiral projectors
        let s = r.boost_lift(a);
        prop_assert!((s * r.chiral_projector(1.0) - r.chiral_projector(1.0) * s).norm() <= 1e-13 * s.norm());
    }

    #[test]
    fn spin_transform_round_trip(seed in prop::collection::vec(-1.0f64..1.0, 2 * 81), s2 in prop::sample::select(vec![-2i64, 0, 2])) {
        let grid = SphereGrid::new(8).unwrap();
        let mut c = SpinCoeffs::zeros(s2, grid.l2_max(s2));
        let modes: Vec<_> = c.modes().collect();
        for (i, (l2, m2)) in modes.into_iter().enumerate() {
            *c.get_mut(l2, m2) = C::new(seed[2 * i % seed.len()], seed[(2 * i + 1) % seed.len()]);
        }
        let f = grid.synthesize(&c).unwrap();
        let back = grid.analyze(s2, &f);
        for (l2, m2) in c.modes() {
            prop_assert!((back.get(l2, m2) - c.get(l2, m2)).norm() <= 1e-12);
        }
    }

    #[test]
    fn schwarzschild_mass_matches_closed_form(m in 0.1f64..3.0, x in 3.0f64..50.0) {
        let r = x * m;
        let model = SpacetimeModel::lookup("schwarzschild", &params(&[("M", m)])).unwrap();
        let e = MassSurface::new(&model, &SurfaceFamily::Sphere { r }, SphereGrid::new(8).unwrap()).unwrap().energy().e;
        assert_relative_eq!(e, r * (1.0 - (1.0 - 2.0 * m / r).sqrt()), max_relative = 1e-10);
    }

    #[test]
    fn flat_hyperplane_surfaces_are_massless(amp in -0.2f64..0.2, r in 0.5f64..5.0) {
        let model = SpacetimeModel::lookup("minkowski-spherical", &BTreeMap::new()).unwrap();
        let f = SurfaceFamily::lookup("oblate", &params(&[("r", r), ("amp", amp)])).unwrap();
        let e = MassSurface::new(&model, &f, SphereGrid::new(24).unwrap()).unwrap().energy().e;
        prop_assert!(e.abs() <= 1e-8 * r, "{}", e);
    }

    #[test]
    fn boost_invariance_for_any_rapidity(lam in -1.5f64..1.5, eps in 0.0f64..0.4) {
        let model = SpacetimeModel::lookup("minkowski-spherical", &BTreeMap::new()).unwrap();
        let f = SurfaceFamily::lookup("time-wiggled-sphere", &params(&[("r", 1.0), ("eps", eps), ("l", 2.0)])).unwrap();
        let p = SurfacePatch::build(&model, &f, SphereGrid::new(12).unwrap()).unwrap();
        prop_assert!(verify_frame_invariance(&p, lam).unwrap() <= 1e-8);
    }
}
