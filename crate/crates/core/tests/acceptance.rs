//! Acceptance run: one line per criterion, nonzero exit if any is red.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use num_complex::Complex64;
use qlm::boundary::*;
use qlm::embedding::AxisymmetricProfile;
use qlm::geometry::{verify_frame_invariance, ExtrinsicGeometry, NormalGauge, SurfacePatch};
use qlm::mass::*;
use qlm::np::*;
use qlm::spacetime::SpacetimeModel;
use qlm::sphere::SphereGrid;
use qlm::spinor::{majorana, symp, GammaMatrix, GammaRep, Spinor, Weyl};
use qlm::surface::SurfaceFamily;

type C = Complex64;

const L: usize = 32;

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn model(name: &str, kv: &[(&str, f64)]) -> SpacetimeModel {
    SpacetimeModel::lookup(name, &params(kv)).unwrap()
}

fn family(name: &str, kv: &[(&str, f64)]) -> SurfaceFamily {
    SurfaceFamily::lookup(name, &params(kv)).unwrap()
}

fn patch(m: &SpacetimeModel, f: &SurfaceFamily, band: usize) -> SurfacePatch {
    SurfacePatch::build(m, f, SphereGrid::new(band).unwrap()).unwrap()
}

fn surface(m: &SpacetimeModel, f: &SurfaceFamily, band: usize) -> MassSurface {
    MassSurface::new(m, f, SphereGrid::new(band).unwrap()).unwrap()
}

fn schwarzschild_e(r: f64) -> f64 {
    r * (1.0 - (1.0 - 2.0 / r).sqrt())
}

fn max_diff(a: &[Spinor], b: &[Spinor]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn schwarzschild_curve() -> Outcome {
    let s = model("schwarzschild", &[("M", 1.0)]);
    let worst = [10.0, 20.0, 50.0, 100.0]
        .iter()
        .map(|&r| {
            let e = surface(&s, &SurfaceFamily::Sphere { r }, L).energy().e;
            ((e - schwarzschild_e(r)) / schwarzschild_e(r)).abs()
        })
        .fold(0.0, f64::max);
    check(worst <= 1e-7, format!("max relative error {worst:.3e} (tol 1e-7)"))
}

fn adm_limit() -> Outcome {
    let sweep = adm_limit_sweep(&model("schwarzschild", &[("M", 1.0)]), &[10.0, 20.0, 50.0, 100.0], L).unwrap();
    let err = (sweep.fitted_mass - 1.0).abs();
    check(
        err <= 1e-4,
        format!(
            "fit M + c/r gives {:.8} (|ΔM| {err:.3e}, tol 1e-4); fit with 1/r² term gives {:.8}",
            sweep.fitted_mass, sweep.fitted_mass_quadratic
        ),
    )
}

fn horizon_bound() -> Outcome {
    let h = horizon_bound_check(&model("schwarzschild", &[("M", 1.0)]), &[2.01, 2.001, 2.0001], L).unwrap();
    let err = (h.e_limit - 2.0).abs();
    check(err <= 1e-3, format!("E → {:.8}, 2M_irr → {:.8} (|ΔE| {err:.3e}, tol 1e-3)", h.e_limit, h.two_m_irr_limit))
}

fn hyperplane_surfaces() -> Outcome {
    let m = model("minkowski-spherical", &[]);
    let flat = [SurfaceFamily::Sphere { r: 1.0 }, family("wiggly-sphere", &[("r", 1.0), ("amp", 0.1)])]
        .iter()
        .map(|f| surface(&m, f, L).energy().e.abs())
        .fold(0.0, f64::max);
    let e = |eps: f64, l: f64| surface(&m, &family("time-wiggled-sphere", &[("r", 1.0), ("eps", eps), ("l", l)]), L).energy().e;
    let (a, b) = (e(0.2, 1.0), e(0.1, 1.0));
    let quadratic = b > 0.0 && (a / b - 4.0).abs() <= 0.5;
    let (a2, b2) = (e(0.2, 2.0), e(0.1, 2.0));
    check(
        flat <= 1e-8 && a > 1e-10 && quadratic,
        format!(
            "t = const max|E| {flat:.2e} (tol 1e-8); t = ε cosθ: E(0.2) = {a:.3e}, E(0.1) = {b:.3e} (need > 1e-10, ratio ≈ 4); \
             t = ε P2(cosθ): E(0.2) = {a2:.4e}, ratio {:.3}",
            a2 / b2
        ),
    )
}

fn theorem1() -> Outcome {
    let rep = GammaRep::standard();
    let mink = model("minkowski-spherical", &[]);
    let cases = [
        (model("schwarzschild", &[("M", 1.0)]), SurfaceFamily::Sphere { r: 10.0 }),
        (mink.clone(), SurfaceFamily::Sphere { r: 1.0 }),
        (mink.clone(), family("wiggly-sphere", &[("r", 1.0), ("amp", 0.1)])),
        (mink.clone(), family("time-wiggled-sphere", &[("r", 1.0), ("eps", 0.3), ("l", 2.0)])),
    ];
    let mut worst: f64 = 0.0;
    let mut decays = true;
    let mut last = Vec::new();
    for (m, f) in &cases {
        let t = surface(m, f, L).theorem1(&rep).unwrap();
        worst = worst.max(t.residual / t.eight_pi_e.abs().max(1.0));
        let res: Vec<f64> = [8, 16, 32].iter().map(|&l| surface(m, f, l).theorem1(&rep).unwrap().residual).collect();
        decays &= res.windows(2).all(|w| w[1] <= (w[0] / 4.0).max(1e-11));
        last = res;
    }
    check(
        worst <= 1e-6 && decays,
        format!("max scaled residual {worst:.3e} (tol 1e-6); residual at L = 8, 16, 32 on the wiggled sphere {}", last.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ")),
    )
}

fn embedded_ops(p: &SurfacePatch) -> (qlm::embedding::EmbeddingProfile, SurfaceFrames) {
    let prof = AxisymmetricProfile::from_patch(p).unwrap();
    let emb = prof.embed().unwrap();
    let frames = SurfaceFrames::embedded(&emb, &prof.f, &p.grid);
    (emb, frames)
}

fn boundary_witten() -> Outcome {
    let rep = GammaRep::standard();
    let u = Weyl::new(C::new(0.6, 0.0), C::new(0.0, 0.8));
    let (mut four, mut two, mut agree): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (m, r) in [(model("minkowski-spherical", &[]), 1.0), (model("schwarzschild", &[("M", 1.0)]), 10.0)] {
        let p = patch(&m, &SurfaceFamily::Sphere { r }, L);
        let (emb, frames) = embedded_ops(&p);
        let ops = BoundaryOperators::new(rep.clone(), &p.grid, &frames).unwrap();
        let phi = aligned_spinor(&rep, &emb, &p.grid, u);
        four = four.max(sup_norm(&ops.witten_residual_embedded(&phi).unwrap()));
        let parts = two_spinor_split(&ops, &phi).unwrap();
        two = two.max(parts.iter().map(|x| x.residual_sup()).fold(0.0, f64::max));
        agree = agree.max(max_diff(&ops.dirac_s(&phi).unwrap(), &dirac_from_two_spinor(&parts)));
    }
    check(
        four <= 1e-8 && two <= 1e-8 && agree <= 1e-9,
        format!("4-spinor residual {four:.2e}, 2-spinor residual {two:.2e} (tol 1e-8); D̸ agreement {agree:.2e} (tol 1e-9)"),
    )
}

fn hamiltonian() -> Outcome {
    let schw = model("schwarzschild", &[("M", 1.0)]);
    let mink = model("minkowski-spherical", &[]);
    let weak = model("weak-field", &[("eps", 0.01), ("R", 2.0)]);
    let cases = [
        (schw.clone(), SurfaceFamily::Sphere { r: 10.0 }),
        (schw.clone(), family("oblate", &[("r", 10.0), ("amp", 0.1)])),
        (schw, family("wiggly-sphere", &[("r", 12.0), ("amp", 0.05)])),
        (mink.clone(), SurfaceFamily::Sphere { r: 1.0 }),
        (mink.clone(), family("oblate", &[("r", 1.0), ("amp", 0.2)])),
        (mink.clone(), family("wiggly-sphere", &[("r", 1.0), ("amp", 0.1)])),
        (mink, family("time-wiggled-sphere", &[("r", 1.0), ("eps", 0.2), ("l", 2.0)])),
        (weak.clone(), SurfaceFamily::Sphere { r: 5.0 }),
        (weak, family("oblate", &[("r", 4.0), ("amp", 0.1)])),
    ];
    let (mut point, mut integral): (f64, f64) = (0.0, 0.0);
    for (m, f) in &cases {
        let s = surface(m, f, L);
        let h = s.hamiltonian();
        point = point.max(h.pointwise_residual);
        integral = integral.max((h.difference - 8.0 * PI * s.energy().e).abs());
    }
    check(
        point <= 1e-10 && integral <= 1e-8,
        format!("{} surfaces: pointwise {point:.2e} (tol 1e-10), integral {integral:.2e} (tol 1e-8)", cases.len()),
    )
}

fn chiral_suite() -> Outcome {
    let rep = GammaRep::standard();
    let id = GammaMatrix::identity();
    let (pp, pm) = (rep.chiral_projector(1.0), rep.chiral_projector(-1.0));
    let exact = pp * pp == pp && pm * pm == pm && pp + pm == id && pp * pm == GammaMatrix::zeros();

    let mink = model("minkowski-spherical", &[]);
    let schw = model("schwarzschild", &[("M", 1.0)]);
    let mut ibp: f64 = 0.0;
    for (m, f) in [(&schw, SurfaceFamily::Sphere { r: 10.0 }), (&mink, family("time-wiggled-sphere", &[("r", 1.0), ("eps", 0.3), ("l", 2.0)]))] {
        let p = patch(m, &f, L);
        let frames = SurfaceFrames::from_extrinsic(&ExtrinsicGeometry::compute(&p, NormalGauge::MeanCurvature).unwrap());
        let ops = BoundaryOperators::new(rep.clone(), &p.grid, &frames).unwrap();
        let psi = smooth_random_field(&p.grid, 8, 13).unwrap();
        ibp = ibp.max((p.integrate(&ops.senwitten_density(&psi).unwrap()) - p.integrate(&ops.chiral_density(&psi).unwrap())).abs());
    }

    let p = patch(&schw, &SurfaceFamily::Sphere { r: 10.0 }, L);
    let frames = SurfaceFrames::from_extrinsic(&ExtrinsicGeometry::compute(&p, NormalGauge::MeanCurvature).unwrap());
    let ops = BoundaryOperators::new(rep.clone(), &p.grid, &frames).unwrap();
    let (plus, _) = ops.chiral_split(&smooth_random_field(&p.grid, 6, 4).unwrap());
    let horizon = p.integrate(&ops.chiral_density_with(&plus, &vec![0.0; p.grid.len()]).unwrap());

    let s = surface(&schw, &SurfaceFamily::Sphere { r: 10.0 }, L);
    let c = s.chiral_mass(&rep, &s.aligned_plus(&rep)).unwrap();
    let e_tilde = (c.e_tilde - s.energy().e).abs();

    let p = patch(&mink, &family("oblate", &[("r", 1.0), ("amp", 0.2)]), L);
    let (emb, frames) = embedded_ops(&p);
    let ops = BoundaryOperators::new(rep.clone(), &p.grid, &frames).unwrap();
    let (a, b) = ops.chiral_split(&aligned_spinor(&rep, &emb, &p.grid, Weyl::new(C::new(1.0, 0.0), C::new(0.0, 0.0))));
    let norms = a.iter().chain(&b).map(|x| (x.norm() - FRAC_1_SQRT_2).abs()).fold(0.0, f64::max);

    check(
        exact && ibp <= 1e-8 && horizon == 0.0 && e_tilde <= 1e-8 && norms <= 1e-12,
        format!(
            "projectors exact {exact}; parts {ibp:.2e} (tol 1e-8); horizon integral {horizon:e}; |Ẽ − E| {e_tilde:.2e} (tol 1e-8); \
             ||φ±| − 1/√2| {norms:.2e} (tol 1e-12)"
        ),
    )
}

fn np_suite() -> Outcome {
    let rep = GammaRep::standard();
    let spin = SpinFrame::standard();
    let k = FRAC_1_SQRT_2;
    let mc_cases = [
        patch(&model("schwarzschild", &[("M", 1.0)]), &SurfaceFamily::Sphere { r: 10.0 }, 16),
        patch(&model("minkowski-cartesian", &[]), &family("tilted-sphere", &[("r", 1.0), ("v", 0.3), ("axis", 0.0)]), 16),
    ];
    let (mut rho, mut half): (f64, f64) = (0.0, 0.0);
    let mut norm: f64 = 0.0;
    for p in &mc_cases {
        let ext = ExtrinsicGeometry::compute(p, NormalGauge::MeanCurvature).unwrap();
        for (node, f) in ext.nodes.iter().zip(&SurfaceFrames::from_extrinsic(&ext).nodes) {
            let np = np_scalars(&rep, &spin, f);
            let target = f.norm_h * k;
            rho = rho.max((np.rho - target).norm()).max((np.mu - target).norm());
            half = half.max((np.rho - 0.5 * target).norm()).max((np.mu - 0.5 * target).norm());
            norm = norm.max((spin_basis(node, NormalGauge::MeanCurvature).unwrap().normalization() - 1.0).norm());
        }
    }
    norm = norm.max((symp(&qlm::spinor::spin_o(), &qlm::spinor::spin_iota()) - 1.0).norm());

    let p = &mc_cases[1];
    let ext = ExtrinsicGeometry::compute(p, NormalGauge::Slice).unwrap();
    let (mut beta, mut boost): (f64, f64) = (0.0, 0.0);
    for f in &SurfaceFrames::from_extrinsic(&ext).nodes {
        let np = np_scalars(&rep, &spin, f);
        beta = beta.max((np.beta_raw + 0.5 * np.twist_m).norm());
        boost = boost.max((np.beta_boost - 0.5 * np.twist_m).norm());
    }

    let mut null: f64 = 0.0;
    for (a, b) in [(1.0, 0.0), (0.3, -0.7), (-1.2, 0.4)] {
        let x = rep.current(&majorana(&Weyl::new(C::new(a, b), C::new(b, 0.5))));
        null = null.max((-x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).abs());
    }
    check(
        rho <= 1e-8 && beta <= 1e-8 && norm <= 1e-14 && null <= 1e-10,
        format!(
            "|ρ − |H|/√2| {rho:.2e} (|ρ − |H|/2√2| {half:.2e}); |β + ϖ_m/2| {beta:.2e} (|β_boost − ϖ_m/2| {boost:.2e}); \
             o·ι {norm:.1e}; Majorana null {null:.1e}"
        ),
    )
}

fn geometry_suite() -> Outcome {
    let mink = model("minkowski-spherical", &[]);
    let schw = model("schwarzschild", &[("M", 1.0)]);
    let surfaces = [
        patch(&mink, &family("oblate", &[("r", 1.0), ("amp", 0.2)]), L),
        patch(&mink, &family("wiggly-sphere", &[("r", 1.0), ("amp", 0.1)]), L),
        patch(&mink, &family("time-wiggled-sphere", &[("r", 1.0), ("eps", 0.3), ("l", 2.0)]), L),
        patch(&model("minkowski-cartesian", &[]), &family("tilted-sphere", &[("r", 1.0), ("v", 0.3), ("axis", 0.0)]), L),
        patch(&schw, &SurfaceFamily::Sphere { r: 10.0 }, L),
        patch(&schw, &family("oblate", &[("r", 8.0), ("amp", 0.1)]), L),
    ];
    let (mut gb, mut inv, mut kappa): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for p in &surfaces {
        let slice = ExtrinsicGeometry::compute(p, NormalGauge::Slice).unwrap();
        let mc = ExtrinsicGeometry::compute(p, NormalGauge::MeanCurvature).unwrap();
        gb = gb.max(slice.gauss_bonnet_residual());
        inv = inv.max(verify_frame_invariance(p, 0.7).unwrap()).max(verify_frame_invariance(p, -0.3).unwrap());
        for n in &mc.nodes {
            kappa = kappa.max(n.kappa0.abs()).max((n.kappa1 * n.norm_h - n.norm_h * n.norm_h).abs());
        }
    }
    let egregium = [&surfaces[0], &surfaces[1], &surfaces[5]]
        .iter()
        .map(|p| AxisymmetricProfile::from_patch(p).unwrap().embed().unwrap().egregium_residual())
        .fold(0.0, f64::max);

    let rep = GammaRep::standard();
    let eta = [-1.0, 1.0, 1.0, 1.0];
    let clifford = (0..4).all(|a| {
        (0..4).all(|b| {
            let ac = rep.g[a] * rep.g[b] + rep.g[b] * rep.g[a];
            ac == if a == b { GammaMatrix::identity() * C::new(2.0 * eta[a], 0.0) } else { GammaMatrix::zeros() }
        })
    });
    let p = &surfaces[3];
    let frames = SurfaceFrames::from_extrinsic(&ExtrinsicGeometry::compute(p, NormalGauge::Slice).unwrap());
    let ops = BoundaryOperators::new(rep.clone(), &p.grid, &frames).unwrap();
    let psi = smooth_random_field(&p.grid, 6, 7).unwrap();
    let conn = max_diff(&ops.dirac_s(&psi).unwrap(), &ops.general_frame_form(&psi).unwrap());

    check(
        gb <= 1e-8 && inv <= 1e-8 && kappa <= 1e-8 && egregium <= 1e-8 && clifford && conn <= 1e-8,
        format!(
            "Gauss–Bonnet {gb:.2e}; boost invariance {inv:.2e}; κ(H⊥), κ(H) − H·H {kappa:.2e}; egregium {egregium:.2e}; \
             Clifford exact {clifford}; connection {conn:.2e} (tol 1e-8)"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Schwarzschild mass curve", schwarzschild_curve),
        ("ADM limit", adm_limit),
        ("horizon bound", horizon_bound),
        ("Minkowski hyperplane surfaces", hyperplane_surfaces),
        ("Theorem 1 identity", theorem1),
        ("boundary Witten solution", boundary_witten),
        ("Hamiltonian pairing", hamiltonian),
        ("chiral suite", chiral_suite),
        ("NP suite", np_suite),
        ("geometry suite", geometry_suite),
    ];
    let mut red = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        red += usize::from(!out.pass);
        println!("[{verdict}] {:>2} {name}: {} [{:.1}s]", i + 1, out.detail, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - red, criteria.len());
    if red > 0 {
        std::process::exit(1);
    }
}
