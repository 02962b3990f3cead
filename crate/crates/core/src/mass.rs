//! Quasilocal mean-curvature mass E(S;σ) = (1/8π)∮(|H|_flat − |H|)dS and the
//! identities built on it: Hamiltonian pairing, the spinor surface identity
//! with the transplanted aligned spinor, the chiral mass Ẽ, and the horizon
//! and large-sphere limits.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::{aligned_spinor, BoundaryOperators, Field, SurfaceFrames};
use crate::embedding::{AxisymmetricProfile, EmbeddingProfile};
use crate::error::{QlmError, Result};
use crate::geometry::{ExtrinsicGeometry, NormalGauge, SurfacePatch, CONVEXITY_THRESHOLD};
use crate::spacetime::{SpacetimeModel, Vec4};
use crate::sphere::SphereGrid;
use crate::spinor::{GammaRep, Spinor, Weyl};
use crate::surface::SurfaceFamily;

pub const MODULE: &str = "mass-engine";
pub const CONVERGENCE_BANDS: [usize; 4] = [8, 16, 32, 64];
pub const CHIRALITY_TOLERANCE: f64 = 1e-12;
pub const TWIST_FREE_TOLERANCE: f64 = 1e-10;

/// Honour QLM_THREADS for the global worker pool. Safe to call repeatedly.
pub fn configure_threads() {
    if let Some(n) = std::env::var("QLM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Surface patch with chart-boundary failures at a horizon reported as non-convex.
pub fn build_patch(model: &SpacetimeModel, family: &SurfaceFamily, grid: SphereGrid) -> Result<SurfacePatch> {
    match SurfacePatch::build(model, family, grid) {
        // the horizon itself lies on the chart boundary, where H is null
        Err(QlmError::Domain { .. }) if model.horizon_radius().is_some() => {
            Err(QlmError::NonConvex { min_norm_h: 0.0, threshold: CONVEXITY_THRESHOLD })
        }
        other => other,
    }
}

/// Everything needed to evaluate the mass identities on one surface at one
/// resolution.
pub struct MassSurface {
    pub patch: SurfacePatch,
    pub extrinsic: ExtrinsicGeometry,
    pub profile: AxisymmetricProfile,
    pub embedding: EmbeddingProfile,
    /// |H|_flat on the grid
    pub h_flat: Vec<f64>,
    /// |H| on the grid
    pub norm_h: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Energy {
    pub e: f64,
    pub int_norm_h: f64,
    pub int_h_flat: f64,
    pub area: f64,
    pub m_irr: f64,
}

/// P = H⊥ + ϖ and ξ = Ĥ⊥ per node, with the pairings on S and on its
/// Euclidean image.
#[derive(Debug, Clone, Serialize)]
pub struct SymplecticData {
    pub p: Vec<Vec4>,
    pub xi: Vec<Vec4>,
    pub pairing: Vec<f64>,
    pub flat_pairing: Vec<f64>,
    /// ∮ξ·P − ∮(ξ·P)_flat
    pub difference: f64,
    /// max |ξ·P + |H||
    pub pointwise_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem1 {
    /// ∮(ψ† b-ethD̸-hat ψ + c.c. + |H||ψ|²)dS
    pub integral: f64,
    /// ∮F, ∮(−ϖ·ξ∥), ∮|H||ψ|²
    pub parts: [f64; 3],
    pub eight_pi_e: f64,
    pub residual: f64,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiralMass {
    pub e_tilde: f64,
    /// ∮(ψ+†γ0γ^a φ− + c.c.)ϖ_a dS
    pub twist_term: f64,
    pub twist_free: bool,
    /// ∮(½ + |ψ+|²)(|H|_flat − |H|)dS / 8π, reported on twist-free surfaces
    pub lemma5: Option<f64>,
    /// 4πE
    pub bound_lhs: f64,
    /// −∮(|ψ+|²(|H|_flat − |H|) + |ψ+||ϖ|)dS
    pub bound_rhs: f64,
}

impl MassSurface {
    pub fn new(model: &SpacetimeModel, family: &SurfaceFamily, grid: SphereGrid) -> Result<Self> {
        let patch = build_patch(model, family, grid)?;
        let extrinsic = ExtrinsicGeometry::compute(&patch, NormalGauge::MeanCurvature)?;
        let profile = AxisymmetricProfile::from_patch(&patch)?;
        let embedding = profile.embed()?;
        let g = &patch.grid;
        let h_flat = (0..g.len()).map(|k| embedding.h_flat[k / g.n_phi]).collect();
        let norm_h = extrinsic.nodes.iter().map(|n| n.norm_h).collect();
        Ok(MassSurface { patch, extrinsic, profile, embedding, h_flat, norm_h })
    }

    pub fn energy(&self) -> Energy {
        let int_h_flat = self.patch.integrate(&self.h_flat);
        let int_norm_h = self.patch.integrate(&self.norm_h);
        let area = self.patch.area;
        Energy { e: (int_h_flat - int_norm_h) / (8.0 * PI), int_norm_h, int_h_flat, area, m_irr: (area / (16.0 * PI)).sqrt() }
    }

    pub fn hamiltonian(&self) -> SymplecticData {
        let n = self.extrinsic.nodes.len();
        let (mut p, mut xi, mut pairing) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for node in &self.extrinsic.nodes {
            let w = node.twist_frame();
            let mut pv = node.h_perp;
            for mu in 0..4 {
                pv[mu] += w[0] * node.frame[2][mu] + w[1] * node.frame[3][mu];
            }
            let x = node.h_perp.map(|c| c / node.norm_h);
            pairing.push(node.dot(&x, &pv));
            p.push(pv);
            xi.push(x);
        }
        // on the Euclidean image ξ = E_t, P = |H|_flat E_t
        let flat_pairing: Vec<f64> = self.h_flat.iter().map(|h| -h).collect();
        let difference = self.patch.integrate(&pairing) - self.patch.integrate(&flat_pairing);
        let pointwise_residual =
            pairing.iter().zip(&self.norm_h).map(|(a, h)| (a + h).abs()).fold(0.0, f64::max);
        SymplecticData { p, xi, pairing, flat_pairing, difference, pointwise_residual }
    }

    /// Frames of S in the mean-curvature gauge and of its Euclidean image.
    pub fn frames(&self) -> (SurfaceFrames, SurfaceFrames) {
        (
            SurfaceFrames::from_extrinsic(&self.extrinsic),
            SurfaceFrames::embedded(&self.embedding, &self.profile.f, &self.patch.grid),
        )
    }

    /// Aligned parallel spinor of the Euclidean image, carried to S by
    /// identifying the mean-curvature spin frames node by node.
    pub fn transplanted_spinor(&self, rep: &GammaRep, u: Weyl) -> Field {
        aligned_spinor(rep, &self.embedding, &self.patch.grid, u)
    }

    pub fn theorem1(&self, rep: &GammaRep) -> Result<Theorem1> {
        let (frames, _) = self.frames();
        let ops = BoundaryOperators::new(rep.clone(), &self.patch.grid, &frames)?;
        let psi = self.transplanted_spinor(rep, Weyl::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let density = ops.senwitten_density(&psi)?;
        let split = ops.senwitten_parts(&psi)?;
        let parts = [0, 1, 2].map(|i| self.patch.integrate(&split.iter().map(|s| s[i]).collect::<Vec<_>>()));
        let integral = self.patch.integrate(&density);
        let eight_pi_e = 8.0 * PI * self.energy().e;
        let residual = (eight_pi_e + integral).abs();
        Ok(Theorem1 { integral, parts, eight_pi_e, residual, relative_residual: residual / eight_pi_e.abs().max(1.0) })
    }

    /// Chiral mass Ẽ for a trial field ψ+ given in the mean-curvature frames.
    pub fn chiral_mass(&self, rep: &GammaRep, psi_plus: &[Spinor]) -> Result<ChiralMass> {
        let g = &self.patch.grid;
        if psi_plus.len() != g.len() {
            return Err(QlmError::Frame { module: MODULE, detail: format!("{} values for {} nodes", psi_plus.len(), g.len()) });
        }
        let pm = rep.chiral_projector(-1.0);
        let leak = psi_plus.iter().map(|p| (pm * p).norm() / p.norm().max(1.0)).fold(0.0, f64::max);
        if leak > CHIRALITY_TOLERANCE {
            return Err(QlmError::Flag { module: MODULE, detail: format!("trial field is not chiral-plus (|P-psi| = {leak:.3e})") });
        }
        let (frames, _) = self.frames();
        let ops = BoundaryOperators::new(rep.clone(), g, &frames)?;
        let phi = self.transplanted_spinor(rep, Weyl::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let (phi_p, phi_m) = ops.chiral_split(&phi);
        let n = g.len();
        let (mut total, mut twist, mut lemma, mut bound) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut max_twist: f64 = 0.0;
        for k in 0..n {
            let w = frames.nodes[k].twist;
            max_twist = max_twist.max(w[0].hypot(w[1]));
            let (hf, h) = (self.h_flat[k], self.norm_h[k]);
            let psi = &psi_plus[k];
            let mut t = 0.0;
            for (a, wa) in [(2, w[0]), (3, w[1])] {
                t += 2.0 * psi.dotc(&(rep.g[0] * rep.upper(a) * phi_m[k])).re * wa;
            }
            twist[k] = t;
            total[k] = 2.0 * psi.dotc(&phi_p[k]).re * hf - (psi.norm_squared() + phi_p[k].norm_squared()) * h + t;
            lemma[k] = (0.5 + psi.norm_squared()) * (hf - h);
            bound[k] = -(psi.norm_squared() * (hf - h) + psi.norm() * w[0].hypot(w[1]));
        }
        let twist_free = max_twist <= TWIST_FREE_TOLERANCE;
        let scale = 1.0 / (8.0 * PI);
        Ok(ChiralMass {
            e_tilde: self.patch.integrate(&total) * scale,
            twist_term: self.patch.integrate(&twist),
            twist_free,
            lemma5: twist_free.then(|| self.patch.integrate(&lemma) * scale),
            bound_lhs: 4.0 * PI * self.energy().e,
            bound_rhs: self.patch.integrate(&bound),
        })
    }

    /// φ+ of the transplanted aligned spinor, the canonical trial field.
    pub fn aligned_plus(&self, rep: &GammaRep) -> Field {
        let phi = self.transplanted_spinor(rep, Weyl::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
        let pp = rep.chiral_projector(1.0);
        phi.iter().map(|p| pp * p).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub band_limit: usize,
    /// NaN when the surface could not be evaluated at this resolution
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassReport {
    pub spacetime: String,
    pub spacetime_params: BTreeMap<String, f64>,
    pub surface: String,
    pub surface_params: BTreeMap<String, f64>,
    pub band_limit: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "A")]
    pub area: f64,
    #[serde(rename = "M_irr")]
    pub m_irr: f64,
    pub int_norm_h: f64,
    pub int_h_flat: f64,
    pub hamiltonian_difference: f64,
    pub theorem1_residual: f64,
    pub chiral_mass: f64,
    pub convergence: Vec<ConvergenceRow>,
}

/// Full mass report at the grid's resolution, with the convergence table
/// over `bands` (each entry evaluated on its default grid).
pub fn mean_curvature_mass(
    model: &SpacetimeModel,
    family: &SurfaceFamily,
    grid: SphereGrid,
    bands: &[usize],
) -> Result<MassReport> {
    let rep = GammaRep::standard();
    let (band_limit, n_theta, n_phi) = (grid.band_limit, grid.n_theta, grid.n_phi);
    let surf = MassSurface::new(model, family, grid)?;
    let energy = surf.energy();
    let ham = surf.hamiltonian();
    let th = surf.theorem1(&rep)?;
    let chiral = surf.chiral_mass(&rep, &surf.aligned_plus(&rep))?;
    let convergence = bands
        .par_iter()
        .map(|&l| match SphereGrid::new(l).and_then(|g| MassSurface::new(model, family, g)) {
            Ok(s) => ConvergenceRow { band_limit: l, e: s.energy().e, error: None },
            Err(e) => ConvergenceRow { band_limit: l, e: f64::NAN, error: Some(e.to_string()) },
        })
        .collect();
    Ok(MassReport {
        spacetime: model.name().to_string(),
        spacetime_params: model.params().clone(),
        surface: family.name().to_string(),
        surface_params: family.params(),
        band_limit,
        n_theta,
        n_phi,
        e: energy.e,
        area: energy.area,
        m_irr: energy.m_irr,
        int_norm_h: energy.int_norm_h,
        int_h_flat: energy.int_h_flat,
        hamiltonian_difference: ham.difference,
        theorem1_residual: th.relative_residual,
        chiral_mass: chiral.e_tilde,
        convergence,
    })
}

/// Energy only, for sweeps.
pub fn energy_at(model: &SpacetimeModel, family: &SurfaceFamily, band_limit: usize) -> Result<Energy> {
    Ok(MassSurface::new(model, family, SphereGrid::new(band_limit)?)?.energy())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub two_m_irr: f64,
}

fn sweep(model: &SpacetimeModel, radii: &[f64], band_limit: usize) -> Result<Vec<SweepRow>> {
    radii
        .par_iter()
        .map(|&r| {
            let fam = SurfaceFamily::Sphere { r };
            let en = energy_at(model, &fam, band_limit)?;
            Ok(SweepRow { r, e: en.e, two_m_irr: 2.0 * en.m_irr })
        })
        .collect()
}

/// Least-squares coefficients of y = Σ_k c_k x^k, k = 0..=degree.
pub fn polynomial_fit(x: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>> {
    if x.len() != y.len() || x.len() <= degree {
        return Err(QlmError::Parameter { module: MODULE, detail: format!("{} points cannot fit degree {degree}", x.len()) });
    }
    let a = DMatrix::from_fn(x.len(), degree + 1, |i, k| x[i].powi(k as i32));
    let b = DVector::from_column_slice(y);
    let c = a.svd(true, true).solve(&b, 1e-14).map_err(|e| QlmError::Parameter { module: MODULE, detail: e.to_string() })?;
    Ok(c.iter().copied().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmSweep {
    pub rows: Vec<SweepRow>,
    /// M from the fit E = M + c/r
    pub fitted_mass: f64,
    pub fitted_c: f64,
    /// M from E = M + c1/r + c2/r², for comparison
    pub fitted_mass_quadratic: f64,
    pub model_mass: f64,
}

pub fn adm_limit_sweep(model: &SpacetimeModel, radii: &[f64], band_limit: usize) -> Result<AdmSweep> {
    let rows = sweep(model, radii, band_limit)?;
    let x: Vec<f64> = rows.iter().map(|r| 1.0 / r.r).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.e).collect();
    let lin = polynomial_fit(&x, &y, 1)?;
    let quad = if x.len() > 2 { polynomial_fit(&x, &y, 2)?[0] } else { f64::NAN };
    Ok(AdmSweep { rows, fitted_mass: lin[0], fitted_c: lin[1], fitted_mass_quadratic: quad, model_mass: model.mass() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorizonBound {
    pub rows: Vec<SweepRow>,
    /// E extrapolated to r → r_h
    pub e_limit: f64,
    /// 2M_irr extrapolated to r → r_h
    pub two_m_irr_limit: f64,
    pub margin: f64,
}

/// One-sided extrapolation of E(r) and 2M_irr(r) as r → r_h⁺. E has a
/// square-root branch at the horizon, so the data are interpolated by a
/// polynomial in s = √(r − r_h) and evaluated at s = 0.
pub fn horizon_bound_check(model: &SpacetimeModel, radii: &[f64], band_limit: usize) -> Result<HorizonBound> {
    let rh = model.horizon_radius().ok_or_else(|| QlmError::Parameter {
        module: MODULE,
        detail: format!("'{}' has no horizon", model.name()),
    })?;
    if radii.iter().any(|&r| r <= rh) {
        return Err(QlmError::NonConvex { min_norm_h: 0.0, threshold: CONVEXITY_THRESHOLD });
    }
    let rows = sweep(model, radii, band_limit)?;
    let s: Vec<f64> = rows.iter().map(|r| (r.r - rh).sqrt()).collect();
    let deg = rows.len() - 1;
    let e_limit = polynomial_fit(&s, &rows.iter().map(|r| r.e).collect::<Vec<_>>(), deg)?[0];
    let two_m_irr_limit = polynomial_fit(&s, &rows.iter().map(|r| r.two_m_irr).collect::<Vec<_>>(), deg)?[0];
    Ok(HorizonBound { rows, e_limit, two_m_irr_limit, margin: e_limit - two_m_irr_limit })
}
