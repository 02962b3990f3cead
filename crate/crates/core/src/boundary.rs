//! Spinor fields on a 2-surface and the boundary Dirac-type operators built
//! from the surface's adapted orthonormal frame (e0, e1 normal, e2 = ∂θ/|∂θ|,
//! e3 tangential).
//!
//! Components of a field are taken relative to the adapted frame of each node,
//! so they are spin-weighted functions on the sphere: component k has spin
//! weight `COMPONENT_SPIN2[k] / 2`. Tangential derivatives are spectral.

use num_complex::Complex64;

use crate::embedding::EmbeddingProfile;
use crate::error::{QlmError, Result};
use crate::geometry::{ExtrinsicGeometry, NodeGeometry, NormalGauge};
use crate::sphere::SphereGrid;
use crate::spinor::{GammaMatrix, GammaRep, Spinor, Weyl, ETA};

const MODULE: &str = "boundary-dirac";

/// Doubled spin weights of the four components (eigenvalues of iγ2γ3 in the
/// standard representation).
pub const COMPONENT_SPIN2: [i64; 4] = [1, -1, 1, -1];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The per-node frame data the operators need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    /// e_{2+A} = Σ_i coef[A][i] ∂_i
    pub coef: [[f64; 2]; 2],
    /// omega[A][b][c] = g(e_b, ∇_{e_{2+A}} e_c)
    pub omega: [[[f64; 4]; 4]; 2],
    pub kappa0: f64,
    pub kappa1: f64,
    /// ϖ(e2), ϖ(e3)
    pub twist: [f64; 2],
    pub norm_h: f64,
}

impl From<&NodeGeometry> for FrameData {
    fn from(n: &NodeGeometry) -> Self {
        FrameData {
            coef: n.coef,
            omega: n.connection(),
            kappa0: n.kappa0,
            kappa1: n.kappa1,
            twist: n.twist_frame(),
            norm_h: n.norm_h,
        }
    }
}

/// Frame data of a surface together with the normal gauge it was built in.
#[derive(Debug, Clone)]
pub struct SurfaceFrames {
    pub gauge: NormalGauge,
    pub nodes: Vec<FrameData>,
}

impl SurfaceFrames {
    pub fn from_extrinsic(ext: &ExtrinsicGeometry) -> Self {
        SurfaceFrames { gauge: ext.gauge, nodes: ext.nodes.iter().map(FrameData::from).collect() }
    }

    /// Frames of the embedded surface of revolution in a t = const hyperplane
    /// of Minkowski space: e0 = ∂t, e1 the outward normal. This is the
    /// mean-curvature frame of the embedded surface (κ0 = 0, ϖ = 0).
    pub fn embedded(emb: &EmbeddingProfile, f: &[f64], grid: &SphereGrid) -> Self {
        let mut nodes = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            let i = k / grid.n_phi;
            let sf = f[i].sqrt();
            let rho = emb.rho[i];
            let mut w = [[[0.0; 4]; 4]; 2];
            w[0][1][2] = -emb.kappa_meridian[i];
            w[1][1][3] = -emb.kappa_parallel[i];
            w[1][2][3] = -emb.d_rho[i] / (rho * sf);
            for a in 0..2 {
                for b in 0..4 {
                    for cc in 0..b {
                        w[a][b][cc] = -w[a][cc][b];
                    }
                }
            }
            nodes.push(FrameData {
                coef: [[1.0 / sf, 0.0], [0.0, 1.0 / rho]],
                omega: w,
                kappa0: 0.0,
                kappa1: emb.h_flat[i],
                twist: [0.0, 0.0],
                norm_h: emb.h_flat[i],
            });
        }
        SurfaceFrames { gauge: NormalGauge::MeanCurvature, nodes }
    }
}

/// Operators acting on spinor fields over a fixed surface.
pub struct BoundaryOperators<'a> {
    pub rep: GammaRep,
    pub grid: &'a SphereGrid,
    pub frames: &'a SurfaceFrames,
}

pub type Field = Vec<Spinor>;

impl<'a> BoundaryOperators<'a> {
    pub fn new(rep: GammaRep, grid: &'a SphereGrid, frames: &'a SurfaceFrames) -> Result<Self> {
        if frames.nodes.len() != grid.len() {
            return Err(QlmError::Frame {
                module: MODULE,
                detail: format!("{} frame nodes for a grid of {}", frames.nodes.len(), grid.len()),
            });
        }
        Ok(BoundaryOperators { rep, grid, frames })
    }

    fn check(&self, psi: &[Spinor]) -> Result<()> {
        if psi.len() != self.grid.len() {
            return Err(QlmError::Frame {
                module: MODULE,
                detail: format!("spinor field has {} nodes, grid has {}", psi.len(), self.grid.len()),
            });
        }
        Ok(())
    }

    /// Frame derivatives e_A(ψ) of the components, A = 2, 3.
    pub fn frame_derivatives(&self, psi: &[Spinor]) -> Result<[Field; 2]> {
        self.check(psi)?;
        let n = self.grid.len();
        let mut dth = vec![Spinor::zeros(); n];
        let mut dph = vec![Spinor::zeros(); n];
        for (comp, &s2) in COMPONENT_SPIN2.iter().enumerate() {
            let f: Vec<Complex64> = psi.iter().map(|p| p[comp]).collect();
            let (a, b) = self.grid.gradient(s2, &f)?;
            for k in 0..n {
                dth[k][comp] = a[k];
                dph[k][comp] = b[k];
            }
        }
        let mut out = [vec![Spinor::zeros(); n], vec![Spinor::zeros(); n]];
        for k in 0..n {
            let cf = &self.frames.nodes[k].coef;
            for (a, o) in out.iter_mut().enumerate() {
                o[k] = dth[k] * c(cf[a][0]) + dph[k] * c(cf[a][1]);
            }
        }
        Ok(out)
    }

    /// ½ Σ_{b<c} w_bc γ^b γ^c restricted to the given index pairs.
    fn connection_matrix(&self, w: &[[f64; 4]; 4], pairs: &[(usize, usize)]) -> GammaMatrix {
        let mut m = GammaMatrix::zeros();
        for &(b, cc) in pairs {
            m += self.rep.upper(b) * self.rep.upper(cc) * c(0.5 * w[b][cc]);
        }
        m
    }

    fn covariant(&self, psi: &[Spinor], pairs: &[(usize, usize)]) -> Result<[Field; 2]> {
        let mut d = self.frame_derivatives(psi)?;
        for k in 0..psi.len() {
            let node = &self.frames.nodes[k];
            for (a, da) in d.iter_mut().enumerate() {
                da[k] += self.connection_matrix(&node.omega[a], pairs) * psi[k];
            }
        }
        Ok(d)
    }

    /// Intrinsic spin derivative D_A ψ (tangential rotation only).
    pub fn intrinsic_derivative(&self, psi: &[Spinor]) -> Result<[Field; 2]> {
        self.covariant(psi, &[(2, 3)])
    }

    /// Spacetime spin derivative ∇_A ψ along the surface.
    pub fn full_derivative(&self, psi: &[Spinor]) -> Result<[Field; 2]> {
        self.covariant(psi, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    /// Twist-covariant derivative ethD_A = D_A + ½ϖ_A γ0γ1.
    pub fn twisted_derivative(&self, psi: &[Spinor]) -> Result<[Field; 2]> {
        let mut d = self.intrinsic_derivative(psi)?;
        let g01 = self.rep.g[0] * self.rep.g[1];
        for k in 0..psi.len() {
            let tw = self.frames.nodes[k].twist;
            for (a, da) in d.iter_mut().enumerate() {
                da[k] += g01 * psi[k] * c(0.5 * tw[a]);
            }
        }
        Ok(d)
    }

    fn contract(&self, d: &[Field; 2], flux: bool) -> Field {
        let g1 = self.rep.g[1];
        (0..d[0].len())
            .map(|k| {
                let s = self.rep.upper(2) * d[0][k] + self.rep.upper(3) * d[1][k];
                if flux {
                    g1 * s
                } else {
                    s
                }
            })
            .collect()
    }

    /// Dirac operator of the surface, D̸_S ψ = γ^A ∇_A ψ.
    pub fn dirac_s(&self, psi: &[Spinor]) -> Result<Field> {
        Ok(self.contract(&self.full_derivative(psi)?, false))
    }

    /// Intrinsic flux operator b-D̸ ψ = γ1 γ^A D_A ψ.
    pub fn flux_dirac(&self, psi: &[Spinor]) -> Result<Field> {
        Ok(self.contract(&self.intrinsic_derivative(psi)?, true))
    }

    /// Covariant edth-flux operator b-ethD̸ ψ = γ1 γ^A ethD_A ψ in the frames'
    /// own gauge (the hatted operator when the gauge is the mean-curvature one).
    pub fn eth_flux(&self, psi: &[Spinor]) -> Result<Field> {
        Ok(self.contract(&self.twisted_derivative(psi)?, true))
    }

    /// Hatted b-ethD̸; requires mean-curvature frames.
    pub fn hatted_eth_flux(&self, psi: &[Spinor]) -> Result<Field> {
        self.require_mean_curvature()?;
        self.eth_flux(psi)
    }

    fn require_mean_curvature(&self) -> Result<()> {
        if self.frames.gauge != NormalGauge::MeanCurvature {
            return Err(QlmError::Frame {
                module: MODULE,
                detail: "operator needs the mean-curvature frame".into(),
            });
        }
        Ok(())
    }

    /// Right-hand side of the general-frame decomposition,
    /// γ1(b-ethD̸ψ + ½κ1ψ − ½κ0 γ1γ0ψ).
    pub fn general_frame_form(&self, psi: &[Spinor]) -> Result<Field> {
        let e = self.eth_flux(psi)?;
        let g1 = self.rep.g[1];
        let g10 = self.rep.g[1] * self.rep.g[0];
        Ok((0..psi.len())
            .map(|k| {
                let n = &self.frames.nodes[k];
                g1 * (e[k] + psi[k] * c(0.5 * n.kappa1) - g10 * psi[k] * c(0.5 * n.kappa0))
            })
            .collect())
    }

    /// γ1(b-ethD̸-hat ψ + ½|H|ψ) in mean-curvature frames.
    pub fn hatted_form(&self, psi: &[Spinor]) -> Result<Field> {
        let e = self.hatted_eth_flux(psi)?;
        let g1 = self.rep.g[1];
        Ok((0..psi.len()).map(|k| g1 * (e[k] + psi[k] * c(0.5 * self.frames.nodes[k].norm_h))).collect())
    }

    /// Tangential flux F(ψ) = ψ† b-D̸ψ + c.c.
    pub fn flux(&self, psi: &[Spinor]) -> Result<Vec<f64>> {
        let d = self.flux_dirac(psi)?;
        Ok(psi.iter().zip(&d).map(|(p, q)| 2.0 * p.dotc(q).re).collect())
    }

    /// Twist-covariant flux F(ψ; ϖ) = ψ† b-ethD̸ψ + c.c.
    pub fn covariant_flux(&self, psi: &[Spinor]) -> Result<Vec<f64>> {
        let d = self.eth_flux(psi)?;
        Ok(psi.iter().zip(&d).map(|(p, q)| 2.0 * p.dotc(q).re).collect())
    }

    /// Imaginary part of ψ† b-D̸ψ + c.c. computed without symmetrizing.
    pub fn flux_imaginary_residue(&self, psi: &[Spinor]) -> Result<f64> {
        let d = self.flux_dirac(psi)?;
        Ok(psi
            .iter()
            .zip(&d)
            .map(|(p, q)| (p.dotc(q) + q.dotc(p)).im.abs())
            .fold(0.0, f64::max))
    }

    /// ψ† b-ethD̸-hat ψ + c.c. + |H||ψ|², the surface integrand of the
    /// Sen–Witten identity.
    pub fn senwitten_density(&self, psi: &[Spinor]) -> Result<Vec<f64>> {
        self.require_mean_curvature()?;
        let flux = self.covariant_flux(psi)?;
        Ok((0..psi.len()).map(|k| flux[k] + self.frames.nodes[k].norm_h * psi[k].norm_squared()).collect())
    }

    /// Integrand split as F(ψ) − ϖ·ξ∥ + |H|ξ⁰ (ξ∥ = tangential current).
    pub fn senwitten_parts(&self, psi: &[Spinor]) -> Result<Vec<[f64; 3]>> {
        let flux = self.flux(psi)?;
        Ok((0..psi.len())
            .map(|k| {
                let n = &self.frames.nodes[k];
                let xi = self.rep.current(&psi[k]);
                [flux[k], -(n.twist[0] * xi[2] + n.twist[1] * xi[3]), n.norm_h * xi[0]]
            })
            .collect())
    }

    /// Chirally decomposed integrand 2ψ+† b-ethD̸ψ− + c.c. + |H|(|ψ+|² + |ψ−|²),
    /// with |H| supplied per node.
    pub fn chiral_density_with(&self, psi: &[Spinor], norm_h: &[f64]) -> Result<Vec<f64>> {
        let (plus, minus) = self.chiral_split(psi);
        let d = self.eth_flux(&minus)?;
        Ok((0..psi.len())
            .map(|k| {
                4.0 * plus[k].dotc(&d[k]).re + norm_h[k] * (plus[k].norm_squared() + minus[k].norm_squared())
            })
            .collect())
    }

    pub fn chiral_density(&self, psi: &[Spinor]) -> Result<Vec<f64>> {
        self.require_mean_curvature()?;
        let h: Vec<f64> = self.frames.nodes.iter().map(|n| n.norm_h).collect();
        self.chiral_density_with(psi, &h)
    }

    /// (P̂+ψ, P̂−ψ) in the node frames.
    pub fn chiral_split(&self, psi: &[Spinor]) -> (Field, Field) {
        let (pp, pm) = (self.rep.chiral_projector(1.0), self.rep.chiral_projector(-1.0));
        (psi.iter().map(|p| pp * p).collect(), psi.iter().map(|p| pm * p).collect())
    }

    /// Boundary Witten residual γ1(b-D̸ψ + ½|H|ψ) on a surface in a flat
    /// hyperplane (mean-curvature frames with ϖ = 0, κ0 = 0).
    pub fn witten_residual_embedded(&self, psi: &[Spinor]) -> Result<Field> {
        self.require_mean_curvature()?;
        let d = self.flux_dirac(psi)?;
        let g1 = self.rep.g[1];
        Ok((0..psi.len()).map(|k| g1 * (d[k] + psi[k] * c(0.5 * self.frames.nodes[k].norm_h))).collect())
    }

    /// Boundary Witten residual in an arbitrary normal gauge,
    /// γ1(b-ethD̸ψ + ½κ1ψ − ½κ0γ1γ0ψ).
    pub fn witten_residual_general(&self, psi: &[Spinor]) -> Result<Field> {
        self.general_frame_form(psi)
    }

    /// Re-express a field in frames boosted by `rapidity[k]` at node k.
    pub fn boost_field(&self, psi: &[Spinor], rapidity: &[f64]) -> Field {
        psi.iter().zip(rapidity).map(|(p, &l)| self.rep.boost_lift(l) * p).collect()
    }
}

/// Largest pointwise norm of a spinor field.
pub fn sup_norm(psi: &[Spinor]) -> f64 {
    psi.iter().map(|p| p.norm()).fold(0.0, f64::max)
}

/// Band-limited random field: each component is a sum of spin-weighted
/// harmonics up to `band` with coefficients decaying like (1 + l)⁻².
pub fn smooth_random_field(grid: &SphereGrid, band: usize, seed: u64) -> Result<Field> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut psi = vec![Spinor::zeros(); grid.len()];
    let l2max = (2 * band as i64 + 1).min(grid.l2_max(1));
    for (comp, &s2) in COMPONENT_SPIN2.iter().enumerate() {
        let mut coeffs = crate::sphere::SpinCoeffs::zeros(s2, l2max);
        let modes: Vec<_> = coeffs.modes().collect();
        for (l2, m2) in modes {
            let amp = 1.0 / (1.0 + 0.5 * l2 as f64).powi(2);
            *coeffs.get_mut(l2, m2) = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
        }
        let f = grid.synthesize(&coeffs)?;
        for (p, v) in psi.iter_mut().zip(f) {
            p[comp] = v;
        }
    }
    Ok(psi)
}

/// Spinor field with constant frame components.
pub fn constant_field(grid: &SphereGrid, psi: Spinor) -> Field {
    vec![psi; grid.len()]
}

/// Frame components ξ^a of the Dirac current at each node.
pub fn current_field(rep: &GammaRep, psi: &[Spinor]) -> Vec<[f64; 4]> {
    psi.iter().map(|p| rep.current(p)).collect()
}

/// Lorentzian inner product of frame components.
pub fn frame_dot(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    (0..4).map(|a| ETA[a] * u[a] * v[a]).sum()
}

pub fn upper_block(psi: &Spinor) -> Weyl {
    Weyl::new(psi[0], psi[1])
}

/// Cartesian components of the constant aligned spinor with upper block `u`
/// (normalized): the +1 eigenspinor of iγ0, so ξ = (1, 0, 0, 0).
pub fn aligned_cartesian(u: Weyl) -> Spinor {
    let u = u / c(u.norm());
    let k = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    Spinor::new(u[0] * k, u[1] * k, -i * u[0] * k, -i * u[1] * k)
}

/// Spin lift taking the Cartesian frame (E_t, E_Z, E_x, E_y) to the adapted
/// frame of a surface of revolution at azimuth φ with normal angle α: first
/// the rotation by φ about E_Z, then the tilt by α. Components transform as
/// ψ' = Sψ.
pub fn revolution_lift(rep: &GammaRep, alpha: f64, phi: f64) -> GammaMatrix {
    rep.rotation_lift(1, 2, alpha) * rep.rotation_lift(2, 3, phi)
}

/// The aligned parallel spinor of the embedded surface, re-expressed in the
/// adapted frame of each grid node.
pub fn aligned_spinor(rep: &GammaRep, emb: &EmbeddingProfile, grid: &SphereGrid, u: Weyl) -> Field {
    let cart = aligned_cartesian(u);
    let alpha = emb.normal_angle();
    (0..grid.len())
        .map(|k| {
            let (i, j) = (k / grid.n_phi, k % grid.n_phi);
            let s = revolution_lift(rep, alpha[i], grid.phi[j]);
            s * cart
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::AxisymmetricProfile;

    fn unit_sphere(band_limit: usize) -> (SphereGrid, EmbeddingProfile, Vec<f64>) {
        let grid = SphereGrid::new(band_limit).unwrap();
        let f = vec![1.0; grid.n_theta];
        let g = grid.theta.iter().map(|t| t.sin().powi(2)).collect();
        let emb = AxisymmetricProfile::new(grid.theta.clone(), f.clone(), g).unwrap().embed().unwrap();
        (grid, emb, f)
    }

    #[test]
    fn aligned_spinor_is_parallel_by_finite_differences() {
        let rep = GammaRep::standard();
        let cart = aligned_cartesian(Weyl::new(c(0.6), Complex64::new(0.0, 0.8)));
        let comp = |t: f64, p: f64| revolution_lift(&rep, t, p) * cart;
        let h = 1e-4;
        for &(t, p) in &[(0.4, 0.3), (1.3, 2.0), (2.6, 5.0)] {
            let dt = (comp(t + h, p) - comp(t - h, p)) / c(2.0 * h);
            let dp = (comp(t, p + h) - comp(t, p - h)) / c(2.0 * h);
            let psi = comp(t, p);
            let g = |a: usize, b: usize| rep.upper(a) * rep.upper(b);
            // unit sphere: ω_12(e2) = ω_13(e3) = −1, ω_23(e3) = −cotθ
            let n2 = dt + (g(1, 2) * c(-0.5)) * psi;
            let n3 = dp / c(t.sin()) + (g(1, 3) * c(-0.5) + g(2, 3) * c(-0.5 / t.tan())) * psi;
            assert!(n2.norm() < 1e-8 && n3.norm() < 1e-8, "{} {}", n2.norm(), n3.norm());
        }
    }

    #[test]
    fn spectral_derivatives_match_analytic_components() {
        let rep = GammaRep::standard();
        let (grid, emb, f) = unit_sphere(12);
        let frames = SurfaceFrames::embedded(&emb, &f, &grid);
        let ops = BoundaryOperators::new(rep.clone(), &grid, &frames).unwrap();
        let psi = aligned_spinor(&rep, &emb, &grid, Weyl::new(c(1.0), c(0.0)));
        let d = ops.full_derivative(&psi).unwrap();
        let worst = d.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst}");
    }
}
