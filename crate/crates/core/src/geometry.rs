//! Induced metric, adapted normal frames and extrinsic geometry of a
//! spacelike 2-surface.
//!
//! Everything at a node is computed from the analytic jet of the immersion,
//! so quantities that need one more derivative (the twist, the Gaussian
//! curvature) are obtained by high-order central differences of these
//! pointwise constructions in (θ, φ).

use std::f64::consts::PI;

use crate::error::{QlmError, Result};
use crate::spacetime::{Chart, Christoffel, Mat4, SpacetimeModel, Vec4};
use crate::sphere::SphereGrid;
use crate::surface::{MapJet, SurfaceFamily};

const MODULE: &str = "surface-geometry";

/// Below this |H| the mean-curvature frame is not formed.
pub const CONVEXITY_THRESHOLD: f64 = 1e-8;

/// Step for the differentiated pointwise constructions.
pub const FD_STEP: f64 = 1e-3;
const FD8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalGauge {
    /// e0 from the slice normal hint, e1 outward
    Slice,
    /// slice frame boosted by a constant rapidity
    Boosted(f64),
    /// e0 = Ĥ⊥, e1 = Ĥ
    MeanCurvature,
}

pub fn dot(g: &Mat4, u: &Vec4, v: &Vec4) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            s += g[a][b] * u[a] * v[b];
        }
    }
    s
}

pub fn axpy(a: f64, x: &Vec4, y: &Vec4) -> Vec4 {
    [a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2], a * x[3] + y[3]]
}

pub fn scale(a: f64, x: &Vec4) -> Vec4 {
    [a * x[0], a * x[1], a * x[2], a * x[3]]
}

fn gamma_contract(gam: &Christoffel, u: &Vec4, v: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                out[a] += gam[a][b][c] * u[b] * v[c];
            }
        }
    }
    out
}

fn inv2(m: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

/// Everything computable at one point from the immersion jet.
#[derive(Debug, Clone, Copy)]
pub struct LocalGeometry {
    pub jet: MapJet,
    pub g: Mat4,
    pub gamma: Christoffel,
    pub sigma: [[f64; 2]; 2],
    pub sigma_inv: [[f64; 2]; 2],
    pub sqrt_det: f64,
    /// ∇_i ∂_j X
    pub hess: [[Vec4; 2]; 2],
    /// σ^{ij} ∇_i ∂_j X; its normal part is −H
    pub trace: Vec4,
    /// e0, e1 (normal), e2, e3 (tangential)
    pub e: [Vec4; 4],
    /// e_{2+A} = Σ_i coef[A][i] ∂_i X
    pub coef: [[f64; 2]; 2],
    pub kappa0: f64,
    pub kappa1: f64,
}

impl LocalGeometry {
    /// κ(v) = −σ^{ij} g(∇_i ∂_j X, v)
    pub fn kappa(&self, v: &Vec4) -> f64 {
        -dot(&self.g, &self.trace, v)
    }

    pub fn mean_curvature(&self) -> Vec4 {
        axpy(-self.kappa0, &self.e[0], &scale(self.kappa1, &self.e[1]))
    }

    pub fn dual_mean_curvature(&self) -> Vec4 {
        axpy(-self.kappa0, &self.e[1], &scale(self.kappa1, &self.e[0]))
    }

    pub fn norm_h(&self) -> f64 {
        (self.kappa1 * self.kappa1 - self.kappa0 * self.kappa0).abs().sqrt()
    }

    /// Second fundamental form K_v(e_A, e_B) = −g(∇_{e_A} e_B, v).
    pub fn shape(&self, v: &Vec4) -> [[f64; 2]; 2] {
        let mut k = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        k[a][b] -= self.coef[a][i] * self.coef[b][j] * dot(&self.g, &self.hess[i][j], v);
                    }
                }
            }
        }
        k
    }

    /// ω_23(∂_i) = g(e2, ∇_i e3) = −g(∇_i ∂_θX, e3)/|∂_θX|.
    pub fn rotation(&self) -> [f64; 2] {
        let a = self.sigma[0][0].sqrt();
        [
            -dot(&self.g, &self.hess[0][0], &self.e[3]) / a,
            -dot(&self.g, &self.hess[1][0], &self.e[3]) / a,
        ]
    }

    /// (∂_k σ_ij) from the connection: g(∇_k T_i, T_j) + g(T_i, ∇_k T_j).
    pub fn sigma_derivs(&self) -> [[[f64; 2]; 2]; 2] {
        let t = &self.jet.d;
        let mut out = [[[0.0; 2]; 2]; 2];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out[k][i][j] =
                        dot(&self.g, &self.hess[k][i], &t[j]) + dot(&self.g, &t[i], &self.hess[k][j]);
                }
            }
        }
        out
    }
}

/// A parametric surface inside a model, sampled on a spectral grid.
#[derive(Debug, Clone)]
pub struct SurfacePatch {
    pub model: SpacetimeModel,
    pub family: SurfaceFamily,
    pub grid: SphereGrid,
    /// covector whose dual is the slice normal (dt by default)
    pub hint: Vec4,
    pub axisymmetric: bool,
    pub sigma: Vec<[[f64; 2]; 2]>,
    pub sqrt_det: Vec<f64>,
    /// quadrature weight times area density: ∮ f dS = Σ f_k ds_k
    pub ds: Vec<f64>,
    pub area: f64,
}

impl SurfacePatch {
    pub fn build(model: &SpacetimeModel, family: &SurfaceFamily, grid: SphereGrid) -> Result<Self> {
        Self::build_with_hint(model, family, grid, [1.0, 0.0, 0.0, 0.0])
    }

    pub fn build_with_hint(
        model: &SpacetimeModel,
        family: &SurfaceFamily,
        grid: SphereGrid,
        hint: Vec4,
    ) -> Result<Self> {
        let mut sigma = Vec::with_capacity(grid.len());
        let mut sqrt_det = Vec::with_capacity(grid.len());
        let mut ds = Vec::with_capacity(grid.len());
        for k in 0..grid.len() {
            let (th, ph) = grid.node(k);
            let jet = family.jet(model.chart(), th, ph);
            let g = model.metric(&jet.x)?;
            let s = induced(&g, &jet);
            let det = s[0][0] * s[1][1] - s[0][1] * s[0][1];
            if !(s[0][0] > 0.0) || !(det > 0.0) {
                return Err(QlmError::Geometry(format!(
                    "non-spacelike node at theta={th:.6}, phi={ph:.6}: sigma_thth={:.3e}, det sigma={det:.3e}",
                    s[0][0]
                )));
            }
            sigma.push(s);
            sqrt_det.push(det.sqrt());
            ds.push(det.sqrt() / th.sin() * grid.solid_angle_weight(k));
        }
        let area = ds.iter().sum();
        let axisymmetric = family.is_axisymmetric() && phi_variation(&grid, &sigma) <= 1e-12;
        Ok(SurfacePatch {
            model: model.clone(),
            family: family.clone(),
            grid,
            hint,
            axisymmetric,
            sigma,
            sqrt_det,
            ds,
            area,
        })
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.ds).map(|(a, b)| a * b).sum()
    }

    /// Largest relative φ-variation of σ/(1, sinθ, sin²θ) along θ rows.
    pub fn sigma_phi_variation(&self) -> f64 {
        phi_variation(&self.grid, &self.sigma)
    }

    /// Pointwise geometry in the chosen normal gauge.
    pub fn local(&self, theta: f64, phi: f64, gauge: NormalGauge) -> Result<LocalGeometry> {
        let jet = self.family.jet(self.model.chart(), theta, phi);
        let g = self.model.metric(&jet.x)?;
        let gamma = self.model.christoffel(&jet.x)?;
        let sigma = induced(&g, &jet);
        let det = sigma[0][0] * sigma[1][1] - sigma[0][1] * sigma[0][1];
        if !(sigma[0][0] > 0.0) || !(det > 0.0) {
            return Err(QlmError::Geometry(format!(
                "non-spacelike point theta={theta:.6}, phi={phi:.6}"
            )));
        }
        let sigma_inv = inv2(&sigma);
        let t = jet.d;
        let mut hess = [[[0.0; 4]; 2]; 2];
        let mut trace = [0.0; 4];
        for i in 0..2 {
            for j in 0..2 {
                let gt = gamma_contract(&gamma, &t[i], &t[j]);
                for a in 0..4 {
                    hess[i][j][a] = jet.dd[i][j][a] + gt[a];
                    trace[a] += sigma_inv[i][j] * hess[i][j][a];
                }
            }
        }

        let (e0, e1) = self.slice_normals(&g, &jet, &sigma_inv)?;
        let a = sigma[0][0].sqrt();
        let e2 = scale(1.0 / a, &t[0]);
        let c = sigma[0][1] / sigma[0][0];
        let w = axpy(-c, &t[0], &t[1]);
        let b = dot(&g, &w, &w).sqrt();
        let e3 = scale(1.0 / b, &w);
        let coef = [[1.0 / a, 0.0], [-c / b, 1.0 / b]];

        let mut local = LocalGeometry {
            jet,
            g,
            gamma,
            sigma,
            sigma_inv,
            sqrt_det: det.sqrt(),
            hess,
            trace,
            e: [e0, e1, e2, e3],
            coef,
            kappa0: 0.0,
            kappa1: 0.0,
        };
        local.kappa0 = local.kappa(&e0);
        local.kappa1 = local.kappa(&e1);

        match gauge {
            NormalGauge::Slice => {}
            NormalGauge::Boosted(lambda) => {
                let (ch, sh) = (lambda.cosh(), lambda.sinh());
                local.e[0] = axpy(ch, &e0, &scale(sh, &e1));
                local.e[1] = axpy(sh, &e0, &scale(ch, &e1));
                local.kappa0 = local.kappa(&local.e[0]);
                local.kappa1 = local.kappa(&local.e[1]);
            }
            NormalGauge::MeanCurvature => {
                let (k0, k1) = (local.kappa0, local.kappa1);
                let hh = k1 * k1 - k0 * k0;
                if !(hh > CONVEXITY_THRESHOLD * CONVEXITY_THRESHOLD) {
                    return Err(QlmError::NonConvex { min_norm_h: hh.abs().sqrt(), threshold: CONVEXITY_THRESHOLD });
                }
                let n = hh.sqrt();
                let (hp, h) = (local.dual_mean_curvature(), local.mean_curvature());
                local.e[0] = scale(1.0 / n, &hp);
                local.e[1] = scale(1.0 / n, &h);
                local.kappa0 = local.kappa(&local.e[0]);
                local.kappa1 = local.kappa(&local.e[1]);
            }
        }
        Ok(local)
    }

    fn slice_normals(&self, g: &Mat4, jet: &MapJet, sigma_inv: &[[f64; 2]; 2]) -> Result<(Vec4, Vec4)> {
        let mut u = [0.0; 4];
        for a in 0..4 {
            // catalog metrics are diagonal
            u[a] = self.hint[a] / g[a][a];
        }
        if !(dot(g, &u, &u) < 0.0) {
            return Err(QlmError::Frame {
                module: MODULE,
                detail: format!("slice normal hint {:?} is not timelike", self.hint),
            });
        }
        let t = &jet.d;
        let project = |v: &Vec4| -> Vec4 {
            let mut out = *v;
            for i in 0..2 {
                for j in 0..2 {
                    out = axpy(-sigma_inv[i][j] * dot(g, v, &t[i]), &t[j], &out);
                }
            }
            out
        };
        let n0 = project(&u);
        let nn = dot(g, &n0, &n0);
        if !(nn < 0.0) {
            return Err(QlmError::Frame {
                module: MODULE,
                detail: "slice normal has no timelike component normal to the surface".into(),
            });
        }
        let mut e0 = scale(1.0 / (-nn).sqrt(), &n0);
        if e0[0] < 0.0 {
            e0 = scale(-1.0, &e0);
        }
        let radial = match self.model.chart() {
            Chart::Spherical => [0.0, 1.0, 0.0, 0.0],
            Chart::Cartesian => [0.0, jet.x[1], jet.x[2], jet.x[3]],
        };
        let mut n1 = project(&radial);
        n1 = axpy(dot(g, &n1, &e0), &e0, &n1);
        let len = dot(g, &n1, &n1);
        if !(len > 0.0) {
            return Err(QlmError::Frame { module: MODULE, detail: "no outward spacelike normal".into() });
        }
        Ok((e0, scale(1.0 / len.sqrt(), &n1)))
    }

    /// Central 8th-order derivative of a pointwise construction along θ (i=0)
    /// or φ (i=1).
    pub fn differentiate<F, const N: usize>(&self, theta: f64, phi: f64, i: usize, f: F) -> Result<[f64; N]>
    where
        F: Fn(f64, f64) -> Result<[f64; N]>,
    {
        let mut out = [0.0; N];
        for (k, c) in FD8.iter().enumerate() {
            let s = (k + 1) as f64 * FD_STEP;
            let (p, m) = if i == 0 {
                (f(theta + s, phi)?, f(theta - s, phi)?)
            } else {
                (f(theta, phi + s)?, f(theta, phi - s)?)
            };
            for n in 0..N {
                out[n] += c * (p[n] - m[n]) / FD_STEP;
            }
        }
        Ok(out)
    }

    /// ϖ_i = g(e1, ∇_i e0) in coordinate components.
    pub fn twist(&self, theta: f64, phi: f64, gauge: NormalGauge) -> Result<[f64; 2]> {
        let l = self.local(theta, phi, gauge)?;
        let mut w = [0.0; 2];
        for i in 0..2 {
            let de0 = self.differentiate(theta, phi, i, |t, p| Ok(self.local(t, p, gauge)?.e[0]))?;
            let cov = axpy(1.0, &de0, &gamma_contract(&l.gamma, &l.jet.d[i], &l.e[0]));
            w[i] = dot(&l.g, &l.e[1], &cov);
        }
        Ok(w)
    }

    /// Gaussian curvature from the Brioschi formula.
    pub fn gauss_curvature(&self, theta: f64, phi: f64) -> Result<f64> {
        let l = self.local(theta, phi, NormalGauge::Slice)?;
        let (e, f, g) = (l.sigma[0][0], l.sigma[0][1], l.sigma[1][1]);
        let d = l.sigma_derivs();
        let (eu, ev, fu, fv, gu, gv) = (d[0][0][0], d[1][0][0], d[0][0][1], d[1][0][1], d[0][1][1], d[1][1][1]);
        let flat = |t: f64, p: f64| -> Result<[f64; 3]> {
            let d = self.local(t, p, NormalGauge::Slice)?.sigma_derivs();
            // (∂θG, ∂φE, ∂θF)
            Ok([d[0][1][1], d[1][0][0], d[0][0][1]])
        };
        let dth = self.differentiate(theta, phi, 0, flat)?;
        let dph = self.differentiate(theta, phi, 1, flat)?;
        let (guu, evv, fuv) = (dth[0], dph[1], dph[2]);
        let det3 = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let a = det3([
            [-0.5 * evv + fuv - 0.5 * guu, 0.5 * eu, fu - 0.5 * ev],
            [fv - 0.5 * gu, e, f],
            [0.5 * gv, f, g],
        ]);
        let b = det3([[0.0, 0.5 * ev, 0.5 * gu], [0.5 * ev, e, f], [0.5 * gu, f, g]]);
        let w = e * g - f * f;
        Ok((a - b) / (w * w))
    }
}

fn induced(g: &Mat4, jet: &MapJet) -> [[f64; 2]; 2] {
    let t = &jet.d;
    let s01 = dot(g, &t[0], &t[1]);
    [[dot(g, &t[0], &t[0]), s01], [s01, dot(g, &t[1], &t[1])]]
}

fn phi_variation(grid: &SphereGrid, sigma: &[[[f64; 2]; 2]]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..grid.n_theta {
        let s = grid.theta[i].sin();
        let base = &sigma[i * grid.n_phi];
        let norm = [1.0, s, s * s];
        for j in 1..grid.n_phi {
            let cur = &sigma[i * grid.n_phi + j];
            let scale_ = base[0][0].abs().max(base[1][1].abs() / (s * s)).max(1e-300);
            let d = [
                (cur[0][0] - base[0][0]) / norm[0],
                (cur[0][1] - base[0][1]) / norm[1],
                (cur[1][1] - base[1][1]) / norm[2],
            ];
            for v in d {
                worst = worst.max(v.abs() / scale_);
            }
        }
    }
    worst
}

/// Per-node extrinsic data in a fixed normal gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeGeometry {
    pub theta: f64,
    pub phi: f64,
    pub x: Vec4,
    pub metric: Mat4,
    pub tangents: [Vec4; 2],
    pub sigma: [[f64; 2]; 2],
    pub frame: [Vec4; 4],
    pub coef: [[f64; 2]; 2],
    pub kappa0: f64,
    pub kappa1: f64,
    pub h: Vec4,
    pub h_perp: Vec4,
    pub norm_h: f64,
    /// ϖ in coordinate components (θ, φ)
    pub twist: [f64; 2],
    /// ω_23 in coordinate components
    pub rotation: [f64; 2],
    /// K_{e0}(A,B) and K_{e1}(A,B)
    pub shape: [[[f64; 2]; 2]; 2],
    pub gauss: f64,
}

impl NodeGeometry {
    /// Frame components of a coordinate 1-form: (w(e2), w(e3)).
    pub fn to_frame(&self, w: &[f64; 2]) -> [f64; 2] {
        [
            self.coef[0][0] * w[0] + self.coef[0][1] * w[1],
            self.coef[1][0] * w[0] + self.coef[1][1] * w[1],
        ]
    }

    pub fn twist_frame(&self) -> [f64; 2] {
        self.to_frame(&self.twist)
    }

    /// Connection coefficients `w[A][b][c]` = ω_bc(e_{2+A}) = g(e_b, ∇_{e_A} e_c).
    pub fn connection(&self) -> [[[f64; 4]; 4]; 2] {
        let tw = self.twist_frame();
        let rot = self.to_frame(&self.rotation);
        let mut w = [[[0.0; 4]; 4]; 2];
        for a in 0..2 {
            w[a][0][1] = -tw[a];
            for b in 0..2 {
                w[a][0][2 + b] = -self.shape[0][a][b];
                w[a][1][2 + b] = -self.shape[1][a][b];
            }
            w[a][2][3] = rot[a];
            for b in 0..4 {
                for c in 0..b {
                    w[a][b][c] = -w[a][c][b];
                }
            }
        }
        w
    }

    pub fn dot(&self, u: &Vec4, v: &Vec4) -> f64 {
        dot(&self.metric, u, v)
    }
}

#[derive(Debug, Clone)]
pub struct ExtrinsicGeometry {
    pub gauge: NormalGauge,
    pub nodes: Vec<NodeGeometry>,
    pub area: f64,
    pub ds: Vec<f64>,
}

impl ExtrinsicGeometry {
    pub fn compute(patch: &SurfacePatch, gauge: NormalGauge) -> Result<Self> {
        let grid = &patch.grid;
        let mut nodes = Vec::with_capacity(grid.len());
        let mut min_h = f64::INFINITY;
        for k in 0..grid.len() {
            let (th, ph) = grid.node(k);
            let slice = patch.local(th, ph, NormalGauge::Slice)?;
            min_h = min_h.min(if slice.kappa1.abs() > slice.kappa0.abs() { slice.norm_h() } else { 0.0 });
            if gauge == NormalGauge::MeanCurvature && min_h < CONVEXITY_THRESHOLD {
                continue;
            }
            let l = patch.local(th, ph, gauge)?;
            let twist = patch.twist(th, ph, gauge)?;
            nodes.push(NodeGeometry {
                theta: th,
                phi: ph,
                x: l.jet.x,
                metric: l.g,
                tangents: l.jet.d,
                sigma: l.sigma,
                frame: l.e,
                coef: l.coef,
                kappa0: l.kappa0,
                kappa1: l.kappa1,
                h: l.mean_curvature(),
                h_perp: l.dual_mean_curvature(),
                norm_h: l.norm_h(),
                twist,
                rotation: l.rotation(),
                shape: [l.shape(&l.e[0]), l.shape(&l.e[1])],
                gauss: patch.gauss_curvature(th, ph)?,
            });
        }
        if gauge == NormalGauge::MeanCurvature && min_h < CONVEXITY_THRESHOLD {
            return Err(QlmError::NonConvex { min_norm_h: min_h, threshold: CONVEXITY_THRESHOLD });
        }
        Ok(ExtrinsicGeometry { gauge, nodes, area: patch.area, ds: patch.ds.clone() })
    }

    pub fn integrate(&self, f: impl Fn(&NodeGeometry) -> f64) -> f64 {
        self.nodes.iter().zip(&self.ds).map(|(n, w)| f(n) * w).sum()
    }

    pub fn gauss_bonnet_residual(&self) -> f64 {
        (self.integrate(|n| n.gauss) - 4.0 * PI).abs()
    }

    pub fn min_norm_h(&self) -> f64 {
        self.nodes.iter().map(|n| n.norm_h).fold(f64::INFINITY, f64::min)
    }
}

/// Largest deviation of H, H⊥ and |H| between the slice frame and a frame
/// boosted by `rapidity`.
pub fn verify_frame_invariance(patch: &SurfacePatch, rapidity: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..patch.grid.len() {
        let (th, ph) = patch.grid.node(k);
        let a = patch.local(th, ph, NormalGauge::Slice)?;
        let b = patch.local(th, ph, NormalGauge::Boosted(rapidity))?;
        let (ha, hb) = (a.mean_curvature(), b.mean_curvature());
        let (pa, pb) = (a.dual_mean_curvature(), b.dual_mean_curvature());
        let scale_ = a.norm_h().max(1.0);
        for c in 0..4 {
            worst = worst.max((ha[c] - hb[c]).abs() / scale_).max((pa[c] - pb[c]).abs() / scale_);
        }
        worst = worst.max((a.norm_h() - b.norm_h()).abs() / scale_);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn model(name: &str, m: Option<f64>) -> SpacetimeModel {
        let mut p = BTreeMap::new();
        if let Some(m) = m {
            p.insert("M".to_string(), m);
        }
        SpacetimeModel::lookup(name, &p).unwrap()
    }

    #[test]
    fn unit_sphere_basics() {
        let m = model("minkowski-spherical", None);
        let patch = SurfacePatch::build(&m, &SurfaceFamily::Sphere { r: 1.0 }, SphereGrid::new(16).unwrap()).unwrap();
        assert!((patch.area - 4.0 * PI).abs() < 1e-12);
        let ext = ExtrinsicGeometry::compute(&patch, NormalGauge::Slice).unwrap();
        for n in &ext.nodes {
            assert!((n.kappa1 - 2.0).abs() < 1e-12 && n.kappa0.abs() < 1e-12);
            assert!((n.gauss - 1.0).abs() < 1e-9, "K = {}", n.gauss);
            assert!(n.twist[0].abs() < 1e-10 && n.twist[1].abs() < 1e-10);
        }
        assert!(ext.gauss_bonnet_residual() < 1e-8);
    }

    #[test]
    fn schwarzschild_r10_frame_and_curvature() {
        let m = model("schwarzschild", Some(1.0));
        let patch = SurfacePatch::build(&m, &SurfaceFamily::Sphere { r: 10.0 }, SphereGrid::new(8).unwrap()).unwrap();
        let l = patch.local(1.0, 0.3, NormalGauge::Slice).unwrap();
        assert!((l.e[0][0] - 1.0 / 0.8f64.sqrt()).abs() < 1e-14);
        assert!((l.e[1][1] - 0.8f64.sqrt()).abs() < 1e-14);
        assert!((l.kappa1 - 0.2 * 0.8f64.sqrt()).abs() < 1e-14);
        assert!((patch.area - 400.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn spacelike_hint_is_rejected() {
        let m = model("minkowski-spherical", None);
        let grid = SphereGrid::new(4).unwrap();
        let patch =
            SurfacePatch::build_with_hint(&m, &SurfaceFamily::Sphere { r: 1.0 }, grid, [0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(patch.local(1.0, 0.0, NormalGauge::Slice), Err(QlmError::Frame { .. })));
    }
}
