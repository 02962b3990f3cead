//! Isometric embedding of axisymmetric 2-metrics f dθ² + g dφ² as surfaces of
//! revolution in Euclidean 3-space.
//!
//! Every profile function is carried as a Legendre series in x = cosθ fitted
//! on the Gauss–Legendre nodes: ρ = sinθ q(x) and z' = sinθ s(x) with q, s
//! smooth through the poles.

use crate::error::{QlmError, Result};
use crate::geometry::SurfacePatch;
use crate::surface::legendre_jet;

pub const AXISYMMETRY_TOLERANCE: f64 = 1e-10;
pub const EMBEDDING_MARGIN: f64 = 1e-12;
pub const POLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct AxisymmetricProfile {
    /// θ nodes, ascending
    pub theta: Vec<f64>,
    /// σ_θθ
    pub f: Vec<f64>,
    /// σ_φφ
    pub g: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EmbeddingProfile {
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub z: Vec<f64>,
    pub d_rho: Vec<f64>,
    pub d_z: Vec<f64>,
    pub kappa_meridian: Vec<f64>,
    pub kappa_parallel: Vec<f64>,
    pub h_flat: Vec<f64>,
    /// Gaussian curvature of (f, g) computed intrinsically
    pub gauss: Vec<f64>,
    /// max |ρ'² + z'² − f|, |ρ² − g| over nodes
    pub metric_residual: f64,
    /// ρ'/√f at the two poles (north, south)
    pub pole_slopes: [f64; 2],
}

/// Legendre series Σ c_l P_l(x).
#[derive(Debug, Clone)]
struct Legendre {
    c: Vec<f64>,
}

impl Legendre {
    /// Interpolating series through values on Gauss–Legendre nodes.
    fn fit(x: &[f64], w: &[f64], v: &[f64]) -> Self {
        let n = x.len();
        let mut c = vec![0.0; n];
        for (k, &xk) in x.iter().enumerate() {
            let (mut p0, mut p1) = (1.0, xk);
            for (l, cl) in c.iter_mut().enumerate() {
                let p = if l == 0 { 1.0 } else { p1 };
                *cl += (2 * l + 1) as f64 / 2.0 * w[k] * v[k] * p;
                if l >= 1 {
                    let lf = (l + 1) as f64;
                    let next = ((2.0 * lf - 1.0) * xk * p1 - (lf - 1.0) * p0) / lf;
                    p0 = p1;
                    p1 = next;
                }
            }
        }
        Legendre { c }
    }

    fn jet(&self, x: f64) -> (f64, f64, f64) {
        self.c.iter().enumerate().fold((0.0, 0.0, 0.0), |acc, (l, cl)| {
            let (p, d, dd) = legendre_jet(l, x);
            (acc.0 + cl * p, acc.1 + cl * d, acc.2 + cl * dd)
        })
    }

    fn value_at_end(&self, sign: f64) -> f64 {
        self.c
            .iter()
            .enumerate()
            .map(|(l, cl)| cl * if sign < 0.0 && l % 2 == 1 { -1.0 } else { 1.0 })
            .sum()
    }

    /// ∫_x^1 of the series.
    fn integral_to_north(&self, x: f64) -> f64 {
        // ∫_{-1}^x P_l = (P_{l+1} − P_{l−1})/(2l+1), ∫_{-1}^x P_0 = x + 1
        let anti = |x: f64| {
            let mut s = self.c.first().copied().unwrap_or(0.0) * (x + 1.0);
            for (l, cl) in self.c.iter().enumerate().skip(1) {
                let up = legendre_jet(l + 1, x).0;
                let down = legendre_jet(l - 1, x).0;
                s += cl * (up - down) / (2 * l + 1) as f64;
            }
            s
        };
        anti(1.0) - anti(x)
    }
}

impl AxisymmetricProfile {
    pub fn new(theta: Vec<f64>, f: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if theta.len() != f.len() || theta.len() != g.len() || theta.len() < 3 {
            return Err(QlmError::Parameter {
                module: "weyl-embedding",
                detail: "theta, f, g must have equal length >= 3".into(),
            });
        }
        if let Some(k) = (0..theta.len()).find(|&k| !(f[k] > 0.0 && g[k] > 0.0)) {
            return Err(QlmError::Parameter {
                module: "weyl-embedding",
                detail: format!("metric not positive at theta = {:.6}", theta[k]),
            });
        }
        Ok(AxisymmetricProfile { theta, f, g })
    }

    /// σ_θθ and σ_φφ along the first meridian of an axisymmetric patch.
    pub fn from_patch(patch: &SurfacePatch) -> Result<Self> {
        let deviation = patch.sigma_phi_variation();
        let off_diagonal = patch
            .sigma
            .iter()
            .map(|s| s[0][1].abs() / (s[0][0] * s[1][1]).sqrt())
            .fold(0.0, f64::max);
        let deviation = deviation.max(off_diagonal);
        if !patch.family.is_axisymmetric() || deviation > AXISYMMETRY_TOLERANCE {
            return Err(QlmError::NotAxisymmetric { deviation, tolerance: AXISYMMETRY_TOLERANCE });
        }
        let grid = &patch.grid;
        let rows = 0..grid.n_theta;
        let f = rows.clone().map(|i| patch.sigma[i * grid.n_phi][0][0]).collect();
        let g = rows.map(|i| patch.sigma[i * grid.n_phi][1][1]).collect();
        Self::new(grid.theta.clone(), f, g)
    }

    /// Surface of revolution with ρ = √g and z(θ) = ∫₀^θ √(f − ρ'²) dθ'.
    pub fn embed(&self) -> Result<EmbeddingProfile> {
        let n = self.theta.len();
        let x: Vec<f64> = self.theta.iter().map(|t| t.cos()).collect();
        let (nodes, weights) = crate::sphere::gauss_legendre(n);
        let mut w = Vec::with_capacity(n);
        for xi in &x {
            let (j, dist) = nodes
                .iter()
                .map(|xn| (xn - xi).abs())
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((0, f64::INFINITY));
            if dist > 1e-10 {
                return Err(QlmError::Parameter {
                    module: "weyl-embedding",
                    detail: "theta samples must be Gauss-Legendre nodes in cos(theta)".into(),
                });
            }
            w.push(weights[j]);
        }

        let sin: Vec<f64> = self.theta.iter().map(|t| t.sin()).collect();
        let q_vals: Vec<f64> = (0..n).map(|k| self.g[k].sqrt() / sin[k]).collect();
        let q = Legendre::fit(&x, &w, &q_vals);
        let f_fit = Legendre::fit(&x, &w, &self.f);

        let mut rho = vec![0.0; n];
        let mut d_rho = vec![0.0; n];
        let mut dd_rho = vec![0.0; n];
        let mut s_vals = vec![0.0; n];
        for k in 0..n {
            let (s, c) = (sin[k], x[k]);
            let (qv, qx, qxx) = q.jet(c);
            rho[k] = s * qv;
            d_rho[k] = c * qv - s * s * qx;
            dd_rho[k] = -s * qv - 3.0 * s * c * qx + s * s * s * qxx;
            let margin = self.f[k] - d_rho[k] * d_rho[k];
            if margin < EMBEDDING_MARGIN * self.f[k] {
                return Err(QlmError::NonEmbeddable { theta: self.theta[k], margin });
            }
            s_vals[k] = margin.sqrt() / s;
        }

        let mut gauss = vec![0.0; n];
        for k in 0..n {
            let (_, fx, _) = f_fit.jet(x[k]);
            let df = -sin[k] * fx;
            let f = self.f[k];
            gauss[k] = -(dd_rho[k] / f - d_rho[k] * df / (2.0 * f * f)) / rho[k];
            if !(gauss[k] > 0.0) {
                return Err(QlmError::Convexity { theta: self.theta[k], curvature: gauss[k] });
            }
        }

        let mut pole_slopes = [0.0; 2];
        for (slot, sign) in [(0, 1.0), (1, -1.0)] {
            let qp = q.value_at_end(sign);
            let fp = f_fit.value_at_end(sign);
            pole_slopes[slot] = sign * qp / fp.max(0.0).sqrt();
            if !((qp / fp.max(0.0).sqrt() - 1.0).abs() <= POLE_TOLERANCE) {
                let theta = if sign > 0.0 { 0.0 } else { std::f64::consts::PI };
                return Err(QlmError::NonEmbeddable { theta, margin: fp - qp * qp });
            }
        }

        let s_fit = Legendre::fit(&x, &w, &s_vals);
        let mut z = vec![0.0; n];
        let mut d_z = vec![0.0; n];
        let mut kappa_meridian = vec![0.0; n];
        let mut kappa_parallel = vec![0.0; n];
        let mut h_flat = vec![0.0; n];
        let mut metric_residual: f64 = 0.0;
        for k in 0..n {
            let (s, c) = (sin[k], x[k]);
            let (sv, sx, _) = s_fit.jet(c);
            z[k] = s_fit.integral_to_north(c);
            d_z[k] = s * sv;
            let dd_z = c * sv - s * s * sx;
            let f = self.f[k];
            kappa_meridian[k] = (d_rho[k] * dd_z - d_z[k] * dd_rho[k]) / f.powf(1.5);
            kappa_parallel[k] = sv / (q_vals[k] * f.sqrt());
            h_flat[k] = kappa_meridian[k] + kappa_parallel[k];
            metric_residual = metric_residual
                .max((d_rho[k] * d_rho[k] + d_z[k] * d_z[k] - f).abs())
                .max((rho[k] * rho[k] - self.g[k]).abs());
        }

        Ok(EmbeddingProfile {
            theta: self.theta.clone(),
            rho,
            z,
            d_rho,
            d_z,
            kappa_meridian,
            kappa_parallel,
            h_flat,
            gauss,
            metric_residual,
            pole_slopes,
        })
    }
}

impl EmbeddingProfile {
    /// max |κ_m κ_p − K| over nodes.
    pub fn egregium_residual(&self) -> f64 {
        (0..self.theta.len())
            .map(|k| (self.kappa_meridian[k] * self.kappa_parallel[k] - self.gauss[k]).abs())
            .fold(0.0, f64::max)
    }

    /// Angle of the outward normal from the symmetry axis, oriented so that the
    /// round sphere gives α = θ.
    pub fn normal_angle(&self) -> Vec<f64> {
        (0..self.theta.len()).map(|k| self.d_z[k].atan2(self.d_rho[k])).collect()
    }

    /// Meridian derivative dα/dθ = √f κ_meridian.
    pub fn normal_angle_rate(&self, f: &[f64]) -> Vec<f64> {
        (0..self.theta.len()).map(|k| f[k].sqrt() * self.kappa_meridian[k]).collect()
    }
}

/// Embed the induced metric of an axisymmetric patch and return |H|_flat on
/// the full grid (row-constant in φ).
pub fn flat_mean_curvature(patch: &SurfacePatch) -> Result<(EmbeddingProfile, Vec<f64>)> {
    let profile = AxisymmetricProfile::from_patch(patch)?;
    let emb = profile.embed()?;
    let grid = &patch.grid;
    let field = (0..grid.len()).map(|k| emb.h_flat[k / grid.n_phi]).collect();
    Ok((emb, field))
}
