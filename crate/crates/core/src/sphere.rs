//! Spectral calculus on the 2-sphere: Gauss–Legendre × uniform grids,
//! spin-weighted spherical harmonics (integer and half-integer weight) and
//! the edth operators.
//!
//! Spin weights, degrees and orders are passed doubled (`s2 = 2s`) so that
//! half-integer values stay exact. The harmonics are
//! `sY_lm(θ,φ) = √((2l+1)/4π) d^l_{m,−s}(θ) e^{imφ}`, and the edth operators
//! act as `ð f = −(∂θ + i cscθ ∂φ − s cotθ) f`,
//! `ð̄ f = −(∂θ − i cscθ ∂φ + s cotθ) f`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{QlmError, Result};

/// Gauss–Legendre nodes (ascending) and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            let k = i.max(j) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = legendre_with_derivative(n, *x);
            *x -= p / dp;
        }
        let (_, dp) = legendre_with_derivative(n, *x);
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn ln_factorial(n: i64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn ln_binomial(n: i64, k: i64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn jacobi(n: i64, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let p2 = ((c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p1
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0)
            / (2.0 * k * (k + a + b) * (c - 2.0));
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Wigner small-d `d^j_{m',m}(β)` with doubled arguments.
pub fn wigner_d(j2: i64, mp2: i64, m2: i64, beta: f64) -> f64 {
    if mp2.abs() > j2 || m2.abs() > j2 || (j2 - mp2) % 2 != 0 || (j2 - m2) % 2 != 0 {
        return 0.0;
    }
    let (jpm, jmm, jpmp, jmmp) = ((j2 + m2) / 2, (j2 - m2) / 2, (j2 + mp2) / 2, (j2 - mp2) / 2);
    let k = jpm.min(jmm).min(jpmp).min(jmmp);
    let dm = (mp2 - m2) / 2;
    let (a, lambda) = if k == jpm {
        (dm, dm)
    } else if k == jmm || k == jpmp {
        (-dm, 0)
    } else {
        (dm, dm)
    };
    let b = j2 - 2 * k - a;
    let sign = if lambda.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let ln_norm = 0.5 * ln_binomial(j2 - k, k + a) - 0.5 * ln_binomial(k + b, b);
    let (sh, ch) = ((beta / 2.0).sin(), (beta / 2.0).cos());
    sign * ln_norm.exp() * sh.powi(a as i32) * ch.powi(b as i32) * jacobi(k, a as f64, b as f64, beta.cos())
}

/// θ-part of `sY_lm`, i.e. `√((2l+1)/4π) d^l_{m,−s}(θ)`.
pub fn swsh_theta(s2: i64, l2: i64, m2: i64, theta: f64) -> f64 {
    ((l2 as f64 + 1.0) / (4.0 * PI)).sqrt() * wigner_d(l2, m2, -s2, theta)
}

/// Full `sY_lm(θ,φ)`.
pub fn swsh(s2: i64, l2: i64, m2: i64, theta: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * m2 as f64 * phi) * swsh_theta(s2, l2, m2, theta)
}

/// `ð sY_lm = eth_raise(s,l) · (s+1)Y_lm`.
pub fn eth_raise(s2: i64, l2: i64) -> f64 {
    let (l, s) = (0.5 * l2 as f64, 0.5 * s2 as f64);
    -((l - s) * (l + s + 1.0)).max(0.0).sqrt()
}

/// `ð̄ sY_lm = eth_lower(s,l) · (s−1)Y_lm`.
pub fn eth_lower(s2: i64, l2: i64) -> f64 {
    let (l, s) = (0.5 * l2 as f64, 0.5 * s2 as f64);
    ((l + s) * (l - s + 1.0)).max(0.0).sqrt()
}

/// Tensor-product grid: Gauss–Legendre in cosθ, uniform in φ.
/// Grid values are stored row-major, index `i * n_phi + j` for (θ_i, φ_j).
#[derive(Clone)]
pub struct SphereGrid {
    pub band_limit: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub cos_theta: Vec<f64>,
    pub theta: Vec<f64>,
    pub weights: Vec<f64>,
    pub phi: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SphereGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphereGrid")
            .field("band_limit", &self.band_limit)
            .field("n_theta", &self.n_theta)
            .field("n_phi", &self.n_phi)
            .finish()
    }
}

impl SphereGrid {
    /// Default resolution for band limit `l`: Nθ = L + 2, Nφ = 2L + 2.
    pub fn new(band_limit: usize) -> Result<Self> {
        Self::with_resolution(band_limit, band_limit + 2, 2 * band_limit + 2)
    }

    pub fn with_resolution(band_limit: usize, n_theta: usize, n_phi: usize) -> Result<Self> {
        if band_limit < 1 {
            return Err(QlmError::Resolution("band limit must be >= 1".into()));
        }
        if n_theta < band_limit + 2 || n_phi < 2 * band_limit + 2 {
            return Err(QlmError::Resolution(format!(
                "grid {n_theta}x{n_phi} too coarse for band limit {band_limit} (need Ntheta >= L+2, Nphi >= 2L+2)"
            )));
        }
        let (x, w) = gauss_legendre(n_theta);
        // θ ascending means cosθ descending
        let cos_theta: Vec<f64> = x.iter().rev().copied().collect();
        let weights: Vec<f64> = w.iter().rev().copied().collect();
        let theta = cos_theta.iter().map(|c| c.acos()).collect();
        let phi = (0..n_phi).map(|j| 2.0 * PI * j as f64 / n_phi as f64).collect();
        let mut planner = FftPlanner::new();
        Ok(SphereGrid {
            band_limit,
            n_theta,
            n_phi,
            cos_theta,
            theta,
            weights,
            phi,
            fft: planner.plan_fft_forward(n_phi),
            ifft: planner.plan_fft_inverse(n_phi),
        })
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, k: usize) -> (f64, f64) {
        (self.theta[k / self.n_phi], self.phi[k % self.n_phi])
    }

    /// Quadrature weight of node k for ∫ f dΩ on the unit sphere.
    pub fn solid_angle_weight(&self, k: usize) -> f64 {
        self.weights[k / self.n_phi] * 2.0 * PI / self.n_phi as f64
    }

    /// ∫ f dΩ on the unit sphere.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().enumerate().map(|(k, v)| v * self.solid_angle_weight(k)).sum()
    }

    pub fn integrate_complex(&self, f: &[Complex64]) -> Complex64 {
        f.iter().enumerate().map(|(k, v)| v * self.solid_angle_weight(k)).sum()
    }

    /// Largest doubled degree kept for doubled spin weight `s2`.
    pub fn l2_max(&self, s2: i64) -> i64 {
        2 * self.band_limit as i64 + s2.rem_euclid(2)
    }

    /// Spin-weighted analysis of grid data.
    pub fn analyze(&self, s2: i64, f: &[Complex64]) -> SpinCoeffs {
        assert_eq!(f.len(), self.len());
        let l2max = self.l2_max(s2);
        let half = s2.rem_euclid(2) == 1;
        let mut c = SpinCoeffs::zeros(s2, l2max);
        let mut row = vec![Complex64::new(0.0, 0.0); self.n_phi];
        let dphi = 2.0 * PI / self.n_phi as f64;
        for i in 0..self.n_theta {
            for j in 0..self.n_phi {
                let shift = if half { Complex64::from_polar(1.0, -0.5 * self.phi[j]) } else { 1.0.into() };
                row[j] = f[i * self.n_phi + j] * shift;
            }
            self.fft.process(&mut row);
            let th = self.theta[i];
            let w = self.weights[i] * dphi;
            for m2 in (-l2max..=l2max).step_by(2) {
                let k = (m2 - if half { 1 } else { 0 }) / 2;
                let gm = row[k.rem_euclid(self.n_phi as i64) as usize] * w;
                for l2 in (s2.abs().max(m2.abs())..=l2max).step_by(2) {
                    *c.get_mut(l2, m2) += gm * swsh_theta(s2, l2, m2, th);
                }
            }
        }
        c
    }

    /// Spin-weighted synthesis onto the grid.
    pub fn synthesize(&self, c: &SpinCoeffs) -> Result<Vec<Complex64>> {
        let l2max = c.l2max;
        if l2max > self.l2_max(c.s2) {
            return Err(QlmError::Resolution(format!(
                "coefficients up to l = {} exceed grid band limit {}",
                0.5 * l2max as f64,
                self.band_limit
            )));
        }
        let half = c.s2.rem_euclid(2) == 1;
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        let mut row = vec![Complex64::new(0.0, 0.0); self.n_phi];
        for i in 0..self.n_theta {
            row.iter_mut().for_each(|v| *v = 0.0.into());
            let th = self.theta[i];
            for m2 in (-l2max..=l2max).step_by(2) {
                let k = (m2 - if half { 1 } else { 0 }) / 2;
                let mut acc = Complex64::new(0.0, 0.0);
                for l2 in (c.s2.abs().max(m2.abs())..=l2max).step_by(2) {
                    acc += c.get(l2, m2) * swsh_theta(c.s2, l2, m2, th);
                }
                row[k.rem_euclid(self.n_phi as i64) as usize] += acc;
            }
            self.ifft.process(&mut row);
            for j in 0..self.n_phi {
                let shift = if half { Complex64::from_polar(1.0, 0.5 * self.phi[j]) } else { 1.0.into() };
                out[i * self.n_phi + j] = row[j] * shift;
            }
        }
        Ok(out)
    }

    /// ∂θ and ∂φ of a weight-`s2` field given on the grid.
    pub fn gradient(&self, s2: i64, f: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let c = self.analyze(s2, f);
        let up = self.synthesize(&c.eth())?;
        let down = self.synthesize(&c.ethbar())?;
        let d_theta = up.iter().zip(&down).map(|(a, b)| -(a + b) * 0.5).collect();
        let d_phi = self.synthesize(&c.d_phi())?;
        Ok((d_theta, d_phi))
    }
}

/// Coefficients `a_lm` of a spin-weight-s field, dense in (l, m).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinCoeffs {
    pub s2: i64,
    pub l2max: i64,
    data: Vec<Complex64>,
}

impl SpinCoeffs {
    pub fn zeros(s2: i64, l2max: i64) -> Self {
        let n = ((l2max + 1) * (l2max + 1)).max(1) as usize;
        SpinCoeffs { s2, l2max, data: vec![Complex64::new(0.0, 0.0); n] }
    }

    fn idx(&self, l2: i64, m2: i64) -> usize {
        (l2 * (self.l2max + 1) + (m2 + self.l2max) / 2) as usize
    }

    pub fn get(&self, l2: i64, m2: i64) -> Complex64 {
        if l2 > self.l2max || l2 < self.s2.abs() || m2.abs() > l2 {
            return 0.0.into();
        }
        self.data[self.idx(l2, m2)]
    }

    pub fn get_mut(&mut self, l2: i64, m2: i64) -> &mut Complex64 {
        assert!(l2 <= self.l2max && l2 >= self.s2.abs() && m2.abs() <= l2);
        let i = self.idx(l2, m2);
        &mut self.data[i]
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (lo, hi) = (self.s2.abs(), self.l2max);
        (lo..=hi).step_by(2).flat_map(|l2| (-l2..=l2).step_by(2).map(move |m2| (l2, m2)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn eth(&self) -> SpinCoeffs {
        let mut out = SpinCoeffs::zeros(self.s2 + 2, self.l2max);
        for (l2, m2) in self.modes() {
            if l2 >= (self.s2 + 2).abs() {
                *out.get_mut(l2, m2) = self.get(l2, m2) * eth_raise(self.s2, l2);
            }
        }
        out
    }

    pub fn ethbar(&self) -> SpinCoeffs {
        let mut out = SpinCoeffs::zeros(self.s2 - 2, self.l2max);
        for (l2, m2) in self.modes() {
            if l2 >= (self.s2 - 2).abs() {
                *out.get_mut(l2, m2) = self.get(l2, m2) * eth_lower(self.s2, l2);
            }
        }
        out
    }

    pub fn d_phi(&self) -> SpinCoeffs {
        let mut out = self.clone();
        for (l2, m2) in self.modes() {
            *out.get_mut(l2, m2) *= Complex64::new(0.0, 0.5 * m2 as f64);
        }
        out
    }
}
