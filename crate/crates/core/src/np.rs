//! Spin basis adapted to the mean-curvature null frame, Newman–Penrose spin
//! coefficients, and the 2-spinor form of the boundary Witten equation and of
//! the Sen–Witten surface integrand.
//!
//! With o = (0, 1), ι = (1, 0) in the upper Weyl block of the adapted frame:
//! l+ = ιῑ = (Ĥ⊥ + Ĥ)/√2, l− = oō = (Ĥ⊥ − Ĥ)/√2, m = −oῑ = (e2 + i e3)/√2.

use num_complex::Complex64;

use crate::boundary::{BoundaryOperators, FrameData};
use crate::error::{QlmError, Result};
use crate::geometry::{NodeGeometry, NormalGauge};
use crate::spacetime::Vec4;
use crate::spinor::{null_vector, spin_iota, spin_o, symp, GammaMatrix, GammaRep, Spinor, Weyl, WeylPair};

const MODULE: &str = "spinor-algebra";

type C = Complex64;

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Spin basis at one node with its null tetrad in coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinBasis {
    pub o: Weyl,
    pub iota: Weyl,
    pub l_plus: Vec4,
    pub l_minus: Vec4,
    /// real and imaginary parts of m
    pub m: [Vec4; 2],
}

impl SpinBasis {
    pub fn normalization(&self) -> C {
        symp(&self.o, &self.iota)
    }
}

/// Spin basis from a mean-curvature adapted node.
pub fn spin_basis(node: &NodeGeometry, gauge: NormalGauge) -> Result<SpinBasis> {
    if gauge != NormalGauge::MeanCurvature {
        return Err(QlmError::Frame { module: MODULE, detail: "spin basis needs the mean-curvature frame".into() });
    }
    let (o, iota) = (spin_o(), spin_iota());
    let to_coords = |v: [C; 4]| -> [Vec4; 2] {
        let mut out = [[0.0; 4]; 2];
        for a in 0..4 {
            for mu in 0..4 {
                out[0][mu] += v[a].re * node.frame[a][mu];
                out[1][mu] += v[a].im * node.frame[a][mu];
            }
        }
        out
    };
    let lp = to_coords(null_vector(&iota, &iota))[0];
    let lm = to_coords(null_vector(&o, &o))[0];
    let m = to_coords(null_vector(&o, &iota).map(|z| -z));
    Ok(SpinBasis { o, iota, l_plus: lp, l_minus: lm, m })
}

/// Newman–Penrose quantities at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NpScalars {
    /// o_A ∇_m̄ o^A
    pub rho: C,
    /// ι_A ∇_m ι^A
    pub mu: C,
    /// ι_A ∇_m o^A
    pub beta_raw: C,
    /// −o_A ∇_m̄ ι^A
    pub beta_prime_raw: C,
    /// β as printed, ι_A ∇_m o^A + c.c. (real)
    pub beta_literal: f64,
    /// β′ as printed, −o_A ∇_m̄ ι^A + c.c. (real)
    pub beta_prime_literal: f64,
    /// part of ι_A ∇_m o^A coming from the normal-frame boost (twist)
    pub beta_boost: C,
    /// part of −o_A ∇_m̄ ι^A coming from the twist
    pub beta_prime_boost: C,
    /// ϖ(m) = (ϖ2 + iϖ3)/√2
    pub twist_m: C,
    /// κ(l+) = |H|/√2
    pub kappa_perp: f64,
}

/// Unprimed spin basis embedded as Dirac spinors, together with the bilinear
/// form realizing the contraction a_A b^A on them, a_A b^A = aᵀ C b.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinFrame {
    pub o: Spinor,
    pub iota: Spinor,
    pub form: GammaMatrix,
}

impl SpinFrame {
    pub fn standard() -> Self {
        let z = C::new(0.0, 0.0);
        let mut form = GammaMatrix::zeros();
        form[(0, 1)] = re(-1.0);
        form[(1, 0)] = re(1.0);
        SpinFrame { o: Spinor::new(z, re(1.0), z, z), iota: Spinor::new(re(1.0), z, z, z), form }
    }

    /// The same basis seen in the representation conjugated by `u`.
    pub fn conjugated(&self, u: &GammaMatrix) -> Self {
        let ud = u.adjoint();
        SpinFrame { o: u * self.o, iota: u * self.iota, form: u.map(|z| z.conj()) * self.form * ud }
    }

    fn contract(&self, a: &Spinor, b: &Spinor) -> C {
        (a.transpose() * self.form * b)[(0, 0)]
    }
}

/// ½ Σ_{b<c} ω_bc γ^bγ^c for the given index pairs.
fn connection(rep: &GammaRep, w: &[[f64; 4]; 4], pairs: &[(usize, usize)]) -> GammaMatrix {
    let mut m = GammaMatrix::zeros();
    for &(b, c) in pairs {
        m += rep.upper(b) * rep.upper(c) * re(0.5 * w[b][c]);
    }
    m
}

const ALL_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Connection along m = (e2 + i e3)/√2 and m̄.
fn along_m(rep: &GammaRep, frame: &FrameData, pairs: &[(usize, usize)]) -> (GammaMatrix, GammaMatrix) {
    let a = connection(rep, &frame.omega[0], pairs);
    let b = connection(rep, &frame.omega[1], pairs);
    let k = std::f64::consts::FRAC_1_SQRT_2;
    let i = C::new(0.0, 1.0);
    ((a + b * i) * re(k), (a - b * i) * re(k))
}

/// Spin coefficients of the constant basis in the node frame. They are the
/// NP scalars when the frame is the mean-curvature frame.
pub fn np_scalars(rep: &GammaRep, spin: &SpinFrame, frame: &FrameData) -> NpScalars {
    let (o, iota) = (&spin.o, &spin.iota);
    let (m, mb) = along_m(rep, frame, &ALL_PAIRS);
    let (bm, bmb) = along_m(rep, frame, &[(0, 1)]);
    let beta_raw = spin.contract(iota, &(m * o));
    let beta_prime_raw = -spin.contract(o, &(mb * iota));
    let k = std::f64::consts::FRAC_1_SQRT_2;
    NpScalars {
        rho: spin.contract(o, &(mb * o)),
        mu: spin.contract(iota, &(m * iota)),
        beta_raw,
        beta_prime_raw,
        beta_literal: 2.0 * beta_raw.re,
        beta_prime_literal: 2.0 * beta_prime_raw.re,
        beta_boost: spin.contract(iota, &(bm * o)),
        beta_prime_boost: -spin.contract(o, &(bmb * iota)),
        twist_m: C::new(frame.twist[0] * k, frame.twist[1] * k),
        kappa_perp: frame.norm_h * k,
    }
}

/// The two Weyl spinors of a Dirac field as unprimed spinors in the
/// normalization of `WeylPair`: ψ_A and conj(φ^{A'}).
pub fn weyl_parts(psi: &[Spinor]) -> [Vec<Weyl>; 2] {
    let pairs: Vec<WeylPair> = psi.iter().map(WeylPair::split).collect();
    [pairs.iter().map(|p| p.psi).collect(), pairs.iter().map(|p| p.phi_bar()).collect()]
}

/// 2-spinor data of one Weyl field: components (ψ0, ψ1), edth terms and the
/// residuals of the boundary Witten system.
#[derive(Debug, Clone, Default)]
pub struct TwoSpinorFields {
    pub psi0: Vec<C>,
    pub psi1: Vec<C>,
    /// ðψ0 = ι_A ∇̃_m(ψ0 o^A), ∇̃ without the extrinsic-curvature terms
    pub eth_psi0: Vec<C>,
    /// ð̄ψ1 = −o_A ∇̃_m̄(ψ1 ι^A)
    pub ethbar_psi1: Vec<C>,
    /// ι_A ∇_m ψ^A = ðψ0 + μψ1
    pub residual_m: Vec<C>,
    /// o_A ∇_m̄ ψ^A = −ð̄ψ1 + ρψ0
    pub residual_mbar: Vec<C>,
}

/// Evaluate the 2-spinor quantities for an unprimed field `w` (components
/// carry spin weights ½, −½ like the upper Dirac block).
pub fn two_spinor_fields(ops: &BoundaryOperators, w: &[Weyl]) -> Result<TwoSpinorFields> {
    let rep = &ops.rep;
    // embed as a Dirac field with vanishing lower block to reuse the spectral derivatives
    let lifted: Vec<Spinor> = w.iter().map(|x| Spinor::new(x[0], x[1], C::new(0.0, 0.0), C::new(0.0, 0.0))).collect();
    let d = ops.frame_derivatives(&lifted)?;
    let k = std::f64::consts::FRAC_1_SQRT_2;
    let i = C::new(0.0, 1.0);
    let spin = SpinFrame::standard();
    let tangential = [(0, 1), (2, 3)];
    let mut out = TwoSpinorFields::default();
    for (n, x) in w.iter().enumerate() {
        let frame = &ops.frames.nodes[n];
        let (psi0, psi1) = WeylPair::components(x);
        let dm = Weyl::new((d[0][n][0] + i * d[1][n][0]) * k, (d[0][n][1] + i * d[1][n][1]) * k);
        let dmb = Weyl::new((d[0][n][0] - i * d[1][n][0]) * k, (d[0][n][1] - i * d[1][n][1]) * k);
        let (m_psi0, mb_psi1) = (WeylPair::components(&dm).0, WeylPair::components(&dmb).1);
        let (tm, tmb) = along_m(rep, frame, &tangential);
        let np = np_scalars(rep, &spin, frame);
        // ι_A ∇̃_m(ψ0 o^A) = m(ψ0) ι_A o^A + ψ0 ι_A ∇̃_m o^A
        let eth0 = m_psi0 * spin.contract(&spin.iota, &spin.o) + psi0 * spin.contract(&spin.iota, &(tm * spin.o));
        // o_A ∇̃_m̄(ψ1 ι^A) = m̄(ψ1) o_A ι^A + ψ1 o_A ∇̃_m̄ ι^A
        let neg_ethbar1 = mb_psi1 * spin.contract(&spin.o, &spin.iota) + psi1 * spin.contract(&spin.o, &(tmb * spin.iota));
        out.psi0.push(psi0);
        out.psi1.push(psi1);
        out.eth_psi0.push(eth0);
        out.ethbar_psi1.push(-neg_ethbar1);
        out.residual_m.push(eth0 + np.mu * psi1);
        out.residual_mbar.push(neg_ethbar1 + np.rho * psi0);
    }
    Ok(out)
}

impl TwoSpinorFields {
    /// Pointwise 2-spinor Sen–Witten integrand
    /// κ⊥(|ψ0|² + |ψ1|²) + ψ̄1ðψ0 − ψ̄0ð̄ψ1 + c.c.
    pub fn density(&self, kappa_perp: &[f64]) -> Vec<f64> {
        (0..self.psi0.len())
            .map(|n| {
                let (a, b) = (self.psi0[n], self.psi1[n]);
                kappa_perp[n] * (a.norm_sqr() + b.norm_sqr())
                    + 2.0 * (b.conj() * self.eth_psi0[n] - a.conj() * self.ethbar_psi1[n]).re
            })
            .collect()
    }

    /// The integrand as printed, κ⊥(|ψ0|² + |ψ1|²) + ψ̄1ðψ0 + c.c.; equal to
    /// `density` only after integration when the flux term is doubled.
    pub fn printed_density(&self, kappa_perp: &[f64]) -> Vec<f64> {
        (0..self.psi0.len())
            .map(|n| {
                let (a, b) = (self.psi0[n], self.psi1[n]);
                kappa_perp[n] * (a.norm_sqr() + b.norm_sqr()) + 2.0 * (b.conj() * self.eth_psi0[n]).re
            })
            .collect()
    }

    pub fn residual_sup(&self) -> f64 {
        self.residual_m.iter().chain(&self.residual_mbar).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Both Weyl parts of a Dirac field in 2-spinor form.
pub fn two_spinor_split(ops: &BoundaryOperators, psi: &[Spinor]) -> Result<[TwoSpinorFields; 2]> {
    let [a, b] = weyl_parts(psi);
    Ok([two_spinor_fields(ops, &a)?, two_spinor_fields(ops, &b)?])
}

/// Reassemble the boundary Dirac operator from the 2-spinor residuals of
/// ψ_A and conj(φ^{A'}): D̸_Sψ = 2^{1/4}(conj R̃_m̄, conj R̃_m, R_m, −R_m̄).
pub fn dirac_from_two_spinor(parts: &[TwoSpinorFields; 2]) -> Vec<Spinor> {
    let k = re(2f64.powf(0.25));
    let [a, b] = parts;
    (0..a.psi0.len())
        .map(|n| {
            Spinor::new(b.residual_mbar[n].conj(), b.residual_m[n].conj(), a.residual_m[n], -a.residual_mbar[n]) * k
        })
        .collect()
}
