//! Dirac spinor algebra in a fixed gamma representation: Clifford generators,
//! Dirac current, chiral and SU(2) projectors, spin lifts of frame rotations,
//! and the 2-spinor (Weyl) split with its null-vector map.
//!
//! Representation (blocks are 2×2):
//! `γ0 = [[0, I], [−I, 0]]`, `γk = [[0, s_k], [s_k, 0]]`,
//! `(s1, s2, s3) = (σ3, −σ1, σ2)`.
//! Then `γ1γ0 = diag(−1, 1, 1, −1)` and `iγ2γ3 = diag(1, −1, 1, −1)`.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

pub type C = Complex64;
pub type Spinor = Vector4<C>;
pub type Weyl = Vector2<C>;
pub type GammaMatrix = Matrix4<C>;

pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli() -> [Matrix2<C>; 3] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

fn blocks(a: Matrix2<C>, b: Matrix2<C>, cc: Matrix2<C>, d: Matrix2<C>) -> Matrix4<C> {
    let mut m = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = a[(i, j)];
            m[(i, j + 2)] = b[(i, j)];
            m[(i + 2, j)] = cc[(i, j)];
            m[(i + 2, j + 2)] = d[(i, j)];
        }
    }
    m
}

/// The Weyl-block Pauli factors (s1, s2, s3).
pub fn weyl_sigmas() -> [Matrix2<C>; 3] {
    let [s1, s2, s3] = pauli();
    [s3, -s1, s2]
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaRep {
    /// γ_a with lower frame index
    pub g: [GammaMatrix; 4],
}

impl GammaRep {
    pub fn standard() -> Self {
        let z = Matrix2::zeros();
        let id = Matrix2::identity();
        let s = weyl_sigmas();
        GammaRep {
            g: [
                blocks(z, id, -id, z),
                blocks(z, s[0], s[0], z),
                blocks(z, s[1], s[1], z),
                blocks(z, s[2], s[2], z),
            ],
        }
    }

    /// Representation conjugated by a unitary: γ'_a = U γ_a U†.
    pub fn conjugated(&self, u: &GammaMatrix) -> Self {
        let ud = u.adjoint();
        GammaRep { g: [0, 1, 2, 3].map(|a| u * self.g[a] * ud) }
    }

    /// γ^a = η^{aa} γ_a
    pub fn upper(&self, a: usize) -> GammaMatrix {
        self.g[a] * c(ETA[a], 0.0)
    }

    pub fn gamma5(&self) -> GammaMatrix {
        self.g[0] * self.g[1] * self.g[2] * self.g[3]
    }

    /// Hermitian chirality operator −iγ5, squaring to the identity.
    pub fn chirality(&self) -> GammaMatrix {
        self.gamma5() * c(0.0, -1.0)
    }

    /// γ_ab = ½[γ_a, γ_b]
    pub fn sigma(&self, a: usize, b: usize) -> GammaMatrix {
        (self.g[a] * self.g[b] - self.g[b] * self.g[a]) * c(0.5, 0.0)
    }

    /// P̂± = ½(1 ± γ1γ0)
    pub fn chiral_projector(&self, sign: f64) -> GammaMatrix {
        (GammaMatrix::identity() + self.g[1] * self.g[0] * c(sign, 0.0)) * c(0.5, 0.0)
    }

    /// P0± = ½(1 ± iγ0)
    pub fn su2_projector(&self, sign: f64) -> GammaMatrix {
        (GammaMatrix::identity() + self.g[0] * c(0.0, sign)) * c(0.5, 0.0)
    }

    /// Frame components ξ^a of the future-pointing Dirac current,
    /// ξ_a = ψ†γ0γ_aψ, so that ξ^0 = |ψ|².
    pub fn current(&self, psi: &Spinor) -> [f64; 4] {
        let mut xi = [0.0; 4];
        for a in 0..4 {
            let v = psi.dotc(&(self.g[0] * self.g[a] * psi));
            xi[a] = ETA[a] * v.re;
        }
        xi
    }

    /// Spin lift of the rotation e_i' = cos a e_i + sin a e_j,
    /// e_j' = −sin a e_i + cos a e_j (i, j ≥ 1): exp(a/2 γ_iγ_j).
    pub fn rotation_lift(&self, i: usize, j: usize, angle: f64) -> GammaMatrix {
        let (s, co) = (0.5 * angle).sin_cos();
        GammaMatrix::identity() * c(co, 0.0) + self.g[i] * self.g[j] * c(s, 0.0)
    }

    /// Spin lift of the boost e0' = ch e0 + sh e1, e1' = sh e0 + ch e1:
    /// exp(λ/2 γ1γ0).
    pub fn boost_lift(&self, rapidity: f64) -> GammaMatrix {
        let (ch, sh) = ((0.5 * rapidity).cosh(), (0.5 * rapidity).sinh());
        GammaMatrix::identity() * c(ch, 0.0) + self.g[1] * self.g[0] * c(sh, 0.0)
    }

    /// Frame rotation covered by a lift: `lam[a][b]` is the e_a-component of
    /// the new frame vector e'_b, read off from S⁻¹ γ_b S = Λ^a_b γ_a.
    pub fn lorentz_of_lift(&self, s: &GammaMatrix) -> [[f64; 4]; 4] {
        let inv = s.try_inverse().expect("spin lift is invertible");
        let mut lam = [[0.0; 4]; 4];
        for b in 0..4 {
            let m = inv * self.g[b] * s;
            for a in 0..4 {
                // tr(γ^a γ_b) = 4 δ^a_b
                lam[a][b] = ((self.upper(a) * m).trace() / c(4.0, 0.0)).re;
            }
        }
        lam
    }
}

/// 2-spinor contraction a_A b^A in the chosen index convention.
pub fn symp(a: &Weyl, b: &Weyl) -> C {
    a[1] * b[0] - a[0] * b[1]
}

pub fn epsilon() -> Matrix2<C> {
    Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0))
}

/// Frame components of the vector α^A β̄^{A'}.
pub fn null_vector(alpha: &Weyl, beta: &Weyl) -> [C; 4] {
    let s = weyl_sigmas();
    let k = std::f64::consts::FRAC_1_SQRT_2;
    [
        beta.dotc(alpha) * k,
        beta.dotc(&(s[0] * alpha)) * k,
        beta.dotc(&(s[1] * alpha)) * k,
        beta.dotc(&(s[2] * alpha)) * k,
    ]
}

pub fn spin_o() -> Weyl {
    Weyl::new(c(0.0, 0.0), c(1.0, 0.0))
}

pub fn spin_iota() -> Weyl {
    Weyl::new(c(1.0, 0.0), c(0.0, 0.0))
}

const QUARTER_ROOT_2: f64 = 1.189_207_115_002_721;

/// Pair of 2-spinors (ψ_A, φ^{A'}) making up a Dirac spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylPair {
    pub psi: Weyl,
    pub phi: Weyl,
}

impl WeylPair {
    pub fn split(psi: &Spinor) -> Self {
        let u = Weyl::new(psi[0], psi[1]);
        let v = Weyl::new(psi[2], psi[3]);
        WeylPair {
            psi: u * c(QUARTER_ROOT_2, 0.0),
            phi: epsilon().transpose() * v * c(QUARTER_ROOT_2, 0.0),
        }
    }

    pub fn assemble(&self) -> Spinor {
        let u = self.psi / c(QUARTER_ROOT_2, 0.0);
        let v = epsilon() * self.phi / c(QUARTER_ROOT_2, 0.0);
        Spinor::new(u[0], u[1], v[0], v[1])
    }

    /// The unprimed spinor conj(φ^{A'}).
    pub fn phi_bar(&self) -> Weyl {
        self.phi.map(|z| z.conj())
    }

    /// True when φ^{A'} is the conjugate of ψ_A.
    pub fn is_majorana(&self, tol: f64) -> bool {
        (self.phi - self.psi.map(|z| z.conj())).norm() <= tol
    }

    /// Components of ψ in the basis: ψ^A = ψ0 o^A + ψ1 ι^A.
    pub fn components(w: &Weyl) -> (C, C) {
        (w[1], w[0])
    }

    /// ξ^{AA'} = ψ^A ψ̄^{A'} + φ^A φ̄^{A'} as frame components.
    pub fn current(&self) -> [f64; 4] {
        let a = null_vector(&self.psi, &self.psi);
        let pb = self.phi_bar();
        let b = null_vector(&pb, &pb);
        [0, 1, 2, 3].map(|k| (a[k] + b[k]).re)
    }
}

/// Majorana spinor with the given unprimed part.
pub fn majorana(psi_a: &Weyl) -> Spinor {
    WeylPair { psi: *psi_a, phi: psi_a.map(|z| z.conj()) }.assemble()
}
