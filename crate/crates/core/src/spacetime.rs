//! Catalog of analytic spacetimes: metric, Christoffel symbols, Ricci tensor
//! and stress-energy in a fixed coordinate chart.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{QlmError, Result};

const MODULE: &str = "spacetime-catalog";

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
/// `Gamma[a][b][c]` = Γ^a_bc.
pub type Christoffel = [[[f64; 4]; 4]; 4];

pub const CATALOG: [&str; 5] = [
    "minkowski-cartesian",
    "minkowski-spherical",
    "schwarzschild",
    "schwarzschild-isotropic",
    "weak-field",
];

/// Relative margin kept away from coordinate singularities.
pub const HORIZON_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// (t, x, y, z)
    Cartesian,
    /// (t, r, θ, φ)
    Spherical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub coords: Vec4,
    pub chart: Chart,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    MinkowskiCartesian,
    MinkowskiSpherical,
    Schwarzschild { m: f64 },
    SchwarzschildIsotropic { m: f64 },
    WeakField { eps: f64, radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeModel {
    name: String,
    params: BTreeMap<String, f64>,
    kind: Kind,
}

/// Diagonal metric together with its first partial derivatives,
/// `d[c][a]` = ∂_c g_aa.
struct DiagJet {
    g: Vec4,
    d: [Vec4; 4],
}

impl SpacetimeModel {
    /// Look a model up by catalog name. Unknown parameter keys are rejected.
    pub fn lookup(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "minkowski-cartesian" | "minkowski-spherical" => &[],
            "schwarzschild" | "schwarzschild-isotropic" => &["M"],
            "weak-field" => &["eps", "R"],
            _ => {
                return Err(QlmError::Unknown {
                    module: MODULE,
                    kind: "spacetime",
                    name: name.to_string(),
                })
            }
        };
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(QlmError::Parameter {
                    module: MODULE,
                    detail: format!("'{name}' takes no parameter '{key}'"),
                });
            }
        }
        let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
        let kind = match name {
            "minkowski-cartesian" => Kind::MinkowskiCartesian,
            "minkowski-spherical" => Kind::MinkowskiSpherical,
            "schwarzschild" | "schwarzschild-isotropic" => {
                let m = get("M", 1.0);
                if !(m > 0.0) || !m.is_finite() {
                    return Err(QlmError::Parameter {
                        module: MODULE,
                        detail: format!("mass M must be positive, got {m}"),
                    });
                }
                if name == "schwarzschild" {
                    Kind::Schwarzschild { m }
                } else {
                    Kind::SchwarzschildIsotropic { m }
                }
            }
            _ => {
                let eps = get("eps", 0.01);
                let radius = get("R", 2.0);
                if !(radius > 0.0) || !eps.is_finite() {
                    return Err(QlmError::Parameter {
                        module: MODULE,
                        detail: format!("weak-field needs R > 0 and finite eps, got R={radius}, eps={eps}"),
                    });
                }
                // the bump peaks at V(0) = πR²/2; keep both metric factors positive
                if 2.0 * eps.abs() * bump_potential(0.0, radius) >= 0.5 {
                    return Err(QlmError::Parameter {
                        module: MODULE,
                        detail: format!("weak-field amplitude eps={eps} too large for R={radius}"),
                    });
                }
                Kind::WeakField { eps, radius }
            }
        };
        let mut stored = params.clone();
        match kind {
            Kind::Schwarzschild { m } | Kind::SchwarzschildIsotropic { m } => {
                stored.insert("M".into(), m);
            }
            Kind::WeakField { eps, radius } => {
                stored.insert("eps".into(), eps);
                stored.insert("R".into(), radius);
            }
            _ => {}
        }
        Ok(SpacetimeModel { name: name.to_string(), params: stored, kind })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn chart(&self) -> Chart {
        match self.kind {
            Kind::MinkowskiCartesian | Kind::WeakField { .. } => Chart::Cartesian,
            _ => Chart::Spherical,
        }
    }

    /// ADM mass parameter (0 for flat entries, M for Schwarzschild charts).
    pub fn mass(&self) -> f64 {
        match self.kind {
            Kind::Schwarzschild { m } | Kind::SchwarzschildIsotropic { m } => m,
            _ => 0.0,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        !matches!(self.kind, Kind::WeakField { .. })
    }

    /// Chart radius of the event horizon, if the chart has one.
    pub fn horizon_radius(&self) -> Option<f64> {
        match self.kind {
            Kind::Schwarzschild { m } => Some(2.0 * m),
            Kind::SchwarzschildIsotropic { m } => Some(0.5 * m),
            _ => None,
        }
    }

    pub fn event(&self, coords: Vec4) -> Result<Event> {
        self.check_domain(&coords)?;
        Ok(Event { coords, chart: self.chart() })
    }

    pub fn check_domain(&self, x: &Vec4) -> Result<()> {
        if x.iter().any(|c| !c.is_finite()) {
            return Err(self.domain_err(format!("non-finite coordinates {x:?}")));
        }
        if self.chart() == Chart::Spherical {
            let (r, th) = (x[1], x[2]);
            let r_min = self.horizon_radius().map_or(0.0, |rh| rh * (1.0 + HORIZON_MARGIN));
            if !(r > r_min) {
                return Err(self.domain_err(format!(
                    "r = {r} outside chart domain r > {r_min} of '{}'",
                    self.name
                )));
            }
            if th.sin() <= 0.0 {
                return Err(self.domain_err(format!("theta = {th} on the polar axis or outside (0, pi)")));
            }
        }
        Ok(())
    }

    fn domain_err(&self, detail: String) -> QlmError {
        QlmError::Domain { module: MODULE, detail }
    }

    fn diag_jet(&self, x: &Vec4) -> DiagJet {
        let mut d = [[0.0; 4]; 4];
        let g = match self.kind {
            Kind::MinkowskiCartesian => [-1.0, 1.0, 1.0, 1.0],
            Kind::MinkowskiSpherical => {
                let (r, s, c) = (x[1], x[2].sin(), x[2].cos());
                d[1][2] = 2.0 * r;
                d[1][3] = 2.0 * r * s * s;
                d[2][3] = 2.0 * r * r * s * c;
                [-1.0, 1.0, r * r, r * r * s * s]
            }
            Kind::Schwarzschild { m } => {
                let (r, s, c) = (x[1], x[2].sin(), x[2].cos());
                let f = 1.0 - 2.0 * m / r;
                let fp = 2.0 * m / (r * r);
                d[1][0] = -fp;
                d[1][1] = -fp / (f * f);
                d[1][2] = 2.0 * r;
                d[1][3] = 2.0 * r * s * s;
                d[2][3] = 2.0 * r * r * s * c;
                [-f, 1.0 / f, r * r, r * r * s * s]
            }
            Kind::SchwarzschildIsotropic { m } => {
                let (r, s, c) = (x[1], x[2].sin(), x[2].cos());
                let psi = 1.0 + m / (2.0 * r);
                let psi_r = -m / (2.0 * r * r);
                let num = 1.0 - m / (2.0 * r);
                let alpha = num / psi;
                let alpha_r = (-psi_r * psi - num * psi_r) / (psi * psi);
                let p4 = psi.powi(4);
                let p4_r = 4.0 * psi.powi(3) * psi_r;
                d[1][0] = -2.0 * alpha * alpha_r;
                d[1][1] = p4_r;
                d[1][2] = p4_r * r * r + 2.0 * r * p4;
                d[1][3] = (p4_r * r * r + 2.0 * r * p4) * s * s;
                d[2][3] = p4 * r * r * 2.0 * s * c;
                [-alpha * alpha, p4, p4 * r * r, p4 * r * r * s * s]
            }
            Kind::WeakField { eps, radius } => {
                let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
                let v = bump_potential(r, radius);
                let gr = bump_field(r, radius);
                for i in 1..4 {
                    // ∂_i V = -g(r) x_i / r; the field vanishes linearly at r = 0
                    let dv = if r > 0.0 { -gr * x[i] / r } else { 0.0 };
                    d[i][0] = 2.0 * eps * dv;
                    for a in 1..4 {
                        d[i][a] = 2.0 * eps * dv;
                    }
                }
                let s = 1.0 + 2.0 * eps * v;
                [-(1.0 - 2.0 * eps * v), s, s, s]
            }
        };
        DiagJet { g, d }
    }

    pub fn metric(&self, x: &Vec4) -> Result<Mat4> {
        self.check_domain(x)?;
        let j = self.diag_jet(x);
        let mut g = [[0.0; 4]; 4];
        for a in 0..4 {
            g[a][a] = j.g[a];
        }
        Ok(g)
    }

    pub fn christoffel(&self, x: &Vec4) -> Result<Christoffel> {
        self.check_domain(x)?;
        let j = self.diag_jet(x);
        let mut gam = [[[0.0; 4]; 4]; 4];
        for a in 0..4 {
            let inv = 0.5 / j.g[a];
            for b in 0..4 {
                for c in 0..4 {
                    let mut v = 0.0;
                    if a == c {
                        v += j.d[b][a];
                    }
                    if a == b {
                        v += j.d[c][a];
                    }
                    if b == c {
                        v -= j.d[a][b];
                    }
                    gam[a][b][c] = inv * v;
                }
            }
        }
        Ok(gam)
    }

    /// Ricci tensor. Vacuum entries are identically zero; the weak-field entry
    /// carries the linearized Ricci tensor (O(eps²) dropped).
    pub fn ricci(&self, x: &Vec4) -> Result<Mat4> {
        self.check_domain(x)?;
        let mut ric = [[0.0; 4]; 4];
        if let Kind::WeakField { eps, radius } = self.kind {
            let q = 4.0 * PI * eps * bump_density(radius_of(x), radius);
            for a in 0..4 {
                ric[a][a] = q;
            }
        }
        Ok(ric)
    }

    pub fn scalar_curvature(&self, x: &Vec4) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self.kind {
            Kind::WeakField { eps, radius } => 8.0 * PI * eps * bump_density(radius_of(x), radius),
            _ => 0.0,
        })
    }

    /// T_ab defined through 8πT = Ric − ½ g R.
    pub fn stress_energy(&self, x: &Vec4) -> Result<Mat4> {
        let ric = self.ricci(x)?;
        let g = self.metric(x)?;
        let r = self.scalar_curvature(x)?;
        let mut t = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                t[a][b] = (ric[a][b] - 0.5 * g[a][b] * r) / (8.0 * PI);
            }
        }
        Ok(t)
    }

    /// Points used by the default consistency check, drawn from a seeded
    /// generator inside a box well within the chart domain.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec4> {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = self.mass().max(1.0);
        (0..count)
            .map(|_| match self.chart() {
                Chart::Spherical => {
                    let r_lo = match self.kind {
                        Kind::SchwarzschildIsotropic { m } => 1.5 * m,
                        _ => 3.0 * m,
                    };
                    [
                        rng.gen_range(-5.0..5.0),
                        rng.gen_range(r_lo..50.0 * m),
                        rng.gen_range(0.2..PI - 0.2),
                        rng.gen_range(0.0..2.0 * PI),
                    ]
                }
                Chart::Cartesian => {
                    let mut p = [rng.gen_range(-5.0..5.0), 0.0, 0.0, 0.0];
                    for c in p.iter_mut().skip(1) {
                        *c = rng.gen_range(-3.0..3.0);
                    }
                    p
                }
            })
            .collect()
    }
}

fn radius_of(x: &Vec4) -> f64 {
    (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt()
}

/// Source profile q = (1 − r²/R²)³ inside r < R, zero outside.
pub fn bump_density(r: f64, radius: f64) -> f64 {
    let x = r / radius;
    if x >= 1.0 {
        0.0
    } else {
        (1.0 - x * x).powi(3)
    }
}

/// Potential V with ∇²V = −4π q, V → 0 at infinity.
pub fn bump_potential(r: f64, radius: f64) -> f64 {
    let x = r / radius;
    if x >= 1.0 {
        4.0 * PI * radius.powi(3) * (16.0 / 315.0) / r
    } else {
        let x2 = x * x;
        4.0 * PI
            * radius
            * radius
            * (1.0 / 8.0 - x2 / 6.0 + 3.0 * x2 * x2 / 20.0 - x2.powi(3) / 14.0 + x2.powi(4) / 72.0)
    }
}

/// g(r) = −dV/dr.
pub fn bump_field(r: f64, radius: f64) -> f64 {
    let x = r / radius;
    if x >= 1.0 {
        4.0 * PI * radius.powi(3) * (16.0 / 315.0) / (r * r)
    } else {
        let x2 = x * x;
        4.0 * PI * radius * x * (1.0 / 3.0 - 3.0 * x2 / 5.0 + 3.0 * x2 * x2 / 7.0 - x2.powi(3) / 9.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    /// max relative deviation of Γ from finite differences of g
    pub christoffel: f64,
    /// max absolute deviation of Ric from finite differences of Γ; for the
    /// weak-field entry this measures the O(eps²) truncation
    pub ricci: f64,
}

pub fn connection_consistency_check(model: &SpacetimeModel, samples: usize) -> Result<ConsistencyReport> {
    if samples == 0 {
        return Err(QlmError::Parameter { module: MODULE, detail: "samples must be >= 1".into() });
    }
    connection_consistency_at(model, &model.sample_points(samples, 0x5eed))
}

pub fn connection_consistency_at(model: &SpacetimeModel, points: &[Vec4]) -> Result<ConsistencyReport> {
    const H: f64 = 1e-3;
    let mut worst = ConsistencyReport { christoffel: 0.0, ricci: 0.0 };
    for p in points {
        model.check_domain(p)?;
        let gam = model.christoffel(p)?;
        let dg = fd4(|q| model.metric(q).map(flatten_mat), p, H)?;
        let ginv = invert_diag(&model.metric(p)?);
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let mut v = 0.0;
                    for e in 0..4 {
                        v += 0.5
                            * ginv[a][e]
                            * (dg[b][e * 4 + c] + dg[c][e * 4 + b] - dg[e][b * 4 + c]);
                    }
                    diff = diff.max((v - gam[a][b][c]).abs());
                    scale = scale.max(gam[a][b][c].abs());
                }
            }
        }
        if diff > 0.0 {
            worst.christoffel = worst.christoffel.max(diff / scale.max(f64::MIN_POSITIVE));
        }

        let dgam = fd4(|q| model.christoffel(q).map(flatten_chris), p, H)?;
        let ric = model.ricci(p)?;
        let mut rdiff = 0.0f64;
        for b in 0..4 {
            for d in 0..4 {
                let mut v = 0.0;
                for a in 0..4 {
                    v += dgam[a][a * 16 + b * 4 + d] - dgam[d][a * 16 + b * 4 + a];
                    for e in 0..4 {
                        v += gam[a][a][e] * gam[e][b][d] - gam[a][d][e] * gam[e][b][a];
                    }
                }
                rdiff = rdiff.max((v - ric[b][d]).abs());
            }
        }
        if rdiff > 0.0 {
            worst.ricci = worst.ricci.max(rdiff);
        }
    }
    Ok(worst)
}

fn flatten_mat(m: Mat4) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

fn flatten_chris(c: Christoffel) -> Vec<f64> {
    c.iter().flatten().flatten().copied().collect()
}

fn invert_diag(g: &Mat4) -> Mat4 {
    let mut inv = [[0.0; 4]; 4];
    for a in 0..4 {
        inv[a][a] = 1.0 / g[a][a];
    }
    inv
}

/// Fourth-order centered differences of a vector-valued function along
/// each coordinate; returns `d[c][k]` = ∂_c f_k.
fn fd4<F>(f: F, p: &Vec4, h: f64) -> Result<[Vec<f64>; 4]>
where
    F: Fn(&Vec4) -> Result<Vec<f64>>,
{
    let mut out: [Vec<f64>; 4] = Default::default();
    for c in 0..4 {
        let at = |k: f64| {
            let mut q = *p;
            q[c] += k * h;
            f(&q)
        };
        let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
        out[c] = (0..m1.len())
            .map(|k| (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h))
            .collect();
    }
    Ok(out)
}
