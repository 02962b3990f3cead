//! Parametric 2-surfaces given in polar form `t(θ,φ)`, `R(θ,φ)` with analytic
//! second-order jets, pushed into the chart of a spacetime model.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{QlmError, Result};
use crate::spacetime::{Chart, Vec4};

const MODULE: &str = "surface-geometry";

pub const FAMILIES: [&str; 6] =
    ["sphere", "wiggly-sphere", "oblate", "tilted-sphere", "time-wiggled-sphere", "custom"];

/// Value, gradient and Hessian of a scalar in (θ, φ).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d: [f64; 2],
    pub dd: [[f64; 2]; 2],
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Jet2 { v, ..Default::default() }
    }

    fn mul(&self, o: &Jet2) -> Jet2 {
        let mut out = Jet2 { v: self.v * o.v, ..Default::default() };
        for i in 0..2 {
            out.d[i] = self.d[i] * o.v + self.v * o.d[i];
            for j in 0..2 {
                out.dd[i][j] = self.dd[i][j] * o.v
                    + self.d[i] * o.d[j]
                    + self.d[j] * o.d[i]
                    + self.v * o.dd[i][j];
            }
        }
        out
    }

    fn scale(&self, c: f64) -> Jet2 {
        Jet2 {
            v: c * self.v,
            d: [c * self.d[0], c * self.d[1]],
            dd: [[c * self.dd[0][0], c * self.dd[0][1]], [c * self.dd[1][0], c * self.dd[1][1]]],
        }
    }

    /// Jet of g(cosθ) from g, g', g'' in x = cosθ.
    fn of_cos(theta: f64, g: f64, gp: f64, gpp: f64) -> Jet2 {
        let (s, c) = theta.sin_cos();
        Jet2 { v: g, d: [-s * gp, 0.0], dd: [[s * s * gpp - c * gp, 0.0], [0.0, 0.0]] }
    }
}

/// Position and coordinate derivatives of the immersion in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapJet {
    pub x: Vec4,
    /// `d[i]` = ∂_i X, i ∈ {θ, φ}
    pub d: [Vec4; 2],
    /// `dd[i][j]` = ∂_i ∂_j X
    pub dd: [[Vec4; 2]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiltAxis {
    X,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceFamily {
    Sphere { r: f64 },
    /// R = r (1 + amp P₂(cosθ)); "oblate" is the same shape with amp = 0.2
    Wiggly { r: f64, amp: f64 },
    /// R = r, t = v·x or v·z
    Tilted { r: f64, v: f64, axis: TiltAxis },
    /// R = r, t = eps P_l(cosθ)
    TimeWiggled { r: f64, eps: f64, l: usize },
    /// Legendre series in cosθ for R(θ) and t(θ)
    Custom { r_coeffs: Vec<f64>, t_coeffs: Vec<f64> },
}

impl SurfaceFamily {
    pub fn lookup(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "sphere" => &["r"],
            "wiggly-sphere" | "oblate" => &["r", "amp"],
            "tilted-sphere" => &["r", "v", "axis"],
            "time-wiggled-sphere" => &["r", "eps", "l"],
            "custom" => {
                return Err(QlmError::Parameter {
                    module: MODULE,
                    detail: "custom surfaces are loaded from a CSV profile".into(),
                })
            }
            _ => {
                return Err(QlmError::Unknown { module: MODULE, kind: "surface", name: name.to_string() })
            }
        };
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(QlmError::Parameter {
                    module: MODULE,
                    detail: format!("surface '{name}' takes no parameter '{key}'"),
                });
            }
        }
        let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
        let r = get("r", 1.0);
        if !(r > 0.0) || !r.is_finite() {
            return Err(QlmError::Parameter { module: MODULE, detail: format!("radius r must be positive, got {r}") });
        }
        Ok(match name {
            "sphere" => SurfaceFamily::Sphere { r },
            "wiggly-sphere" => SurfaceFamily::Wiggly { r, amp: get("amp", 0.1) },
            "oblate" => SurfaceFamily::Wiggly { r, amp: get("amp", 0.2) },
            "tilted-sphere" => {
                let axis = match get("axis", 2.0) as i64 {
                    0 => TiltAxis::X,
                    2 => TiltAxis::Z,
                    a => {
                        return Err(QlmError::Parameter {
                            module: MODULE,
                            detail: format!("tilt axis must be 0 (x) or 2 (z), got {a}"),
                        })
                    }
                };
                SurfaceFamily::Tilted { r, v: get("v", 0.3), axis }
            }
            _ => {
                let l = get("l", 1.0);
                if l < 0.0 || l.fract() != 0.0 {
                    return Err(QlmError::Parameter { module: MODULE, detail: format!("l must be a non-negative integer, got {l}") });
                }
                SurfaceFamily::TimeWiggled { r, eps: get("eps", 0.2), l: l as usize }
            }
        })
    }

    /// Load an axisymmetric profile from CSV columns `theta, r, t` and fit
    /// Legendre series of degree `degree` by least squares.
    pub fn from_csv(path: &Path, degree: usize) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| QlmError::Io(format!("{}: {e}", path.display())))?;
        let headers = rdr.headers().map_err(|e| QlmError::Io(e.to_string()))?.clone();
        let col = |n: &str| {
            headers.iter().position(|h| h == n).ok_or_else(|| QlmError::Parameter {
                module: MODULE,
                detail: format!("profile CSV lacks column '{n}'"),
            })
        };
        let (ct, cr) = (col("theta")?, col("r")?);
        let ctt = headers.iter().position(|h| h == "t");
        let (mut th, mut rr, mut tt) = (vec![], vec![], vec![]);
        for rec in rdr.records() {
            let rec = rec.map_err(|e| QlmError::Io(e.to_string()))?;
            let num = |i: usize| -> Result<f64> {
                rec.get(i).unwrap_or("").parse::<f64>().map_err(|e| QlmError::Parameter {
                    module: MODULE,
                    detail: format!("bad number in profile CSV: {e}"),
                })
            };
            th.push(num(ct)?);
            rr.push(num(cr)?);
            tt.push(match ctt {
                Some(i) => num(i)?,
                None => 0.0,
            });
        }
        Self::from_samples(&th, &rr, &tt, degree)
    }

    pub fn from_samples(theta: &[f64], r: &[f64], t: &[f64], degree: usize) -> Result<Self> {
        let n = theta.len();
        if n < degree + 1 {
            return Err(QlmError::Parameter {
                module: MODULE,
                detail: format!("profile has {n} samples, need at least {} for degree {degree}", degree + 1),
            });
        }
        if r.iter().any(|&v| !(v > 0.0)) {
            return Err(QlmError::Parameter { module: MODULE, detail: "profile radii must be positive".into() });
        }
        let a = DMatrix::from_fn(n, degree + 1, |i, l| legendre_jet(l, theta[i].cos()).0);
        let svd = a.svd(true, true);
        let fit = |y: &[f64]| -> Result<Vec<f64>> {
            let sol = svd
                .solve(&DVector::from_column_slice(y), 1e-12)
                .map_err(|e| QlmError::Parameter { module: MODULE, detail: e.to_string() })?;
            Ok(sol.iter().copied().collect())
        };
        Ok(SurfaceFamily::Custom { r_coeffs: fit(r)?, t_coeffs: fit(t)? })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceFamily::Sphere { .. } => "sphere",
            SurfaceFamily::Wiggly { .. } => "wiggly-sphere",
            SurfaceFamily::Tilted { .. } => "tilted-sphere",
            SurfaceFamily::TimeWiggled { .. } => "time-wiggled-sphere",
            SurfaceFamily::Custom { .. } => "custom",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut p = BTreeMap::new();
        match self {
            SurfaceFamily::Sphere { r } => {
                p.insert("r".into(), *r);
            }
            SurfaceFamily::Wiggly { r, amp } => {
                p.insert("r".into(), *r);
                p.insert("amp".into(), *amp);
            }
            SurfaceFamily::Tilted { r, v, axis } => {
                p.insert("r".into(), *r);
                p.insert("v".into(), *v);
                p.insert("axis".into(), if *axis == TiltAxis::X { 0.0 } else { 2.0 });
            }
            SurfaceFamily::TimeWiggled { r, eps, l } => {
                p.insert("r".into(), *r);
                p.insert("eps".into(), *eps);
                p.insert("l".into(), *l as f64);
            }
            SurfaceFamily::Custom { r_coeffs, .. } => {
                p.insert("degree".into(), (r_coeffs.len() - 1) as f64);
            }
        }
        p
    }

    /// True when the map is independent of φ.
    pub fn is_axisymmetric(&self) -> bool {
        !matches!(self, SurfaceFamily::Tilted { axis: TiltAxis::X, v, .. } if *v != 0.0)
    }

    /// Polar profile (t, R) at (θ, φ).
    pub fn polar(&self, theta: f64, phi: f64) -> (Jet2, Jet2) {
        let x = theta.cos();
        match self {
            SurfaceFamily::Sphere { r } => (Jet2::default(), Jet2::constant(*r)),
            SurfaceFamily::Wiggly { r, amp } => {
                let (p, dp, ddp) = legendre_jet(2, x);
                let rr = Jet2::of_cos(theta, 1.0 + amp * p, amp * dp, amp * ddp).scale(*r);
                (Jet2::default(), rr)
            }
            SurfaceFamily::Tilted { r, v, axis } => {
                let (s, c) = theta.sin_cos();
                let t = match axis {
                    TiltAxis::Z => Jet2 { v: c, d: [-s, 0.0], dd: [[-c, 0.0], [0.0, 0.0]] },
                    TiltAxis::X => {
                        let (sp, cp) = phi.sin_cos();
                        Jet2 {
                            v: s * cp,
                            d: [c * cp, -s * sp],
                            dd: [[-s * cp, -c * sp], [-c * sp, -s * cp]],
                        }
                    }
                };
                (t.scale(v * r), Jet2::constant(*r))
            }
            SurfaceFamily::TimeWiggled { r, eps, l } => {
                let (p, dp, ddp) = legendre_jet(*l, x);
                (Jet2::of_cos(theta, eps * p, eps * dp, eps * ddp), Jet2::constant(*r))
            }
            SurfaceFamily::Custom { r_coeffs, t_coeffs } => {
                let series = |c: &[f64]| {
                    let (mut g, mut gp, mut gpp) = (0.0, 0.0, 0.0);
                    for (l, a) in c.iter().enumerate() {
                        let (p, dp, ddp) = legendre_jet(l, x);
                        g += a * p;
                        gp += a * dp;
                        gpp += a * ddp;
                    }
                    Jet2::of_cos(theta, g, gp, gpp)
                };
                (series(t_coeffs), series(r_coeffs))
            }
        }
    }

    /// Immersion jet in the given chart.
    pub fn jet(&self, chart: Chart, theta: f64, phi: f64) -> MapJet {
        let (t, rr) = self.polar(theta, phi);
        match chart {
            Chart::Spherical => MapJet {
                x: [t.v, rr.v, theta, phi],
                d: [[t.d[0], rr.d[0], 1.0, 0.0], [t.d[1], rr.d[1], 0.0, 1.0]],
                dd: [
                    [[t.dd[0][0], rr.dd[0][0], 0.0, 0.0], [t.dd[0][1], rr.dd[0][1], 0.0, 0.0]],
                    [[t.dd[1][0], rr.dd[1][0], 0.0, 0.0], [t.dd[1][1], rr.dd[1][1], 0.0, 0.0]],
                ],
            },
            Chart::Cartesian => {
                let (s, c) = theta.sin_cos();
                let (sp, cp) = phi.sin_cos();
                let dirs = [
                    Jet2 { v: s * cp, d: [c * cp, -s * sp], dd: [[-s * cp, -c * sp], [-c * sp, -s * cp]] },
                    Jet2 { v: s * sp, d: [c * sp, s * cp], dd: [[-s * sp, c * cp], [c * cp, -s * sp]] },
                    Jet2 { v: c, d: [-s, 0.0], dd: [[-c, 0.0], [0.0, 0.0]] },
                ];
                let mut out = MapJet {
                    x: [t.v, 0.0, 0.0, 0.0],
                    d: [[t.d[0], 0.0, 0.0, 0.0], [t.d[1], 0.0, 0.0, 0.0]],
                    dd: [
                        [[t.dd[0][0], 0.0, 0.0, 0.0], [t.dd[0][1], 0.0, 0.0, 0.0]],
                        [[t.dd[1][0], 0.0, 0.0, 0.0], [t.dd[1][1], 0.0, 0.0, 0.0]],
                    ],
                };
                for (k, dir) in dirs.iter().enumerate() {
                    let p = rr.mul(dir);
                    out.x[k + 1] = p.v;
                    for i in 0..2 {
                        out.d[i][k + 1] = p.d[i];
                        for j in 0..2 {
                            out.dd[i][j][k + 1] = p.dd[i][j];
                        }
                    }
                }
                out
            }
        }
    }
}

/// P_l(x), P_l'(x), P_l''(x) for |x| < 1.
pub fn legendre_jet(l: usize, x: f64) -> (f64, f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    let (mut s0, mut s1) = (0.0, 0.0);
    if l == 0 {
        return (1.0, 0.0, 0.0);
    }
    for k in 2..=l {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        // differentiate the recurrence rather than divide by 1 − x²
        let d2 = ((2.0 * k - 1.0) * (p1 + x * d1) - (k - 1.0) * d0) / k;
        let s2 = ((2.0 * k - 1.0) * (2.0 * d1 + x * s1) - (k - 1.0) * s0) / k;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        s0 = s1;
        s1 = s2;
    }
    (p1, d1, s1)
}
