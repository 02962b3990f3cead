//! Command-line front end: argument parsing, task dispatch and output.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::boundary::{aligned_spinor, smooth_random_field, sup_norm, BoundaryOperators, SurfaceFrames};
use crate::config::{FileConfig, Format, Overrides, RunConfig, Task};
use crate::embedding::AxisymmetricProfile;
use crate::error::{QlmError, Result};
use crate::geometry::{verify_frame_invariance, ExtrinsicGeometry, NormalGauge, SurfacePatch};
use crate::mass::{self, MassSurface, CHIRALITY_TOLERANCE, CONVERGENCE_BANDS};
use crate::np::{dirac_from_two_spinor, np_scalars, spin_basis, two_spinor_split, SpinFrame};
use crate::spinor::{GammaMatrix, GammaRep, Spinor, Weyl};

pub const MODULE: &str = "cli";

#[derive(Debug, Parser)]
#[command(name = "qlm", version, about = "Quasilocal mean-curvature mass of spacelike 2-surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mass E, area, M_irr, identity residuals and the L convergence table.
    ///
    /// CSV columns: spacetime, surface, L, Ntheta, Nphi, E, A, M_irr, int_norm_h,
    /// int_h_flat, hamiltonian_difference, theorem1_residual, chiral_mass.
    Mass(Common),
    /// Axisymmetric isometric embedding of the induced metric.
    ///
    /// Input (--metric): CSV with columns theta, f, g on Gauss-Legendre nodes.
    /// CSV columns: theta, f, g, rho, z, H_flat.
    Embed {
        #[command(flatten)]
        common: Common,
        /// read σ = f dθ² + g dφ² from CSV instead of a catalog surface
        #[arg(long)]
        metric: Option<PathBuf>,
    },
    /// Run the identity suites; exit status 1 if any check fails.
    ///
    /// CSV columns: suite, check, value, tolerance, pass.
    /// --dump writes the Sen-Witten density of the aligned spinor with columns theta, phi, density.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        suite: Vec<Suite>,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Mass of round spheres over a list of radii, with the large-r fit or
    /// the horizon extrapolation.
    ///
    /// CSV columns: r, E, two_M_irr (fit results as leading comment lines).
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "10,20,50,100")]
        radii: Vec<f64>,
        #[arg(long, value_enum, default_value = "adm")]
        mode: SweepMode,
    },
    /// Spin coefficients ρ, μ, β, β' and the twist in the mean-curvature frame.
    ///
    /// CSV columns: theta, phi, kappa_perp, rho_re, rho_im, mu_re, mu_im, beta_re,
    /// beta_im, beta_prime_re, beta_prime_im, twist_m_re, twist_m_im.
    NpScalars(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Theorem1,
    Pairing,
    Witten,
    Chiral,
    Np,
    Horizon,
    Frames,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Adm,
    Horizon,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// minkowski-cartesian, minkowski-spherical, schwarzschild, schwarzschild-isotropic, weak-field
    #[arg(long)]
    pub spacetime: Option<String>,
    /// Schwarzschild mass
    #[arg(long = "M")]
    pub mass: Option<f64>,
    /// sphere, wiggly-sphere, oblate, tilted-sphere, time-wiggled-sphere, custom
    #[arg(long)]
    pub surface: Option<String>,
    /// coordinate radius
    #[arg(long)]
    pub r: Option<f64>,
    /// perturbation amplitude of the weak-field metric or the time-wiggled sphere
    #[arg(long)]
    pub eps: Option<f64>,
    /// band limit [default: 32]
    #[arg(long = "L")]
    pub band_limit: Option<usize>,
    /// colatitude nodes [default: L+2]
    #[arg(long = "Ntheta")]
    pub n_theta: Option<usize>,
    /// azimuthal nodes [default: 2L+2]
    #[arg(long = "Nphi")]
    pub n_phi: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// write here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with [spacetime], [surface], [output], [tolerances]
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// axisymmetric profile CSV (theta, r, t) for a custom surface
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// extra parameter, e.g. surface.amp=0.1 or spacetime.R=2
    #[arg(long = "param", short = 'p')]
    pub params: Vec<String>,
    /// tolerance override, e.g. theorem1=1e-7
    #[arg(long = "tol")]
    pub tolerances: Vec<String>,
}

impl Common {
    fn resolve(&self, task: Task) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let o = Overrides {
            spacetime: self.spacetime.clone(),
            mass: self.mass,
            surface: self.surface.clone(),
            r: self.r,
            eps: self.eps,
            band_limit: self.band_limit,
            n_theta: self.n_theta,
            n_phi: self.n_phi,
            format: self.format,
            out: self.out.clone(),
            profile: self.profile.clone(),
            params: self.params.clone(),
            tolerances: self.tolerances.clone(),
        };
        RunConfig::resolve(task, file, o)
    }
}

/// Result of a task: JSON body, CSV table and whether every check passed.
pub struct Output {
    pub json: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// CSV comment lines
    pub notes: Vec<String>,
    pub pass: bool,
}

/// Round to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(|x| json!(sig12(x))).unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "nan".into(),
        other => other.to_string(),
    }
}

fn provenance(cfg: &RunConfig) -> Value {
    let grid = cfg.grid().ok();
    json!({
        "task": cfg.task,
        "L": cfg.band_limit,
        "Ntheta": grid.as_ref().map(|g| g.n_theta),
        "Nphi": grid.as_ref().map(|g| g.n_phi),
        "tolerances": cfg.tolerances,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Render in the configured format with 12 significant digits.
pub fn render(cfg: &RunConfig, out: &Output) -> Result<String> {
    match cfg.format {
        Format::Json => {
            let mut body = match round_value(out.json.clone()) {
                Value::Object(m) => m,
                other => {
                    let mut m = Map::new();
                    m.insert("result".into(), other);
                    m
                }
            };
            body.insert("provenance".into(), provenance(cfg));
            let mut s = serde_json::to_string_pretty(&Value::Object(body)).map_err(|e| QlmError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            writeln!(buf, "# qlm {}", provenance(cfg))?;
            for n in &out.notes {
                writeln!(buf, "# {n}")?;
            }
            let mut w = csv::Writer::from_writer(buf);
            let err = |e: csv::Error| QlmError::Io(e.to_string());
            w.write_record(&out.columns).map_err(err)?;
            for row in &out.rows {
                w.write_record(row.iter().map(|v| cell(&round_value(v.clone())))).map_err(err)?;
            }
            let buf = w.into_inner().map_err(|e| QlmError::Io(e.to_string()))?;
            String::from_utf8(buf).map_err(|e| QlmError::Io(e.to_string()))
        }
    }
}

fn emit(cfg: &RunConfig, out: &Output) -> Result<()> {
    let text = render(cfg, out)?;
    match &cfg.out {
        Some(p) => std::fs::write(p, text).map_err(|e| QlmError::Io(format!("{}: {e}", p.display()))),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn run_mass(cfg: &RunConfig) -> Result<Output> {
    let rep = mass::mean_curvature_mass(&cfg.model()?, &cfg.family()?, cfg.grid()?, &CONVERGENCE_BANDS)?;
    let json = serde_json::to_value(&rep).map_err(|e| QlmError::Io(e.to_string()))?;
    let row = vec![
        json!(rep.spacetime),
        json!(rep.surface),
        json!(rep.band_limit),
        json!(rep.n_theta),
        json!(rep.n_phi),
        json!(rep.e),
        json!(rep.area),
        json!(rep.m_irr),
        json!(rep.int_norm_h),
        json!(rep.int_h_flat),
        json!(rep.hamiltonian_difference),
        json!(rep.theorem1_residual),
        json!(rep.chiral_mass),
    ];
    Ok(Output {
        json,
        columns: vec![
            "spacetime", "surface", "L", "Ntheta", "Nphi", "E", "A", "M_irr", "int_norm_h", "int_h_flat",
            "hamiltonian_difference", "theorem1_residual", "chiral_mass",
        ],
        rows: vec![row],
        notes: rep
            .convergence
            .iter()
            .map(|c| match &c.error {
                Some(e) => format!("L = {}: {e}", c.band_limit),
                None => format!("L = {}: E = {}", c.band_limit, sig12(c.e)),
            })
            .collect(),
        pass: true,
    })
}

fn read_metric(path: &Path) -> Result<AxisymmetricProfile> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| QlmError::Io(format!("{}: {e}", path.display())))?;
    #[derive(serde::Deserialize)]
    struct Row {
        theta: f64,
        f: f64,
        g: f64,
    }
    let (mut th, mut f, mut g) = (vec![], vec![], vec![]);
    for rec in rdr.deserialize::<Row>() {
        let row = rec.map_err(|e| QlmError::Config(format!("{}: {e}", path.display())))?;
        th.push(row.theta);
        f.push(row.f);
        g.push(row.g);
    }
    AxisymmetricProfile::new(th, f, g)
}

pub fn run_embed(cfg: &RunConfig, metric: Option<&Path>) -> Result<Output> {
    let profile = match metric {
        Some(p) => read_metric(p)?,
        None => AxisymmetricProfile::from_patch(&mass::build_patch(&cfg.model()?, &cfg.family()?, cfg.grid()?)?)?,
    };
    let emb = profile.embed()?;
    let rows: Vec<Vec<Value>> = (0..emb.theta.len())
        .map(|k| vec![json!(emb.theta[k]), json!(profile.f[k]), json!(profile.g[k]), json!(emb.rho[k]), json!(emb.z[k]), json!(emb.h_flat[k])])
        .collect();
    let json = json!({
        "theta": emb.theta, "f": profile.f, "g": profile.g, "rho": emb.rho, "z": emb.z, "H_flat": emb.h_flat,
        "metric_residual": emb.metric_residual, "egregium_residual": emb.egregium_residual(),
    });
    Ok(Output {
        json,
        columns: vec!["theta", "f", "g", "rho", "z", "H_flat"],
        rows,
        notes: vec![format!("metric residual {:e}, egregium residual {:e}", sig12(emb.metric_residual), sig12(emb.egregium_residual()))],
        pass: true,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn below(suite: &'static str, check: &'static str, value: f64, tolerance: f64) -> Check {
    Check { suite, check, value, tolerance, pass: value <= tolerance }
}

fn max_diff(a: &[Spinor], b: &[Spinor]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn unit_weyl() -> Weyl {
    Weyl::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
}

fn expand(suites: &[Suite]) -> Vec<Suite> {
    use Suite::*;
    let all = [Theorem1, Pairing, Witten, Chiral, Np, Horizon, Frames];
    let mut v: Vec<Suite> = if suites.contains(&All) { all.to_vec() } else { suites.to_vec() };
    v.sort_by_key(|s| all.iter().position(|a| a == s));
    v.dedup();
    v
}

/// The identity checks of the selected suites, plus the Sen-Witten density
/// of the aligned spinor when the surface admits an embedding.
pub fn verify(cfg: &RunConfig, suites: &[Suite]) -> Result<(Vec<Check>, Option<Vec<f64>>)> {
    let suites = expand(suites);
    let tol = cfg.tolerances;
    let rep = GammaRep::standard();
    let (model, family) = (cfg.model()?, cfg.family()?);
    let needs_embedding = suites.iter().any(|s| matches!(s, Suite::Theorem1 | Suite::Pairing | Suite::Witten | Suite::Chiral));
    let ms = if needs_embedding { Some(MassSurface::new(&model, &family, cfg.grid()?)?) } else { None };
    let owned: SurfacePatch;
    let patch = match &ms {
        Some(m) => &m.patch,
        None => {
            owned = mass::build_patch(&model, &family, cfg.grid()?)?;
            &owned
        }
    };
    let mc = ExtrinsicGeometry::compute(patch, NormalGauge::MeanCurvature)?;
    let frames = SurfaceFrames::from_extrinsic(&mc);
    let ops = BoundaryOperators::new(rep.clone(), &patch.grid, &frames)?;
    let mut checks = Vec::new();
    let mut density = None;

    if let Some(ms) = &ms {
        let phi = ms.transplanted_spinor(&rep, unit_weyl());
        density = Some(ops.senwitten_density(&phi)?);
    }

    for suite in suites {
        match suite {
            Suite::Theorem1 => {
                let ms = ms.as_ref().expect("embedding built");
                let t = ms.theorem1(&rep)?;
                checks.push(below("theorem1", "relative residual", t.relative_residual, tol.theorem1));
            }
            Suite::Pairing => {
                let ms = ms.as_ref().expect("embedding built");
                let h = ms.hamiltonian();
                checks.push(below("pairing", "pointwise xi.P + |H|", h.pointwise_residual, tol.pairing_pointwise));
                let d = (h.difference - 8.0 * PI * ms.energy().e).abs();
                checks.push(below("pairing", "integral minus 8 pi E", d, tol.pairing_integral));
            }
            Suite::Witten => {
                let ms = ms.as_ref().expect("embedding built");
                let (_, flat) = ms.frames();
                let fops = BoundaryOperators::new(rep.clone(), &patch.grid, &flat)?;
                let phi = aligned_spinor(&rep, &ms.embedding, &patch.grid, unit_weyl());
                checks.push(below("witten", "4-spinor residual", sup_norm(&fops.witten_residual_embedded(&phi)?), tol.witten));
                let parts = two_spinor_split(&fops, &phi)?;
                let two = parts.iter().map(|p| p.residual_sup()).fold(0.0, f64::max);
                checks.push(below("witten", "2-spinor residual", two, tol.witten));
                let agree = max_diff(&fops.dirac_s(&phi)?, &dirac_from_two_spinor(&parts));
                checks.push(below("witten", "4/2-spinor agreement", agree, tol.witten));
            }
            Suite::Chiral => {
                let ms = ms.as_ref().expect("embedding built");
                let (pp, pm) = (rep.chiral_projector(1.0), rep.chiral_projector(-1.0));
                let exact = [(pp * pp - pp).norm(), (pm * pm - pm).norm(), (pp + pm - GammaMatrix::identity()).norm(), (pp * pm).norm()]
                    .into_iter()
                    .fold(0.0, f64::max);
                checks.push(Check { suite: "chiral", check: "projector algebra", value: exact, tolerance: 0.0, pass: exact == 0.0 });
                let psi = smooth_random_field(&patch.grid, 6, 13)?;
                let ibp = (patch.integrate(&ops.senwitten_density(&psi)?) - patch.integrate(&ops.chiral_density(&psi)?)).abs();
                checks.push(below("chiral", "decomposed integral", ibp, tol.chiral));
                let c = ms.chiral_mass(&rep, &ms.aligned_plus(&rep))?;
                checks.push(below("chiral", "chiral mass minus E", (c.e_tilde - ms.energy().e).abs(), tol.chiral));
                let (a, b) = ops.chiral_split(&ms.transplanted_spinor(&rep, unit_weyl()));
                let norms = a.iter().chain(&b).map(|x| (x.norm() - FRAC_1_SQRT_2).abs()).fold(0.0, f64::max);
                checks.push(below("chiral", "|phi+-| - 1/sqrt2", norms, CHIRALITY_TOLERANCE));
            }
            Suite::Np => {
                let spin = SpinFrame::standard();
                let (mut rho, mut beta, mut norm): (f64, f64, f64) = (0.0, 0.0, 0.0);
                for (node, f) in mc.nodes.iter().zip(&frames.nodes) {
                    let s = np_scalars(&rep, &spin, f);
                    let half = 0.5 * s.kappa_perp;
                    rho = rho.max((s.rho - half).norm()).max((s.mu - half).norm());
                    beta = beta.max((s.beta_boost - 0.5 * s.twist_m).norm()).max((s.beta_prime_boost + 0.5 * s.twist_m.conj()).norm());
                    norm = norm.max((spin_basis(node, NormalGauge::MeanCurvature)?.normalization() - 1.0).norm());
                }
                checks.push(below("np", "rho, mu minus kappa_perp/2", rho, tol.np));
                checks.push(below("np", "boost beta minus twist/2", beta, tol.np));
                checks.push(below("np", "o.iota - 1", norm, tol.np));
            }
            Suite::Horizon => {
                let psi = smooth_random_field(&patch.grid, 6, 4)?;
                let (plus, _) = ops.chiral_split(&psi);
                let zeros = vec![0.0; patch.grid.len()];
                let v = patch.integrate(&ops.chiral_density_with(&plus, &zeros)?).abs();
                checks.push(below("horizon", "psi- = 0, |H| = 0 integral", v, tol.horizon));
            }
            Suite::Frames => {
                let inv = verify_frame_invariance(patch, 0.7)?.max(verify_frame_invariance(patch, -0.3)?);
                checks.push(below("frames", "boost invariance", inv, tol.frame));
                let slice = ExtrinsicGeometry::compute(patch, NormalGauge::Slice)?;
                checks.push(below("frames", "Gauss-Bonnet", slice.gauss_bonnet_residual(), tol.frame));
                let k = mc.nodes.iter().map(|n| n.kappa0.abs()).fold(0.0, f64::max);
                checks.push(below("frames", "kappa(H perp)", k, tol.frame));
            }
            Suite::All => unreachable!(),
        }
    }
    Ok((checks, density))
}

pub fn run_verify(cfg: &RunConfig, suites: &[Suite], dump: Option<&Path>) -> Result<Output> {
    let (checks, density) = verify(cfg, suites)?;
    if let Some(path) = dump {
        let density = density.ok_or_else(|| QlmError::Config("--dump needs a suite that embeds the surface".into()))?;
        let grid = cfg.grid()?;
        let mut w = csv::Writer::from_path(path).map_err(|e| QlmError::Io(format!("{}: {e}", path.display())))?;
        let err = |e: csv::Error| QlmError::Io(e.to_string());
        w.write_record(["theta", "phi", "density"]).map_err(err)?;
        for (k, d) in density.iter().enumerate() {
            let (t, p) = grid.node(k);
            w.write_record([t, p, *d].map(|x| cell(&json!(sig12(x))))).map_err(err)?;
        }
        w.flush()?;
    }
    let pass = checks.iter().all(|c| c.pass);
    let rows = checks
        .iter()
        .map(|c| vec![json!(c.suite), json!(c.check), json!(c.value), json!(c.tolerance), json!(c.pass)])
        .collect();
    Ok(Output {
        json: json!({ "pass": pass, "checks": checks }),
        columns: vec!["suite", "check", "value", "tolerance", "pass"],
        rows,
        notes: vec![],
        pass,
    })
}

pub fn run_sweep(cfg: &RunConfig, radii: &[f64], mode: SweepMode) -> Result<Output> {
    let model = cfg.model()?;
    let (json, rows_src, notes) = match mode {
        SweepMode::Adm => {
            let s = mass::adm_limit_sweep(&model, radii, cfg.band_limit)?;
            let notes = vec![
                format!("fit E = M + c/r: M = {}, c = {}", sig12(s.fitted_mass), sig12(s.fitted_c)),
                format!("fit E = M + c1/r + c2/r^2: M = {}", sig12(s.fitted_mass_quadratic)),
            ];
            (serde_json::to_value(&s), s.rows, notes)
        }
        SweepMode::Horizon => {
            let s = mass::horizon_bound_check(&model, radii, cfg.band_limit)?;
            let notes = vec![format!("r -> r_h: E = {}, 2 M_irr = {}", sig12(s.e_limit), sig12(s.two_m_irr_limit))];
            (serde_json::to_value(&s), s.rows, notes)
        }
    };
    let rows = rows_src.iter().map(|r| vec![json!(r.r), json!(r.e), json!(r.two_m_irr)]).collect();
    Ok(Output {
        json: json.map_err(|e| QlmError::Io(e.to_string()))?,
        columns: vec!["r", "E", "two_M_irr"],
        rows,
        notes,
        pass: true,
    })
}

pub fn run_np(cfg: &RunConfig) -> Result<Output> {
    let patch = mass::build_patch(&cfg.model()?, &cfg.family()?, cfg.grid()?)?;
    let mc = ExtrinsicGeometry::compute(&patch, NormalGauge::MeanCurvature)?;
    let frames = SurfaceFrames::from_extrinsic(&mc);
    let (rep, spin) = (GammaRep::standard(), SpinFrame::standard());
    let rows: Vec<Vec<Value>> = mc
        .nodes
        .iter()
        .zip(&frames.nodes)
        .map(|(n, f)| {
            let s = np_scalars(&rep, &spin, f);
            [n.theta, n.phi, s.kappa_perp, s.rho.re, s.rho.im, s.mu.re, s.mu.im, s.beta_raw.re, s.beta_raw.im]
                .into_iter()
                .chain([s.beta_prime_raw.re, s.beta_prime_raw.im, s.twist_m.re, s.twist_m.im])
                .map(|x| json!(x))
                .collect()
        })
        .collect();
    let columns = vec![
        "theta", "phi", "kappa_perp", "rho_re", "rho_im", "mu_re", "mu_im", "beta_re", "beta_im", "beta_prime_re",
        "beta_prime_im", "twist_m_re", "twist_m_im",
    ];
    let nodes: Vec<Value> = rows
        .iter()
        .map(|r| Value::Object(columns.iter().zip(r).map(|(k, v)| (k.to_string(), v.clone())).collect()))
        .collect();
    Ok(Output { json: json!({ "nodes": nodes }), columns, rows, notes: vec![], pass: true })
}

/// Parse, run and report. Returns the process exit code: 0 success,
/// 1 failed verification, 2 error.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    mass::configure_threads();
    match dispatch(&cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("qlm: error: {e}");
            2
        }
    }
}

fn dispatch(cmd: &Command) -> Result<bool> {
    let (cfg, out) = match cmd {
        Command::Mass(c) => {
            let cfg = c.resolve(Task::Mass)?;
            let out = run_mass(&cfg)?;
            (cfg, out)
        }
        Command::Embed { common, metric } => {
            let cfg = common.resolve(Task::Embed)?;
            let out = run_embed(&cfg, metric.as_deref())?;
            (cfg, out)
        }
        Command::Verify { common, suite, dump } => {
            let cfg = common.resolve(Task::Verify)?;
            let out = run_verify(&cfg, suite, dump.as_deref())?;
            for c in out.rows.iter().filter(|r| r[4] == json!(false)) {
                eprintln!("qlm: violation: {} {}: {} > {}", cell(&c[0]), cell(&c[1]), cell(&c[2]), cell(&c[3]));
            }
            (cfg, out)
        }
        Command::Sweep { common, radii, mode } => {
            let cfg = common.resolve(Task::Sweep)?;
            let out = run_sweep(&cfg, radii, *mode)?;
            (cfg, out)
        }
        Command::NpScalars(c) => {
            let cfg = c.resolve(Task::NpScalars)?;
            let out = run_np(&cfg)?;
            (cfg, out)
        }
    };
    emit(&cfg, &out)?;
    Ok(out.pass)
}
