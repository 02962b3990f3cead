//! Run configuration: TOML file merged with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{QlmError, Result};
use crate::spacetime::SpacetimeModel;
use crate::sphere::SphereGrid;
use crate::surface::SurfaceFamily;

pub const MIN_BAND_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Mass,
    Embed,
    Verify,
    Sweep,
    NpScalars,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeSection {
    pub name: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub name: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "L")]
    pub band_limit: Option<usize>,
    #[serde(rename = "Ntheta")]
    pub n_theta: Option<usize>,
    #[serde(rename = "Nphi")]
    pub n_phi: Option<usize>,
    /// CSV with columns theta, r and optionally t
    pub profile: Option<PathBuf>,
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Contents of a TOML configuration file. Every section is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub task: Option<Task>,
    #[serde(default)]
    pub spacetime: SpacetimeSection,
    #[serde(default)]
    pub surface: SurfaceSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| QlmError::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| QlmError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            QlmError::Config(m) => QlmError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

/// Pass thresholds of the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// |8πE + ∮(…)| / max(1, 8πE)
    pub theorem1: f64,
    /// pointwise ξ·P + |H|
    pub pairing_pointwise: f64,
    /// ∮(P_flat − P)·ξ − 8πE
    pub pairing_integral: f64,
    pub chiral: f64,
    pub np: f64,
    pub frame: f64,
    pub witten: f64,
    pub horizon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            theorem1: 1e-6,
            pairing_pointwise: 1e-10,
            pairing_integral: 1e-8,
            chiral: 1e-8,
            np: 1e-8,
            frame: 1e-8,
            witten: 1e-8,
            horizon: 1e-14,
        }
    }
}

impl Tolerances {
    pub fn with_overrides(overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let mut t = Tolerances::default();
        for (k, &v) in overrides {
            if !(v > 0.0) || !v.is_finite() {
                return Err(QlmError::Config(format!("tolerance '{k}' must be positive, got {v}")));
            }
            let slot = match k.as_str() {
                "theorem1" => &mut t.theorem1,
                "pairing_pointwise" => &mut t.pairing_pointwise,
                "pairing_integral" => &mut t.pairing_integral,
                "chiral" => &mut t.chiral,
                "np" => &mut t.np,
                "frame" => &mut t.frame,
                "witten" => &mut t.witten,
                "horizon" => &mut t.horizon,
                _ => return Err(QlmError::Config(format!("unknown tolerance '{k}'"))),
            };
            *slot = v;
        }
        Ok(t)
    }
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub spacetime: Option<String>,
    pub mass: Option<f64>,
    pub surface: Option<String>,
    pub r: Option<f64>,
    pub eps: Option<f64>,
    pub band_limit: Option<usize>,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub profile: Option<PathBuf>,
    /// `spacetime.key=value` or `surface.key=value`
    pub params: Vec<String>,
    pub tolerances: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub spacetime: String,
    pub spacetime_params: BTreeMap<String, f64>,
    pub surface: String,
    pub surface_params: BTreeMap<String, f64>,
    pub profile: Option<PathBuf>,
    pub degree: usize,
    pub band_limit: usize,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
}

fn key_value(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').ok_or_else(|| QlmError::Config(format!("expected key=value, got '{s}'")))?;
    let v = v.trim().parse::<f64>().map_err(|e| QlmError::Config(format!("'{s}': {e}")))?;
    Ok((k.trim().to_string(), v))
}

impl RunConfig {
    pub fn resolve(task: Task, file: FileConfig, cli: Overrides) -> Result<Self> {
        if let Some(t) = file.task {
            if t != task {
                return Err(QlmError::Config(format!("config file is for task {t:?}, command is {task:?}")));
            }
        }
        let spacetime = cli.spacetime.or(file.spacetime.name).unwrap_or_else(|| "minkowski-spherical".into());
        let surface = cli.surface.or(file.surface.name).unwrap_or_else(|| "sphere".into());
        let mut sp = file.spacetime.params;
        let mut fp = file.surface.params;
        if let Some(m) = cli.mass {
            sp.insert("M".into(), m);
        }
        if let Some(r) = cli.r {
            fp.insert("r".into(), r);
        }
        if let Some(eps) = cli.eps {
            if surface == "time-wiggled-sphere" || spacetime != "weak-field" {
                fp.insert("eps".into(), eps);
            } else {
                sp.insert("eps".into(), eps);
            }
        }
        for p in &cli.params {
            let (key, v) = key_value(p)?;
            match key.split_once('.') {
                Some(("spacetime", k)) => sp.insert(k.to_string(), v),
                Some(("surface", k)) => fp.insert(k.to_string(), v),
                _ => return Err(QlmError::Config(format!("parameter '{key}' must start with spacetime. or surface."))),
            };
        }
        let mut tol = file.tolerances;
        for t in &cli.tolerances {
            let (k, v) = key_value(t)?;
            tol.insert(k, v);
        }
        let band_limit = cli.band_limit.or(file.surface.band_limit).unwrap_or(32);
        if band_limit < MIN_BAND_LIMIT {
            return Err(QlmError::Config(format!("L must be at least {MIN_BAND_LIMIT}, got {band_limit}")));
        }
        let cfg = RunConfig {
            task,
            spacetime,
            spacetime_params: sp,
            surface,
            surface_params: fp,
            profile: cli.profile.or(file.surface.profile),
            degree: file.surface.degree.unwrap_or(8),
            band_limit,
            n_theta: cli.n_theta.or(file.surface.n_theta),
            n_phi: cli.n_phi.or(file.surface.n_phi),
            format: cli.format.or(file.output.format).unwrap_or_default(),
            out: cli.out.or(file.output.path),
            tolerances: Tolerances::with_overrides(&tol)?,
        };
        // resolve names now so that typos fail before any work
        cfg.model()?;
        if cfg.profile.is_none() {
            cfg.family()?;
        }
        Ok(cfg)
    }

    pub fn model(&self) -> Result<SpacetimeModel> {
        SpacetimeModel::lookup(&self.spacetime, &self.spacetime_params)
    }

    pub fn family(&self) -> Result<SurfaceFamily> {
        match &self.profile {
            Some(path) => SurfaceFamily::from_csv(path, self.degree),
            None => SurfaceFamily::lookup(&self.surface, &self.surface_params),
        }
    }

    pub fn grid(&self) -> Result<SphereGrid> {
        let l = self.band_limit;
        SphereGrid::with_resolution(l, self.n_theta.unwrap_or(l + 2), self.n_phi.unwrap_or(2 * l + 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_and_flags_merge() {
        let file = FileConfig::parse(
            "[spacetime]\nname = \"schwarzschild\"\nparams = { M = 2.0 }\n[surface]\nname = \"sphere\"\nparams = { r = 20.0 }\nL = 16\n[tolerances]\ntheorem1 = 1e-5\n",
        )
        .unwrap();
        let cli = Overrides { r: Some(30.0), tolerances: vec!["np=1e-6".into()], ..Default::default() };
        let cfg = RunConfig::resolve(Task::Mass, file, cli).unwrap();
        assert_eq!(cfg.spacetime_params["M"], 2.0);
        assert_eq!(cfg.surface_params["r"], 30.0);
        assert_eq!(cfg.band_limit, 16);
        assert_eq!(cfg.tolerances.theorem1, 1e-5);
        assert_eq!(cfg.tolerances.np, 1e-6);
        assert_eq!(cfg.grid().unwrap().n_theta, 18);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(FileConfig::parse("[spacetime]\nnom = 1\n"), Err(QlmError::Config(_))));
        let low = Overrides { band_limit: Some(4), ..Default::default() };
        assert!(RunConfig::resolve(Task::Mass, FileConfig::default(), low).is_err());
        let bad = Overrides { spacetime: Some("kerr".into()), ..Default::default() };
        assert!(matches!(RunConfig::resolve(Task::Mass, FileConfig::default(), bad), Err(QlmError::Unknown { .. })));
        let neg = Overrides { tolerances: vec!["chiral=-1".into()], ..Default::default() };
        assert!(RunConfig::resolve(Task::Verify, FileConfig::default(), neg).is_err());
        let eps = Overrides { spacetime: Some("weak-field".into()), eps: Some(0.02), ..Default::default() };
        let cfg = RunConfig::resolve(Task::Mass, FileConfig::default(), eps).unwrap();
        assert_eq!(cfg.spacetime_params["eps"], 0.02);
    }
}
