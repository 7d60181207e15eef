//! Physical-parameter flags, the optional `key = value` config file, and
//! their resolution onto a full parameter set.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use su11_core::Params;

/// Keys accepted in a config file, spelled like the flags.
const KEYS: [&str; 12] = [
    "g",
    "g1",
    "g2",
    "theta1",
    "theta2",
    "phi",
    "beta",
    "theta-beta",
    "r",
    "eta",
    "l1",
    "l2",
];
const ANGLES: [&str; 5] = ["theta1", "theta2", "phi", "theta-beta", "eta"];

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Gain of both stages (g1 = g2 = g).
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["g1", "g2"])]
    pub g: Option<f64>,
    /// Gain of the first stage.
    #[arg(long, allow_negative_numbers = true)]
    pub g1: Option<f64>,
    /// Gain of the second stage.
    #[arg(long, allow_negative_numbers = true)]
    pub g2: Option<f64>,
    /// Pump phase of the first stage.
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    /// Pump phase of the second stage.
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    /// Phase shift on the internal arm b.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Coherent amplitude |beta| in port b.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Coherent phase theta_beta.
    #[arg(long = "theta-beta", allow_negative_numbers = true)]
    pub theta_beta: Option<f64>,
    /// Squeeze strength of the vacuum in port a.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Squeeze phase.
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Internal loss on both arms.
    #[arg(long, allow_negative_numbers = true)]
    pub l1: Option<f64>,
    /// External loss on the detected output.
    #[arg(long, allow_negative_numbers = true)]
    pub l2: Option<f64>,
    /// Force g2 = g1 and theta2 = theta1 + pi.
    #[arg(long)]
    pub balanced: bool,
    /// Read every angle (flags and config file) in degrees.
    #[arg(long)]
    pub deg: bool,
    /// File of `key = value` lines using the flag names; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default)]
struct FileValues {
    values: BTreeMap<String, f64>,
    balanced: bool,
    deg: bool,
}

fn parse_bool(key: &str, raw: &str) -> Result<bool> {
    match raw.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => bail!("config key {key}: expected true or false, got {raw:?}"),
    }
}

fn read_config(path: &Path) -> Result<FileValues> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut out = FileValues::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, raw)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), lineno + 1);
        };
        let key = key.trim().replace('_', "-");
        let raw = raw.trim();
        match key.as_str() {
            "balanced" => out.balanced = parse_bool(&key, raw)?,
            "deg" => out.deg = parse_bool(&key, raw)?,
            k if KEYS.contains(&k) => {
                let v: f64 = raw.parse().with_context(|| {
                    format!(
                        "{}:{}: {key} = {raw:?} is not a number",
                        path.display(),
                        lineno + 1
                    )
                })?;
                out.values.insert(key, v);
            }
            _ => bail!("{}:{}: unknown key {key:?}", path.display(), lineno + 1),
        }
    }
    Ok(out)
}

impl ParamArgs {
    fn flag_values(&self) -> BTreeMap<String, f64> {
        let pairs = [
            ("g", self.g),
            ("g1", self.g1),
            ("g2", self.g2),
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("phi", self.phi),
            ("beta", self.beta),
            ("theta-beta", self.theta_beta),
            ("r", self.r),
            ("eta", self.eta),
            ("l1", self.l1),
            ("l2", self.l2),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }

    /// Whether angles are given in degrees, from the flag or the config file.
    pub fn degrees(&self) -> Result<bool> {
        Ok(self.deg || self.file()?.deg)
    }

    fn file(&self) -> Result<FileValues> {
        match &self.config {
            Some(path) => read_config(path),
            None => Ok(FileValues::default()),
        }
    }

    /// Overlays config-file values and then flags onto `base`.
    pub fn resolve(&self, base: Params) -> Result<Params> {
        let file = self.file()?;
        let flags = self.flag_values();
        let mut values = file.values;
        if flags.contains_key("g") {
            values.remove("g1");
            values.remove("g2");
        }
        if flags.contains_key("g1") || flags.contains_key("g2") {
            values.remove("g");
        }
        values.extend(flags);
        if values.contains_key("g") && (values.contains_key("g1") || values.contains_key("g2")) {
            bail!("g conflicts with g1/g2");
        }
        if self.deg || file.deg {
            for key in ANGLES {
                if let Some(v) = values.get_mut(key) {
                    *v = v.to_radians();
                }
            }
        }

        let mut p = base;
        for (key, &v) in &values {
            match key.as_str() {
                "g" => {
                    p.g1 = v;
                    p.g2 = v;
                }
                "g1" => p.g1 = v,
                "g2" => p.g2 = v,
                "theta1" => p.theta1 = v,
                "theta2" => p.theta2 = v,
                "phi" => p.phi = v,
                "beta" => p.beta_mag = v,
                "theta-beta" => p.beta_phase = v,
                "r" => p.r = v,
                "eta" => p.eta = v,
                "l1" => p.l1 = v,
                "l2" => p.l2 = v,
                _ => unreachable!("key filtered by KEYS"),
            }
        }
        if self.balanced || file.balanced {
            match (values.get("g1"), values.get("g2")) {
                (Some(a), Some(b)) if a != b => {
                    bail!("--balanced requires g1 = g2 (got {a} and {b})")
                }
                (None, Some(&b)) => p.g1 = b,
                _ => p.g2 = p.g1,
            }
            if values.contains_key("theta2") && !values.contains_key("theta1") {
                p.theta1 = p.theta2 - PI;
            } else {
                p.theta2 = p.theta1 + PI;
            }
        }
        p.config()?;
        p.input()?;
        Ok(p)
    }
}

/// Default operating point of `point` and `sweep`: balanced, g = 1, r = 0,
/// |beta| = 1, theta_beta = pi/2, phi = 0, lossless.
pub fn default_params() -> Params {
    Params::balanced(1.0, 0.0, 1.0)
}
