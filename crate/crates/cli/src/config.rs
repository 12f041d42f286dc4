//! Run parameters from a flat `key=value` file and command-line flags.
//!
//! Both sources feed one key map, so a value is parsed and validated the same
//! way wherever it came from. Flags override the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kdvlab_core::{EquationKind, FamilyId, Sign};

use crate::CliError;

/// Every key a config file may set.
pub const KEYS: [&str; 18] = [
    "family",
    "m",
    "alpha",
    "beta",
    "branch",
    "amp-sign",
    "equation",
    "n",
    "dt",
    "t-end",
    "domain",
    "L",
    "out",
    "paper-velocities",
    "flip-sign",
    "potential",
    "id",
    "all",
];

pub type KeyMap = BTreeMap<String, String>;

/// `t_end` and `t-end` name the same key; `L` keeps its case.
fn normalize_key(key: &str) -> String {
    key.trim().replace('_', "-")
}

fn check_key(key: &str) -> Result<(), CliError> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("unknown key '{key}'")))
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<KeyMap, CliError> {
    let mut map = KeyMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = normalize_key(key);
        check_key(&key)?;
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!("config line {}: duplicate key '{key}'", lineno + 1)));
        }
    }
    Ok(map)
}

pub fn load_config(path: &Path) -> Result<KeyMap, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Typed parameters after merging.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Option<FamilyId>,
    pub m: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub branch: Sign,
    pub amp_sign: Sign,
    pub equation: Option<EquationKind>,
    pub n: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub domain: Option<f64>,
    pub half_width: Option<f64>,
    pub out: Option<PathBuf>,
    pub paper_velocities: bool,
    pub flip_sign: bool,
    pub potential: Option<String>,
    pub id: Option<u32>,
    pub all: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: None,
            m: None,
            alpha: 1.0,
            beta: 0.0,
            branch: Sign::Plus,
            amp_sign: Sign::Plus,
            equation: None,
            n: None,
            dt: None,
            t_end: None,
            domain: None,
            half_width: None,
            out: None,
            paper_velocities: false,
            flip_sign: false,
            potential: None,
            id: None,
            all: false,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("invalid value '{value}' for {key}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!("invalid value '{value}' for {key}: expected true or false"))),
    }
}

impl RunConfig {
    pub fn from_map(map: &KeyMap) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (key, value) in map {
            let v = value.as_str();
            match key.as_str() {
                "family" => cfg.family = Some(parse_value(key, v)?),
                "m" => cfg.m = Some(parse_value(key, v)?),
                "alpha" => cfg.alpha = parse_value(key, v)?,
                "beta" => cfg.beta = parse_value(key, v)?,
                "branch" => cfg.branch = parse_value(key, v)?,
                "amp-sign" => cfg.amp_sign = parse_value(key, v)?,
                "equation" => cfg.equation = Some(parse_value(key, v)?),
                "n" => cfg.n = Some(parse_value(key, v)?),
                "dt" => cfg.dt = Some(parse_value(key, v)?),
                "t-end" => cfg.t_end = Some(parse_value(key, v)?),
                "domain" => cfg.domain = Some(parse_value(key, v)?),
                "L" => cfg.half_width = Some(parse_value(key, v)?),
                "out" => cfg.out = Some(PathBuf::from(v)),
                "paper-velocities" => cfg.paper_velocities = parse_bool(key, v)?,
                "flip-sign" => cfg.flip_sign = parse_bool(key, v)?,
                "potential" => cfg.potential = Some(v.to_string()),
                "id" => cfg.id = Some(parse_value(key, v)?),
                "all" => cfg.all = parse_bool(key, v)?,
                other => return Err(CliError::Usage(format!("unknown key '{other}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn require_family(&self) -> Result<FamilyId, CliError> {
        self.family.ok_or_else(|| CliError::Usage("--family is required".into()))
    }
}

/// File values first, then flags on top.
pub fn merge(file: Option<KeyMap>, flags: Vec<(&'static str, String)>) -> Result<RunConfig, CliError> {
    let mut map = file.unwrap_or_default();
    for (key, value) in flags {
        check_key(key)?;
        map.insert(key.to_string(), value);
    }
    RunConfig::from_map(&map)
}
