//! Command-line front end: verification, sweeps, evolution, spectra, figure
//! data and the errata report.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or domain error.

pub mod commands;
pub mod config;
pub mod format;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use config::{load_config, merge, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] kdvlab_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot encode report: {0}")]
    Encode(#[from] serde_json::Error),
}

/// How a command that ran to completion judged its result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kdvlab", version, about = "Traveling waves of complex KdV and mKdV equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resolve a family and check it against its traveling-wave equation.
    Verify {
        #[command(flatten)]
        params: Params,
        /// Every family over the standard modulus grid.
        #[arg(long)]
        all: bool,
    },
    /// Residual table over the modulus parameter.
    Sweep {
        #[command(flatten)]
        params: Params,
    },
    /// Integrate a family forward and compare with the translated profile.
    Evolve {
        #[command(flatten)]
        params: Params,
    },
    /// Bound states of the Schrodinger operator with a given potential.
    Spectrum {
        #[command(flatten)]
        params: Params,
        /// complex-scarf or sech2; alternatively pass --family for a Lax potential.
        #[arg(long)]
        potential: Option<String>,
    },
    /// Export the data behind one of the four profile figures.
    Figure {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        id: Option<String>,
    },
    /// Consistency checks on published constants.
    Errata {
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Debug, Args)]
pub struct Params {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub branch: Option<String>,
    #[arg(long = "amp-sign", allow_hyphen_values = true)]
    pub amp_sign: Option<String>,
    #[arg(long)]
    pub equation: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub dt: Option<String>,
    #[arg(long = "t-end")]
    pub t_end: Option<String>,
    /// Periodic domain length for evolution.
    #[arg(long)]
    pub domain: Option<String>,
    /// Half-width of truncated windows and Dirichlet walls.
    #[arg(long = "L")]
    pub half_width: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// Flat key=value file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Use the published speeds instead of the verified ones.
    #[arg(long = "paper-velocities")]
    pub paper_velocities: bool,
    /// Mirror the real part, matching the plotted curves.
    #[arg(long = "flip-sign")]
    pub flip_sign: bool,
}

impl Params {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let mut flags = Vec::new();
        let optional = [
            ("family", &self.family),
            ("m", &self.m),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("branch", &self.branch),
            ("amp-sign", &self.amp_sign),
            ("equation", &self.equation),
            ("n", &self.n),
            ("dt", &self.dt),
            ("t-end", &self.t_end),
            ("domain", &self.domain),
            ("L", &self.half_width),
            ("out", &self.out),
        ];
        for (key, value) in optional {
            if let Some(v) = value {
                flags.push((key, v.clone()));
            }
        }
        if self.paper_velocities {
            flags.push(("paper-velocities", "true".into()));
        }
        if self.flip_sign {
            flags.push(("flip-sign", "true".into()));
        }
        flags
    }

    fn resolve(&self, extra: Vec<(&'static str, String)>) -> Result<RunConfig, CliError> {
        let file = self.config.as_deref().map(load_config).transpose()?;
        let mut flags = self.flags();
        flags.extend(extra);
        merge(file, flags)
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Verify { params, all } => {
            let extra = if *all { vec![("all", "true".into())] } else { vec![] };
            commands::verify::run(&params.resolve(extra)?)
        }
        Command::Sweep { params } => commands::sweep::run(&params.resolve(vec![])?),
        Command::Evolve { params } => commands::evolve::run(&params.resolve(vec![])?),
        Command::Spectrum { params, potential } => {
            let extra = potential.iter().map(|p| ("potential", p.clone())).collect();
            commands::spectrum::run(&params.resolve(extra)?)
        }
        Command::Figure { params, id } => {
            let extra = id.iter().map(|i| ("id", i.clone())).collect();
            commands::figure::run(&params.resolve(extra)?)
        }
        Command::Errata { params } => commands::errata::run(&params.resolve(vec![])?),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Writes to `path` (creating parent directories) or to stdout.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
                    path: parent.to_path_buf(),
                    source,
                })?;
            }
            std::fs::write(path, content).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
