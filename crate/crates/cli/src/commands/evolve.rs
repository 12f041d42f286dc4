use std::f64::consts::PI;

use serde::Serialize;

use kdvlab_core::evolve::{initial_field, EvolutionSummary};
use kdvlab_core::{evolve, EvolutionConfig, ResolvedParams, SampledProfile, Solution, SolutionSpec};

use super::solution_from;
use crate::config::RunConfig;
use crate::format::{csv_row, sci};
use crate::{emit, to_json, CliError, Outcome};

pub const DEFAULT_MODES: usize = 1024;
pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_T_END: f64 = 1.0;
/// Solitary waves run on `40π/α`; periodic ones on the nearest whole number of periods.
pub const SOLITARY_DOMAIN: f64 = 40.0 * PI;

pub const ERROR_TOL: f64 = 1e-6;
pub const LOW_DRIFT_TOL: f64 = 1e-8;
pub const HIGH_DRIFT_TOL: f64 = 1e-6;

pub const SNAPSHOT_HEADER: &str = "t,x,re_u,im_u,intensity\n";

#[derive(Debug, Serialize)]
pub struct EvolveReport {
    pub spec: SolutionSpec,
    pub params: ResolvedParams,
    #[serde(flatten)]
    pub summary: EvolutionSummary,
    pub pass: bool,
}

pub fn default_domain(sol: &Solution) -> f64 {
    let alpha = sol.spec.alpha;
    match sol.natural_period() {
        Some(period) => {
            let cell = period / alpha;
            cell * (SOLITARY_DOMAIN / cell).round().max(1.0)
        }
        None => SOLITARY_DOMAIN / alpha,
    }
}

fn snapshot_rows(csv: &mut String, t: f64, field: &SampledProfile) {
    for (x, u) in field.coords().into_iter().zip(&field.samples) {
        csv.push_str(&csv_row(&[sci(t), sci(x), sci(u.re), sci(u.im), sci(u.norm_sqr())]));
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sol = solution_from(cfg)?;
    if sol.is_singular() {
        return Err(CliError::Usage(format!(
            "{} has a pole and cannot be evolved pseudospectrally",
            sol.spec.family
        )));
    }
    let config = EvolutionConfig::new(
        cfg.n.unwrap_or(DEFAULT_MODES),
        cfg.domain.unwrap_or_else(|| default_domain(&sol)),
        cfg.dt.unwrap_or(DEFAULT_DT),
        cfg.t_end.unwrap_or(DEFAULT_T_END),
        cfg.equation.unwrap_or(sol.params.equation),
    );
    config.validate()?;
    let u0 = initial_field(&sol, &config)?;
    let result = evolve(&u0, &config, Some(&sol))?;

    let pass = result.error_l2.is_some_and(|e| e < ERROR_TOL)
        && result.drift_i1 < LOW_DRIFT_TOL
        && result.drift_i2 < LOW_DRIFT_TOL
        && result.drift_i3 < HIGH_DRIFT_TOL;
    let report = EvolveReport {
        spec: sol.spec,
        params: sol.params,
        summary: result.summary(&config),
        pass,
    };
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }

    match cfg.out.as_deref() {
        Some(dir) => {
            let mut csv = String::from(SNAPSHOT_HEADER);
            snapshot_rows(&mut csv, 0.0, &u0);
            for snap in &result.snapshots {
                snapshot_rows(&mut csv, snap.t, &snap.field);
            }
            emit(Some(&dir.join("snapshots.csv")), &csv)?;
            emit(Some(&dir.join("summary.json")), &to_json(&report)?)?;
        }
        None => emit(None, &to_json(&report)?)?,
    }
    Ok(Outcome::from_pass(pass))
}
