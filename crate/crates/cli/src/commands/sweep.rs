use rayon::prelude::*;

use kdvlab_core::Solution;

use super::{convention, spec_for, verify, VERIFY_TOLERANCE};
use crate::config::RunConfig;
use crate::format::{csv_row, sci};
use crate::{emit, CliError, Outcome};

pub const HEADER: &str = "m,c,relative,sup_norm,l2_norm,pass\n";

/// `m = 0.05, 0.10, …, 0.95, 1`; just `1` for hyperbolic-only families.
pub fn sweep_grid(hyperbolic_only: bool) -> Vec<f64> {
    if hyperbolic_only {
        return vec![1.0];
    }
    let mut grid: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    grid.push(1.0);
    grid
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let family = cfg.require_family()?;
    let rows = sweep_grid(family.hyperbolic_only())
        .par_iter()
        .map(|&m| {
            let sol = Solution::with_convention(spec_for(cfg, family, m)?, convention(cfg))?;
            verify::check(&sol, cfg)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut csv = String::from(HEADER);
    for case in &rows {
        csv.push_str(&csv_row(&[
            sci(case.spec.m.value()),
            sci(case.params.c),
            sci(case.residual.relative),
            sci(case.residual.sup_norm),
            sci(case.residual.l2_norm),
            case.pass.to_string(),
        ]));
    }
    emit(cfg.out.as_deref(), &csv)?;
    Ok(Outcome::from_pass(
        rows.iter().all(|c| c.residual.relative < VERIFY_TOLERANCE),
    ))
}
