use rayon::prelude::*;
use serde::Serialize;

use kdvlab_core::{
    traveling_residual, EquationKind, FamilyId, Grid, ResidualReport, ResolvedParams, Solution,
    SolutionSpec, VelocityConvention,
};

use super::{convention, grid_for, m_values, signs, spec_for, uses_amp_sign, uses_branch, VERIFY_TOLERANCE};
use crate::config::RunConfig;
use crate::{emit, to_json, CliError, Outcome};

#[derive(Debug, Clone, Serialize)]
pub struct VerifyCase {
    pub spec: SolutionSpec,
    pub convention: VelocityConvention,
    pub params: ResolvedParams,
    pub equation: EquationKind,
    pub grid: Grid,
    pub residual: ResidualReport,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
struct VerifyAll {
    cases: Vec<VerifyCase>,
    passed: usize,
    failed: usize,
    pass: bool,
}

pub fn check(sol: &Solution, cfg: &RunConfig) -> Result<VerifyCase, CliError> {
    let equation = cfg.equation.unwrap_or(sol.params.equation);
    let grid = grid_for(sol, cfg)?;
    let residual = traveling_residual(&sol.sample(grid)?, sol.params.c, equation)?;
    Ok(VerifyCase {
        spec: sol.spec,
        convention: convention(cfg),
        params: sol.params,
        equation,
        grid,
        residual,
        tolerance: VERIFY_TOLERANCE,
        pass: residual.relative < VERIFY_TOLERANCE,
    })
}

/// Every family over the modulus grid, both signs where they matter and
/// `β ∈ {0, ±0.3}` for the Galilean family.
pub fn all_specs(cfg: &RunConfig) -> Result<Vec<SolutionSpec>, CliError> {
    let mut specs = Vec::new();
    for family in FamilyId::ALL {
        let betas: &[f64] = if family == FamilyId::KdvCn2Sncn { &[0.0, 0.3, -0.3] } else { &[0.0] };
        for &m in m_values(family) {
            for &beta in betas {
                for &branch in signs(uses_branch(family)) {
                    for &amp in signs(uses_amp_sign(family)) {
                        specs.push(spec_for(cfg, family, m)?.beta(beta).branch(branch).amp_sign(amp));
                    }
                }
            }
        }
    }
    Ok(specs)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.all {
        let cases = all_specs(cfg)?
            .par_iter()
            .map(|spec| check(&Solution::with_convention(*spec, convention(cfg))?, cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let passed = cases.iter().filter(|c| c.pass).count();
        let report = VerifyAll {
            failed: cases.len() - passed,
            pass: passed == cases.len(),
            passed,
            cases,
        };
        emit(cfg.out.as_deref(), &to_json(&report)?)?;
        return Ok(Outcome::from_pass(report.pass));
    }
    let case = check(&super::solution_from(cfg)?, cfg)?;
    emit(cfg.out.as_deref(), &to_json(&case)?)?;
    Ok(Outcome::from_pass(case.pass))
}
