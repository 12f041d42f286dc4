//! One module per subcommand; shared spec and grid plumbing lives here.

pub mod errata;
pub mod evolve;
pub mod figure;
pub mod spectrum;
pub mod sweep;
pub mod verify;

use kdvlab_core::catalog::DEFAULT_WINDOW;
use kdvlab_core::{FamilyId, Grid, Sign, Solution, SolutionSpec, VelocityConvention};

use crate::config::RunConfig;
use crate::CliError;

/// Modulus values every family is checked at (hyperbolic-only families use 1 alone).
pub const M_GRID: [f64; 6] = [0.05, 0.25, 0.5, 0.75, 0.95, 1.0];

/// `verify` and `sweep` pass when the relative residual is below this.
pub const VERIFY_TOLERANCE: f64 = 1e-6;

pub fn convention(cfg: &RunConfig) -> VelocityConvention {
    if cfg.paper_velocities {
        VelocityConvention::AsPublished
    } else {
        VelocityConvention::Verified
    }
}

pub fn spec_for(cfg: &RunConfig, family: FamilyId, m: f64) -> Result<SolutionSpec, CliError> {
    Ok(SolutionSpec::new(family)
        .alpha(cfg.alpha)
        .m(m)?
        .beta(cfg.beta)
        .branch(cfg.branch)
        .amp_sign(cfg.amp_sign))
}

pub fn solution_from(cfg: &RunConfig) -> Result<Solution, CliError> {
    let family = cfg.require_family()?;
    let spec = spec_for(cfg, family, cfg.m.unwrap_or(1.0))?;
    Ok(Solution::with_convention(spec, convention(cfg))?)
}

/// Whether `branch` changes the profile.
pub fn uses_branch(family: FamilyId) -> bool {
    !matches!(
        family,
        FamilyId::KdvCnoidal | FamilyId::KdvSech2 | FamilyId::MkdvSn | FamilyId::MkdvCosechCoth
    )
}

/// Whether `amp_sign` changes the profile.
pub fn uses_amp_sign(family: FamilyId) -> bool {
    matches!(
        family,
        FamilyId::MkdvSnCn | FamilyId::MkdvSnDn | FamilyId::MkdvSn | FamilyId::MkdvCosechCoth
    )
}

pub fn m_values(family: FamilyId) -> &'static [f64] {
    if family.hyperbolic_only() {
        &M_GRID[M_GRID.len() - 1..]
    } else {
        &M_GRID
    }
}

pub fn signs(used: bool) -> &'static [Sign] {
    if used {
        &[Sign::Plus, Sign::Minus]
    } else {
        &[Sign::Plus]
    }
}

/// Default sampling grid, with `--n` replacing the point count and `--L` the
/// truncated half-width.
pub fn grid_for(sol: &Solution, cfg: &RunConfig) -> Result<Grid, CliError> {
    let base = sol.default_grid();
    let grid = match (sol.natural_period(), cfg.n, cfg.half_width) {
        (Some(period), Some(n), _) => Grid::periodic(0.0, period, n)?,
        (Some(_), None, _) => base,
        (None, n, half_width) => {
            let half_width = half_width.unwrap_or(DEFAULT_WINDOW);
            let spacing = match n {
                Some(n) if n >= 2 => 2.0 * half_width / (n - 1) as f64,
                Some(n) => return Err(CliError::Usage(format!("--n {n} is too small"))),
                None => base.spacing,
            };
            Grid::truncated(half_width, spacing)?
        }
    };
    Ok(grid)
}
