use num_complex::Complex64;
use serde::Serialize;

use kdvlab_core::lax::{DEFAULT_DECAY_LENGTHS, DEFAULT_POINTS};
use kdvlab_core::{bound_states, EigenReport, EquationKind, SchrodingerProblem, Sign};

use super::solution_from;
use crate::config::RunConfig;
use crate::{emit, to_json, CliError, Outcome};

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub potential: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Sign>,
    pub alpha: f64,
    pub half_width: f64,
    pub n_points: usize,
    #[serde(flatten)]
    pub report: EigenReport,
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// `α²(−sech² αx + i·branch·sech αx tanh αx)`.
pub fn complex_scarf(alpha: f64, branch: Sign) -> impl Fn(f64) -> Complex64 + Send + Sync + 'static {
    let b = branch.value();
    move |x| {
        let s = alpha * x;
        alpha * alpha * Complex64::new(-sech(s).powi(2), b * sech(s) * s.tanh())
    }
}

/// `−2α² sech² αx`.
pub fn sech2_well(alpha: f64) -> impl Fn(f64) -> Complex64 + Send + Sync + 'static {
    move |x| Complex64::from(-2.0 * alpha * alpha * sech(alpha * x).powi(2))
}

fn problem(cfg: &RunConfig) -> Result<(String, SchrodingerProblem), CliError> {
    let alpha = cfg.alpha;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::Usage(format!("--alpha {alpha} must be positive")));
    }
    let half_width = cfg.half_width.unwrap_or(DEFAULT_DECAY_LENGTHS / alpha);
    let n = cfg.n.unwrap_or(DEFAULT_POINTS);
    let (name, problem) = match (cfg.potential.as_deref(), cfg.family) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either --potential or --family, not both".into()))
        }
        (None, None) => return Err(CliError::Usage("--potential or --family is required".into())),
        (Some("complex-scarf"), None) => (
            "complex-scarf".to_string(),
            SchrodingerProblem::new(complex_scarf(alpha, cfg.branch), half_width, n)?,
        ),
        (Some("sech2"), None) => ("sech2".to_string(), SchrodingerProblem::new(sech2_well(alpha), half_width, n)?),
        (Some(other), None) => {
            return Err(CliError::Usage(format!(
                "unknown potential '{other}' (expected complex-scarf or sech2)"
            )))
        }
        (None, Some(family)) => {
            let sol = solution_from(cfg)?;
            if family.equation() != EquationKind::Kdv {
                return Err(CliError::Usage(format!("{family} is not a KdV field and has no Schrodinger Lax operator")));
            }
            if sol.is_singular() {
                return Err(CliError::Usage(format!("{family} has a pole")));
            }
            // The Lax potential is the field at t = 0.
            let potential = move |x: f64| sol.eval_field(x, 0.0).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            (family.to_string(), SchrodingerProblem::new(potential, half_width, n)?)
        }
    };
    Ok((name, problem))
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (potential, problem) = problem(cfg)?;
    let report = bound_states(&problem)?;
    let converged = report.converged;
    let branch = (potential == "complex-scarf").then_some(cfg.branch);
    let out = SpectrumReport {
        potential,
        branch,
        alpha: cfg.alpha,
        half_width: problem.half_width,
        n_points: problem.n_points,
        report,
    };
    emit(cfg.out.as_deref(), &to_json(&out)?)?;
    Ok(Outcome::from_pass(converged))
}
