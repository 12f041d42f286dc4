//! Checks of published constants that the residual oracle does not confirm.

use num_complex::Complex64;
use serde::Serialize;

use kdvlab_core::lax::{DEFAULT_DECAY_LENGTHS, DEFAULT_POINTS};
use kdvlab_core::{
    bound_states, isospectral_check, susy_pair, traveling_residual, velocity_scan, FamilyId, Grid,
    IsospectralReport, SampledProfile, SchrodingerProblem, Sign, Solution,
    Superpotential, VelocityConvention,
};

use super::spectrum::{complex_scarf, sech2_well};
use super::{spec_for, M_GRID, VERIFY_TOLERANCE};
use crate::config::RunConfig;
use crate::{emit, to_json, CliError, Outcome};

#[derive(Debug, Serialize)]
pub struct VelocityCase {
    pub m: f64,
    pub c_published: f64,
    pub relative_published: f64,
    pub c_verified: f64,
    pub relative_verified: f64,
}

#[derive(Debug, Serialize)]
pub struct VelocityErratum {
    pub family: FamilyId,
    pub cases: Vec<VelocityCase>,
    pub published_holds: bool,
    pub verified_holds: bool,
}

#[derive(Debug, Serialize)]
pub struct SignCase {
    pub m: f64,
    /// Relative residual with the real amplitude `−mα²` required by the constraints.
    pub relative_text_sign: f64,
    /// Relative residual with the real part mirrored, as drawn.
    pub relative_plotted_sign: f64,
    /// Best relative residual of the mirrored profile over `c ∈ [−10, 10]`.
    pub best_plotted_any_c: f64,
}

#[derive(Debug, Serialize)]
pub struct SignErratum {
    pub family: FamilyId,
    pub cases: Vec<SignCase>,
    pub text_sign_holds: bool,
    pub plotted_sign_holds: bool,
}

#[derive(Debug, Serialize)]
pub struct OrderingCase {
    pub family: FamilyId,
    /// First `ζ > 0` on the sampled grid where the superposed intensity exceeds the fundamental one.
    pub first_violation: Option<f64>,
    pub holds_everywhere: bool,
}

#[derive(Debug, Serialize)]
pub struct OrderingErratum {
    /// `4 sech⁴ ζ ≥ sech² ζ` exactly when `|ζ| ≤ arcsech(1/2) = ln(2 + √3)`.
    pub predicted_crossing: f64,
    pub cases: Vec<OrderingCase>,
}

#[derive(Debug, Serialize)]
pub struct PartnerErratum {
    pub alpha: f64,
    /// Lowest level of the complex Scarf potential on each branch.
    pub scarf_ground: Vec<Complex64>,
    pub sech2_ground: Option<Complex64>,
    /// `max |W² + W′ − α²/4|` for `W = (α/2)(tanh αx + i sech αx)`.
    pub partner_plus_deviation: f64,
    /// `max |W² − W′ − (α²/4 + Scarf₊)|`.
    pub partner_minus_deviation: f64,
    /// The Scarf potential against `−2α² sech²`, each measured from its own continuum edge.
    pub scarf_vs_sech2: IsospectralReport,
}

#[derive(Debug, Serialize)]
pub struct ErrataReport {
    pub sn_velocity: VelocityErratum,
    pub figure_sign: SignErratum,
    pub inset_ordering: OrderingErratum,
    pub isospectral_partner: PartnerErratum,
}

fn relative(sol: &Solution) -> Result<f64, CliError> {
    Ok(traveling_residual(&sol.sample_default()?, sol.params.c, sol.params.equation)?.relative)
}

fn sn_velocity(cfg: &RunConfig) -> Result<VelocityErratum, CliError> {
    let family = FamilyId::MkdvSn;
    let mut cases = Vec::new();
    for m in M_GRID {
        let spec = spec_for(cfg, family, m)?;
        let published = Solution::with_convention(spec, VelocityConvention::AsPublished)?;
        let verified = Solution::with_convention(spec, VelocityConvention::Verified)?;
        cases.push(VelocityCase {
            m,
            c_published: published.params.c,
            relative_published: relative(&published)?,
            c_verified: verified.params.c,
            relative_verified: relative(&verified)?,
        });
    }
    Ok(VelocityErratum {
        family,
        published_holds: cases.iter().all(|c| c.relative_published < VERIFY_TOLERANCE),
        verified_holds: cases.iter().all(|c| c.relative_verified < VERIFY_TOLERANCE),
        cases,
    })
}

fn figure_sign(cfg: &RunConfig) -> Result<SignErratum, CliError> {
    let family = FamilyId::KdvCn2Sndn;
    let mut cases = Vec::new();
    for m in [1.0, 0.25] {
        let text = Solution::new(spec_for(cfg, family, m)?)?;
        let mut plotted = text;
        plotted.params.a = -text.params.a;
        let samples = plotted.sample_default()?;
        let (_, best) = velocity_scan(&samples, plotted.params.equation, -10.0, 10.0, 201)?;
        cases.push(SignCase {
            m,
            relative_text_sign: relative(&text)?,
            relative_plotted_sign: relative(&plotted)?,
            best_plotted_any_c: best.relative,
        });
    }
    Ok(SignErratum {
        family,
        text_sign_holds: cases.iter().all(|c| c.relative_text_sign < VERIFY_TOLERANCE),
        plotted_sign_holds: cases.iter().all(|c| c.best_plotted_any_c < VERIFY_TOLERANCE),
        cases,
    })
}

fn inset_ordering(cfg: &RunConfig) -> Result<OrderingErratum, CliError> {
    let mut cases = Vec::new();
    for family in [FamilyId::KdvCn2Sndn, FamilyId::KdvCn2Sncn] {
        let base = spec_for(cfg, family, 1.0)?;
        let plus = Solution::new(base.branch(Sign::Plus))?;
        let minus = Solution::new(base.branch(Sign::Minus))?;
        let mut first_violation = None;
        for zeta in super::figure::zeta_grid().into_iter().filter(|&z| z >= 0.0) {
            let (p, q) = (plus.eval(zeta)?, minus.eval(zeta)?);
            if p.norm_sqr() > (p + q).norm_sqr() {
                first_violation = Some(zeta);
                break;
            }
        }
        cases.push(OrderingCase {
            family,
            holds_everywhere: first_violation.is_none(),
            first_violation,
        });
    }
    Ok(OrderingErratum {
        predicted_crossing: (2.0 + 3f64.sqrt()).ln(),
        cases,
    })
}

fn isospectral_partner(cfg: &RunConfig) -> Result<PartnerErratum, CliError> {
    let alpha = cfg.alpha;
    let half_width = DEFAULT_DECAY_LENGTHS / alpha;
    let scarf = |branch| SchrodingerProblem::new(complex_scarf(alpha, branch), half_width, DEFAULT_POINTS);
    let well = SchrodingerProblem::new(sech2_well(alpha), half_width, DEFAULT_POINTS)?;

    let mut scarf_ground = Vec::new();
    for branch in [Sign::Plus, Sign::Minus] {
        if let Some(&e) = bound_states(&scarf(branch)?)?.bound_states.first() {
            scarf_ground.push(e);
        }
    }
    let sech2_ground = bound_states(&well)?.bound_states.first().copied();

    let grid = Grid::truncated(half_width, 0.01 / alpha)?;
    let w = SampledProfile::from_fn(grid, alpha, |x| {
        0.5 * alpha * Complex64::new((alpha * x).tanh(), 1.0 / (alpha * x).cosh())
    });
    let (v_minus, v_plus) = susy_pair(&Superpotential::new(w))?;
    let floor = 0.25 * alpha * alpha;
    let scarf_plus = complex_scarf(alpha, Sign::Plus);
    let coords = grid.coords();
    let partner_plus_deviation = v_plus.samples.iter().map(|v| (v - floor).norm()).fold(0.0, f64::max);
    let partner_minus_deviation = v_minus
        .samples
        .iter()
        .zip(&coords)
        .map(|(v, &x)| (v - floor - scarf_plus(x)).norm())
        .fold(0.0, f64::max);

    Ok(PartnerErratum {
        alpha,
        scarf_ground,
        sech2_ground,
        partner_plus_deviation,
        partner_minus_deviation,
        scarf_vs_sech2: isospectral_check(&scarf(Sign::Plus)?, &well, 1e-3)?,
    })
}

pub fn report(cfg: &RunConfig) -> Result<ErrataReport, CliError> {
    Ok(ErrataReport {
        sn_velocity: sn_velocity(cfg)?,
        figure_sign: figure_sign(cfg)?,
        inset_ordering: inset_ordering(cfg)?,
        isospectral_partner: isospectral_partner(cfg)?,
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let report = report(cfg)?;
    emit(cfg.out.as_deref(), &to_json(&report)?)?;
    Ok(Outcome::Pass)
}

