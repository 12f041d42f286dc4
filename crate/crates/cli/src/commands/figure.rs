use kdvlab_core::{FamilyId, Sign, Solution};

use super::spec_for;
use crate::config::RunConfig;
use crate::format::{csv_row, sci};
use crate::{emit, CliError, Outcome};

pub const HEADER: &str =
    "m,zeta,re,im,intensity_superposed,intensity_fundamental,intensity_subtracted\n";
pub const FIGURE_M: [f64; 2] = [1.0, 0.25];
pub const HALF_SPAN: f64 = 5.0;
pub const POINTS: usize = 401;

/// Family plotted in each figure.
pub fn figure_family(id: u32) -> Result<FamilyId, CliError> {
    match id {
        1 => Ok(FamilyId::KdvCn2Sndn),
        2 => Ok(FamilyId::KdvCn2Sncn),
        3 => Ok(FamilyId::MkdvSnCn),
        4 => Ok(FamilyId::MkdvSnDn),
        _ => Err(CliError::Usage(format!("figure id must be 1, 2, 3 or 4, got {id}"))),
    }
}

/// `ζ_j = (j − 200)/40`, exactly antisymmetric about the middle row.
pub fn zeta_grid() -> Vec<f64> {
    let mid = (POINTS / 2) as f64;
    let scale = mid / HALF_SPAN;
    (0..POINTS).map(|j| (j as f64 - mid) / scale).collect()
}

/// Columns: the selected branch, its intensity, and the intensities of the
/// sum and the difference of the two branches.
pub fn figure_csv(id: u32, cfg: &RunConfig) -> Result<String, CliError> {
    let family = figure_family(id)?;
    let ms: Vec<f64> = cfg.m.map_or_else(|| FIGURE_M.to_vec(), |m| vec![m]);
    let mirror = if cfg.flip_sign { -1.0 } else { 1.0 };
    let mut csv = String::from(HEADER);
    for m in ms {
        let base = spec_for(cfg, family, m)?;
        let plus = Solution::new(base.branch(Sign::Plus))?;
        let minus = Solution::new(base.branch(Sign::Minus))?;
        let shown = if cfg.branch == Sign::Plus { plus } else { minus };
        for zeta in zeta_grid() {
            let u = shown.eval(zeta)?;
            let (p, q) = (plus.eval(zeta)?, minus.eval(zeta)?);
            csv.push_str(&csv_row(&[
                sci(m),
                sci(zeta),
                sci(mirror * u.re),
                sci(u.im),
                sci(u.norm_sqr()),
                sci((p + q).norm_sqr()),
                sci((p - q).norm_sqr()),
            ]));
        }
    }
    Ok(csv)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let id = cfg.id.ok_or_else(|| CliError::Usage("--id is required".into()))?;
    emit(cfg.out.as_deref(), &figure_csv(id, cfg)?)?;
    Ok(Outcome::Pass)
}
