//! Maps between traveling profiles: Miura, Galilean shift, PT reflection and
//! the Cole–Hopf linearization.
//!
//! Profiles carry dimensional values; an `x`-derivative is `α` times the
//! `ζ`-derivative, with `α` taken from [`SampledProfile::scale_alpha`].

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::Sign;
use crate::error::{Error, Result};
use crate::profile::{Grid, SampledProfile, Topology};
use crate::residual::differentiate;

/// Default relative tolerance for [`classify`].
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-10;

/// Above this real part of `ln ψ`, `exp` overflows and [`cole_hopf`] rescales.
const LOG_OVERFLOW: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MiuraBranch {
    pub sign: Sign,
    /// `u = −v² ± i v_x` instead of `u = v² ± v_x`.
    pub complexified: bool,
}

impl MiuraBranch {
    pub fn real(sign: Sign) -> Self {
        Self { sign, complexified: false }
    }

    pub fn complexified(sign: Sign) -> Self {
        Self { sign, complexified: true }
    }
}

/// `u = v² ± v_x`, or `u = −v² ± i v_x` for the complexified branch.
///
/// Defocusing mKdV solutions map to KdV solutions with the same reduced speed;
/// the complexified map does the same for focusing mKdV.
pub fn miura(v: &SampledProfile, branch: MiuraBranch) -> Result<SampledProfile> {
    let dv = differentiate(v, 1)?;
    let slope = branch.sign.value() * v.scale_alpha;
    let (quad, lin) = if branch.complexified {
        (-1.0, Complex64::new(0.0, slope))
    } else {
        (1.0, Complex64::new(slope, 0.0))
    };
    v.zip_with(&dv, |a, da| quad * a * a + lin * da)
}

/// `(u + βα², c − 6β)`: the Galilean image of a KdV traveling profile.
pub fn galilean_shift(u: &SampledProfile, c: f64, beta: f64) -> (SampledProfile, f64) {
    let offset = beta * u.scale_alpha * u.scale_alpha;
    (u.map(|z| z + offset), c - 6.0 * beta)
}

/// `f(ζ) ↦ conj(f(−ζ))`.
pub fn pt_transform(f: &SampledProfile) -> Result<SampledProfile> {
    let mirror = f.grid.mirror()?;
    Ok(SampledProfile {
        samples: mirror.iter().map(|&j| f.samples[j].conj()).collect(),
        ..f.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryTag {
    #[serde(rename = "PT_EVEN")]
    PtEven,
    #[serde(rename = "PT_ODD")]
    PtOdd,
    #[serde(rename = "NONE")]
    None,
}

impl fmt::Display for SymmetryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryTag::PtEven => "PT_EVEN",
            SymmetryTag::PtOdd => "PT_ODD",
            SymmetryTag::None => "NONE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub class: SymmetryTag,
    /// Relative sup-norm defect of the reported class (the smaller one for `NONE`).
    pub deviation: f64,
}

/// PT parity of `f`, comparing `‖f ∓ PT f‖` against `tol·‖f‖` in the sup norm.
///
/// The zero profile is PT-even with zero deviation.
pub fn classify(f: &SampledProfile, tol: f64) -> Result<SymmetryClass> {
    let reflected = pt_transform(f)?;
    let norm = f.sup_norm();
    if norm == 0.0 {
        return Ok(SymmetryClass { class: SymmetryTag::PtEven, deviation: 0.0 });
    }
    let even = f.zip_with(&reflected, |a, b| a - b)?.sup_norm() / norm;
    let odd = f.zip_with(&reflected, |a, b| a + b)?.sup_norm() / norm;
    let class = if even < tol && even <= odd {
        SymmetryTag::PtEven
    } else if odd < tol {
        SymmetryTag::PtOdd
    } else {
        SymmetryTag::None
    };
    let deviation = match class {
        SymmetryTag::PtEven => even,
        SymmetryTag::PtOdd => odd,
        SymmetryTag::None => even.min(odd),
    };
    Ok(SymmetryClass { class, deviation })
}

/// `ψ` with `ψ_x / ψ = v`, stored as `ψ = psi · exp(log_scale)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColeHopf {
    /// Sampled on a truncated grid: `ψ` need not be periodic even when `v` is.
    pub psi: SampledProfile,
    /// Zero unless `ψ` would overflow, in which case the largest `|ψ|` is scaled to 1.
    pub log_scale: f64,
}

/// `ψ(ζ) = exp ∫₀^ζ v/α`, normalized to 1 at the grid node nearest `ζ = 0`.
///
/// The cumulative integral uses the trapezoid rule with its endpoint derivative
/// correction, which is fourth order, so `ψ″/ψ = v² + v_x` holds to the accuracy
/// of the derivative stencil rather than to `O(h²)`.
pub fn cole_hopf(v: &SampledProfile) -> Result<ColeHopf> {
    if v.pole_mask.is_some() {
        return Err(Error::Domain("Cole-Hopf integral crosses a pole".into()));
    }
    let inv_alpha = 1.0 / v.scale_alpha;
    let w: Vec<Complex64> = v.samples.iter().map(|z| z * inv_alpha).collect();
    let dw: Vec<Complex64> = differentiate(v, 1)?
        .samples
        .iter()
        .map(|z| z * inv_alpha)
        .collect();
    let h = v.grid.spacing;
    let n = v.len();

    let mut log_psi = vec![Complex64::new(0.0, 0.0); n];
    for j in 1..n {
        let step = 0.5 * h * (w[j - 1] + w[j]) - h * h / 12.0 * (dw[j] - dw[j - 1]);
        log_psi[j] = log_psi[j - 1] + step;
    }
    let origin = (0..n)
        .min_by(|&a, &b| v.grid.coord(a).abs().total_cmp(&v.grid.coord(b).abs()))
        .expect("non-empty grid");
    let anchor = log_psi[origin];
    for z in &mut log_psi {
        *z -= anchor;
    }
    let peak = log_psi.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let log_scale = if peak > LOG_OVERFLOW { peak } else { 0.0 };

    let grid = Grid {
        topology: Topology::Truncated {
            half_width: 0.5 * h * (n - 1) as f64,
        },
        ..v.grid
    };
    let samples = log_psi.iter().map(|z| (z - log_scale).exp()).collect();
    let mut psi = SampledProfile::new(grid, samples, v.scale_alpha)?;
    psi.natural_period = None;
    Ok(ColeHopf { psi, log_scale })
}
