//! Traveling-wave residual oracle.
//!
//! A profile `w(ζ)` moving with reduced speed `c` solves KdV iff
//! `−c w′ − 6 w w′ + w‴ = 0`, and mKdV iff `−c w′ ∓ 6 w² w′ + w‴ = 0`. The
//! third-order form is used so that no integration constant has to be guessed.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::equation::EquationKind;
use crate::error::{Error, Result};
use crate::profile::{SampledProfile, Topology};
use crate::stencil::{eighth_order_width, offset_weights};

/// Spectral coefficients below this fraction of the largest one are treated as
/// roundoff and dropped before differentiation; otherwise the `k³` factor lifts
/// FFT noise to ~1e−8 of the signal on a 256-point grid.
const SPECTRAL_NOISE_FLOOR: f64 = 1e-15;

/// Profiles whose samples all agree to this relative precision are treated as constant.
const CONSTANT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMethod {
    /// Fourier spectral on periodic grids, finite differences on truncated ones.
    Auto,
    Spectral,
    FiniteDifference,
}

/// `order`-th derivative with respect to the grid coordinate.
///
/// Periodic grids use the Fourier derivative; truncated grids use eighth-order
/// central differences with one-sided stencils near the ends.
pub fn differentiate(p: &SampledProfile, order: usize) -> Result<SampledProfile> {
    differentiate_with(p, order, DerivativeMethod::Auto)
}

pub fn differentiate_with(
    p: &SampledProfile,
    order: usize,
    method: DerivativeMethod,
) -> Result<SampledProfile> {
    if !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("derivative order {order} not in 1..=3")));
    }
    let spectral = match method {
        DerivativeMethod::Auto => p.grid.is_periodic(),
        DerivativeMethod::Spectral => {
            if !p.grid.is_periodic() {
                return Err(Error::Topology(
                    "spectral derivative needs a periodic grid".into(),
                ));
            }
            true
        }
        DerivativeMethod::FiniteDifference => false,
    };
    let samples = if spectral {
        spectral_derivative(&p.samples, p.grid.extent(), order)
    } else {
        finite_difference(&p.samples, p.grid.spacing, order, p.grid.is_periodic())?
    };
    Ok(SampledProfile {
        samples,
        ..p.clone()
    })
}

fn spectral_derivative(samples: &[Complex64], length: f64, order: usize) -> Vec<Complex64> {
    let n = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut buf = samples.to_vec();
    forward.process(&mut buf);

    let floor = SPECTRAL_NOISE_FLOOR * buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let dk = 2.0 * std::f64::consts::PI / length;
    for (j, coefficient) in buf.iter_mut().enumerate() {
        if coefficient.norm() < floor {
            *coefficient = Complex64::new(0.0, 0.0);
            continue;
        }
        let k = wavenumber(j, n) * dk;
        if n % 2 == 0 && j == n / 2 && order % 2 == 1 {
            *coefficient = Complex64::new(0.0, 0.0);
            continue;
        }
        *coefficient *= Complex64::new(0.0, k).powu(order as u32);
    }

    inverse.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|z| z * scale).collect()
}

/// Signed integer wavenumber of FFT bin `j` out of `n`.
pub(crate) fn wavenumber(j: usize, n: usize) -> f64 {
    if j <= n / 2 {
        j as f64
    } else {
        j as f64 - n as f64
    }
}

fn finite_difference(
    samples: &[Complex64],
    h: f64,
    order: usize,
    periodic: bool,
) -> Result<Vec<Complex64>> {
    let n = samples.len();
    let width = eighth_order_width(order);
    if n < width {
        return Err(Error::TooFewSamples { needed: width, got: n });
    }
    let half = (width / 2) as i64;
    let scale = 1.0 / h.powi(order as i32);

    let central_offsets: Vec<i64> = (-half..=half).collect();
    let central = offset_weights(order, &central_offsets);

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, slot) in out.iter_mut().enumerate() {
        let j = j as i64;
        let (start, weights) = if periodic || (j >= half && j + half < n as i64) {
            (j - half, None)
        } else {
            let start = (j - half).clamp(0, n as i64 - width as i64);
            let offsets: Vec<i64> = (start..start + width as i64).map(|i| i - j).collect();
            (start, Some(offset_weights(order, &offsets)))
        };
        let weights = weights.as_deref().unwrap_or(&central);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, w) in weights.iter().enumerate() {
            let idx = (start + i as i64).rem_euclid(n as i64) as usize;
            acc += samples[idx] * *w;
        }
        *slot = acc * scale;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub sup_norm: f64,
    pub l2_norm: f64,
    /// `sup|R|` over the largest of `sup|c w′|`, `sup|nonlinear|`, `sup|w‴|`.
    pub relative: f64,
    pub c_used: f64,
    /// Radius of the excluded pole neighborhood, if any.
    pub mask: Option<f64>,
}

/// Derivatives and the `c`-independent part of the residual, computed once.
struct ResidualParts {
    w1: Vec<Complex64>,
    rest: Vec<Complex64>,
    nonlinear_sup: f64,
    dispersive_sup: f64,
    kept: Vec<bool>,
    w_sup: f64,
    spacing: f64,
    mask: Option<f64>,
}

impl ResidualParts {
    fn new(p: &SampledProfile, eq: EquationKind) -> Result<Self> {
        check_natural_period(p)?;
        let scale = 1.0 / p.scale_alpha.powi(eq.amplitude_power());
        let w = p.map(|z| z * scale);
        let kept: Vec<bool> = (0..p.len()).map(|j| p.kept(j)).collect();
        let (w1, w3) = if is_numerically_constant(&w, &kept) {
            let zero = vec![Complex64::new(0.0, 0.0); p.len()];
            (zero.clone(), zero)
        } else {
            (differentiate(&w, 1)?.samples, differentiate(&w, 3)?.samples)
        };

        let mut nonlinear_sup = 0.0_f64;
        let mut dispersive_sup = 0.0_f64;
        let rest = (0..p.len())
            .map(|j| {
                let nl = eq.nonlinear_term(w.samples[j], w1[j]);
                if kept[j] {
                    nonlinear_sup = nonlinear_sup.max(nl.norm());
                    dispersive_sup = dispersive_sup.max(w3[j].norm());
                }
                nl + w3[j]
            })
            .collect();
        let w_sup = w.sup_norm();
        Ok(Self {
            w1,
            rest,
            w_sup,
            nonlinear_sup,
            dispersive_sup,
            kept,
            spacing: p.grid.spacing,
            mask: p.pole_mask,
        })
    }

    fn report(&self, c: f64) -> ResidualReport {
        let mut sup = 0.0_f64;
        let mut sum_sq = 0.0;
        let mut advective_sup = 0.0_f64;
        for j in (0..self.w1.len()).filter(|&j| self.kept[j]) {
            let advective = -c * self.w1[j];
            let r = advective + self.rest[j];
            sup = sup.max(r.norm());
            sum_sq += r.norm_sqr();
            advective_sup = advective_sup.max(advective.norm());
        }
        let largest = advective_sup.max(self.nonlinear_sup).max(self.dispersive_sup);
        ResidualReport {
            sup_norm: sup,
            l2_norm: (self.spacing * sum_sq).sqrt(),
            relative: if largest > 0.0 { sup / largest } else { 0.0 },
            c_used: c,
            mask: self.mask,
        }
    }

    /// Real `c` minimizing `‖−c w′ + rest‖₂`.
    fn least_squares_velocity(&self) -> Result<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for j in (0..self.w1.len()).filter(|&j| self.kept[j]) {
            num += (self.w1[j].conj() * self.rest[j]).re;
            den += self.w1[j].norm_sqr();
        }
        let kept = self.kept.iter().filter(|&&k| k).count().max(1) as f64;
        if (den / kept).sqrt() <= 1e-10 * self.w_sup.max(1.0) {
            return Err(Error::VelocityUnidentifiable);
        }
        Ok(num / den)
    }
}

/// A constant solves every traveling-wave equation exactly; differentiating its
/// roundoff through one-sided third-derivative stencils would only report noise.
fn is_numerically_constant(w: &SampledProfile, kept: &[bool]) -> bool {
    let values: Vec<Complex64> = (0..w.len()).filter(|&j| kept[j]).map(|j| w.samples[j]).collect();
    let Some(&first) = values.first() else {
        return true;
    };
    let spread = values.iter().map(|z| (z - first).norm()).fold(0.0, f64::max);
    spread <= CONSTANT_TOLERANCE * first.norm().max(1.0)
}

fn check_natural_period(p: &SampledProfile) -> Result<()> {
    if let (Topology::Periodic { length }, Some(period)) = (p.grid.topology, p.natural_period) {
        let ratio = length / period;
        if ratio < 0.5 || (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::Topology(format!(
                "periodic length {length} is not a multiple of the profile period {period}"
            )));
        }
    }
    Ok(())
}

/// Residual of the reduced traveling-wave equation at reduced speed `c`.
///
/// The profile is nondimensionalized by `α²` (KdV) or `α` (mKdV) first.
pub fn traveling_residual(
    p: &SampledProfile,
    c: f64,
    eq: EquationKind,
) -> Result<ResidualReport> {
    Ok(ResidualParts::new(p, eq)?.report(c))
}

/// Scan `steps` speeds in `[c_min, c_max]`, then refine by least squares.
///
/// The residual is affine in `c`, so the least-squares speed is the exact
/// `L²` minimizer; it replaces the scan winner unless it is worse in the
/// relative sup-norm.
pub fn velocity_scan(
    p: &SampledProfile,
    eq: EquationKind,
    c_min: f64,
    c_max: f64,
    steps: usize,
) -> Result<(f64, ResidualReport)> {
    if steps < 3 {
        return Err(Error::Domain(format!("velocity scan needs at least 3 steps, got {steps}")));
    }
    if !(c_max > c_min) {
        return Err(Error::Domain(format!("empty velocity range [{c_min}, {c_max}]")));
    }
    let parts = ResidualParts::new(p, eq)?;
    let c_ls = parts.least_squares_velocity()?;

    let scan_best = (0..steps)
        .map(|i| c_min + (c_max - c_min) * i as f64 / (steps - 1) as f64)
        .map(|c| parts.report(c))
        .min_by(|a, b| a.relative.total_cmp(&b.relative))
        .expect("steps >= 3");
    let refined = parts.report(c_ls);
    if refined.relative <= scan_best.relative {
        Ok((c_ls, refined))
    } else {
        Ok((scan_best.c_used, scan_best))
    }
}

/// Relative residual at each of `steps` equally spaced speeds in `[c_min, c_max]`.
pub fn residual_curve(
    p: &SampledProfile,
    eq: EquationKind,
    c_min: f64,
    c_max: f64,
    steps: usize,
) -> Result<Vec<ResidualReport>> {
    let parts = ResidualParts::new(p, eq)?;
    Ok((0..steps)
        .map(|i| c_min + (c_max - c_min) * i as f64 / (steps.max(2) - 1) as f64)
        .map(|c| parts.report(c))
        .collect())
}
