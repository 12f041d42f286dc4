//! Uniform 1-D grids and complex samples on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    /// Samples cover `[origin, origin + length)`; the last sample wraps to the first.
    Periodic { length: f64 },
    /// Samples cover the closed window `[-half_width, half_width]` (or any closed
    /// interval of that width); derivatives use one-sided stencils at the ends.
    Truncated { half_width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub origin: f64,
    pub spacing: f64,
    pub count: usize,
    pub topology: Topology,
}

impl Grid {
    pub fn periodic(origin: f64, length: f64, count: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("periodic length {length} must be positive")));
        }
        if count < MIN_SAMPLES {
            return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: count });
        }
        Ok(Self {
            origin,
            spacing: length / count as f64,
            count,
            topology: Topology::Periodic { length },
        })
    }

    /// Closed window `[-half_width, half_width]` with `2·round(half_width/spacing) + 1`
    /// points, symmetric about zero.
    pub fn truncated(half_width: f64, spacing: f64) -> Result<Self> {
        if !(half_width > 0.0 && spacing > 0.0) {
            return Err(Error::Domain(format!(
                "truncated window needs positive half-width and spacing, got {half_width}, {spacing}"
            )));
        }
        let half = (half_width / spacing).round() as usize;
        let count = 2 * half + 1;
        if count < MIN_SAMPLES {
            return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: count });
        }
        let spacing = half_width / half as f64;
        Ok(Self {
            origin: -half_width,
            spacing,
            count,
            topology: Topology::Truncated { half_width },
        })
    }

    pub fn coord(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.coord(j)).collect()
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.topology, Topology::Periodic { .. })
    }

    /// Length of the covered interval: the period, or the window width.
    pub fn extent(&self) -> f64 {
        match self.topology {
            Topology::Periodic { length } => length,
            Topology::Truncated { .. } => self.spacing * (self.count - 1) as f64,
        }
    }

    /// Index of the sample at `-coord(j)`, if the grid is symmetric about zero.
    pub fn mirror(&self) -> Result<Vec<usize>> {
        let s = -2.0 * self.origin / self.spacing;
        let shift = s.round();
        if (s - shift).abs() > 1e-8 {
            return Err(Error::AsymmetricGrid);
        }
        let n = self.count as i64;
        let shift = shift as i64;
        match self.topology {
            Topology::Periodic { .. } => Ok((0..n)
                .map(|j| (shift - j).rem_euclid(n) as usize)
                .collect()),
            Topology::Truncated { .. } => {
                if shift != n - 1 {
                    return Err(Error::AsymmetricGrid);
                }
                Ok((0..n).map(|j| (shift - j) as usize).collect())
            }
        }
    }

    /// Same grid shape with every coordinate multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        let topology = match self.topology {
            Topology::Periodic { length } => Topology::Periodic { length: length * factor },
            Topology::Truncated { half_width } => Topology::Truncated {
                half_width: half_width * factor,
            },
        };
        Self {
            origin: self.origin * factor,
            spacing: self.spacing * factor,
            count: self.count,
            topology,
        }
    }
}

/// Complex field samples on a uniform grid.
///
/// Values are stored in physical units (KdV fields carry `α²`, mKdV fields `α`);
/// `scale_alpha` records the `α` needed to nondimensionalize them. The grid
/// coordinate is the traveling-frame variable `ζ` unless stated otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub grid: Grid,
    pub samples: Vec<Complex64>,
    pub scale_alpha: f64,
    /// Samples with `|ζ| < pole_mask` are excluded from every norm.
    pub pole_mask: Option<f64>,
    /// Fundamental period of the underlying closed form, when known.
    pub natural_period: Option<f64>,
}

impl SampledProfile {
    pub fn new(grid: Grid, samples: Vec<Complex64>, scale_alpha: f64) -> Result<Self> {
        if samples.len() != grid.count {
            return Err(Error::Domain(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.count
            )));
        }
        if samples.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: samples.len() });
        }
        Ok(Self {
            grid,
            samples,
            scale_alpha,
            pole_mask: None,
            natural_period: None,
        })
    }

    pub fn from_fn(grid: Grid, scale_alpha: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = grid.coords().into_iter().map(f).collect();
        Self {
            grid,
            samples,
            scale_alpha,
            pole_mask: None,
            natural_period: None,
        }
    }

    pub fn from_real_fn(grid: Grid, scale_alpha: f64, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, scale_alpha, |z| Complex64::new(f(z), 0.0))
    }

    pub fn with_pole_mask(mut self, radius: f64) -> Self {
        self.pole_mask = Some(radius);
        self
    }

    pub fn with_natural_period(mut self, period: f64) -> Self {
        self.natural_period = Some(period);
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn coords(&self) -> Vec<f64> {
        self.grid.coords()
    }

    /// Whether sample `j` lies outside the pole mask.
    pub fn kept(&self, j: usize) -> bool {
        match self.pole_mask {
            Some(r) => self.grid.coord(j).abs() >= r,
            None => true,
        }
    }

    /// Pointwise map that keeps grid and metadata.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|&z| f(z)).collect(),
            ..self.clone()
        }
    }

    /// Pointwise combination with a profile on the same grid.
    pub fn zip_with(
        &self,
        other: &SampledProfile,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Incompatible("profiles live on different grids".into()));
        }
        let pole_mask = match (self.pole_mask, other.pole_mask) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            scale_alpha: self.scale_alpha,
            pole_mask,
            natural_period: self.natural_period.or(other.natural_period),
        })
    }

    /// Largest modulus over kept samples.
    pub fn sup_norm(&self) -> f64 {
        self.samples
            .iter()
            .enumerate()
            .filter(|(j, _)| self.kept(*j))
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max)
    }

    /// Discrete `L²` norm `sqrt(h Σ |f_j|²)` over kept samples.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self
            .samples
            .iter()
            .enumerate()
            .filter(|(j, _)| self.kept(*j))
            .map(|(_, z)| z.norm_sqr())
            .sum();
        (self.grid.spacing * sum).sqrt()
    }

    /// Sup-norm distance to another profile on the same grid.
    pub fn max_abs_diff(&self, other: &SampledProfile) -> Result<f64> {
        Ok(self.zip_with(other, |a, b| a - b)?.sup_norm())
    }
}
