//! Pseudospectral integration of the full KdV and mKdV equations for complex
//! fields on a periodic domain.
//!
//! The dispersive term is integrated exactly in Fourier space and the
//! nonlinear term by classical RK4 in the integrating-factor variables.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::catalog::Solution;
use crate::equation::EquationKind;
use crate::error::{Error, Result};
use crate::profile::{Grid, SampledProfile, Topology};
use crate::residual::{differentiate, wavenumber};

pub const MIN_MODES: usize = 64;
/// Any normalized Fourier coefficient above this aborts the run.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;
pub const DEFAULT_SNAPSHOTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub n_modes: usize,
    pub domain_length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub equation: EquationKind,
    /// Two-thirds rule on every nonlinear evaluation.
    pub dealias: bool,
    /// Number of equally spaced snapshot times in `(0, t_end]`.
    pub snapshots: usize,
}

impl EvolutionConfig {
    pub fn new(n_modes: usize, domain_length: f64, dt: f64, t_end: f64, equation: EquationKind) -> Self {
        Self {
            n_modes,
            domain_length,
            dt,
            t_end,
            equation,
            dealias: true,
            snapshots: DEFAULT_SNAPSHOTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes < MIN_MODES || !self.n_modes.is_power_of_two() {
            return Err(Error::Domain(format!(
                "n_modes={} must be a power of two no smaller than {MIN_MODES}",
                self.n_modes
            )));
        }
        if !(self.domain_length > 0.0 && self.domain_length.is_finite()) {
            return Err(Error::Domain(format!("domain length {} must be positive", self.domain_length)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Domain(format!("dt={} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Domain(format!("t_end={} must be non-negative", self.t_end)));
        }
        Ok(())
    }

    /// `[−L/2, L/2)` with `n_modes` points.
    pub fn grid(&self) -> Result<Grid> {
        Grid::periodic(-0.5 * self.domain_length, self.domain_length, self.n_modes)
    }

    /// Largest retained wavenumber.
    pub fn k_max(&self) -> f64 {
        let modes = if self.dealias { self.n_modes / 3 } else { self.n_modes / 2 };
        2.0 * PI / self.domain_length * modes as f64
    }

    /// `0.5 / (6 k_max max|u₀|)`, a nonlinear CFL bound for explicit RK4.
    pub fn suggested_dt(&self, u0: &SampledProfile) -> f64 {
        let peak = u0.sup_norm().max(f64::MIN_POSITIVE);
        0.5 / (6.0 * self.k_max() * peak)
    }

    /// Steps actually taken: `ceil(t_end / dt)`, with `dt` shrunk to land on `t_end`.
    pub fn steps(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let n = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }
}

/// Samples `sol` at `t = 0` on the configuration grid (coordinate `x`).
pub fn initial_field(sol: &Solution, cfg: &EvolutionConfig) -> Result<SampledProfile> {
    field_at(sol, cfg.grid()?, 0.0)
}

fn field_at(sol: &Solution, grid: Grid, t: f64) -> Result<SampledProfile> {
    let samples = grid
        .coords()
        .into_iter()
        .map(|x| sol.eval_field(x, t))
        .collect::<Result<Vec<_>>>()?;
    SampledProfile::new(grid, samples, sol.spec.alpha)
}

/// Polynomial conserved densities; complex because the fields are.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    pub i1: Complex64,
    pub i2: Complex64,
    /// `∫(u³ + ½u_x²)` for KdV, `∫(½v_x² ± ½v⁴)` for defocusing/focusing mKdV.
    pub i3: Complex64,
}

impl Invariants {
    fn as_array(&self) -> [Complex64; 3] {
        [self.i1, self.i2, self.i3]
    }
}

/// Trapezoidal integrals over one period of a periodic profile.
pub fn invariants(u: &SampledProfile, eq: EquationKind) -> Result<Invariants> {
    if !u.grid.is_periodic() {
        return Err(Error::Topology("invariants need a periodic grid".into()));
    }
    let h = u.grid.spacing;
    let ux = differentiate(u, 1)?.samples;
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for (&v, &dv) in u.samples.iter().zip(&ux) {
        acc[0] += v;
        acc[1] += v * v;
        acc[2] += match eq {
            EquationKind::Kdv => v * v * v + 0.5 * dv * dv,
            EquationKind::MkdvDefocusing => 0.5 * dv * dv + 0.5 * v * v * v * v,
            EquationKind::MkdvFocusing => 0.5 * dv * dv - 0.5 * v * v * v * v,
        };
    }
    Ok(Invariants {
        i1: acc[0] * h,
        i2: acc[1] * h,
        i3: acc[2] * h,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: SampledProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    pub final_field: SampledProfile,
    /// `sqrt(Δx Σ|u − u_exact|²)` at `t_end`, when an analytic reference is given.
    pub error_l2: Option<f64>,
    pub error_sup: Option<f64>,
    /// Largest `|I_k(t) − I_k(0)| / (1 + |I_k(0)|)` over snapshot times and `t_end`.
    pub drift_i1: f64,
    pub drift_i2: f64,
    pub drift_i3: f64,
    pub initial_invariants: Invariants,
    pub final_invariants: Invariants,
    pub snapshots: Vec<Snapshot>,
    pub n_steps: usize,
    pub dt_used: f64,
    pub warnings: Vec<String>,
}

/// Run metadata suitable for a JSON sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionSummary {
    pub config: EvolutionConfig,
    pub n_steps: usize,
    pub dt_used: f64,
    pub error_l2: Option<f64>,
    pub error_sup: Option<f64>,
    pub drift_i1: f64,
    pub drift_i2: f64,
    pub drift_i3: f64,
    pub initial_invariants: Invariants,
    pub final_invariants: Invariants,
    pub warnings: Vec<String>,
}

impl EvolutionResult {
    pub fn summary(&self, config: &EvolutionConfig) -> EvolutionSummary {
        EvolutionSummary {
            config: *config,
            n_steps: self.n_steps,
            dt_used: self.dt_used,
            error_l2: self.error_l2,
            error_sup: self.error_sup,
            drift_i1: self.drift_i1,
            drift_i2: self.drift_i2,
            drift_i3: self.drift_i3,
            initial_invariants: self.initial_invariants,
            final_invariants: self.final_invariants,
            warnings: self.warnings.clone(),
        }
    }
}

/// Integrating-factor RK4 state for `û_t = Λû + N(û)`.
struct Stepper {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `i k` on retained modes, zero on dealiased modes and the Nyquist mode.
    ik: Vec<Complex64>,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    equation: EquationKind,
    scratch: Vec<Complex64>,
}

impl Stepper {
    fn new(cfg: &EvolutionConfig, dt: f64) -> Self {
        let n = cfg.n_modes;
        let mut planner = FftPlanner::new();
        let dk = 2.0 * PI / cfg.domain_length;
        let cutoff = if cfg.dealias { (n / 3) as f64 } else { (n / 2) as f64 };
        let mut ik = Vec::with_capacity(n);
        let mut half = Vec::with_capacity(n);
        let mut full = Vec::with_capacity(n);
        for j in 0..n {
            let index = wavenumber(j, n);
            let k = index * dk;
            let retained = index.abs() <= cutoff && j != n / 2;
            ik.push(if retained { Complex64::new(0.0, k) } else { Complex64::new(0.0, 0.0) });
            // u_t = −u_xxx  ⇒  û_t = i k³ û
            let lambda = Complex64::new(0.0, k * k * k);
            half.push((lambda * 0.5 * dt).exp());
            full.push((lambda * dt).exp());
        }
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            ik,
            half,
            full,
            equation: cfg.equation,
            scratch: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// `dt · N(û)` where `N = 3ik F(u²)` for KdV and `±2ik F(v³)` for mKdV.
    fn nonlinear(&mut self, spectrum: &[Complex64], dt: f64) -> Vec<Complex64> {
        let n = spectrum.len();
        self.scratch.copy_from_slice(spectrum);
        self.inverse.process(&mut self.scratch);
        let norm = 1.0 / n as f64;
        let coefficient = match self.equation {
            EquationKind::Kdv => {
                for z in &mut self.scratch {
                    let u = *z * norm;
                    *z = u * u;
                }
                3.0
            }
            EquationKind::MkdvDefocusing | EquationKind::MkdvFocusing => {
                for z in &mut self.scratch {
                    let v = *z * norm;
                    *z = v * v * v;
                }
                if self.equation == EquationKind::MkdvDefocusing { 2.0 } else { -2.0 }
            }
        };
        self.forward.process(&mut self.scratch);
        self.scratch
            .iter()
            .zip(&self.ik)
            .map(|(p, ik)| dt * coefficient * ik * p)
            .collect()
    }

    fn step(&mut self, u: &mut [Complex64], dt: f64) {
        let a = self.nonlinear(u, dt);
        let stage: Vec<Complex64> = (0..u.len()).map(|j| self.half[j] * (u[j] + 0.5 * a[j])).collect();
        let b = self.nonlinear(&stage, dt);
        let stage: Vec<Complex64> = (0..u.len()).map(|j| self.half[j] * u[j] + 0.5 * b[j]).collect();
        let c = self.nonlinear(&stage, dt);
        let stage: Vec<Complex64> = (0..u.len()).map(|j| self.full[j] * u[j] + self.half[j] * c[j]).collect();
        let d = self.nonlinear(&stage, dt);
        for j in 0..u.len() {
            u[j] = self.full[j] * u[j]
                + (self.full[j] * a[j] + 2.0 * self.half[j] * (b[j] + c[j]) + d[j]) / 6.0;
        }
    }

    fn to_physical(&mut self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut out = spectrum.to_vec();
        self.inverse.process(&mut out);
        let norm = 1.0 / out.len() as f64;
        out.iter_mut().for_each(|z| *z *= norm);
        out
    }
}

fn relative_drift(now: &Invariants, start: &Invariants) -> [f64; 3] {
    let (a, b) = (now.as_array(), start.as_array());
    [0, 1, 2].map(|k| (a[k] - b[k]).norm() / (1.0 + b[k].norm()))
}

/// Integrates `u0` (sampled in `x` on the configuration grid) to `t_end`.
///
/// With an analytic reference, the final field is compared to
/// `reference.eval_field(x, t_end)`.
pub fn evolve(
    u0: &SampledProfile,
    cfg: &EvolutionConfig,
    reference: Option<&Solution>,
) -> Result<EvolutionResult> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let matches_grid = match u0.grid.topology {
        Topology::Periodic { length } => {
            u0.grid.count == cfg.n_modes && (length - cfg.domain_length).abs() <= 1e-12 * length
        }
        Topology::Truncated { .. } => false,
    };
    if !matches_grid {
        return Err(Error::Topology(format!(
            "initial field must be sampled on the periodic grid of {} points over length {}",
            cfg.n_modes, cfg.domain_length
        )));
    }
    let warnings = reference.map(|sol| domain_warnings(sol, cfg, u0)).unwrap_or_default();

    let (n_steps, dt) = cfg.steps();
    let mut stepper = Stepper::new(cfg, dt);
    let mut spectrum = u0.samples.clone();
    stepper.forward.process(&mut spectrum);

    let start = invariants(u0, cfg.equation)?;
    let mut drift = [0.0_f64; 3];
    let snapshot_steps: Vec<usize> = (1..=cfg.snapshots)
        .map(|k| ((k * n_steps) as f64 / cfg.snapshots as f64).round() as usize)
        .collect();
    let mut snapshots = Vec::with_capacity(cfg.snapshots);
    let norm = 1.0 / cfg.n_modes as f64;

    for step in 1..=n_steps {
        stepper.step(&mut spectrum, dt);
        let peak = spectrum.iter().map(|z| z.norm() * norm).fold(0.0, f64::max);
        if !(peak <= BLOW_UP_THRESHOLD) {
            return Err(Error::BlowUp { t: step as f64 * dt, max_coefficient: peak });
        }
        for _ in snapshot_steps.iter().filter(|&&s| s == step) {
            let field = SampledProfile {
                samples: stepper.to_physical(&spectrum),
                ..u0.clone()
            };
            let now = invariants(&field, cfg.equation)?;
            for (d, r) in drift.iter_mut().zip(relative_drift(&now, &start)) {
                *d = d.max(r);
            }
            snapshots.push(Snapshot { t: step as f64 * dt, field });
        }
    }

    let final_field = SampledProfile {
        samples: stepper.to_physical(&spectrum),
        grid,
        ..u0.clone()
    };
    let final_invariants = invariants(&final_field, cfg.equation)?;
    for (d, r) in drift.iter_mut().zip(relative_drift(&final_invariants, &start)) {
        *d = d.max(r);
    }

    let (error_l2, error_sup) = match reference {
        Some(sol) => {
            let exact = field_at(sol, grid, n_steps as f64 * dt)?;
            let diff = final_field.zip_with(&exact, |a, b| a - b)?;
            (Some(diff.l2_norm()), Some(diff.sup_norm()))
        }
        None => (None, None),
    };

    Ok(EvolutionResult {
        final_field,
        error_l2,
        error_sup,
        drift_i1: drift[0],
        drift_i2: drift[1],
        drift_i3: drift[2],
        initial_invariants: start,
        final_invariants,
        snapshots,
        n_steps,
        dt_used: dt,
        warnings,
    })
}

fn domain_warnings(sol: &Solution, cfg: &EvolutionConfig, u0: &SampledProfile) -> Vec<String> {
    let mut warnings = Vec::new();
    let span = sol.spec.alpha * cfg.domain_length;
    match sol.natural_period() {
        Some(period) => {
            let ratio = span / period;
            if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
                warnings.push(format!(
                    "domain spans {ratio:.6} fundamental periods; the periodic extension is not a solution"
                ));
            }
        }
        None => {
            let edge = u0.samples[0].norm().max(u0.samples[u0.len() - 1].norm());
            if edge > 1e-13 {
                warnings.push(format!(
                    "field is {edge:.3e} at the domain edge; periodization error may dominate"
                ));
            }
        }
    }
    warnings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{FamilyId, Sign, SolutionSpec};
    use approx::assert_abs_diff_eq;

    fn sech(z: f64) -> f64 {
        1.0 / z.cosh()
    }

    fn soliton_run(dt: f64, t_end: f64) -> EvolutionResult {
        let sol = Solution::new(SolutionSpec::new(FamilyId::KdvSech2)).unwrap();
        let cfg = EvolutionConfig::new(1024, 40.0 * PI, dt, t_end, EquationKind::Kdv);
        let u0 = initial_field(&sol, &cfg).unwrap();
        evolve(&u0, &cfg, Some(&sol)).unwrap()
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let cfg = EvolutionConfig::new(64, 10.0, 0.01, 0.5, EquationKind::Kdv);
        let u0 = SampledProfile::from_real_fn(cfg.grid().unwrap(), 1.0, |_| 0.0);
        let r = evolve(&u0, &cfg, None).unwrap();
        assert_eq!(r.final_field.sup_norm(), 0.0);
        assert_eq!((r.drift_i1, r.drift_i2, r.drift_i3), (0.0, 0.0, 0.0));
        assert_eq!(r.error_l2, None);
        assert_eq!(r.snapshots.len(), 10);
        assert_abs_diff_eq!(r.snapshots[9].t, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn invariant_examples() {
        let g = Grid::periodic(0.0, 3.0, 64).unwrap();
        let k = SampledProfile::from_real_fn(g, 1.0, |_| 1.5);
        let inv = invariants(&k, EquationKind::Kdv).unwrap();
        assert_abs_diff_eq!(inv.i1.re, 4.5, epsilon = 1e-13);
        assert_abs_diff_eq!(inv.i2.re, 6.75, epsilon = 1e-13);
        assert_abs_diff_eq!(inv.i3.re, 10.125, epsilon = 1e-13);

        let g = Grid::periodic(-40.0, 80.0, 2048).unwrap();
        let soliton = SampledProfile::from_real_fn(g, 1.0, |z| -2.0 * sech(z).powi(2));
        let inv = invariants(&soliton, EquationKind::Kdv).unwrap();
        assert_abs_diff_eq!(inv.i1.re, -4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(inv.i2.re, 16.0 / 3.0, epsilon = 1e-10);
        // ∫(−8 sech⁶ + 8 sech⁴ tanh²) = −8·16/15 + 8·(4/3 − 16/15)
        assert_abs_diff_eq!(inv.i3.re, -96.0 / 15.0, epsilon = 1e-10);

        let window = Grid::truncated(5.0, 0.1).unwrap();
        let p = SampledProfile::from_real_fn(window, 1.0, |_| 1.0);
        assert!(matches!(invariants(&p, EquationKind::Kdv), Err(Error::Topology(_))));
    }

    #[test]
    fn soliton_travels_at_four() {
        let r = soliton_run(1e-4, 1.0);
        assert!(r.error_l2.unwrap() < 1e-6, "{:?}", r.error_l2);
        assert!(r.drift_i1 < 1e-8 && r.drift_i2 < 1e-8 && r.drift_i3 < 1e-6);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    }

    #[test]
    fn complex_soliton_solves_the_full_equation() {
        let sol = Solution::new(SolutionSpec::new(FamilyId::KdvCn2Sndn)).unwrap();
        let cfg = EvolutionConfig::new(1024, 40.0 * PI, 1e-3, 1.0, EquationKind::Kdv);
        let u0 = initial_field(&sol, &cfg).unwrap();
        let r = evolve(&u0, &cfg, Some(&sol)).unwrap();
        assert!(r.error_l2.unwrap() < 1e-6, "{:?}", r.error_l2);

        // Conjugate data evolve to conjugate fields.
        let mirror = Solution::new(SolutionSpec::new(FamilyId::KdvCn2Sndn).branch(Sign::Minus)).unwrap();
        let v0 = initial_field(&mirror, &cfg).unwrap();
        let s = evolve(&v0, &cfg, Some(&mirror)).unwrap();
        let defect = r.final_field.zip_with(&s.final_field, |a, b| a - b.conj()).unwrap().sup_norm();
        assert!(defect < 1e-10, "{defect}");
    }

    #[test]
    fn cnoidal_wave_on_two_periods() {
        let m = 0.5;
        let spec = SolutionSpec::new(FamilyId::KdvCnoidal).m(m).unwrap();
        let sol = Solution::new(spec).unwrap();
        let length = 2.0 * sol.natural_period().unwrap();
        let cfg = EvolutionConfig::new(256, length, 1e-3, 0.5, EquationKind::Kdv);
        let r = evolve(&initial_field(&sol, &cfg).unwrap(), &cfg, Some(&sol)).unwrap();
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        assert!(r.error_l2.unwrap() < 1e-6, "{:?}", r.error_l2);

        let bad = EvolutionConfig { domain_length: 1.5 * sol.natural_period().unwrap(), ..cfg };
        let r = evolve(&initial_field(&sol, &bad).unwrap(), &bad, Some(&sol)).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn defocusing_mkdv_complex_wave() {
        let m = 0.6;
        let spec = SolutionSpec::new(FamilyId::MkdvSnDn).m(m).unwrap();
        let sol = Solution::new(spec).unwrap();
        let cfg = EvolutionConfig::new(128, sol.natural_period().unwrap(), 1e-3, 0.5, EquationKind::MkdvDefocusing);
        let r = evolve(&initial_field(&sol, &cfg).unwrap(), &cfg, Some(&sol)).unwrap();
        assert!(r.error_l2.unwrap() < 1e-6, "{:?}", r.error_l2);
        assert!(r.drift_i3 < 1e-6);
    }

    #[test]
    fn fourth_order_in_time() {
        let errors: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&dt| soliton_run(dt, 1.0).error_l2.unwrap())
            .collect();
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((8.0..=32.0).contains(&ratio), "{errors:?}");
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let cfg = EvolutionConfig { dealias: false, ..EvolutionConfig::new(64, 10.0, 0.5, 50.0, EquationKind::MkdvFocusing) };
        let u0 = SampledProfile::from_real_fn(cfg.grid().unwrap(), 1.0, |x| 50.0 * (1.0 + (2.0 * PI * x / 10.0).cos()));
        assert!(matches!(evolve(&u0, &cfg, None), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn config_validation() {
        let ok = EvolutionConfig::new(64, 10.0, 0.01, 1.0, EquationKind::Kdv);
        assert!(ok.validate().is_ok());
        for bad in [
            EvolutionConfig { n_modes: 100, ..ok },
            EvolutionConfig { n_modes: 32, ..ok },
            EvolutionConfig { dt: 0.0, ..ok },
            EvolutionConfig { domain_length: -1.0, ..ok },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Domain(_))));
        }
        let (n, dt) = EvolutionConfig { dt: 0.3, ..ok }.steps();
        assert_eq!(n, 4);
        assert_abs_diff_eq!(dt, 0.25);

        let u0 = SampledProfile::from_real_fn(Grid::periodic(0.0, 10.0, 128).unwrap(), 1.0, |_| 0.0);
        assert!(matches!(evolve(&u0, &ok, None), Err(Error::Topology(_))));
    }
}
