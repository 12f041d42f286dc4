//! Bound states of `−ψ″ + V ψ = E ψ` for complex, PT-symmetric potentials.
//!
//! The operator is discretized by second-order central differences between
//! Dirichlet walls at `±L`. The resulting complex-symmetric tridiagonal matrix
//! is diagonalized by implicit QL, and every bound state is cross-checked by
//! shooting from both walls.
//!
//! Energies follow `(−d² + V) ψ = E ψ`; the spectral parameter `λ` of the
//! Lax form `−ψ″ + (λ + u) ψ = 0` is `−E`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{Grid, SampledProfile, Topology};
use crate::residual::differentiate;

/// Bound states lie at least this far below the continuum edge.
pub const THRESHOLD_MARGIN: f64 = 1e-6;
/// Maximum change of any bound state under `(L, n) → (1.25 L, 2 n)` for convergence.
pub const CONVERGENCE_TOL: f64 = 1e-4;
/// `|V(±L) − V∞|` relative to the peak of `|V − V∞|`.
pub const DECAY_TOL: f64 = 1e-8;
/// Largest `|V − V∞|` over the outer tenth of the window, relative to the peak;
/// rejects potentials that merely agree at the two walls, like even periodic ones.
pub const FLATNESS_TOL: f64 = 1e-6;
pub const DEFAULT_POINTS: usize = 2000;
/// Default wall position is this many decay lengths `1/α` from the origin.
pub const DEFAULT_DECAY_LENGTHS: f64 = 20.0;

const QL_MAX_SWEEPS: usize = 60;
const SHOOTING_STEP: f64 = 0.005;
const SECANT_MAX_ITER: usize = 60;

type Potential = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub struct SchrodingerProblem {
    potential: Potential,
    pub half_width: f64,
    pub n_points: usize,
}

impl fmt::Debug for SchrodingerProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchrodingerProblem")
            .field("half_width", &self.half_width)
            .field("n_points", &self.n_points)
            .finish_non_exhaustive()
    }
}

impl SchrodingerProblem {
    pub fn new(
        potential: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        half_width: f64,
        n_points: usize,
    ) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Domain(format!("wall position {half_width} must be positive")));
        }
        if n_points < 16 {
            return Err(Error::TooFewSamples { needed: 16, got: n_points });
        }
        Ok(Self {
            potential: Arc::new(potential),
            half_width,
            n_points,
        })
    }

    /// Potential given by samples, interpolated by local cubics and extended by
    /// its end values outside the sampled window.
    pub fn from_profile(p: &SampledProfile, half_width: f64, n_points: usize) -> Result<Self> {
        if p.pole_mask.is_some() {
            return Err(Error::Domain("potential has a pole".into()));
        }
        let grid = p.grid;
        let samples = p.samples.clone();
        Self::new(move |z| interpolate(&grid, &samples, z), half_width, n_points)
    }

    pub fn potential(&self, z: f64) -> Complex64 {
        (self.potential)(z)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points + 1) as f64
    }

    /// Interior nodes `−L + jh`, `j = 1..=n`.
    pub fn grid(&self) -> Grid {
        let h = self.spacing();
        Grid {
            origin: -self.half_width + h,
            spacing: h,
            count: self.n_points,
            topology: Topology::Truncated {
                half_width: self.half_width - h,
            },
        }
    }

    pub fn sampled_potential(&self) -> SampledProfile {
        SampledProfile::from_fn(self.grid(), 1.0, |z| self.potential(z))
    }

    /// Same potential with walls at `factor · L` and `points` interior nodes.
    pub fn refined(&self, factor: f64, points: usize) -> Self {
        Self {
            potential: Arc::clone(&self.potential),
            half_width: self.half_width * factor,
            n_points: points,
        }
    }

    /// Continuum edge, checking that `V` has flattened out at both walls.
    pub fn v_inf(&self) -> Result<f64> {
        let (left, right) = (self.potential(-self.half_width), self.potential(self.half_width));
        let v_inf = 0.5 * (left + right);
        let peak = self
            .grid()
            .coords()
            .into_iter()
            .map(|z| (self.potential(z) - v_inf).norm())
            .fold(0.0, f64::max);
        let defect = (left - v_inf).norm().max((right - v_inf).norm()).max(v_inf.im.abs());
        if !defect.is_finite() || defect > DECAY_TOL * peak.max(1.0) {
            return Err(Error::NonDecaying(format!(
                "V(-L)={left}, V(L)={right} differ from a common real limit by {defect:.3e}"
            )));
        }
        let strip = 0.9 * self.half_width;
        let ripple = self
            .grid()
            .coords()
            .into_iter()
            .filter(|z| z.abs() >= strip)
            .map(|z| (self.potential(z) - v_inf).norm())
            .fold(0.0, f64::max);
        if ripple > FLATNESS_TOL * peak.max(1.0) {
            return Err(Error::NonDecaying(format!(
                "|V - V_inf| reaches {ripple:.3e} within the outer tenth of the window"
            )));
        }
        Ok(v_inf.re)
    }
}

fn interpolate(grid: &Grid, samples: &[Complex64], z: f64) -> Complex64 {
    let n = samples.len();
    let s = (z - grid.origin) / grid.spacing;
    if s <= 0.0 {
        return samples[0];
    }
    if s >= (n - 1) as f64 {
        return samples[n - 1];
    }
    let base = (s.floor() as usize).saturating_sub(1).min(n - 4);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        let mut weight = 1.0;
        for k in 0..4 {
            if k != i {
                weight *= (s - (base + k) as f64) / (i as f64 - k as f64);
            }
        }
        acc += weight * samples[base + i];
    }
    acc
}

/// Principal square root without the polar round trip.
fn csqrt(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return z;
    }
    let t = (0.5 * (z.re.abs() + z.re.hypot(z.im))).sqrt();
    if z.re >= 0.0 {
        Complex64::new(t, 0.5 * z.im / t)
    } else {
        Complex64::new(0.5 * z.im.abs() / t, t.copysign(z.im))
    }
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalues of the complex-symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` (`e[i]` couples `i` and `i + 1`).
///
/// Implicit QL with Wilkinson shifts, carried out in complex arithmetic; the
/// rotations are complex orthogonal (`c² + s² = 1`) rather than unitary.
pub fn tridiagonal_eigenvalues(d: &[Complex64], e: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = d.len();
    if e.len() + 1 != n && e.len() != n {
        return Err(Error::Domain("off-diagonal length must be n - 1".into()));
    }
    let mut d = d.to_vec();
    let mut e: Vec<Complex64> = e.iter().copied().chain(std::iter::repeat(Complex64::new(0.0, 0.0))).take(n).collect();
    e[n - 1] = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = l1(d[m]) + l1(d[m + 1]);
                if l1(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::NoConvergence(format!("QL stalled at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = csqrt(g * g + one);
            if l1(g - r) > l1(g + r) {
                r = -r;
            }
            g = d[m] - d[l] + e[l] / (g + r);
            let (mut s, mut c, mut p) = (one, one, zero);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = csqrt(f * f + g * g);
                e[i + 1] = r;
                if l1(r) < f64::MIN_POSITIVE {
                    d[i + 1] -= p;
                    e[m] = zero;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(d)
}

fn fd_eigenvalues(problem: &SchrodingerProblem) -> Result<Vec<Complex64>> {
    let h = problem.spacing();
    let inv = 1.0 / (h * h);
    let d: Vec<Complex64> = problem
        .grid()
        .coords()
        .into_iter()
        .map(|z| problem.potential(z) + 2.0 * inv)
        .collect();
    let e = vec![Complex64::new(-inv, 0.0); problem.n_points - 1];
    tridiagonal_eigenvalues(&d, &e)
}

fn below_threshold(mut levels: Vec<Complex64>, v_inf: f64) -> Vec<Complex64> {
    levels.retain(|z| z.re < v_inf - THRESHOLD_MARGIN);
    levels.sort_by(|a, b| a.re.total_cmp(&b.re));
    levels
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralMethod {
    Fd,
    Shooting,
}

mod levels {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Level {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|z| Level { re: z.re, im: z.im })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<Level>::deserialize(d)?
            .into_iter()
            .map(|l| Complex64::new(l.re, l.im))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    /// Sorted by real part.
    #[serde(with = "levels")]
    pub bound_states: Vec<Complex64>,
    pub max_imag: f64,
    /// Same level count and every level within [`CONVERGENCE_TOL`] after `(1.25 L, 2 n)`.
    pub converged: bool,
    #[serde(rename = "V_inf")]
    pub v_inf: f64,
    pub method: SpectralMethod,
    /// Largest distance between a reported level and its shooting refinement.
    pub shooting_defect: Option<f64>,
    /// Largest level shift under `(1.25 L, 2 n)`.
    pub refinement_shift: Option<f64>,
}

/// Finite-difference bound states with a refinement check and a shooting cross-check.
pub fn bound_states(problem: &SchrodingerProblem) -> Result<EigenReport> {
    let v_inf = problem.v_inf()?;
    let fine_problem = problem.refined(1.25, 2 * problem.n_points);
    let (coarse, fine) = std::thread::scope(|scope| {
        let fine = scope.spawn(|| fd_eigenvalues(&fine_problem));
        let coarse = fd_eigenvalues(problem);
        (coarse, fine.join().expect("eigensolver thread panicked"))
    });
    let coarse = below_threshold(coarse?, v_inf);
    let fine = below_threshold(fine?, v_inf);
    let refinement_shift = (coarse.len() == fine.len()).then(|| {
        coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    });

    let shot: Vec<Option<Complex64>> = coarse.iter().map(|&e| shoot(problem, e)).collect();
    let shooting_defect = shot
        .iter()
        .zip(&coarse)
        .map(|(s, e)| s.map(|s| (s - e).norm()))
        .collect::<Option<Vec<f64>>>()
        .map(|d| d.into_iter().fold(0.0, f64::max));

    Ok(EigenReport {
        max_imag: coarse.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        converged: refinement_shift.is_some_and(|s| s <= CONVERGENCE_TOL) && shooting_defect.is_some(),
        bound_states: coarse,
        v_inf,
        method: SpectralMethod::Fd,
        shooting_defect,
        refinement_shift,
    })
}

/// Bound states refined by shooting; levels whose secant iteration fails are dropped
/// and the report marked unconverged.
pub fn bound_states_shooting(problem: &SchrodingerProblem) -> Result<EigenReport> {
    let fd = bound_states(problem)?;
    let refined: Vec<Complex64> = fd.bound_states.iter().filter_map(|&e| shoot(problem, e)).collect();
    let complete = refined.len() == fd.bound_states.len();
    let mut levels = refined;
    levels.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(EigenReport {
        max_imag: levels.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        converged: fd.converged && complete,
        bound_states: levels,
        method: SpectralMethod::Shooting,
        ..fd
    })
}

/// Wronskian at `ζ = 0` of the solutions vanishing at `−L` and `+L`; zero at eigenvalues.
fn wronskian_mismatch(problem: &SchrodingerProblem, energy: Complex64) -> Complex64 {
    let (left, left_slope) = integrate_from_wall(problem, energy, -1.0);
    let (right, right_slope) = integrate_from_wall(problem, energy, 1.0);
    left * right_slope - left_slope * right
}

/// RK4 for `ψ″ = (V − E) ψ` from the wall at `side · L` to the origin.
fn integrate_from_wall(problem: &SchrodingerProblem, energy: Complex64, side: f64) -> (Complex64, Complex64) {
    let length = problem.half_width;
    let steps = (length / SHOOTING_STEP).ceil() as usize;
    let h = -side * length / steps as f64;
    let mut z = side * length;
    let mut psi = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(-side, 0.0);
    let rhs = |z: f64, psi: Complex64| (problem.potential(z) - energy) * psi;
    for _ in 0..steps {
        let k1 = (slope, rhs(z, psi));
        let k2 = (slope + 0.5 * h * k1.1, rhs(z + 0.5 * h, psi + 0.5 * h * k1.0));
        let k3 = (slope + 0.5 * h * k2.1, rhs(z + 0.5 * h, psi + 0.5 * h * k2.0));
        let k4 = (slope + h * k3.1, rhs(z + h, psi + h * k3.0));
        psi += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        slope += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        z += h;
    }
    (psi, slope)
}

/// Complex secant on the Wronskian mismatch, started at `guess`.
pub fn shoot(problem: &SchrodingerProblem, guess: Complex64) -> Option<Complex64> {
    let scale = 1.0 + guess.norm();
    let mut e0 = guess;
    let mut e1 = guess + 1e-4 * scale;
    let mut f0 = wronskian_mismatch(problem, e0);
    let mut f1 = wronskian_mismatch(problem, e1);
    for _ in 0..SECANT_MAX_ITER {
        let denom = f1 - f0;
        if denom.norm() == 0.0 || !denom.norm().is_finite() {
            return (f1.norm() == 0.0).then_some(e1);
        }
        let e2 = e1 - f1 * (e1 - e0) / denom;
        if !(e2.re.is_finite() && e2.im.is_finite()) {
            return None;
        }
        if (e2 - e1).norm() <= 1e-12 * scale {
            return ((e2 - guess).norm() <= 0.1 * scale).then_some(e2);
        }
        (e0, f0) = (e1, f1);
        e1 = e2;
        f1 = wronskian_mismatch(problem, e1);
    }
    None
}

/// `W` of a factorized Hamiltonian `(−d + W)(d + W)`, sampled in `ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superpotential {
    pub w: SampledProfile,
}

impl Superpotential {
    pub fn new(w: SampledProfile) -> Self {
        Self { w }
    }

    /// `½(tanh ζ + i sech ζ)`, the complex kink whose partner is the Scarf potential.
    pub fn complex_kink(grid: Grid) -> Self {
        Self::new(SampledProfile::from_fn(grid, 1.0, |z| {
            0.5 * Complex64::new(z.tanh(), 1.0 / z.cosh())
        }))
    }
}

/// `(V₋, V₊) = (W² − W′, W² + W′)`.
pub fn susy_pair(sp: &Superpotential) -> Result<(SampledProfile, SampledProfile)> {
    let dw = differentiate(&sp.w, 1)?;
    let minus = sp.w.zip_with(&dw, |w, d| w * w - d)?;
    let plus = sp.w.zip_with(&dw, |w, d| w * w + d)?;
    Ok((minus, plus))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsospectralReport {
    /// Levels of each problem measured from its own continuum edge.
    #[serde(with = "levels")]
    pub shifted_a: Vec<Complex64>,
    #[serde(with = "levels")]
    pub shifted_b: Vec<Complex64>,
    /// Largest `|ΔE|` over matched pairs (0 when nothing is matched).
    pub max_delta: f64,
    #[serde(with = "levels")]
    pub unmatched_a: Vec<Complex64>,
    #[serde(with = "levels")]
    pub unmatched_b: Vec<Complex64>,
    pub isospectral: bool,
}

impl IsospectralReport {
    /// The two spectra coincide except for the lowest level of exactly one of them.
    pub fn differs_only_by_ground_state(&self, tol: f64) -> bool {
        let only_ground = |extra: &[Complex64], all: &[Complex64]| extra.len() == 1 && all.first() == extra.first();
        self.max_delta <= tol
            && ((only_ground(&self.unmatched_a, &self.shifted_a) && self.unmatched_b.is_empty())
                || (only_ground(&self.unmatched_b, &self.shifted_b) && self.unmatched_a.is_empty()))
    }
}

/// Compares two spectra after subtracting each continuum edge.
///
/// When the counts differ, the shorter list is slid along the longer one and
/// the alignment with the smallest worst-case gap is kept.
pub fn isospectral_check(a: &SchrodingerProblem, b: &SchrodingerProblem, tol: f64) -> Result<IsospectralReport> {
    let ra = bound_states(a)?;
    let rb = bound_states(b)?;
    Ok(compare_levels(
        ra.bound_states.iter().map(|z| z - ra.v_inf).collect(),
        rb.bound_states.iter().map(|z| z - rb.v_inf).collect(),
        tol,
    ))
}

pub fn compare_levels(shifted_a: Vec<Complex64>, shifted_b: Vec<Complex64>, tol: f64) -> IsospectralReport {
    let a_longer = shifted_a.len() >= shifted_b.len();
    let (long, short) = if a_longer { (&shifted_a, &shifted_b) } else { (&shifted_b, &shifted_a) };
    let gap = |offset: usize| {
        short
            .iter()
            .zip(&long[offset..])
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    };
    let offset = (0..=long.len() - short.len())
        .min_by(|&i, &j| gap(i).total_cmp(&gap(j)))
        .unwrap_or(0);
    let max_delta = gap(offset);
    let unmatched: Vec<Complex64> = long
        .iter()
        .enumerate()
        .filter(|(i, _)| *i < offset || *i >= offset + short.len())
        .map(|(_, z)| *z)
        .collect();
    let (unmatched_a, unmatched_b) = if a_longer { (unmatched, Vec::new()) } else { (Vec::new(), unmatched) };
    IsospectralReport {
        isospectral: unmatched_a.is_empty() && unmatched_b.is_empty() && max_delta <= tol,
        shifted_a,
        shifted_b,
        max_delta,
        unmatched_a,
        unmatched_b,
    }
}
