//! Closed-form traveling-wave families of KdV and mKdV.
//!
//! Every family is written in the moving coordinate `ζ = α(x − cα²t)`. KdV
//! amplitudes carry a factor `α²`, mKdV amplitudes a factor `α`; the reduced
//! speed `c` is dimensionless.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{self, ModulusParameter, PeriodicKind};
use crate::equation::EquationKind;
use crate::error::{Error, Result};
use crate::profile::{Grid, SampledProfile};

pub type ComplexFieldValue = Complex64;

/// Default radius of the excluded neighborhood around the pole of singular families.
pub const DEFAULT_POLE_MASK: f64 = 0.15;
/// Samples per fundamental period on default periodic grids.
pub const DEFAULT_PERIODIC_POINTS: usize = 256;
/// Half-width of default truncated grids, in units of `ζ`.
pub const DEFAULT_WINDOW: f64 = 20.0;
/// Step of default truncated grids for regular profiles.
pub const DEFAULT_STEP: f64 = 0.01;
/// Step of default truncated grids for profiles with a pole. The eighth-order
/// stencil error next to the mask scales like `(h/ε)⁸` times pole-sized
/// derivatives, so these need a finer step to reach the same accuracy.
pub const SINGULAR_STEP: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// `A cn²`, the classical cnoidal wave.
    KdvCnoidal,
    /// `A sech²`, the fundamental soliton.
    KdvSech2,
    /// `A cn² + iB sn dn`
    KdvCn2Sndn,
    /// `A cn² + iB sn cn + βα²`
    KdvCn2Sncn,
    /// `A cosech² + B cosech coth` (real, singular for `B = A`)
    KdvCosech,
    /// `A sn + iB cn`
    MkdvSnCn,
    /// `A sn + iB dn`
    MkdvSnDn,
    /// `A sn`
    MkdvSn,
    /// `iB cn`
    MkdvIcn,
    /// `A cosech + B coth` (real, singular)
    MkdvCosechCoth,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::KdvCnoidal,
        FamilyId::KdvSech2,
        FamilyId::KdvCn2Sndn,
        FamilyId::KdvCn2Sncn,
        FamilyId::KdvCosech,
        FamilyId::MkdvSnCn,
        FamilyId::MkdvSnDn,
        FamilyId::MkdvSn,
        FamilyId::MkdvIcn,
        FamilyId::MkdvCosechCoth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::KdvCnoidal => "kdv-cnoidal",
            FamilyId::KdvSech2 => "kdv-sech2",
            FamilyId::KdvCn2Sndn => "kdv-cn2-sndn",
            FamilyId::KdvCn2Sncn => "kdv-cn2-sncn",
            FamilyId::KdvCosech => "kdv-cosech",
            FamilyId::MkdvSnCn => "mkdv-sn-cn",
            FamilyId::MkdvSnDn => "mkdv-sn-dn",
            FamilyId::MkdvSn => "mkdv-sn",
            FamilyId::MkdvIcn => "mkdv-icn",
            FamilyId::MkdvCosechCoth => "mkdv-cosech-coth",
        }
    }

    pub fn equation(self) -> EquationKind {
        match self {
            FamilyId::KdvCnoidal
            | FamilyId::KdvSech2
            | FamilyId::KdvCn2Sndn
            | FamilyId::KdvCn2Sncn
            | FamilyId::KdvCosech => EquationKind::Kdv,
            _ => EquationKind::MkdvDefocusing,
        }
    }

    /// Families written with hyperbolic functions only; `m` must be 1.
    pub fn hyperbolic_only(self) -> bool {
        matches!(
            self,
            FamilyId::KdvSech2 | FamilyId::KdvCosech | FamilyId::MkdvCosechCoth
        )
    }

    /// Families whose field is genuinely complex (nonzero real and imaginary parts).
    pub fn is_complex(self) -> bool {
        matches!(
            self,
            FamilyId::KdvCn2Sndn | FamilyId::KdvCn2Sncn | FamilyId::MkdvSnCn | FamilyId::MkdvSnDn
        )
    }

    /// Elliptic combination that fixes the fundamental period for `m < 1`.
    pub fn period_kind(self) -> Option<PeriodicKind> {
        match self {
            FamilyId::KdvCnoidal => Some(PeriodicKind::Cn2),
            FamilyId::KdvCn2Sndn => Some(PeriodicKind::SnDn),
            FamilyId::KdvCn2Sncn => Some(PeriodicKind::SnCn),
            FamilyId::MkdvSnCn | FamilyId::MkdvSnDn | FamilyId::MkdvSn | FamilyId::MkdvIcn => {
                Some(PeriodicKind::Sn)
            }
            _ => None,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown family '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            _ => Err(Error::Domain(format!("sign must be '+' or '-', got '{s}'"))),
        }
    }
}

/// Which published speed to attach to a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocityConvention {
    /// Speeds that pass the residual oracle.
    #[default]
    Verified,
    /// Speeds as printed in the source, including `5(m − 5)` for the `sn` sum.
    AsPublished,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpec {
    pub family: FamilyId,
    pub alpha: f64,
    pub m: ModulusParameter,
    pub beta: f64,
    /// Selects the `±` in `B`.
    pub branch: Sign,
    /// Overall `±` on the amplitude of mKdV families.
    pub amp_sign: Sign,
}

impl SolutionSpec {
    /// Spec with `α = 1`, `m = 1`, `β = 0` and both signs `+`.
    pub fn new(family: FamilyId) -> Self {
        Self {
            family,
            alpha: 1.0,
            m: ModulusParameter::new(1.0).expect("1 is a valid parameter"),
            beta: 0.0,
            branch: Sign::Plus,
            amp_sign: Sign::Plus,
        }
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Sets `m`, rejecting values outside `[0, 1]`.
    pub fn m(mut self, m: f64) -> Result<Self> {
        self.m = ModulusParameter::new(m)?;
        Ok(self)
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn branch(mut self, branch: Sign) -> Self {
        self.branch = branch;
        self
    }

    pub fn amp_sign(mut self, amp_sign: Sign) -> Self {
        self.amp_sign = amp_sign;
        self
    }

    pub fn m_value(&self) -> f64 {
        self.m.value()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha={} must be positive", self.alpha)));
        }
        if !self.beta.is_finite() {
            return Err(Error::Domain("beta must be finite".into()));
        }
        if self.beta != 0.0 && self.family != FamilyId::KdvCn2Sncn {
            return Err(Error::ParameterMismatch(format!(
                "beta={} supplied to {}, which has no Galilean offset",
                self.beta, self.family
            )));
        }
        if self.family.hyperbolic_only() && !self.m.is_one() {
            return Err(Error::ParameterMismatch(format!(
                "{} is defined only at m=1, got m={}",
                self.family,
                self.m.value()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub c: f64,
    pub offset: f64,
    pub equation: EquationKind,
}

/// Amplitudes and speed implied by the family constraints.
pub fn resolve(spec: &SolutionSpec) -> Result<ResolvedParams> {
    resolve_with(spec, VelocityConvention::Verified)
}

pub fn resolve_with(spec: &SolutionSpec, convention: VelocityConvention) -> Result<ResolvedParams> {
    spec.validate()?;
    let m = spec.m.value();
    let (alpha, branch, amp) = (spec.alpha, spec.branch.value(), spec.amp_sign.value());
    let a2 = alpha * alpha;
    let root = m.sqrt();
    let (a, b, c, offset) = match spec.family {
        FamilyId::KdvCnoidal => (-2.0 * m * a2, 0.0, 4.0 * (2.0 * m - 1.0), 0.0),
        FamilyId::KdvSech2 => (-2.0 * a2, 0.0, 4.0, 0.0),
        FamilyId::KdvCn2Sndn => (-m * a2, branch * root * a2, 2.0 * m - 1.0, 0.0),
        FamilyId::KdvCn2Sncn => {
            let a = -m * a2;
            (a, branch * a, (5.0 * m - 4.0) - 6.0 * spec.beta, spec.beta * a2)
        }
        FamilyId::KdvCosech => (a2, branch * a2, 1.0, 0.0),
        FamilyId::MkdvSnCn => {
            let a = amp * 0.5 * root * alpha;
            (a, branch * a, 0.5 * m - 1.0, 0.0)
        }
        FamilyId::MkdvSnDn => (amp * 0.5 * root * alpha, branch * 0.5 * alpha, 0.5 - m, 0.0),
        FamilyId::MkdvSn => {
            let c = match convention {
                VelocityConvention::Verified => -(1.0 + m),
                VelocityConvention::AsPublished => 5.0 * (m - 5.0),
            };
            (amp * root * alpha, 0.0, c, 0.0)
        }
        FamilyId::MkdvIcn => (0.0, branch * root * alpha, 2.0 * m - 1.0, 0.0),
        FamilyId::MkdvCosechCoth => {
            let a = amp * 0.5 * alpha;
            (a, a, -0.5, 0.0)
        }
    };
    Ok(ResolvedParams {
        a,
        b,
        c,
        offset,
        equation: spec.family.equation(),
    })
}

/// A spec together with its (possibly hand-modified) resolved constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub spec: SolutionSpec,
    pub params: ResolvedParams,
}

impl Solution {
    pub fn new(spec: SolutionSpec) -> Result<Self> {
        Ok(Self { spec, params: resolve(&spec)? })
    }

    pub fn with_convention(spec: SolutionSpec, convention: VelocityConvention) -> Result<Self> {
        Ok(Self { spec, params: resolve_with(&spec, convention)? })
    }

    /// Whether the profile has a pole at `ζ = 0`.
    pub fn is_singular(&self) -> bool {
        match self.spec.family {
            FamilyId::KdvCosech | FamilyId::MkdvCosechCoth => self.params.a + self.params.b != 0.0,
            _ => false,
        }
    }

    /// Fundamental period in `ζ`, or `None` for solitary (`m = 1`) forms.
    pub fn natural_period(&self) -> Option<f64> {
        let m = self.spec.m.value();
        if m >= 1.0 {
            return None;
        }
        self.spec
            .family
            .period_kind()
            .map(|kind| elliptic::period(kind, m).expect("m < 1"))
    }

    /// Field value at traveling coordinate `ζ`.
    pub fn eval(&self, zeta: f64) -> Result<ComplexFieldValue> {
        if !zeta.is_finite() {
            return Err(Error::Domain(format!("zeta={zeta} is not finite")));
        }
        let ResolvedParams { a, b, offset, .. } = self.params;
        let m = self.spec.m.value();
        let i = Complex64::i();
        let value = match self.spec.family {
            FamilyId::KdvSech2 => Complex64::from(a / zeta.cosh().powi(2)),
            FamilyId::KdvCosech => {
                let (s, d) = (0.5 * (a + b), 0.5 * (a - b));
                let half = 0.5 * zeta;
                let singular = if s == 0.0 {
                    0.0
                } else if zeta == 0.0 {
                    return Err(Error::Pole(zeta));
                } else {
                    s / (2.0 * half.sinh().powi(2))
                };
                Complex64::from(singular - d / (2.0 * half.cosh().powi(2)))
            }
            FamilyId::MkdvCosechCoth => {
                let (s, d) = (0.5 * (a + b), 0.5 * (a - b));
                let half = 0.5 * zeta;
                let singular = if s == 0.0 {
                    0.0
                } else if zeta == 0.0 {
                    return Err(Error::Pole(zeta));
                } else {
                    s / half.tanh()
                };
                Complex64::from(singular - d * half.tanh())
            }
            family => {
                let t = elliptic::jacobi(zeta, m)?;
                match family {
                    FamilyId::KdvCnoidal => Complex64::from(a * t.cn * t.cn),
                    FamilyId::KdvCn2Sndn => a * t.cn * t.cn + i * b * t.sn * t.dn,
                    FamilyId::KdvCn2Sncn => a * t.cn * t.cn + i * b * t.sn * t.cn + offset,
                    FamilyId::MkdvSnCn => a * t.sn + i * b * t.cn,
                    FamilyId::MkdvSnDn => a * t.sn + i * b * t.dn,
                    FamilyId::MkdvSn => Complex64::from(a * t.sn),
                    FamilyId::MkdvIcn => i * b * t.cn,
                    _ => unreachable!("hyperbolic families handled above"),
                }
            }
        };
        Ok(value)
    }

    /// `ζ = α(x − cα²t)`.
    pub fn zeta(&self, x: f64, t: f64) -> f64 {
        let alpha = self.spec.alpha;
        alpha * (x - self.params.c * alpha * alpha * t)
    }

    pub fn eval_field(&self, x: f64, t: f64) -> Result<ComplexFieldValue> {
        self.eval(self.zeta(x, t))
    }

    /// One fundamental period with 256 points for periodic cases; otherwise the
    /// window `|ζ| ≤ 20` with step 0.01 (0.005 when the profile has a pole).
    pub fn default_grid(&self) -> Grid {
        match self.natural_period() {
            Some(period) => Grid::periodic(0.0, period, DEFAULT_PERIODIC_POINTS)
                .expect("positive period"),
            None => {
                let step = if self.is_singular() { SINGULAR_STEP } else { DEFAULT_STEP };
                Grid::truncated(DEFAULT_WINDOW, step).expect("valid window")
            }
        }
    }

    pub fn sample(&self, grid: Grid) -> Result<SampledProfile> {
        self.sample_masked(grid, DEFAULT_POLE_MASK)
    }

    /// Samples on `grid`. For singular profiles the sample at the pole itself is
    /// set to zero and `|ζ| < pole_mask` is excluded from norms; `pole_mask`
    /// must cover the half-width of the widest derivative stencil.
    pub fn sample_masked(&self, grid: Grid, pole_mask: f64) -> Result<SampledProfile> {
        let singular = self.is_singular();
        if singular && pole_mask < 6.0 * grid.spacing {
            return Err(Error::Domain(format!(
                "pole mask {pole_mask} narrower than the derivative stencil at step {}",
                grid.spacing
            )));
        }
        let mut samples = Vec::with_capacity(grid.count);
        for zeta in grid.coords() {
            let value = match self.eval(zeta) {
                Err(Error::Pole(_)) if singular => Complex64::new(0.0, 0.0),
                other => other?,
            };
            samples.push(value);
        }
        let mut profile = SampledProfile::new(grid, samples, self.spec.alpha)?;
        if singular {
            profile = profile.with_pole_mask(pole_mask);
        }
        if let Some(period) = self.natural_period() {
            profile = profile.with_natural_period(period);
        }
        Ok(profile)
    }

    pub fn sample_default(&self) -> Result<SampledProfile> {
        self.sample(self.default_grid())
    }
}

pub fn eval_profile(spec: &SolutionSpec, zeta: f64) -> Result<ComplexFieldValue> {
    Solution::new(*spec)?.eval(zeta)
}

pub fn eval_field(spec: &SolutionSpec, x: f64, t: f64) -> Result<ComplexFieldValue> {
    Solution::new(*spec)?.eval_field(x, t)
}

pub fn intensity(spec: &SolutionSpec, zeta: f64) -> Result<f64> {
    Ok(eval_profile(spec, zeta)?.norm_sqr())
}

/// Pointwise `a ± b` of two closed forms sampled on `grid`.
pub fn superpose(
    a: &SolutionSpec,
    b: &SolutionSpec,
    sign: Sign,
    grid: Grid,
) -> Result<SampledProfile> {
    if a.alpha != b.alpha || a.m != b.m {
        return Err(Error::Incompatible(format!(
            "superposed specs differ in alpha or m: ({}, {}) vs ({}, {})",
            a.alpha,
            a.m.value(),
            b.alpha,
            b.m.value()
        )));
    }
    if a.family.equation() != b.family.equation() {
        return Err(Error::Incompatible(format!(
            "{} and {} solve different equations",
            a.family, b.family
        )));
    }
    let pa = Solution::new(*a)?.sample(grid)?;
    let pb = Solution::new(*b)?.sample(grid)?;
    let s = sign.value();
    let mut sum = pa.zip_with(&pb, |x, y| x + s * y)?;
    // The sum of two profiles need not share either profile's period.
    if pa.natural_period != pb.natural_period {
        sum.natural_period = None;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(family: FamilyId, m: f64) -> SolutionSpec {
        SolutionSpec::new(family).m(m).unwrap()
    }

    fn sech(z: f64) -> f64 {
        1.0 / z.cosh()
    }

    #[test]
    fn resolve_examples() {
        let p = resolve(&spec(FamilyId::KdvCn2Sndn, 0.25)).unwrap();
        assert_abs_diff_eq!(p.a, -0.25);
        assert_abs_diff_eq!(p.b, 0.5);
        assert_abs_diff_eq!(p.c, -0.5);

        let p = resolve(&spec(FamilyId::MkdvSnCn, 1.0)).unwrap();
        assert_abs_diff_eq!(p.a, 0.5);
        assert_abs_diff_eq!(p.b, 0.5);
        assert_abs_diff_eq!(p.c, -0.5);

        let s = spec(FamilyId::KdvCn2Sncn, 1.0).beta(0.25).branch(Sign::Minus);
        let p = resolve(&s).unwrap();
        assert_abs_diff_eq!(p.a, -1.0);
        assert_abs_diff_eq!(p.b, 1.0);
        assert_abs_diff_eq!(p.c, -0.5);
        assert_abs_diff_eq!(p.offset, 0.25);

        let p = resolve(&spec(FamilyId::MkdvSn, 1.0)).unwrap();
        assert_abs_diff_eq!(p.c, -2.0);
        let p = resolve_with(&spec(FamilyId::MkdvSn, 1.0), VelocityConvention::AsPublished).unwrap();
        assert_abs_diff_eq!(p.c, -20.0);
    }

    #[test]
    fn equation_assignment() {
        for f in FamilyId::ALL {
            let expected = if f.as_str().starts_with("kdv") {
                EquationKind::Kdv
            } else {
                EquationKind::MkdvDefocusing
            };
            assert_eq!(f.equation(), expected);
            assert_eq!(f.as_str().parse::<FamilyId>().unwrap(), f);
        }
    }

    #[test]
    fn beta_only_for_sncn() {
        let s = spec(FamilyId::KdvCn2Sndn, 0.5).beta(0.1);
        assert!(matches!(resolve(&s), Err(Error::ParameterMismatch(_))));
        let s = spec(FamilyId::KdvSech2, 1.0).m(0.5).unwrap();
        assert!(matches!(resolve(&s), Err(Error::ParameterMismatch(_))));
        assert!(SolutionSpec::new(FamilyId::KdvCn2Sndn).m(2.0).is_err());
        assert!(resolve(&SolutionSpec::new(FamilyId::KdvSech2).alpha(0.0)).is_err());
    }

    #[test]
    fn profile_examples() {
        let v = eval_profile(&spec(FamilyId::KdvCn2Sndn, 0.5), 0.0).unwrap();
        assert_abs_diff_eq!(v.re, -0.5);
        assert_abs_diff_eq!(v.im, 0.0);

        let v = eval_profile(&spec(FamilyId::MkdvSnDn, 0.25), 0.0).unwrap();
        assert_abs_diff_eq!(v.re, 0.0);
        assert_abs_diff_eq!(v.im, 0.5);

        let v = eval_profile(&spec(FamilyId::KdvCn2Sndn, 1.0), 1.0).unwrap();
        assert_abs_diff_eq!(v.re, -sech(1.0).powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, sech(1.0) * 1.0_f64.tanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.re, -0.419_974, epsilon = 1e-6);
        assert_abs_diff_eq!(v.im, 0.493_554, epsilon = 1e-6);
    }

    #[test]
    fn field_examples() {
        let s = spec(FamilyId::KdvSech2, 1.0);
        assert_abs_diff_eq!(eval_field(&s, 4.0, 1.0).unwrap().re, -2.0);

        let s = spec(FamilyId::KdvCn2Sndn, 1.0).alpha(2.0);
        let v = eval_field(&s, 4.0, 1.0).unwrap();
        assert_abs_diff_eq!(v.re, -4.0);
        assert_abs_diff_eq!(v.im, 0.0);

        let s = spec(FamilyId::MkdvSnCn, 0.4);
        assert_eq!(eval_field(&s, 0.0, 0.0).unwrap(), eval_profile(&s, 0.0).unwrap());
    }

    #[test]
    fn intensity_examples() {
        for z in [-3.0, -0.2, 0.0, 1.1, 7.5] {
            assert_abs_diff_eq!(intensity(&spec(FamilyId::MkdvSnCn, 0.64), z).unwrap(), 0.16, epsilon = 1e-12);
            let s = spec(FamilyId::MkdvSnDn, 0.3).alpha(2.0);
            assert_abs_diff_eq!(intensity(&s, z).unwrap(), 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(intensity(&spec(FamilyId::KdvCn2Sndn, 1.0), 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(intensity(&spec(FamilyId::KdvSech2, 1.0), 0.0).unwrap(), 4.0);
    }

    #[test]
    fn cosech_families() {
        let plus = Solution::new(spec(FamilyId::KdvCosech, 1.0)).unwrap();
        assert!(plus.is_singular());
        assert_eq!(plus.eval(0.0), Err(Error::Pole(0.0)));
        let z: f64 = 0.7;
        let direct = 1.0 / z.sinh().powi(2) + z.cosh() / z.sinh().powi(2);
        assert_abs_diff_eq!(plus.eval(z).unwrap().re, direct, epsilon = 1e-13);

        // The minus branch is the regular soliton −½ sech²(ζ/2).
        let minus = Solution::new(spec(FamilyId::KdvCosech, 1.0).branch(Sign::Minus)).unwrap();
        assert!(!minus.is_singular());
        for z in [0.0, 0.3, -2.0] {
            assert_abs_diff_eq!(minus.eval(z).unwrap().re, -0.5 * sech(0.5 * z).powi(2), epsilon = 1e-15);
        }

        let kink = Solution::new(spec(FamilyId::MkdvCosechCoth, 1.0)).unwrap();
        let direct = 0.5 / z.sinh() + 0.5 / z.tanh();
        assert_abs_diff_eq!(kink.eval(z).unwrap().re, direct, epsilon = 1e-14);
        assert_eq!(kink.eval(0.0), Err(Error::Pole(0.0)));
    }

    #[test]
    fn superpose_examples() {
        let g = Grid::periodic(0.0, 4.0 * elliptic::complete_k(0.5).unwrap(), 64).unwrap();
        let plus = spec(FamilyId::KdvCn2Sndn, 0.5);
        let minus = plus.branch(Sign::Minus);
        let sum = superpose(&plus, &minus, Sign::Plus, g).unwrap();
        for (z, v) in g.coords().iter().zip(&sum.samples) {
            let cn = elliptic::jacobi(*z, 0.5).unwrap().cn;
            assert_abs_diff_eq!(v.re, -cn * cn, epsilon = 1e-14);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
        }

        let g = Grid::truncated(5.0, 0.1).unwrap();
        let plus = spec(FamilyId::MkdvSnCn, 1.0);
        let diff = superpose(&plus, &plus.branch(Sign::Minus), Sign::Minus, g).unwrap();
        for (z, v) in g.coords().iter().zip(&diff.samples) {
            assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(v.im, sech(*z), epsilon = 1e-15);
        }

        let other = spec(FamilyId::MkdvSnCn, 0.5);
        assert!(matches!(superpose(&plus, &other, Sign::Plus, g), Err(Error::Incompatible(_))));
    }

    #[test]
    fn conjugate_pairs() {
        for family in [FamilyId::KdvCn2Sndn, FamilyId::KdvCn2Sncn, FamilyId::MkdvSnDn, FamilyId::MkdvSnCn] {
            for m in [0.3, 0.8, 1.0] {
                let mut s = spec(family, m);
                if family == FamilyId::KdvCn2Sncn {
                    s = s.beta(0.3);
                }
                let (p, q) = (Solution::new(s).unwrap(), Solution::new(s.branch(Sign::Minus)).unwrap());
                for z in [-4.0, -1.2, 0.0, 0.5, 3.3] {
                    let d = p.eval(z).unwrap() - q.eval(z).unwrap().conj();
                    assert!(d.norm() < 1e-14, "{family} m={m} z={z}");
                }
            }
        }
    }

    #[test]
    fn velocity_relations() {
        for m in [0.05, 0.3, 0.49, 0.51, 0.7, 1.0] {
            let c = resolve(&spec(FamilyId::KdvCn2Sndn, m)).unwrap().c;
            assert_eq!(c > 0.0, m > 0.5);
            let c_sncn = resolve(&spec(FamilyId::MkdvSnCn, m)).unwrap().c;
            let c_sndn = resolve(&spec(FamilyId::MkdvSnDn, m)).unwrap().c;
            assert_abs_diff_eq!(c_sncn, -0.5 * (2.0 - m), epsilon = 1e-15);
            assert_abs_diff_eq!(c_sndn, -0.5 * (2.0 * m - 1.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn soliton_intensity_vanishes_at_infinity() {
        let s = spec(FamilyId::KdvCn2Sndn, 1.0).alpha(1.5);
        for z in [0.0, 2.0, 10.0, 30.0] {
            let expected = 1.5_f64.powi(4) * sech(z).powi(2);
            assert_abs_diff_eq!(intensity(&s, z).unwrap(), expected, epsilon = 1e-12 * expected.max(1e-300));
        }
        assert!(intensity(&s, 40.0).unwrap() < 1e-30);
    }
}
