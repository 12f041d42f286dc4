//! Jacobi elliptic functions and the complete elliptic integral of the first kind.
//!
//! Everything here uses the *parameter* convention `m = k²`, so `sn(u, m)` with
//! `m = 0` is `sin u` and with `m = 1` is `tanh u`. Several libraries (and a good
//! part of the older literature) take the modulus `k` instead; pass `k * k`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this parameter the AGM recursion loses digits to cancellation and the
/// first-order expansion about `m = 1` is used instead.
const NEAR_ONE: f64 = 1.0 - 1e-10;

/// Modulus parameter `m = k²`, validated to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ModulusParameter(f64);

impl ModulusParameter {
    pub fn new(m: f64) -> Result<Self> {
        check_parameter(m)?;
        Ok(Self(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True in the hyperbolic (solitary wave) limit.
    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for ModulusParameter {
    type Error = Error;

    fn try_from(m: f64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<ModulusParameter> for f64 {
    fn from(m: ModulusParameter) -> f64 {
        m.0
    }
}

fn check_parameter(m: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain(format!(
            "modulus parameter m={m} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `(sn, cn, dn)` at a common real argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Quarter period `K(m) = π / (2 AGM(1, √(1−m)))`.
pub fn complete_k(m: f64) -> Result<f64> {
    if m.is_nan() {
        return Err(Error::Domain("modulus parameter is NaN".into()));
    }
    if m == 1.0 {
        return Err(Error::KDiverges);
    }
    check_parameter(m)?;
    Ok(PI / (2.0 * agm(1.0, (1.0 - m).sqrt())))
}

/// Jacobi elliptic functions `sn, cn, dn` of real argument `u` and parameter `m`.
///
/// Uses the descending Landen (AGM) recursion after reducing `u` modulo `4K`.
/// At `m = 0` and `m = 1` the trigonometric and hyperbolic forms are returned
/// directly.
pub fn jacobi(u: f64, m: f64) -> Result<EllipticTriple> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("argument {u} is not finite")));
    }
    if m.is_nan() {
        return Err(Error::Domain("modulus parameter is NaN".into()));
    }
    check_parameter(m)?;

    if m == 0.0 {
        let (s, c) = u.sin_cos();
        return Ok(EllipticTriple { sn: s, cn: c, dn: 1.0 });
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return Ok(EllipticTriple {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        });
    }

    let quarter = complete_k(m)?;
    let full = 4.0 * quarter;
    let u = u - full * (u / full).round();

    if m > NEAR_ONE {
        return Ok(near_one(u, m));
    }
    Ok(landen(u, m))
}

fn landen(u: f64, m: f64) -> EllipticTriple {
    const MAX_STAGES: usize = 12;
    let mut a = [0.0_f64; MAX_STAGES + 1];
    let mut c = [0.0_f64; MAX_STAGES + 1];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut b = (1.0 - m).sqrt();
    let mut twon = 1.0;
    let mut n = 0;
    while (c[n] / a[n]).abs() > f64::EPSILON && n < MAX_STAGES {
        n += 1;
        c[n] = 0.5 * (a[n - 1] - b);
        let g = (a[n - 1] * b).sqrt();
        a[n] = 0.5 * (a[n - 1] + b);
        b = g;
        twon *= 2.0;
    }

    let mut phi = twon * a[n] * u;
    while n > 0 {
        let t = c[n] * phi.sin() / a[n];
        phi = 0.5 * (t.asin() + phi);
        n -= 1;
    }
    let (sn, cn) = phi.sin_cos();
    // dn > 0 for m < 1; the ratio form cn/cos(φ_n − φ_{n−1}) is 0/0 at odd K.
    EllipticTriple {
        sn,
        cn,
        dn: (1.0 - m * sn * sn).sqrt(),
    }
}

/// First-order expansion in `1 - m` about the hyperbolic limit.
fn near_one(u: f64, m: f64) -> EllipticTriple {
    let m1 = 1.0 - m;
    let (sh, ch) = (u.sinh(), u.cosh());
    let (th, sech) = (u.tanh(), 1.0 / ch);
    let q = 0.25 * m1;
    EllipticTriple {
        sn: th + q * (sh * ch - u) * sech * sech,
        cn: sech - q * (sh * ch - u) * th * sech,
        dn: sech + q * (sh * ch + u) * th * sech,
    }
}

/// Periodic combinations of elliptic functions appearing in the solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodicKind {
    Sn,
    Cn,
    Dn,
    SnDn,
    SnCn,
    Cn2,
}

impl PeriodicKind {
    pub const ALL: [PeriodicKind; 6] = [
        PeriodicKind::Sn,
        PeriodicKind::Cn,
        PeriodicKind::Dn,
        PeriodicKind::SnDn,
        PeriodicKind::SnCn,
        PeriodicKind::Cn2,
    ];

    pub fn eval(self, t: &EllipticTriple) -> f64 {
        match self {
            PeriodicKind::Sn => t.sn,
            PeriodicKind::Cn => t.cn,
            PeriodicKind::Dn => t.dn,
            PeriodicKind::SnDn => t.sn * t.dn,
            PeriodicKind::SnCn => t.sn * t.cn,
            PeriodicKind::Cn2 => t.cn * t.cn,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PeriodicKind::Sn => "sn",
            PeriodicKind::Cn => "cn",
            PeriodicKind::Dn => "dn",
            PeriodicKind::SnDn => "sn*dn",
            PeriodicKind::SnCn => "sn*cn",
            PeriodicKind::Cn2 => "cn^2",
        }
    }

    /// Number of quarter periods in the fundamental real period.
    ///
    /// `sn` and `cn` flip sign under a half-period shift `u -> u + 2K` while
    /// `dn` does not, so `sn·cn` and `cn²` repeat after `2K` and `sn·dn`
    /// only after `4K`.
    pub fn quarter_periods(self) -> u32 {
        match self {
            PeriodicKind::Sn | PeriodicKind::Cn | PeriodicKind::SnDn => 4,
            PeriodicKind::Dn | PeriodicKind::SnCn | PeriodicKind::Cn2 => 2,
        }
    }
}

/// Fundamental real period of `kind` at parameter `m < 1`.
///
/// At `m = 0`, `dn ≡ 1` has every period; `2K(0) = π` is returned.
pub fn period(kind: PeriodicKind, m: f64) -> Result<f64> {
    if m == 1.0 {
        return Err(Error::NonPeriodic(kind.name()));
    }
    Ok(f64::from(kind.quarter_periods()) * complete_k(m)?)
}
