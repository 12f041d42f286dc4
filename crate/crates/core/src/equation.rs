use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which evolution equation a field is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationKind {
    /// `u_t − 6 u u_x + u_xxx = 0`
    Kdv,
    /// `v_t − 6 v² v_x + v_xxx = 0`
    MkdvDefocusing,
    /// `v_t + 6 v² v_x + v_xxx = 0`
    MkdvFocusing,
}

impl EquationKind {
    pub const ALL: [EquationKind; 3] = [
        EquationKind::Kdv,
        EquationKind::MkdvDefocusing,
        EquationKind::MkdvFocusing,
    ];

    /// Power of `α` carried by the field amplitude (`u ~ α²`, `v ~ α`).
    pub fn amplitude_power(self) -> i32 {
        match self {
            EquationKind::Kdv => 2,
            _ => 1,
        }
    }

    /// The nonlinear term `N(w) w'` as it appears on the left-hand side.
    pub fn nonlinear_term(self, w: Complex64, w1: Complex64) -> Complex64 {
        match self {
            EquationKind::Kdv => -6.0 * w * w1,
            EquationKind::MkdvDefocusing => -6.0 * w * w * w1,
            EquationKind::MkdvFocusing => 6.0 * w * w * w1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EquationKind::Kdv => "kdv",
            EquationKind::MkdvDefocusing => "mkdv-defocusing",
            EquationKind::MkdvFocusing => "mkdv-focusing",
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        EquationKind::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown equation '{s}'")))
    }
}
