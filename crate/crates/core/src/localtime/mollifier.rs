//! The `C¹` approximation `φ_ε` of `|x|` and its smoothing by a bump kernel.

use crate::error::{invalid, Result};
use crate::math::exp;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierSpec {
    eps: f64,
    n: u32,
}

impl MollifierSpec {
    pub fn new(eps: f64, n: u32) -> Result<Self> {
        check_eps(eps)?;
        if n == 0 {
            return Err(invalid("mollification index must be >= 1"));
        }
        Ok(Self { eps, n })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(invalid("bandwidth eps must be positive"))
    }
}

/// `½(ε + x²/ε)` on `|x| < ε`, `|x|` elsewhere.
pub fn phi_eps(x: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(if x.abs() < eps {
        0.5 * (eps + x * x / eps)
    } else {
        x.abs()
    })
}

/// `x/ε` on `|x| ≤ ε`, `±1` elsewhere.
pub fn phi_eps_prime(x: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(if x > eps {
        1.0
    } else if x < -eps {
        -1.0
    } else {
        x / eps
    })
}

/// `1/ε` on `|x| < ε`, `0` elsewhere including `x = ±ε`.
pub fn phi_eps_second(x: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(if x.abs() < eps { 1.0 / eps } else { 0.0 })
}

/// `∫_{-1}^{1} exp(1/(x²−1)) dx`.
const BUMP_MASS: f64 = 0.443_993_816_168_079_4;

/// Normalized bump `C exp(1/(x²−1))` on `|x| < 1`.
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        exp(1.0 / (x * x - 1.0)) / BUMP_MASS
    } else {
        0.0
    }
}

const QUAD_INTERVALS: usize = 512;

/// `(φ_ε * η_n)(x)` with `η_n(x) = n η(nx)`, by composite Simpson in the
/// kernel variable.
pub fn mollified_phi_eps(x: f64, spec: &MollifierSpec) -> f64 {
    let n = spec.n as f64;
    let h = 2.0 / QUAD_INTERVALS as f64;
    let mut acc = 0.0;
    for i in 0..=QUAD_INTERVALS {
        let z = -1.0 + i as f64 * h;
        let w = if i == 0 || i == QUAD_INTERVALS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let y = x - z / n;
        let p = if y.abs() < spec.eps {
            0.5 * (spec.eps + y * y / spec.eps)
        } else {
            y.abs()
        };
        acc += w * bump(z) * p;
    }
    acc * h / 3.0
}
