use crate::error::{invalid, Result};

/// Volatility band `[sigma_lo, sigma_hi]` defining the generator `G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GParams {
    sigma_lo: f64,
    sigma_hi: f64,
}

impl GParams {
    pub fn new(sigma_lo: f64, sigma_hi: f64) -> Result<Self> {
        if !(sigma_lo.is_finite() && sigma_hi.is_finite()) {
            return Err(invalid("volatility bounds must be finite"));
        }
        if sigma_lo < 0.0 || sigma_lo > sigma_hi {
            return Err(invalid("volatility bounds must satisfy 0 <= sigma_lo <= sigma_hi"));
        }
        if sigma_hi <= 0.0 {
            return Err(invalid("sigma_hi must be positive"));
        }
        Ok(Self { sigma_lo, sigma_hi })
    }

    /// Degenerate band: the classical Brownian motion with volatility `sigma`.
    pub fn classical(sigma: f64) -> Result<Self> {
        Self::new(sigma, sigma)
    }

    pub fn sigma_lo(&self) -> f64 {
        self.sigma_lo
    }

    pub fn sigma_hi(&self) -> f64 {
        self.sigma_hi
    }

    pub fn is_classical(&self) -> bool {
        self.sigma_lo == self.sigma_hi
    }

    /// `G(α) = ½(σ̄²α⁺ − σ̲²α⁻)`.
    ///
    /// Written as `½σ²α` with `σ` picked by the sign of `α`, which is the same
    /// number and makes the classical case `σ²α/2` bit-exact.
    #[inline]
    pub fn g(&self, alpha: f64) -> f64 {
        let s = if alpha > 0.0 { self.sigma_hi } else { self.sigma_lo };
        0.5 * (s * s * alpha)
    }

    pub fn contains(&self, sigma: f64) -> bool {
        sigma >= self.sigma_lo && sigma <= self.sigma_hi
    }
}

pub fn g_function(alpha: f64, params: &GParams) -> f64 {
    params.g(alpha)
}
