//! Constant-curvature model spaces and their radial geometry: the volume
//! density J_b, the comparison functions ct_b and D_b, and ball volumes.
//!
//! A [`ModelSpace`] has constant sectional curvature -b with b >= 0; b = 0
//! is Euclidean space. These stand in for Cartan--Hadamard manifolds
//! throughout the crate, since only the constant-curvature densities are
//! computable in closed form.

use crate::quadrature::{integrate, QuadSpec};
use crate::specfun::unit_ball_volume;
use crate::{CknError, Result};

/// Below this value of √b·t the hyperbolic expressions switch to Taylor
/// series; sinh(x)/x and x·coth(x) - 1 cancel catastrophically at tiny x.
const SERIES_CUTOFF: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelSpace {
    pub n: u32,
    /// Curvature is -b, b >= 0.
    pub b: f64,
}

/// sinh(x)/x with a series fallback near zero.
fn sinhc(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0
    } else {
        x.sinh() / x
    }
}

/// ln(sinh(x)/x), overflow-safe for large x.
fn ln_sinhc(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        sinhc(x).ln()
    } else if x < 350.0 {
        (x.sinh() / x).ln()
    } else {
        x - std::f64::consts::LN_2 + (-(2.0 * x)).exp().ln_1p() - x.ln()
    }
}

/// x·coth(x) - 1, nonnegative, with a series fallback near zero.
fn x_coth_x_minus_1(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        x2 / 3.0 - x2 * x2 / 45.0 + 2.0 * x2 * x2 * x2 / 945.0
    } else {
        x / x.tanh() - 1.0
    }
}

/// ct_b(t): 1/t for flat space, √b·coth(√b t) otherwise.
pub fn ctb(b: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(CknError::InvalidParameter(format!("ctb requires t > 0, got {t}")));
    }
    if b == 0.0 {
        return Ok(1.0 / t);
    }
    let x = b.sqrt() * t;
    Ok((x_coth_x_minus_1(x) + 1.0) / t)
}

/// D_b(t) = t·ct_b(t) - 1 for t > 0, extended by 0 at t = 0; always >= 0.
pub fn db(b: f64, t: f64) -> f64 {
    if t <= 0.0 || b == 0.0 {
        return 0.0;
    }
    x_coth_x_minus_1(b.sqrt() * t)
}

impl ModelSpace {
    pub fn new(n: u32, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(CknError::InvalidParameter(format!("dimension must be >= 2, got {n}")));
        }
        if !(b >= 0.0) {
            return Err(CknError::InvalidParameter(format!("curvature parameter b must be >= 0, got {b}")));
        }
        Ok(Self { n, b })
    }

    pub fn euclidean(n: u32) -> Self {
        Self { n, b: 0.0 }
    }

    /// Radial volume density J_b(t) = (sinh(√b t)/(√b t))^{n-1}, with the
    /// continuous extension 1 at t = 0.
    pub fn density_jb(&self, t: f64) -> f64 {
        if self.b == 0.0 || t == 0.0 {
            return 1.0;
        }
        let x = self.b.sqrt() * t;
        // Capped below overflow: tail integrands multiply J_b by factors
        // that underflow to exactly 0, and 0 * inf would poison them.
        ((self.n - 1) as f64 * ln_sinhc(x)).min(690.0).exp()
    }

    /// d/dt log J_b(t) = ((n-1)/t)·D_b(t).
    pub fn log_derivative_jb(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(CknError::InvalidParameter(format!(
                "log_derivative_jb requires t > 0, got {t}"
            )));
        }
        Ok((self.n - 1) as f64 / t * db(self.b, t))
    }

    /// Volume of the geodesic ball of radius rho: n·ω_n·∫₀^ρ t^{n-1} J_b dt.
    pub fn ball_volume(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(CknError::InvalidParameter(format!("ball radius must be positive, got {rho}")));
        }
        let spec = QuadSpec::new(0.0, rho);
        let res = integrate(|t| t.powi(self.n as i32 - 1) * self.density_jb(t), &spec)?;
        Ok(self.n as f64 * unit_ball_volume(self.n)? * res.value)
    }

    /// The 1D integrand weight t^{n-1+power}·J_b(t) of a radial reduction.
    pub fn radial_weight(&self, t: f64, power: f64) -> f64 {
        t.powf((self.n - 1) as f64 + power) * self.density_jb(t)
    }
}
