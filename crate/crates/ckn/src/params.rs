//! Parameter tuples, admissibility predicates, derived exponents and the
//! sharpness-case classification.
//!
//! A tuple (n, p, r, α, β) determines γ through the balance relation
//! γ = (1+α)/r + ((p−1)/(pr))·β, which is forced by dilation invariance.
//! The weight γ stored in [`CknParams`] is always recomputed from the other
//! five entries; an externally supplied γ is validated, never trusted.

use crate::{CknError, Result};
use serde::{Deserialize, Serialize};

/// Absolute tolerance used when comparing the exponent s = 1 + α − β/p
/// (and r against p) to their critical values.
pub const CASE_TOL: f64 = 1e-12;

/// An admissible-candidate parameter tuple (n, p, r, α, β, γ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CknParams {
    pub n: u32,
    pub p: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    gamma: f64,
}

/// Exponents derived from a tuple: q = p(r−1)/(p−1), s = 1 + α − β/p,
/// the conjugate p′ and the sharp constant r/(n − γr).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivedExponents {
    pub q: f64,
    pub s: f64,
    pub p_conj: f64,
    pub c_sharp: f64,
}

/// Which sharpness case of the classification a tuple falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SharpnessCase {
    /// 1 < p < r with the Xia condition.
    CaseI,
    /// 0 < r < p, r ≠ 1, s > 0.
    CaseII,
    /// 0 < r < p, r ≠ 1, s = 0.
    CaseIII,
    /// 0 < r < p, r ≠ 1, s < 0 and n − β + s·p(r−1)/(p−r) > 0.
    CaseIV,
    /// r = p and s > 0.
    CaseV,
    /// The inequality still holds, but no extremal family is covered.
    NotCovered,
}

/// Truth values of the three strict integrability conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntegrabilityReport {
    /// 1/r − γ/n > 0
    pub lhs_weight: bool,
    /// 1/p − α/n > 0
    pub grad_weight: bool,
    /// 1 − β/n > 0
    pub q_weight: bool,
}

impl IntegrabilityReport {
    pub fn all(&self) -> bool {
        self.lhs_weight && self.grad_weight && self.q_weight
    }
}

/// γ from the balance relation γ = (1+α)/r + ((p−1)/(pr))·β.
pub fn derive_gamma(n: u32, p: f64, r: f64, alpha: f64, beta: f64) -> Result<f64> {
    let _ = n;
    if !(p > 1.0) {
        return Err(CknError::InvalidParameter(format!("p must exceed 1, got {p}")));
    }
    if !(r > 0.0) {
        return Err(CknError::InvalidParameter(format!("r must be positive, got {r}")));
    }
    Ok((1.0 + alpha) / r + (p - 1.0) / (p * r) * beta)
}

impl CknParams {
    /// Build a tuple, computing γ from the balance relation.
    ///
    /// Only the structural constraints (n ≥ 2, p > 1, r > 0) are enforced
    /// here; integrability is a separate predicate so that failing tuples
    /// can still be inspected.
    pub fn new(n: u32, p: f64, r: f64, alpha: f64, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(CknError::InvalidParameter(format!("n must be at least 2, got {n}")));
        }
        let gamma = derive_gamma(n, p, r, alpha, beta)?;
        Ok(Self { n, p, r, alpha, beta, gamma })
    }

    /// Build a tuple from all six entries, validating the supplied γ
    /// against the balance relation (relative tolerance 1e−10).
    pub fn with_gamma(n: u32, p: f64, r: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let params = Self::new(n, p, r, alpha, beta)?;
        let scale = 1.0_f64.max(params.gamma.abs());
        if (params.gamma - gamma).abs() > 1e-10 * scale {
            return Err(CknError::InvalidParameter(format!(
                "gamma {} violates the balance relation (expected {})",
                gamma, params.gamma
            )));
        }
        Ok(params)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// s = 1 + α − β/p.
    pub fn s(&self) -> f64 {
        1.0 + self.alpha - self.beta / self.p
    }

    /// q = p(r−1)/(p−1); negative when r < 1.
    pub fn q(&self) -> f64 {
        self.p * (self.r - 1.0) / (self.p - 1.0)
    }

    pub fn check_integrability(&self) -> IntegrabilityReport {
        let n = self.n as f64;
        IntegrabilityReport {
            lhs_weight: 1.0 / self.r - self.gamma / n > 0.0,
            grad_weight: 1.0 / self.p - self.alpha / n > 0.0,
            q_weight: 1.0 - self.beta / n > 0.0,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.check_integrability().all()
    }

    /// The Xia sharpness condition n − β < s·p(r−1)/(r−p); requires r > p.
    pub fn check_xia_condition(&self) -> Result<bool> {
        if !(self.r > self.p) {
            return Err(CknError::InvalidParameter(format!(
                "Xia condition needs r > p, got r = {}, p = {}",
                self.r, self.p
            )));
        }
        let n = self.n as f64;
        Ok(n - self.beta < self.s() * self.p * (self.r - 1.0) / (self.r - self.p))
    }

    /// Deterministic, total classification into the five sharpness cases.
    pub fn classify_sharpness_case(&self) -> SharpnessCase {
        let s = self.s();
        let n = self.n as f64;
        if (self.r - self.p).abs() <= CASE_TOL {
            if s > CASE_TOL {
                return SharpnessCase::CaseV;
            }
            return SharpnessCase::NotCovered;
        }
        if self.r > self.p && self.p > 1.0 {
            if self.check_xia_condition().unwrap_or(false) {
                return SharpnessCase::CaseI;
            }
            return SharpnessCase::NotCovered;
        }
        // 0 < r < p from here on.
        if (self.r - 1.0).abs() <= CASE_TOL {
            return SharpnessCase::NotCovered;
        }
        if s.abs() <= CASE_TOL {
            return SharpnessCase::CaseIII;
        }
        if s > 0.0 {
            return SharpnessCase::CaseII;
        }
        let extra = n - self.beta + s * self.p * (self.r - 1.0) / (self.p - self.r);
        if extra > 0.0 {
            return SharpnessCase::CaseIV;
        }
        SharpnessCase::NotCovered
    }

    /// The sharp constant r/(n − γr); requires n − γr > 0.
    pub fn sharp_constant(&self) -> Result<f64> {
        let denom = self.n as f64 - self.gamma * self.r;
        if !(denom > 0.0) {
            return Err(CknError::InvalidParameter(format!(
                "sharp constant undefined: n - gamma*r = {denom}"
            )));
        }
        Ok(self.r / denom)
    }

    pub fn derived(&self) -> Result<DerivedExponents> {
        Ok(DerivedExponents {
            q: self.q(),
            s: self.s(),
            p_conj: self.p / (self.p - 1.0),
            c_sharp: self.sharp_constant()?,
        })
    }

    /// The extra hypothesis of the rigidity theorems: requires r ≥ p > 1.
    /// For r > p it is n − β + s·p(r−1)/(p−r) < 0; for r = p it is s > 0.
    pub fn check_rigidity_hypotheses(&self) -> Result<bool> {
        if self.r + CASE_TOL < self.p {
            return Err(CknError::InvalidParameter(format!(
                "rigidity hypotheses need r >= p, got r = {}, p = {}",
                self.r, self.p
            )));
        }
        if (self.r - self.p).abs() <= CASE_TOL {
            return Ok(self.s() > 0.0);
        }
        let n = self.n as f64;
        Ok(n - self.beta + self.s() * self.p * (self.r - 1.0) / (self.p - self.r) < 0.0)
    }
}

/// The classical two-exponent CKN parameter set.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClassicalCknParams {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sigma: f64,
    /// Interpolation weight, in [0, 1].
    pub delta_weight: f64,
}

/// Outcome of the classical admissibility check; `reason` names the first
/// violated condition when `admissible` is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassicalAdmissibility {
    pub admissible: bool,
    pub reason: Option<&'static str>,
}

/// Check the full classical admissibility conditions for the two-exponent
/// inequality. Standalone validator; nothing downstream consumes it.
pub fn check_classical_admissibility(cp: &ClassicalCknParams) -> ClassicalAdmissibility {
    const TOL: f64 = 1e-10;
    let n = cp.n as f64;
    let fail = |reason| ClassicalAdmissibility { admissible: false, reason: Some(reason) };

    if !(cp.p >= 1.0 && cp.q >= 1.0 && cp.r > 0.0 && (0.0..=1.0).contains(&cp.delta_weight)) {
        return fail("positivity");
    }
    if !(1.0 / cp.p + cp.alpha / n > 0.0
        && 1.0 / cp.q + cp.beta / n > 0.0
        && 1.0 / cp.r + cp.gamma / n > 0.0)
    {
        return fail("integrability");
    }
    let gamma_interp = cp.delta_weight * cp.sigma + (1.0 - cp.delta_weight) * cp.beta;
    if (cp.gamma - gamma_interp).abs() > TOL {
        return fail("gamma-interpolation");
    }
    let lhs = 1.0 / cp.r + cp.gamma / n;
    let rhs = cp.delta_weight * (1.0 / cp.p + (cp.alpha - 1.0) / n)
        + (1.0 - cp.delta_weight) * (1.0 / cp.q + cp.beta / n);
    if (lhs - rhs).abs() > TOL {
        return fail("balance");
    }
    if cp.delta_weight > 0.0 {
        if cp.alpha - cp.sigma < -TOL {
            return fail("alpha-sigma-lower");
        }
        let critical = (lhs - (1.0 / cp.p + (cp.alpha - 1.0) / n)).abs() <= TOL;
        if critical && cp.alpha - cp.sigma > 1.0 + TOL {
            return fail("alpha-sigma-upper");
        }
    }
    ClassicalAdmissibility { admissible: true, reason: None }
}
