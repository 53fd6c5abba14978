//! Machine-readable verification reports shared by the library and the
//! command-line surface.

use crate::engine::{main_identity, quantitative_ckn_margin};
use crate::extremals::RadialProfile;
use crate::geometry::ModelSpace;
use crate::params::CknParams;
use crate::Result;
use serde::Serialize;

/// One named check with its tolerance and verdict.
#[derive(Debug, Clone, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl NamedCheck {
    /// A quantity that must be zero up to `tol` in absolute value.
    pub fn residual(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, pass: value.abs() <= tol }
    }

    /// A quantity that must be nonnegative up to `tol` slack.
    pub fn nonnegative(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, pass: value >= -tol }
    }
}

/// Outcome of the full verification battery on one (params, space, profile).
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub ratio: f64,
    /// The sharp constant r/(n-γr).
    pub bound: f64,
    pub margin: f64,
    pub residuals: Vec<NamedCheck>,
    pub passed: bool,
    pub params_echo: CknParams,
    pub space_echo: ModelSpace,
}

/// Run the inequality, the main identity, and the quantitative margin on
/// one profile. `rel_tol` scales every tolerance; the identity check runs
/// at 10x slack since it stacks five quadratures.
pub fn verification_report(
    params: &CknParams,
    space: &ModelSpace,
    profile: &RadialProfile,
    rel_tol: f64,
) -> Result<VerificationReport> {
    let bound = params.sharp_constant()?;
    let parts = main_identity(params, space, profile)?;
    let ratio = parts.lhs / parts.product * bound;
    let margin = bound - ratio;
    let qmargin = quantitative_ckn_margin(params, space, profile)?;

    let residuals = vec![
        NamedCheck::nonnegative("inequality_margin", margin, rel_tol * bound),
        NamedCheck::residual("identity_residual", parts.residual, 10.0 * rel_tol * parts.lhs),
        NamedCheck::nonnegative("quantitative_margin", qmargin, rel_tol * parts.product),
        NamedCheck::nonnegative("rp_integral", parts.rp_integral, rel_tol),
    ];
    let passed = residuals.iter().all(|c| c.pass);
    Ok(VerificationReport {
        ratio,
        bound,
        margin,
        residuals,
        passed,
        params_echo: params.clone(),
        space_echo: *space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremals::{make_test_profile, TestProfileKind};

    #[test]
    fn report_on_hpw_gaussian() {
        let params = CknParams::new(3, 2.0, 2.0, 0.0, -2.0).unwrap();
        let space = ModelSpace::euclidean(3);
        let gauss = make_test_profile(TestProfileKind::Gaussian, 1.0);
        let rep = verification_report(&params, &space, &gauss, 1e-8).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!((rep.ratio - 2.0 / 3.0).abs() < 1e-8);
        assert!(rep.margin.abs() < 1e-8);
        // Round-trips through JSON.
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("identity_residual"));
    }

    #[test]
    fn report_flags_nonextremal_margin() {
        let params = CknParams::new(3, 2.0, 2.0, 0.0, -2.0).unwrap();
        let space = ModelSpace::new(3, 1.0).unwrap();
        let bump = make_test_profile(TestProfileKind::PolyBump, 1.0);
        let rep = verification_report(&params, &space, &bump, 1e-8).unwrap();
        assert!(rep.passed);
        assert!(rep.margin > 1e-3, "curved bump should be well below the bound");
    }
}
