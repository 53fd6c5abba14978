//! The five extremal families, library test profiles, their analytic
//! derivatives and supports, and the Euler--Lagrange ODE residual.
//!
//! With s = 1 + α - β/p and k = (p-1)/(p-r), the families are
//!
//! * case I:   c(λ + t^s)^k, full support (here k < 0),
//! * case II:  c(λ - t^s)₊^k, support λ^{1/s},
//! * case III: c(λ - ln t)₊^k, support e^λ,
//! * case IV:  c(t^s - λ)₊^k with s < 0, support λ^{1/s},
//! * case V:   λ·e^{-c t^s}, full support.
//!
//! All of them solve φ'(t) = -c₀·φ(t)^{(r-1)/(p-1)}·t^{α-β/p} on their
//! positivity set for a constant c₀ determined by (c, s, k); the case III
//! exponent k (rather than its reciprocal) is the one that solves this ODE.

use crate::params::{CknParams, SharpnessCase};
use crate::quadrature::Decay;
use crate::{CknError, Result};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    ExtremalI,
    ExtremalII,
    ExtremalIII,
    ExtremalIV,
    ExtremalV,
    Bump,
    Custom,
}

/// The scalar parameters a profile was built from.
#[derive(Debug, Clone, Copy)]
pub struct ProfileParams {
    pub lambda: f64,
    pub c: f64,
    pub s: f64,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A nonnegative radial function with analytic derivative.
#[derive(Clone)]
pub struct RadialProfile {
    eval: ScalarFn,
    deriv: ScalarFn,
    support_radius: f64,
    kind: ProfileKind,
    params_used: ProfileParams,
    breakpoints: Vec<f64>,
    decay: Decay,
    /// Matched constant of the extremal ODE; None for non-extremal kinds.
    ode_constant: Option<f64>,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("kind", &self.kind)
            .field("support_radius", &self.support_radius)
            .field("params_used", &self.params_used)
            .finish()
    }
}

impl RadialProfile {
    pub fn from_parts(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_radius: f64,
        kind: ProfileKind,
        decay: Decay,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            support_radius,
            kind,
            params_used: ProfileParams { lambda: f64::NAN, c: f64::NAN, s: f64::NAN },
            breakpoints: Vec::new(),
            decay,
            ode_constant: None,
        }
    }

    pub fn with_breakpoints(mut self, bp: Vec<f64>) -> Self {
        self.breakpoints = bp;
        self
    }

    /// φ(t); zero beyond the support radius.
    pub fn eval(&self, t: f64) -> f64 {
        if t >= self.support_radius {
            0.0
        } else {
            (self.eval)(t)
        }
    }

    /// φ'(t) from the closed form; zero beyond the support radius.
    pub fn deriv(&self, t: f64) -> f64 {
        if t >= self.support_radius {
            0.0
        } else {
            (self.deriv)(t)
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn params_used(&self) -> ProfileParams {
        self.params_used
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    /// The ODE constant the profile solves the extremal equation with.
    pub fn matched_ode_constant(&self) -> Option<f64> {
        self.ode_constant
    }

    /// The dilated profile t ↦ φ(t/δ).
    pub fn dilate(&self, delta: f64) -> Self {
        assert!(delta > 0.0, "dilation factor must be positive");
        let eval = self.eval.clone();
        let deriv = self.deriv.clone();
        let decay = match self.decay {
            Decay::Exponential { rate } => Decay::Exponential { rate: rate / delta },
            Decay::StretchedExponential { rate, power } => Decay::StretchedExponential {
                rate: rate / delta.powf(power),
                power,
            },
            other => other,
        };
        Self {
            eval: Arc::new(move |t| eval(t / delta)),
            deriv: Arc::new(move |t| deriv(t / delta) / delta),
            support_radius: self.support_radius * delta,
            kind: self.kind,
            params_used: self.params_used,
            breakpoints: self.breakpoints.iter().map(|x| x * delta).collect(),
            decay,
            ode_constant: None,
        }
    }
}

/// Build the extremal family member for a classified case.
///
/// `lambda` is the family parameter (the amplitude in case V); `c` is the
/// amplitude in cases I--IV and the exponent rate in case V.
pub fn make_extremal(
    params: &CknParams,
    case: SharpnessCase,
    lambda: f64,
    c: f64,
) -> Result<RadialProfile> {
    let expected = params.classify_sharpness_case();
    if case != expected {
        return Err(CknError::CaseMismatch { given: case, expected });
    }
    let p = params.p;
    let r = params.r;
    let s = params.s();
    let k = (p - 1.0) / (p - r);
    // Exponent relating the ODE constant to the amplitude.
    let amp_exp = (p - r) / (p - 1.0);

    let require_positive = |name: &str, v: f64| -> Result<()> {
        if v > 0.0 {
            Ok(())
        } else {
            Err(CknError::InvalidParameter(format!("{name} must be positive, got {v}")))
        }
    };

    let profile = match case {
        SharpnessCase::CaseI => {
            require_positive("lambda", lambda)?;
            require_positive("c", c)?;
            RadialProfile {
                eval: Arc::new(move |t: f64| c * (lambda + t.powf(s)).powf(k)),
                deriv: Arc::new(move |t: f64| {
                    c * k * s * t.powf(s - 1.0) * (lambda + t.powf(s)).powf(k - 1.0)
                }),
                support_radius: f64::INFINITY,
                kind: ProfileKind::ExtremalI,
                params_used: ProfileParams { lambda, c, s },
                breakpoints: vec![lambda.powf(1.0 / s)],
                decay: Decay::Power,
                ode_constant: Some(-k * s * c.powf(amp_exp)),
            }
        }
        SharpnessCase::CaseII => {
            require_positive("lambda", lambda)?;
            require_positive("c", c)?;
            let support = lambda.powf(1.0 / s);
            RadialProfile {
                eval: Arc::new(move |t: f64| {
                    let w = lambda - t.powf(s);
                    if w > 0.0 {
                        c * w.powf(k)
                    } else {
                        0.0
                    }
                }),
                deriv: Arc::new(move |t: f64| {
                    let w = lambda - t.powf(s);
                    if w > 0.0 {
                        -c * k * s * t.powf(s - 1.0) * w.powf(k - 1.0)
                    } else {
                        0.0
                    }
                }),
                support_radius: support,
                kind: ProfileKind::ExtremalII,
                params_used: ProfileParams { lambda, c, s },
                breakpoints: Vec::new(),
                decay: Decay::Compact,
                ode_constant: Some(k * s * c.powf(amp_exp)),
            }
        }
        SharpnessCase::CaseIII => {
            require_positive("c", c)?;
            let support = lambda.exp();
            RadialProfile {
                eval: Arc::new(move |t: f64| {
                    let w = lambda - t.ln();
                    if w > 0.0 {
                        c * w.powf(k)
                    } else {
                        0.0
                    }
                }),
                deriv: Arc::new(move |t: f64| {
                    let w = lambda - t.ln();
                    if w > 0.0 {
                        -c * k * w.powf(k - 1.0) / t
                    } else {
                        0.0
                    }
                }),
                support_radius: support,
                kind: ProfileKind::ExtremalIII,
                params_used: ProfileParams { lambda, c, s },
                breakpoints: Vec::new(),
                decay: Decay::Compact,
                ode_constant: Some(k * c.powf(amp_exp)),
            }
        }
        SharpnessCase::CaseIV => {
            require_positive("lambda", lambda)?;
            require_positive("c", c)?;
            // s < 0, so t^s > lambda exactly below lambda^{1/s}.
            let support = lambda.powf(1.0 / s);
            RadialProfile {
                eval: Arc::new(move |t: f64| {
                    let w = t.powf(s) - lambda;
                    if w > 0.0 {
                        c * w.powf(k)
                    } else {
                        0.0
                    }
                }),
                deriv: Arc::new(move |t: f64| {
                    let w = t.powf(s) - lambda;
                    if w > 0.0 {
                        c * k * s * t.powf(s - 1.0) * w.powf(k - 1.0)
                    } else {
                        0.0
                    }
                }),
                support_radius: support,
                kind: ProfileKind::ExtremalIV,
                params_used: ProfileParams { lambda, c, s },
                breakpoints: Vec::new(),
                decay: Decay::Compact,
                ode_constant: Some(-k * s * c.powf(amp_exp)),
            }
        }
        SharpnessCase::CaseV => {
            require_positive("lambda", lambda)?;
            require_positive("c", c)?;
            RadialProfile {
                eval: Arc::new(move |t: f64| lambda * (-c * t.powf(s)).exp()),
                deriv: Arc::new(move |t: f64| {
                    -lambda * c * s * t.powf(s - 1.0) * (-c * t.powf(s)).exp()
                }),
                support_radius: f64::INFINITY,
                kind: ProfileKind::ExtremalV,
                params_used: ProfileParams { lambda, c, s },
                breakpoints: Vec::new(),
                decay: Decay::StretchedExponential { rate: c, power: s },
                ode_constant: Some(c * s),
            }
        }
        SharpnessCase::NotCovered => {
            return Err(CknError::InvalidParameter(
                "tuple is not covered by any sharpness case; no extremal family".into(),
            ))
        }
    };
    Ok(profile)
}

/// Residual of the extremal ODE φ'(t) + c·φ^{(r-1)/(p-1)}·t^{α-β/p} at t.
pub fn ode_residual(params: &CknParams, profile: &RadialProfile, c: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || t >= profile.support_radius() {
        return Err(CknError::InvalidParameter(format!(
            "t = {t} is outside the positivity set"
        )));
    }
    let phi = profile.eval(t);
    if !(phi > 0.0) {
        return Err(CknError::InvalidParameter(format!("profile vanishes at t = {t}")));
    }
    let expo = (params.r - 1.0) / (params.p - 1.0);
    let weight = params.alpha - params.beta / params.p;
    Ok(profile.deriv(t) + c * phi.powf(expo) * t.powf(weight))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestProfileKind {
    Gaussian,
    Exp,
    PolyBump,
    PlateauBump,
}

impl TestProfileKind {
    pub const ALL: [TestProfileKind; 4] = [
        TestProfileKind::Gaussian,
        TestProfileKind::Exp,
        TestProfileKind::PolyBump,
        TestProfileKind::PlateauBump,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestProfileKind::Gaussian => "gaussian",
            TestProfileKind::Exp => "exp",
            TestProfileKind::PolyBump => "poly_bump",
            TestProfileKind::PlateauBump => "plateau_bump",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.name() == name)
    }
}

fn cutoff(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

fn cutoff_deriv(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp() / (x * x)
    } else {
        0.0
    }
}

/// Library test profiles with analytic derivatives.
pub fn make_test_profile(kind: TestProfileKind, scale: f64) -> RadialProfile {
    assert!(scale > 0.0, "profile scale must be positive");
    match kind {
        TestProfileKind::Gaussian => RadialProfile::from_parts(
            move |t| (-(t / scale) * (t / scale)).exp(),
            move |t| -2.0 * t / (scale * scale) * (-(t / scale) * (t / scale)).exp(),
            f64::INFINITY,
            ProfileKind::Bump,
            Decay::StretchedExponential { rate: 1.0 / (scale * scale), power: 2.0 },
        ),
        TestProfileKind::Exp => RadialProfile::from_parts(
            move |t| (-t / scale).exp(),
            move |t| -(-t / scale).exp() / scale,
            f64::INFINITY,
            ProfileKind::Bump,
            Decay::Exponential { rate: 1.0 / scale },
        ),
        TestProfileKind::PolyBump => RadialProfile::from_parts(
            move |t| {
                let u = 1.0 - (t / scale) * (t / scale);
                if u > 0.0 {
                    u * u
                } else {
                    0.0
                }
            },
            move |t| {
                let u = 1.0 - (t / scale) * (t / scale);
                if u > 0.0 {
                    -4.0 * t / (scale * scale) * u
                } else {
                    0.0
                }
            },
            scale,
            ProfileKind::Bump,
            Decay::Compact,
        ),
        TestProfileKind::PlateauBump => {
            // Identically 1 on [0, scale/2], smooth transition to 0 at scale.
            let a = 0.5 * scale;
            let width = scale - a;
            RadialProfile::from_parts(
                move |t| {
                    if t <= a {
                        1.0
                    } else if t >= scale {
                        0.0
                    } else {
                        let x = (scale - t) / width;
                        let g = cutoff(x);
                        g / (g + cutoff(1.0 - x))
                    }
                },
                move |t| {
                    if t <= a || t >= scale {
                        0.0
                    } else {
                        let x = (scale - t) / width;
                        let g = cutoff(x);
                        let h = cutoff(1.0 - x);
                        let num = cutoff_deriv(x) * h + g * cutoff_deriv(1.0 - x);
                        -num / ((g + h) * (g + h)) / width
                    }
                },
                scale,
                ProfileKind::Bump,
                Decay::Compact,
            )
            .with_breakpoints(vec![a])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CknParams;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn case_i_params() -> CknParams {
        CknParams::new(3, 2.0, 3.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn case_i_profile_shape() {
        let params = case_i_params();
        let profile = make_extremal(&params, SharpnessCase::CaseI, 1.0, 1.0).unwrap();
        // s = 1, k = -1: phi(t) = (1+t)^{-1}
        for &t in &[0.1, 0.7, 3.0, 50.0] {
            assert!(rel_err(profile.eval(t), 1.0 / (1.0 + t)) < 1e-14);
        }
        assert!(profile.support_radius().is_infinite());
    }

    #[test]
    fn case_ii_profile_shape() {
        let params = CknParams::new(3, 2.0, 0.5, 0.0, 0.0).unwrap();
        let profile = make_extremal(&params, SharpnessCase::CaseII, 1.0, 1.0).unwrap();
        // k = 1/1.5 = 2/3, support 1
        assert!(rel_err(profile.eval(0.5), 0.5f64.powf(2.0 / 3.0)) < 1e-14);
        assert!((profile.support_radius() - 1.0).abs() < 1e-14);
        let eps = 1e-6;
        assert_eq!(profile.eval(1.0 + eps), 0.0);
        assert!(profile.eval(1.0 - eps) > 0.0);
    }

    #[test]
    fn case_v_is_gaussian_for_hpw() {
        let params = CknParams::new(3, 2.0, 2.0, 0.0, -2.0).unwrap();
        let profile = make_extremal(&params, SharpnessCase::CaseV, 1.0, 1.0).unwrap();
        for &t in &[0.0, 0.4, 1.3, 2.8] {
            assert!(rel_err(profile.eval(t), (-t * t).exp()) < 1e-14);
        }
    }

    #[test]
    fn case_mismatch_rejected() {
        let params = case_i_params();
        assert!(matches!(
            make_extremal(&params, SharpnessCase::CaseV, 1.0, 1.0),
            Err(CknError::CaseMismatch { .. })
        ));
    }

    #[test]
    fn ode_residual_matched() {
        let params = case_i_params();
        let profile = make_extremal(&params, SharpnessCase::CaseI, 1.0, 1.0).unwrap();
        let c = profile.matched_ode_constant().unwrap();
        // (1+t)^{-1}: phi' = -(1+t)^{-2}, exponent (r-1)/(p-1) = 2, c = 1.
        assert!(rel_err(c, 1.0) < 1e-14);
        assert!(ode_residual(&params, &profile, c, 0.7).unwrap().abs() < 1e-12);

        let hpw = CknParams::new(3, 2.0, 2.0, 0.0, -2.0).unwrap();
        let gauss = make_extremal(&hpw, SharpnessCase::CaseV, 1.0, 1.0).unwrap();
        let c = gauss.matched_ode_constant().unwrap();
        assert!(rel_err(c, 2.0) < 1e-14);
        assert!(ode_residual(&hpw, &gauss, c, 1.3).unwrap().abs() < 1e-12);
    }

    #[test]
    fn ode_residual_nonextremal_is_nonzero() {
        let hpw = CknParams::new(3, 2.0, 2.0, 0.0, -2.0).unwrap();
        let bump = make_test_profile(TestProfileKind::Exp, 1.0);
        let res = ode_residual(&hpw, &bump, 1.0, 2.0).unwrap();
        assert!(res.abs() > 1e-3);
    }

    #[test]
    fn ode_residual_outside_support_rejected() {
        let params = CknParams::new(3, 2.0, 0.5, 0.0, 0.0).unwrap();
        let profile = make_extremal(&params, SharpnessCase::CaseII, 1.0, 1.0).unwrap();
        assert!(ode_residual(&params, &profile, 1.0, 1.5).is_err());
    }

    #[test]
    fn test_profile_basics() {
        let g = make_test_profile(TestProfileKind::Gaussian, 1.0);
        assert_eq!(g.eval(0.0), 1.0);
        assert_eq!(g.deriv(0.0), 0.0);
        let b = make_test_profile(TestProfileKind::PolyBump, 2.0);
        assert_eq!(b.support_radius(), 2.0);
        let p = make_test_profile(TestProfileKind::PlateauBump, 2.0);
        assert_eq!(p.eval(0.5), 1.0);
        assert_eq!(p.eval(2.5), 0.0);
        assert!(p.eval(1.5) > 0.0 && p.eval(1.5) < 1.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let params = case_i_params();
        let profiles: Vec<RadialProfile> = vec![
            make_extremal(&params, SharpnessCase::CaseI, 1.0, 1.0).unwrap(),
            make_test_profile(TestProfileKind::Gaussian, 1.3),
            make_test_profile(TestProfileKind::Exp, 0.7),
            make_test_profile(TestProfileKind::PolyBump, 2.0),
            make_test_profile(TestProfileKind::PlateauBump, 2.0),
        ];
        for profile in &profiles {
            for i in 1..=30 {
                let t = 0.05 + i as f64 * 0.06;
                if (t - profile.support_radius()).abs() < 0.05 {
                    continue;
                }
                // Keep clear of the plateau junctions where one-sided
                // smoothness makes the comparison meaningless.
                if profile.breakpoints().iter().any(|&b| (t - b).abs() < 0.05) {
                    continue;
                }
                let h = 1e-6;
                let fd = (profile.eval(t + h) - profile.eval(t - h)) / (2.0 * h);
                let an = profile.deriv(t);
                if fd.abs() < 1e-12 && an.abs() < 1e-12 {
                    continue;
                }
                assert!(
                    rel_err(an, fd) < 1e-6,
                    "{:?} at t = {t}: analytic {an}, fd {fd}",
                    profile.kind()
                );
            }
        }
    }

    #[test]
    fn dilation_scales_support() {
        let b = make_test_profile(TestProfileKind::PolyBump, 2.0);
        let d = b.dilate(0.25);
        assert_eq!(d.support_radius(), 0.5);
        assert!(rel_err(d.eval(0.1), b.eval(0.4)) < 1e-14);
        assert!(rel_err(d.deriv(0.1), b.deriv(0.4) * 4.0) < 1e-14);
    }
}
