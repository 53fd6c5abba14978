//! Rigidity machinery: the closed-form Euclidean profile integrals T(λ),
//! their curved counterparts F(λ) by quadrature, the δ exponent, ODE
//! residuals for T, the level-set derivative formula for G(λ) = ∫(λ−f)₊^q dμ,
//! and F/T comparison scans.
//!
//! The computable dichotomy on the model family: F ≡ T exactly when b = 0,
//! and F > T pointwise when b > 0, since J_b ≥ 1 multiplies a positive
//! integrand.

use crate::geometry::ModelSpace;
use crate::params::CknParams;
use crate::quadrature::{integrate, Decay, IntegralResult, QuadSpec};
use crate::specfun::{beta_fn, gamma_fn, unit_ball_volume};
use crate::{CknError, Result};

/// Which of the two T/F families is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TCase {
    /// r = p, profile e^{-λ t^s}, full support.
    Exp,
    /// 0 < r < p, profile (λ - t^s)₊^{(p-1)/(p-r)}, compact support.
    Compact,
}

const EQ_TOL: f64 = 1e-12;

fn require_exp_case(params: &CknParams) -> Result<(f64, f64)> {
    let s = params.s();
    let exponent = params.n as f64 - params.gamma() * params.p;
    if (params.r - params.p).abs() > EQ_TOL {
        return Err(CknError::InvalidParameter(format!(
            "exp-case T requires r = p, got r = {}, p = {}",
            params.r, params.p
        )));
    }
    if !(s > 0.0) {
        return Err(CknError::InvalidParameter(format!("exp-case T requires s > 0, got {s}")));
    }
    if !(exponent > 0.0) {
        return Err(CknError::InvalidParameter(format!(
            "exp-case T requires n - γp > 0, got {exponent}"
        )));
    }
    Ok((s, exponent))
}

fn require_compact_case(params: &CknParams) -> Result<(f64, f64, f64)> {
    let s = params.s();
    if !(params.r > 0.0 && params.r < params.p - EQ_TOL) {
        return Err(CknError::InvalidParameter(format!(
            "compact-case T requires 0 < r < p, got r = {}, p = {}",
            params.r, params.p
        )));
    }
    if !(s > 0.0) {
        return Err(CknError::InvalidParameter(format!(
            "compact-case T requires s > 0, got {s}"
        )));
    }
    let kappa = params.r * (params.p - 1.0) / (params.p - params.r);
    let head = (params.n as f64 - params.gamma() * params.r) / s;
    if !(head > 0.0) {
        return Err(CknError::InvalidParameter(format!(
            "compact-case T requires (n - γr)/s > 0, got {head}"
        )));
    }
    Ok((s, kappa, head))
}

/// T(λ) = ∫_{ℝⁿ} e^{-pλ|x|^s} |x|^{-γp} dx, in closed form:
/// (pλ)^{-(n-γp)/s}·(nω_n/s)·Γ((n-γp)/s).
pub fn t_lambda_exp(params: &CknParams, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(CknError::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let (s, exponent) = require_exp_case(params)?;
    let n = params.n;
    let shape = exponent / s;
    Ok((params.p * lambda).powf(-shape) * n as f64 * unit_ball_volume(n)? / s
        * gamma_fn(shape)?)
}

/// T(λ) = ∫_{ℝⁿ} (λ - |x|^s)₊^{r(p-1)/(p-r)} |x|^{-γr} dx, in closed form:
/// λ^δ·(nω_n/s)·B(r(p-1)/(p-r) + 1, (n-γr)/s).
pub fn t_lambda_compact(params: &CknParams, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(CknError::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let (s, kappa, head) = require_compact_case(params)?;
    let n = params.n;
    let delta = head + kappa;
    Ok(lambda.powf(delta) * n as f64 * unit_ball_volume(n)? / s * beta_fn(kappa + 1.0, head)?)
}

/// δ = (n - rγ)/s + r(p-1)/(p-r), the homogeneity exponent of the
/// compact-case T.
pub fn delta_exponent(params: &CknParams) -> Result<f64> {
    let s = params.s();
    if (params.r - params.p).abs() <= EQ_TOL {
        return Err(CknError::InvalidParameter("delta_exponent requires r != p".into()));
    }
    if s.abs() <= EQ_TOL {
        return Err(CknError::InvalidParameter("delta_exponent requires s != 0".into()));
    }
    Ok((params.n as f64 - params.r * params.gamma()) / s
        + params.r * (params.p - 1.0) / (params.p - params.r))
}

/// Residual of the homogeneity ODE of T at λ, by central differences:
/// λT' + ((n-γp)/s)·T for the exp case, λT' − δ·T for the compact case.
/// Zero analytically; finite-difference limited in practice.
pub fn ode_t_residual(params: &CknParams, lambda: f64, which: TCase) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(CknError::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let h = 1e-4 * lambda;
    let t = |l: f64| match which {
        TCase::Exp => t_lambda_exp(params, l),
        TCase::Compact => t_lambda_compact(params, l),
    };
    let tp = (t(lambda + h)? - t(lambda - h)?) / (2.0 * h);
    let t0 = t(lambda)?;
    match which {
        TCase::Exp => {
            let (s, exponent) = require_exp_case(params)?;
            Ok(lambda * tp + exponent / s * t0)
        }
        TCase::Compact => Ok(lambda * tp - delta_exponent(params)? * t0),
    }
}

/// F(λ): the same profile integral on a model space of curvature -b.
///
/// Exp case: ∫ e^{-pλ d^s} d^{-γp} dV; compact case:
/// ∫ (λ - d^s)₊^{r(p-1)/(p-r)} d^{-γr} dV. Equals T(λ) exactly at b = 0.
pub fn f_lambda(
    params: &CknParams,
    space: &ModelSpace,
    lambda: f64,
    which: TCase,
) -> Result<IntegralResult> {
    if !(lambda > 0.0) {
        return Err(CknError::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    if space.n != params.n {
        return Err(CknError::InvalidParameter(format!(
            "dimension mismatch: params n = {}, space n = {}",
            params.n, space.n
        )));
    }
    let n = params.n;
    let scale = n as f64 * unit_ball_volume(n)?;
    match which {
        TCase::Exp => {
            let (s, exponent) = require_exp_case(params)?;
            let rate = params.p * lambda;
            // The volume density grows like e^{(n-1)√b t}; a profile tail
            // decaying slower than that makes F infinite.
            if space.b > 0.0 {
                let growth = (n - 1) as f64 * space.b.sqrt();
                if s < 1.0 || (s == 1.0 && rate <= growth) {
                    return Err(CknError::NonIntegrable(format!(
                        "exp-case F diverges: decay pλt^{s} cannot beat volume growth {growth}·t"
                    )));
                }
            }
            let decay = if s == 1.0 && space.b > 0.0 {
                Decay::Exponential { rate: rate - (n - 1) as f64 * space.b.sqrt() }
            } else {
                Decay::StretchedExponential { rate, power: s }
            };
            let head = exponent - 1.0;
            let spec = QuadSpec::new(0.0, f64::INFINITY)
                .with_decay(decay)
                .with_singular_lower(head.min(0.0));
            let res = integrate(
                |t| t.powf(head) * (-rate * t.powf(s)).exp() * space.density_jb(t),
                &spec,
            )?;
            Ok(IntegralResult { value: scale * res.value, ..res })
        }
        TCase::Compact => {
            let (s, kappa, head) = require_compact_case(params)?;
            let support = lambda.powf(1.0 / s);
            let low = head * s - 1.0;
            let spec = QuadSpec::new(0.0, support)
                .with_singular_lower(low.min(0.0))
                .with_singular_upper(if kappa < 1.0 { kappa } else { 0.0 });
            let res = integrate(
                |t| {
                    let w = lambda - t.powf(s);
                    if w <= 0.0 {
                        0.0
                    } else {
                        w.powf(kappa) * t.powf(low) * space.density_jb(t)
                    }
                },
                &spec,
            )?;
            Ok(IntegralResult { value: scale * res.value, ..res })
        }
    }
}

/// Discrete measures the level-set derivative check can integrate against.
#[derive(Debug, Clone, Copy)]
pub enum Measure {
    /// Lebesgue measure on the interval [a, b].
    Length { a: f64, b: f64 },
    /// Radial measure n·ω_n·t^{n-1}·J_b(t) dt on [0, upper].
    Radial { space: ModelSpace, upper: f64 },
}

impl Measure {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            Measure::Length { a, b } => (a, b),
            Measure::Radial { upper, .. } => (0.0, upper),
        }
    }

    fn density(&self) -> Result<Box<dyn Fn(f64) -> f64>> {
        match *self {
            Measure::Length { .. } => Ok(Box::new(move |_t: f64| 1.0)),
            Measure::Radial { space, .. } => {
                let scale = space.n as f64 * unit_ball_volume(space.n)?;
                Ok(Box::new(move |t: f64| {
                    scale * t.powf((space.n - 1) as f64) * space.density_jb(t)
                }))
            }
        }
    }
}

/// Defect of G'(λ) = q·∫_{f<λ}(λ-f)^{q-1} dμ for G(λ) = ∫(λ-f)₊^q dμ,
/// comparing the formula against a central difference of G.
///
/// `f` must be continuous and nondecreasing on the measure's support; the
/// sublevel boundary is located by bisection.
pub fn g_derivative_check(
    q: f64,
    f: impl Fn(f64) -> f64,
    measure: &Measure,
    lambda: f64,
) -> Result<f64> {
    if !(q > 0.0) || q == 1.0 {
        return Err(CknError::InvalidParameter(format!(
            "g_derivative_check requires q in (0,1) ∪ (1,∞), got {q}"
        )));
    }
    let (a, b) = measure.bounds();
    if !(b > a) {
        return Err(CknError::InvalidParameter("empty measure support".into()));
    }
    let density = measure.density()?;

    // Bisection for the sublevel boundary {f = l} under monotone f. The
    // kink of the integrand sits exactly there, so every evaluation of G
    // must re-locate it for its own level.
    let boundary_for = |l: f64| -> f64 {
        if f(b) < l {
            b
        } else if f(a) >= l {
            a
        } else {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < l {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };
    let boundary = boundary_for(lambda);

    let g_at = |l: f64| -> Result<f64> {
        let spec = QuadSpec::new(a, b).with_breakpoints(vec![boundary_for(l)]);
        Ok(integrate(
            |x| {
                let w = l - f(x);
                if w > 0.0 {
                    w.powf(q) * density(x)
                } else {
                    0.0
                }
            },
            &spec,
        )?
        .value)
    };
    let h = 1e-4 * lambda;
    let fd = (g_at(lambda + h)? - g_at(lambda - h)?) / (2.0 * h);

    if boundary <= a {
        return Ok(fd);
    }
    let spec = QuadSpec::new(a, boundary).with_singular_upper(if q < 1.0 { q - 1.0 } else { 0.0 });
    let formula = q * integrate(
        |x| {
            let w = lambda - f(x);
            if w > 0.0 {
                w.powf(q - 1.0) * density(x)
            } else {
                0.0
            }
        },
        &spec,
    )?
    .value;
    Ok(fd - formula)
}

/// Tabulated F/T comparison over a λ grid.
#[derive(Debug, Clone)]
pub struct RigidityProbe {
    pub params: CknParams,
    pub space: ModelSpace,
    pub which: TCase,
    pub lambda_grid: Vec<f64>,
    pub t_values: Vec<f64>,
    pub f_values: Vec<f64>,
    /// F(λ)/T(λ) per grid point; identically 1 exactly when b = 0.
    pub ratio_values: Vec<f64>,
}

pub fn ft_ratio_scan(
    params: &CknParams,
    space: &ModelSpace,
    lambda_grid: &[f64],
    which: TCase,
) -> Result<RigidityProbe> {
    if lambda_grid.is_empty() {
        return Err(CknError::InvalidParameter("empty lambda grid".into()));
    }
    if lambda_grid.windows(2).any(|w| !(w[1] > w[0])) || !(lambda_grid[0] > 0.0) {
        return Err(CknError::InvalidParameter(
            "lambda grid must be positive and strictly increasing".into(),
        ));
    }
    let mut t_values = Vec::with_capacity(lambda_grid.len());
    let mut f_values = Vec::with_capacity(lambda_grid.len());
    let mut ratio_values = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let t = match which {
            TCase::Exp => t_lambda_exp(params, lambda)?,
            TCase::Compact => t_lambda_compact(params, lambda)?,
        };
        let f = f_lambda(params, space, lambda, which)?.value;
        t_values.push(t);
        f_values.push(f);
        ratio_values.push(f / t);
    }
    Ok(RigidityProbe {
        params: params.clone(),
        space: *space,
        which,
        lambda_grid: lambda_grid.to_vec(),
        t_values,
        f_values,
        ratio_values,
    })
}
