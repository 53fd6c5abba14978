//! One-dimensional adaptive integration: a nested 7-15 Gauss--Kronrod pair
//! on finite panels, power substitutions for integrable endpoint
//! singularities, and a rational map for semi-infinite domains.
//!
//! Every weighted integral in the crate is radially reduced and evaluated
//! here; no other integration path exists.

use crate::extremals::RadialProfile;
use crate::geometry::ModelSpace;
use crate::specfun::unit_ball_volume;
use crate::{CknError, Result};

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Outcome of a quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub converged: bool,
    pub subdivisions: usize,
}

impl IntegralResult {
    /// Turn a non-converged result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(CknError::NonConvergence {
                value: self.value,
                error: self.abs_error_estimate,
                subdivisions: self.subdivisions,
            })
        }
    }
}

/// Tail behavior hint for semi-infinite domains; picks the scale of the
/// rational map t = a + L u/(1-u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    Compact,
    Exponential { rate: f64 },
    StretchedExponential { rate: f64, power: f64 },
    Power,
}

impl Decay {
    fn map_scale(&self) -> f64 {
        match *self {
            Decay::Exponential { rate } if rate > 0.0 => 1.0 / rate,
            Decay::StretchedExponential { rate, power } if rate > 0.0 && power > 0.0 => {
                rate.powf(-1.0 / power)
            }
            _ => 1.0,
        }
    }
}

/// Description of an integral over (lower, upper).
#[derive(Debug, Clone)]
pub struct QuadSpec {
    pub lower: f64,
    /// `f64::INFINITY` marks a semi-infinite domain.
    pub upper: f64,
    /// Known power behavior t^sigma of the integrand at the lower endpoint;
    /// 0 means "smooth or unknown" (a probe refines it).
    pub singular_power_lower: f64,
    /// Same at a finite upper endpoint, in powers of (upper - t).
    pub singular_power_upper: f64,
    pub decay: Decay,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Interior points the panels must not straddle (support radii, kinks).
    pub breakpoints: Vec<f64>,
}

impl QuadSpec {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            upper,
            singular_power_lower: 0.0,
            singular_power_upper: 0.0,
            decay: Decay::Compact,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_decay(mut self, decay: Decay) -> Self {
        self.decay = decay;
        self
    }

    pub fn with_singular_lower(mut self, sigma: f64) -> Self {
        self.singular_power_lower = sigma;
        self
    }

    pub fn with_singular_upper(mut self, sigma: f64) -> Self {
        self.singular_power_upper = sigma;
        self
    }

    pub fn with_breakpoints(mut self, mut bp: Vec<f64>) -> Self {
        bp.retain(|x| x.is_finite());
        bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bp.dedup();
        self.breakpoints = bp;
        self
    }

    pub fn with_tolerances(mut self, rel: f64, abs: f64) -> Self {
        self.rel_tol = rel;
        self.abs_tol = abs;
        self
    }
}

fn rescale_error(err: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut e = err.abs();
    if result_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / result_asc).powf(1.5);
        e = if scale < 1.0 { result_asc * scale } else { result_asc };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * result_abs);
    }
    e
}

/// One 15-point Kronrod panel on [a, b]; returns (value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut result_gauss = 0.0;
    let mut result_kronrod = fc * WGK[7];
    let mut result_abs = result_kronrod.abs();
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let sum = f1 + f2;
        result_kronrod += WGK[j] * sum;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * sum;
        }
    }
    result_gauss += WG[3] * fc;

    let mean = result_kronrod * 0.5;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = result_kronrod * half;
    let err = rescale_error(
        (result_kronrod - result_gauss) * half,
        result_abs * half.abs(),
        result_asc * half.abs(),
    );
    (value, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive bisection on a finite interval. `budget` counts panel
/// evaluations shared across segments of one integral.
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> IntegralResult {
    let (v, e) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, value: v, error: e }];
    let mut used = 1usize;

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if err <= tol {
            *budget = budget.saturating_sub(used);
            return IntegralResult {
                value: total,
                abs_error_estimate: err,
                converged: true,
                subdivisions: used,
            };
        }
        if used + 2 > *budget {
            *budget = 0;
            return IntegralResult {
                value: total,
                abs_error_estimate: err,
                converged: false,
                subdivisions: used,
            };
        }
        // Split the worst panel.
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let Panel { a, b, .. } = panels[worst];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            // Interval at machine resolution; accept what we have.
            *budget = budget.saturating_sub(used);
            let total: f64 = panels.iter().map(|p| p.value).sum();
            let err: f64 = panels.iter().map(|p| p.error).sum();
            return IntegralResult {
                value: total,
                abs_error_estimate: err,
                converged: err <= abs_tol.max(rel_tol * total.abs()) * 50.0,
                subdivisions: used,
            };
        }
        let (v1, e1) = gk15(f, a, m);
        let (v2, e2) = gk15(f, m, b);
        used += 2;
        panels[worst] = Panel { a, b: m, value: v1, error: e1 };
        panels.push(Panel { a: m, b, value: v2, error: e2 });
    }
}

/// Estimate the local power-law exponent of `f` approaching `point` from
/// inside the interval of length `span`. Returns None when the behavior is
/// not a clean power (e.g. logarithmic factors or a vanishing integrand).
fn probe_exponent<F: Fn(f64) -> f64>(f: &F, point: f64, inward: f64, span: f64) -> Option<f64> {
    let d0 = span.min(1.0) * 1e-7;
    let mut slopes = Vec::new();
    for k in 0..3 {
        let d1 = d0 * 4f64.powi(k);
        let d2 = 2.0 * d1;
        let f1 = f(point + inward * d1);
        let f2 = f(point + inward * d2);
        if !f1.is_finite() || !f2.is_finite() {
            return Some(f64::NEG_INFINITY);
        }
        if f1 == 0.0 || f2 == 0.0 || (f1 < 0.0) != (f2 < 0.0) {
            return None;
        }
        slopes.push((f2.abs() / f1.abs()).ln() / std::f64::consts::LN_2);
    }
    let spread = slopes
        .iter()
        .fold(0.0f64, |acc, s| acc.max((s - slopes[0]).abs()));
    if spread < 0.05 {
        // The analytic factor next to d^sigma biases each log-slope by
        // O(d); the bias quadruples between probe scales, so one
        // Richardson step removes it.
        Some(slopes[0] + (slopes[0] - slopes[1]) / 3.0)
    } else {
        None
    }
}

/// Adaptive estimate of ∫ f over the domain described by `spec`.
///
/// The result carries its own convergence flag; callers that must have a
/// converged value chain `.require_converged()`.
pub fn integrate_lenient<F: Fn(f64) -> f64>(f: F, spec: &QuadSpec) -> Result<IntegralResult> {
    let a = spec.lower;
    let b = spec.upper;
    if !(a >= 0.0) || !(b > a) {
        return Err(CknError::InvalidParameter(format!(
            "integration bounds ({a}, {b}) invalid"
        )));
    }
    if spec.singular_power_lower <= -1.0 {
        return Err(CknError::SingularityTooStrong { sigma: spec.singular_power_lower });
    }
    if b.is_finite() && spec.singular_power_upper <= -1.0 {
        return Err(CknError::SingularityTooStrong { sigma: spec.singular_power_upper });
    }

    let finite_span = if b.is_finite() { b - a } else { 1.0 };

    // Resolve the endpoint exponents: trust a caller hint, otherwise probe.
    let resolve = |hint: f64, probed: Option<f64>| -> Result<f64> {
        if let Some(s) = probed {
            if s <= -0.999 {
                return Err(CknError::SingularityTooStrong { sigma: s });
            }
        }
        if hint != 0.0 {
            return Ok(hint);
        }
        match probed {
            Some(s) if s < -0.05 => Ok(s),
            _ => Ok(0.0),
        }
    };
    let sigma_lower = resolve(
        spec.singular_power_lower,
        probe_exponent(&f, a, 1.0, finite_span),
    )?;
    let sigma_upper = if b.is_finite() {
        resolve(
            spec.singular_power_upper,
            probe_exponent(&f, b, -1.0, finite_span),
        )?
    } else {
        0.0
    };

    // Segment boundaries: endpoints plus interior breakpoints.
    let mut points = vec![a];
    for &x in &spec.breakpoints {
        if x > a && x < b {
            points.push(x);
        }
    }
    let tail_scale = spec.decay.map_scale();
    if !b.is_finite() && points.len() == 1 {
        // Give the singular/smooth head its own finite segment.
        points.push(a + tail_scale);
    }
    points.push(b);

    let nseg = points.len() - 1;
    let mut budget = spec.max_subdivisions;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut used = 0usize;
    let mut all_converged = true;
    let seg_abs = spec.abs_tol / nseg as f64;

    for i in 0..nseg {
        let (lo, hi) = (points[i], points[i + 1]);
        let first = i == 0;
        let last = i == nseg - 1;
        let res = if !hi.is_finite() {
            // Rational map onto (0,1); a lower singularity at lo (only
            // possible when this is also the first segment) survives the
            // map with the same exponent, so reuse the power substitution.
            let scale = tail_scale;
            let g = |u: f64| f(lo + scale * u / (1.0 - u)) * scale / ((1.0 - u) * (1.0 - u));
            let sig = if first { sigma_lower } else { 0.0 };
            integrate_power_sub(&g, 0.0, 1.0, sig, 0.0, seg_abs, spec.rel_tol, &mut budget)
        } else {
            let sl = if first { sigma_lower } else { 0.0 };
            let su = if last { sigma_upper } else { 0.0 };
            integrate_power_sub(&f, lo, hi, sl, su, seg_abs, spec.rel_tol, &mut budget)
        };
        value += res.value;
        error += res.abs_error_estimate;
        used += res.subdivisions;
        all_converged &= res.converged;
    }

    let converged = all_converged && error <= spec.abs_tol.max(spec.rel_tol * value.abs());
    Ok(IntegralResult { value, abs_error_estimate: error, converged, subdivisions: used })
}

/// As [`integrate_lenient`], but a failure to converge within budget is an
/// error.
pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &QuadSpec) -> Result<IntegralResult> {
    integrate_lenient(f, spec)?.require_converged()
}

/// Analytic mass of f over the last `dcut` of distance to a singular
/// endpoint, from a two-term power-law fit f(d) ≈ C d^σ + C₁ d^{σ+1}
/// calibrated at distances dcut and 2·dcut. Returns (mass, error estimate);
/// (0, 0) when the samples do not support the fit.
fn endpoint_tail_mass<G: Fn(f64) -> f64>(
    f_at_distance: &G,
    sigma: f64,
    dcut: f64,
) -> (f64, f64) {
    let f1 = f_at_distance(dcut);
    let f2 = f_at_distance(2.0 * dcut);
    if !f1.is_finite() || !f2.is_finite() {
        return (0.0, 0.0);
    }
    let u = f1 * dcut.powf(-sigma);
    let v = f2 * (2.0 * dcut).powf(-sigma);
    let lead = (2.0 * u - v) / (1.0 + sigma);
    let corr = (v - u) / (2.0 + sigma);
    let scale = dcut.powf(1.0 + sigma);
    // Truncation is second order in the expansion; estimate the missing
    // d^{σ+2} term as corr²/lead (i.e. assuming geometric decay of the
    // coefficients), plus the cancellation noise floor of the two samples.
    let truncation = corr * corr / lead.abs().max(1e-300);
    let noise = (lead.abs() + corr.abs()) * 3e-10;
    (scale * (lead + corr), scale * (truncation.abs() + noise))
}

/// Integrate on finite [a, b] with power substitutions regularizing
/// t^sigma endpoint behavior. sigma = 0 means plain adaptive panels.
///
/// For a negative sigma at an endpoint with nonzero coordinate, the
/// integrand's own computation of the distance to that endpoint loses all
/// precision within an ulp of it, so the substituted integral stops at a
/// distance cutoff and the remaining mass comes from [`endpoint_tail_mass`].
#[allow(clippy::too_many_arguments)]
fn integrate_power_sub<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    sigma_lower: f64,
    sigma_upper: f64,
    abs_tol: f64,
    rel_tol: f64,
    budget: &mut usize,
) -> IntegralResult {
    let span = b - a;
    match (sigma_lower != 0.0, sigma_upper != 0.0) {
        (false, false) => adapt(f, a, b, abs_tol, rel_tol, budget),
        (true, false) => {
            let m = (2.0 / (1.0 + sigma_lower)).max(1.0);
            let g = |v: f64| {
                let t = a + span * v.powf(m);
                f(t) * span * m * v.powf(m - 1.0)
            };
            let dcut = a.abs().max(span) * 1e-6;
            if sigma_lower < 0.0 && a != 0.0 && dcut < 0.25 * span {
                let (tail, tail_err) =
                    endpoint_tail_mass(&|d: f64| f(a + d), sigma_lower, dcut);
                let vcut = (dcut / span).powf(1.0 / m);
                let mut res = adapt(&g, vcut, 1.0, abs_tol, rel_tol, budget);
                res.value += tail;
                res.abs_error_estimate += tail_err;
                res
            } else {
                adapt(&g, 0.0, 1.0, abs_tol, rel_tol, budget)
            }
        }
        (false, true) => {
            let m = (2.0 / (1.0 + sigma_upper)).max(1.0);
            let g = |v: f64| {
                let t = b - span * v.powf(m);
                f(t) * span * m * v.powf(m - 1.0)
            };
            let dcut = b.abs().max(span) * 1e-6;
            if sigma_upper < 0.0 && dcut < 0.25 * span {
                let (tail, tail_err) =
                    endpoint_tail_mass(&|d: f64| f(b - d), sigma_upper, dcut);
                let vcut = (dcut / span).powf(1.0 / m);
                let mut res = adapt(&g, vcut, 1.0, abs_tol, rel_tol, budget);
                res.value += tail;
                res.abs_error_estimate += tail_err;
                res
            } else {
                adapt(&g, 0.0, 1.0, abs_tol, rel_tol, budget)
            }
        }
        (true, true) => {
            // Both endpoints singular: split at the midpoint.
            let mid = 0.5 * (a + b);
            let r1 = integrate_power_sub(f, a, mid, sigma_lower, 0.0, 0.5 * abs_tol, rel_tol, budget);
            let r2 = integrate_power_sub(f, mid, b, 0.0, sigma_upper, 0.5 * abs_tol, rel_tol, budget);
            IntegralResult {
                value: r1.value + r2.value,
                abs_error_estimate: r1.abs_error_estimate + r2.abs_error_estimate,
                converged: r1.converged && r2.converged,
                subdivisions: r1.subdivisions + r2.subdivisions,
            }
        }
    }
}

/// Weighted radial integral over a model space:
/// n·ω_n·∫ transform(φ(t))·t^{n-1+power}·J_b(t) dt on the profile support.
pub fn integrate_radial<F: Fn(f64) -> f64>(
    space: &ModelSpace,
    power: f64,
    profile: &RadialProfile,
    transform: F,
) -> Result<IntegralResult> {
    integrate_radial_fn(space, power, profile, |t| transform(profile.eval(t)))
}

/// As [`integrate_radial`], but with an arbitrary integrand of t; the
/// profile only supplies the domain metadata (support, breakpoints, decay).
pub fn integrate_radial_fn<F: Fn(f64) -> f64>(
    space: &ModelSpace,
    power: f64,
    profile: &RadialProfile,
    integrand: F,
) -> Result<IntegralResult> {
    let n = space.n;
    let base_power = (n - 1) as f64 + power;
    let f = |t: f64| integrand(t) * t.powf(base_power) * space.density_jb(t);

    let support = profile.support_radius();
    let mut spec = QuadSpec::new(0.0, support)
        .with_breakpoints(profile.breakpoints().to_vec())
        .with_decay(profile.decay());
    if support.is_finite() {
        spec.decay = Decay::Compact;
    }
    let res = integrate_lenient(f, &spec)?;
    let scale = n as f64 * unit_ball_volume(n)?;
    Ok(IntegralResult {
        value: scale * res.value,
        abs_error_estimate: scale * res.abs_error_estimate,
        converged: res.converged,
        subdivisions: res.subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremals::{make_test_profile, TestProfileKind};
    use crate::geometry::ModelSpace;
    use std::f64::consts::PI;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn polynomial_exactness() {
        for k in 0..=8 {
            let spec = QuadSpec::new(0.0, 1.0);
            let res = integrate(|t| t.powi(k), &spec).unwrap();
            assert!(
                rel_err(res.value, 1.0 / (k as f64 + 1.0)) < 1e-12,
                "t^{k}: {}",
                res.value
            );
        }
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let spec = QuadSpec::new(0.0, 1.0).with_singular_lower(-0.5);
        let res = integrate(|t| t.powf(-0.5), &spec).unwrap();
        assert!(rel_err(res.value, 2.0) < 1e-10);
        // Probe-only path (no hint) must find the same answer.
        let spec = QuadSpec::new(0.0, 1.0);
        let res = integrate(|t| t.powf(-0.5), &spec).unwrap();
        assert!(rel_err(res.value, 2.0) < 1e-10);
    }

    #[test]
    fn upper_endpoint_singularity() {
        // ∫_0^1 (1-t)^{-2/3} dt = 3
        let spec = QuadSpec::new(0.0, 1.0).with_singular_upper(-2.0 / 3.0);
        let res = integrate(|t| (1.0 - t).powf(-2.0 / 3.0), &spec).unwrap();
        assert!(rel_err(res.value, 3.0) < 1e-10);
    }

    #[test]
    fn exponential_tail() {
        let spec = QuadSpec::new(0.0, f64::INFINITY)
            .with_decay(Decay::Exponential { rate: 1.0 });
        let res = integrate(|t| (-t).exp(), &spec).unwrap();
        assert!(rel_err(res.value, 1.0) < 1e-10);
    }

    #[test]
    fn gaussian_moment() {
        // 4π ∫ e^{-2t^2} t^2 dt = (π/2)^{3/2}
        let spec = QuadSpec::new(0.0, f64::INFINITY)
            .with_decay(Decay::StretchedExponential { rate: 2.0, power: 2.0 });
        let res = integrate(|t| (-2.0 * t * t).exp() * t * t, &spec).unwrap();
        let expected = (PI / 2.0).powf(1.5);
        assert!(rel_err(4.0 * PI * res.value, expected) < 1e-10);
    }

    #[test]
    fn too_strong_singularity_rejected() {
        let spec = QuadSpec::new(0.0, 1.0);
        match integrate(|t| 1.0 / t, &spec) {
            Err(CknError::SingularityTooStrong { .. }) => {}
            other => panic!("expected SingularityTooStrong, got {other:?}"),
        }
        let spec = QuadSpec::new(0.0, 1.0).with_singular_lower(-1.2);
        assert!(integrate(|t| t.powf(-1.2), &spec).is_err());
    }

    #[test]
    fn domain_split_additivity() {
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let f = |t: f64| (-t).exp() * (1.0 + t).ln();
        let full = integrate(
            f,
            &QuadSpec::new(0.0, f64::INFINITY).with_decay(Decay::Exponential { rate: 1.0 }),
        )
        .unwrap();
        for _ in 0..20 {
            let c = 0.05 + 8.0 * next();
            let left = integrate(f, &QuadSpec::new(0.0, c)).unwrap();
            let right = integrate(
                f,
                &QuadSpec::new(c, f64::INFINITY).with_decay(Decay::Exponential { rate: 1.0 }),
            )
            .unwrap();
            let combined_err =
                full.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate;
            assert!(
                (left.value + right.value - full.value).abs() <= combined_err.max(1e-12),
                "c = {c}"
            );
        }
    }

    #[test]
    fn determinism() {
        let spec = QuadSpec::new(0.0, f64::INFINITY)
            .with_decay(Decay::Exponential { rate: 0.5 });
        let a = integrate(|t| (-0.5 * t).exp() * t.sin().abs(), &spec).unwrap();
        let b = integrate(|t| (-0.5 * t).exp() * t.sin().abs(), &spec).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn radial_gaussian_oracle() {
        let space = ModelSpace::euclidean(3);
        let profile = make_test_profile(TestProfileKind::Gaussian, 1.0);
        // ∫_{R^3} e^{-2|x|^2} dx = (π/2)^{3/2}
        let res = integrate_radial(&space, 0.0, &profile, |u| u * u).unwrap();
        assert!(rel_err(res.value, (PI / 2.0).powf(1.5)) < 1e-10);
    }

    #[test]
    fn radial_beta_type_oracle() {
        // 4π ∫_0^∞ (1+t)^{-3} t dt = 2π, via power -1 and transform u^3 of
        // the profile (1+t)^{-1}.
        let space = ModelSpace::euclidean(3);
        let params = crate::params::CknParams::new(3, 2.0, 3.0, 0.0, 0.0).unwrap();
        let profile = crate::extremals::make_extremal(
            &params,
            crate::params::SharpnessCase::CaseI,
            1.0,
            1.0,
        )
        .unwrap();
        let res = integrate_radial(&space, -1.0, &profile, |u| u.powi(3)).unwrap();
        assert!(rel_err(res.value, 2.0 * PI) < 1e-9);
    }

    #[test]
    fn radial_indicator_matches_ball_volume() {
        let space = ModelSpace::new(3, 1.0).unwrap();
        let profile = make_test_profile(TestProfileKind::PolyBump, 2.0);
        let res = integrate_radial(&space, 0.0, &profile, |_| 1.0).unwrap();
        let vol = space.ball_volume(2.0).unwrap();
        assert!(rel_err(res.value, vol) < 1e-9);
    }
}
