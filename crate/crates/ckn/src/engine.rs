//! The inequality core: the three weighted functionals, the convexity
//! remainder R_p and the map D_p, the refined Hölder identity, the exact
//! main equality and its curvature-quantitative corollaries, and a
//! derivative-free ratio-maximization oracle.
//!
//! One convention fixed here once: the cross term of R_p carries the
//! |·|^{p-2} weight on its *first* argument, and the refined Hölder
//! identity is exact only when that weighted slot holds the D_p side.
//! All identity evaluations below therefore pass the D_p-normalized
//! function first and the plain L^p-normalized function second; with any
//! other pairing the "identity" has an O(1) defect for p ≠ 2.

use crate::extremals::{make_extremal, ProfileKind, RadialProfile};
use crate::geometry::{db, ModelSpace};
use crate::params::{CknParams, SharpnessCase};
use crate::quadrature::{
    integrate, integrate_radial, integrate_radial_fn, Decay, IntegralResult, QuadSpec,
};
use crate::{CknError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// R_p(ξ, η) = (1/p)|η|^p + ((p-1)/p)|ξ|^p − |ξ|^{p-2}⟨ξ, η⟩.
///
/// Nonnegative by convexity of |·|^p, zero exactly at ξ = η.
pub fn remainder_rp(p: f64, xi: &[f64], eta: &[f64]) -> f64 {
    assert!(p > 1.0, "remainder_rp requires p > 1");
    let nxi = norm(xi);
    let neta = norm(eta);
    let cross = if nxi == 0.0 { 0.0 } else { nxi.powf(p - 2.0) * dot(xi, eta) };
    neta.powf(p) / p + (p - 1.0) / p * nxi.powf(p) - cross
}

/// The dual form of R_p as a Taylor remainder of |x|^p/p along the
/// segment: ∫₀¹ τ·⟨D²(|·|^p/p)(τξ + (1−τ)η)(ξ−η), ξ−η⟩ dτ, by quadrature.
///
/// For scalars this collapses to (p−1)·|ξ−η|²·∫₀¹ |τξ + (1−τ)η|^{p-2} τ dτ;
/// for vectors the Hessian keeps its rank-one (p−2)-part, without which
/// the two forms of R_p disagree off the colinear case. Agrees with
/// [`remainder_rp`] analytically; for p < 2 the integrand blows up where
/// the segment passes through the origin, which the quadrature treats as
/// an interior breakpoint.
pub fn rp_integral_form(p: f64, xi: &[f64], eta: &[f64]) -> Result<f64> {
    if !(p > 1.0) {
        return Err(CknError::InvalidParameter(format!(
            "rp_integral_form requires p > 1, got {p}"
        )));
    }
    let diff: Vec<f64> = xi.iter().zip(eta).map(|(x, y)| x - y).collect();
    let d2 = dot(&diff, &diff);
    if d2 == 0.0 {
        return Ok(0.0);
    }
    // |η + τ(ξ-η)|² is quadratic in τ; its minimizer marks the nearest
    // approach to the origin, singular for p < 2 when the distance is 0.
    let tstar = -dot(eta, &diff) / d2;
    let mut spec = QuadSpec::new(0.0, 1.0);
    if tstar > 0.0 && tstar < 1.0 {
        spec = spec.with_breakpoints(vec![tstar]);
    }
    let hessian_form = |tau: f64| -> f64 {
        let mut v2 = 0.0;
        let mut vd = 0.0;
        for ((x, y), d) in xi.iter().zip(eta).zip(&diff) {
            let v = tau * x + (1.0 - tau) * y;
            v2 += v * v;
            vd += v * d;
        }
        if v2 == 0.0 {
            return 0.0;
        }
        v2.powf(0.5 * p - 1.0) * (d2 + (p - 2.0) * vd * vd / v2)
    };
    let res = integrate(|tau| hessian_form(tau) * tau, &spec)?;
    Ok(res.value)
}

/// D_p(g) = (g/|g|)·|g|^{1/(p-1)}, with D_p(0) = 0.
pub fn dp_map(p: f64, g: &[f64]) -> Vec<f64> {
    assert!(p > 1.0, "dp_map requires p > 1");
    let ng = norm(g);
    if ng == 0.0 {
        return vec![0.0; g.len()];
    }
    let scale = ng.powf(1.0 / (p - 1.0) - 1.0);
    g.iter().map(|x| x * scale).collect()
}

/// Defect of the refined Hölder identity on a discrete measure:
/// Σ⟨f,g⟩w − ‖f‖_p‖g‖_{p'}(1 − ΣR_p(·)w). Zero analytically.
pub fn refined_holder_residual(
    p: f64,
    f: &[Vec<f64>],
    g: &[Vec<f64>],
    weights: &[f64],
) -> f64 {
    assert!(p > 1.0, "refined_holder_residual requires p > 1");
    assert!(
        f.len() == g.len() && f.len() == weights.len() && !f.is_empty(),
        "f, g, weights must have equal nonzero length"
    );
    let pc = p / (p - 1.0);
    let norm_f = f
        .iter()
        .zip(weights)
        .map(|(v, w)| norm(v).powf(p) * w)
        .sum::<f64>()
        .powf(1.0 / p);
    let norm_g = g
        .iter()
        .zip(weights)
        .map(|(v, w)| norm(v).powf(pc) * w)
        .sum::<f64>()
        .powf(1.0 / pc);
    assert!(norm_f > 0.0 && norm_g > 0.0, "f and g must not be identically zero");

    let mut pairing = 0.0;
    let mut rp_sum = 0.0;
    let g_scale = norm_g.powf(1.0 / (p - 1.0));
    for ((fv, gv), &w) in f.iter().zip(g).zip(weights) {
        pairing += dot(fv, gv) * w;
        let xi: Vec<f64> = fv.iter().map(|x| x / norm_f).collect();
        let eta: Vec<f64> = dp_map(p, gv).iter().map(|x| x / g_scale).collect();
        // D_p side in the weighted slot; see the module note.
        rp_sum += remainder_rp(p, &eta, &xi) * w;
    }
    pairing - norm_f * norm_g * (1.0 - rp_sum)
}

/// The three weighted integrals of the inequality, with error estimates.
#[derive(Debug, Clone, Copy)]
pub struct CknFunctionals {
    /// ∫ φ^r t^{-γr} dV
    pub lhs: IntegralResult,
    /// A = ∫ |φ'|^p t^{-αp} dV
    pub grad_term: IntegralResult,
    /// B = ∫_{supp φ} φ^q t^{-β} dV, q = p(r-1)/(p-1)
    pub q_term: IntegralResult,
}

fn as_nonintegrable(err: CknError, term: &str) -> CknError {
    match err {
        CknError::NonConvergence { value, error, subdivisions } => CknError::NonIntegrable(
            format!("{term} term failed to converge: value {value}, error {error} after {subdivisions} subdivisions"),
        ),
        CknError::SingularityTooStrong { sigma } => CknError::NonIntegrable(format!(
            "{term} term has a non-integrable endpoint singularity (exponent {sigma})"
        )),
        other => other,
    }
}

/// A-priori tail check for ∫ φ^exponent · (t-power) dV over an infinite
/// support: the volume density grows like e^{(n-1)√b·t}, and the capped
/// density evaluation would otherwise turn a divergent integral into a
/// quietly finite one.
fn require_tail_decay(
    space: &ModelSpace,
    profile: &RadialProfile,
    exponent: f64,
    term: &str,
) -> Result<()> {
    if profile.support_radius().is_finite() {
        return Ok(());
    }
    if exponent <= 0.0 {
        return Err(CknError::NonIntegrable(format!(
            "{term} term diverges: exponent {exponent} on a full-support profile"
        )));
    }
    let growth = (space.n - 1) as f64 * space.b.sqrt();
    if growth == 0.0 {
        return Ok(());
    }
    let ok = match profile.decay() {
        Decay::Compact => true,
        Decay::Power => false,
        Decay::Exponential { rate } => exponent * rate > growth,
        Decay::StretchedExponential { rate, power } => {
            power > 1.0 || (power == 1.0 && exponent * rate > growth)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(CknError::NonIntegrable(format!(
            "{term} term diverges: profile decay loses to the volume growth rate {growth}"
        )))
    }
}

pub fn ckn_functionals(
    params: &CknParams,
    space: &ModelSpace,
    profile: &RadialProfile,
) -> Result<CknFunctionals> {
    if space.n != params.n {
        return Err(CknError::InvalidParameter(format!(
            "dimension mismatch: params n = {}, space n = {}",
            params.n, space.n
        )));
    }
    let r = params.r;
    let p = params.p;
    let q = params.q();
    let gamma_r = params.gamma() * r;
    require_tail_decay(space, profile, r, "lhs")?;
    require_tail_decay(space, profile, p, "gradient")?;
    require_tail_decay(space, profile, q, "q")?;

    let lhs = integrate_radial(space, -gamma_r, profile, |u| u.powf(r))
        .map_err(|e| as_nonintegrable(e, "lhs"))?;
    if !(lhs.value > 0.0) {
        return Err(CknError::DegenerateInput(
            "profile is identically zero on its support".into(),
        ));
    }
    let grad_term =
        integrate_radial_fn(space, -params.alpha * p, profile, |t| profile.deriv(t).abs().powf(p))
            .map_err(|e| as_nonintegrable(e, "gradient"))?;
    let q_term = integrate_radial(space, -params.beta, profile, |u| u.powf(q))
        .map_err(|e| as_nonintegrable(e, "q"))?;
    Ok(CknFunctionals { lhs, grad_term, q_term })
}

/// lhs / (A^{1/p} B^{1/p'}); at most the sharp constant up to quadrature
/// error, with equality exactly on the extremal families.
pub fn ckn_ratio(params: &CknParams, space: &ModelSpace, profile: &RadialProfile) -> Result<f64> {
    let f = ckn_functionals(params, space, profile)?;
    ratio_from_functionals(params, &f)
}

fn ratio_from_functionals(params: &CknParams, f: &CknFunctionals) -> Result<f64> {
    let p = params.p;
    let a = f.grad_term.value;
    let b = f.q_term.value;
    if !(a > 0.0 && b > 0.0) {
        return Err(CknError::DegenerateInput(format!(
            "vanishing denominator: grad_term = {a}, q_term = {b}"
        )));
    }
    Ok(f.lhs.value / (a.powf(1.0 / p) * b.powf((p - 1.0) / p)))
}

/// All pieces of the main equality, evaluated separately.
#[derive(Debug, Clone, Copy)]
pub struct MainIdentityParts {
    pub lhs: f64,
    /// C*·A^{1/p}·B^{1/p'}
    pub product: f64,
    /// ∫ R_p(η, ξ) dV with the normalized pair of the identity.
    pub rp_integral: f64,
    /// (1/(n-γr))·∫ φ^r t^{-γr}·(n-1)·D_b dV
    pub curvature_term: f64,
    /// lhs − [product·(1 − rp_integral) − curvature_term]; 0 analytically.
    pub residual: f64,
}

pub fn main_identity(
    params: &CknParams,
    space: &ModelSpace,
    profile: &RadialProfile,
) -> Result<MainIdentityParts> {
    let f = ckn_functionals(params, space, profile)?;
    let p = params.p;
    let r = params.r;
    let n = params.n as f64;
    let gamma_r = params.gamma() * r;
    let cstar = params.sharp_constant()?;
    let a_p = f.grad_term.value.powf(1.0 / p);
    let b_pc = f.q_term.value.powf((p - 1.0) / p);
    let product = cstar * a_p * b_pc;

    // Normalizations of the identity: ξ has unit p-norm against A^{1/p},
    // and η against B^{1/p} (the p'-norm of the underlying function raised
    // to 1/(p-1) collapses to that).
    let a_norm = a_p;
    let b_norm = f.q_term.value.powf(1.0 / p);
    let beta_pc = params.beta * (p - 1.0) / p;
    let rp_at = |t: f64| -> f64 {
        let xi = t.powf(-params.alpha) * profile.deriv(t) / a_norm;
        let phi = profile.eval(t);
        let eta = -(t.powf(-beta_pc) * phi.powf(r - 1.0)).powf(1.0 / (p - 1.0)) / b_norm;
        // 0^{p-2} is infinite for p < 2; the cross term itself vanishes
        // with η, so short-circuit it where the profile has underflowed.
        let cross = if eta == 0.0 { 0.0 } else { eta.abs().powf(p - 2.0) * eta * xi };
        xi.abs().powf(p) / p + (p - 1.0) / p * eta.abs().powf(p) - cross
    };
    let rp_integral = integrate_radial_fn(space, 0.0, profile, rp_at)
        .map_err(|e| as_nonintegrable(e, "remainder"))?
        .value;

    let curvature_term = if space.b == 0.0 {
        0.0
    } else {
        let raw = integrate_radial_fn(space, -gamma_r, profile, |t| {
            profile.eval(t).powf(r) * db(space.b, t)
        })
        .map_err(|e| as_nonintegrable(e, "curvature"))?;
        (n - 1.0) / (n - gamma_r) * raw.value
    };

    let residual = f.lhs.value - (product * (1.0 - rp_integral) - curvature_term);
    Ok(MainIdentityParts {
        lhs: f.lhs.value,
        product,
        rp_integral,
        curvature_term,
        residual,
    })
}

pub fn main_identity_residual(
    params: &CknParams,
    space: &ModelSpace,
    profile: &RadialProfile,
) -> Result<f64> {
    Ok(main_identity(params, space, profile)?.residual)
}

/// Quantitative margin C*·A^{1/p}B^{1/p'} − ∫φ^r t^{-γr}(1 + ((n-1)/(n-γr))D_b) dV.
///
/// Nonnegative up to quadrature error; reduces to the plain inequality
/// margin at b = 0.
pub fn quantitative_ckn_margin(
    params: &CknParams,
    space: &ModelSpace,
    profile: &RadialProfile,
) -> Result<f64> {
    let f = ckn_functionals(params, space, profile)?;
    let p = params.p;
    let n = params.n as f64;
    let gamma_r = params.gamma() * params.r;
    let cstar = params.sharp_constant()?;
    let product = cstar * f.grad_term.value.powf(1.0 / p) * f.q_term.value.powf((p - 1.0) / p);
    let weighted = if space.b == 0.0 {
        f.lhs.value
    } else {
        let factor = (n - 1.0) / (n - gamma_r);
        integrate_radial_fn(space, -gamma_r, profile, |t| {
            profile.eval(t).powf(params.r) * (1.0 + factor * db(space.b, t))
        })
        .map_err(|e| as_nonintegrable(e, "weighted lhs"))?
        .value
    };
    Ok(product - weighted)
}

/// Quantitative weighted Hardy margin
/// (p/(n-p-δ))^p·∫|φ'|^p t^{-δ} dV − ∫φ^p t^{-p-δ}(1 + (p(n-1)/(n-p-δ))D_b) dV.
pub fn hardy_margin(
    n: u32,
    p: f64,
    delta: f64,
    space: &ModelSpace,
    profile: &RadialProfile,
) -> Result<f64> {
    if !(p > 1.0) {
        return Err(CknError::InvalidParameter(format!("hardy_margin requires p > 1, got {p}")));
    }
    let nf = n as f64;
    if !(delta < nf - p) {
        return Err(CknError::InvalidParameter(format!(
            "hardy_margin requires delta < n - p = {}, got {delta}",
            nf - p
        )));
    }
    if space.n != n {
        return Err(CknError::InvalidParameter(format!(
            "dimension mismatch: n = {n}, space n = {}",
            space.n
        )));
    }
    let denom = nf - p - delta;
    require_tail_decay(space, profile, p, "Hardy")?;
    let grad = integrate_radial_fn(space, -delta, profile, |t| profile.deriv(t).abs().powf(p))
        .map_err(|e| as_nonintegrable(e, "Hardy gradient"))?;
    let factor = p * (nf - 1.0) / denom;
    let weighted = integrate_radial_fn(space, -p - delta, profile, |t| {
        profile.eval(t).powf(p) * (1.0 + factor * db(space.b, t))
    })
    .map_err(|e| as_nonintegrable(e, "Hardy weighted"))?;
    Ok((p / denom).powf(p) * grad.value - weighted.value)
}

// ---------------------------------------------------------------------------
// Ratio-maximization oracle
// ---------------------------------------------------------------------------

/// Nonnegative profile that is piecewise linear in log-radius: values
/// exp(w_j) at log-spaced knots, constant below the first knot, and a
/// linear descent to zero one log-step past the last.
fn knot_profile(knots: &[f64], weights: &[f64]) -> RadialProfile {
    let k = knots.len();
    let xs: Vec<f64> = knots.iter().map(|t| t.ln()).collect();
    let vs: Vec<f64> = weights.iter().map(|w| w.min(300.0).exp()).collect();
    let step = xs[1] - xs[0];
    let x_sup = xs[k - 1] + step;
    let support = x_sup.exp();

    let mut breakpoints = knots.to_vec();
    let eval_xs = xs.clone();
    let eval_vs = vs.clone();
    let eval = move |t: f64| -> f64 {
        if t <= 0.0 {
            return eval_vs[0];
        }
        let x = t.ln();
        if x <= eval_xs[0] {
            return eval_vs[0];
        }
        if x >= x_sup {
            return 0.0;
        }
        if x >= eval_xs[k - 1] {
            return eval_vs[k - 1] * (x_sup - x) / step;
        }
        let j = match eval_xs.binary_search_by(|a| a.partial_cmp(&x).unwrap()) {
            Ok(j) => return eval_vs[j],
            Err(j) => j - 1,
        };
        let frac = (x - eval_xs[j]) / (eval_xs[j + 1] - eval_xs[j]);
        eval_vs[j] + frac * (eval_vs[j + 1] - eval_vs[j])
    };
    let deriv = move |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let x = t.ln();
        if x <= xs[0] || x >= x_sup {
            return 0.0;
        }
        let slope = if x >= xs[k - 1] {
            -vs[k - 1] / step
        } else {
            let j = match xs.binary_search_by(|a| a.partial_cmp(&x).unwrap()) {
                Ok(j) => j.min(k - 2),
                Err(j) => j - 1,
            };
            (vs[j + 1] - vs[j]) / (xs[j + 1] - xs[j])
        };
        slope / t
    };
    breakpoints.push(support);
    RadialProfile::from_parts(eval, deriv, support, ProfileKind::Custom, Decay::Compact)
        .with_breakpoints(breakpoints)
}

/// Knot window: the extremal's own scale when the tuple is covered by a
/// sharpness case, a generic window otherwise.
fn knot_window(params: &CknParams) -> (f64, f64) {
    let case = params.classify_sharpness_case();
    let fallback = (1e-3, 10.0);
    if case == SharpnessCase::NotCovered {
        return fallback;
    }
    let Ok(extremal) = make_extremal(params, case, 1.0, 1.0) else {
        return fallback;
    };
    let sup = extremal.support_radius();
    if sup.is_finite() {
        return (sup * 1e-3, sup);
    }
    // Full-support extremal: put the knots where it carries mass, i.e. out
    // to the radius where it has dropped to ~1e-6, and keep the window
    // narrow enough that 16 knots resolve the log-profile's curvature.
    let drop = (1e6f64).ln();
    match extremal.decay() {
        Decay::Exponential { rate } if rate > 0.0 => {
            let r = drop / rate;
            (r / 30.0, r)
        }
        Decay::StretchedExponential { rate, power } if rate > 0.0 && power > 0.0 => {
            let r = (drop / rate).powf(1.0 / power);
            (r / 30.0, r)
        }
        _ => fallback,
    }
}

/// Initial knot weights: log-values of the matched extremal when one
/// exists, a unit Gaussian otherwise.
fn initial_weights(params: &CknParams, knots: &[f64]) -> Vec<f64> {
    let case = params.classify_sharpness_case();
    let seed_profile = match case {
        SharpnessCase::NotCovered => None,
        _ => make_extremal(params, case, 1.0, 1.0).ok(),
    };
    knots
        .iter()
        .map(|&t| match &seed_profile {
            Some(e) => {
                let v = e.eval(t);
                if v > 1e-100 {
                    v.ln().clamp(-200.0, 200.0)
                } else {
                    -200.0
                }
            }
            None => -t * t,
        })
        .collect()
}

/// Maximize the CKN ratio over the knot-profile family by Nelder--Mead
/// with seeded random restarts. Deterministic for a fixed seed.
///
/// `budget` counts objective evaluations across all restarts.
pub fn optimize_ratio(
    params: &CknParams,
    space: &ModelSpace,
    n_knots: usize,
    budget: usize,
    seed: u64,
) -> Result<(f64, RadialProfile)> {
    if n_knots < 4 {
        return Err(CknError::InvalidParameter(format!(
            "optimize_ratio requires at least 4 knots, got {n_knots}"
        )));
    }
    let (t_min, t_max) = knot_window(params);
    let k = n_knots;
    let knots: Vec<f64> = (0..k)
        .map(|j| (t_min.ln() + (t_max.ln() - t_min.ln()) * j as f64 / (k - 1) as f64).exp())
        .collect();

    let mut evals = 0usize;
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_w: Option<Vec<f64>> = None;
    let mut objective = |w: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let profile = knot_profile(&knots, w);
        ckn_ratio(params, space, &profile).unwrap_or(f64::NEG_INFINITY)
    };

    if budget < k + 2 {
        return Err(CknError::BudgetExhausted { best: f64::NEG_INFINITY });
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let base = initial_weights(params, &knots);
    let mut restart = 0usize;
    while evals + k + 2 <= budget {
        // First restart from the analytic seed, later ones perturbed around
        // the incumbent.
        let start: Vec<f64> = if restart == 0 {
            base.clone()
        } else {
            let center = best_w.as_deref().unwrap_or(&base);
            center
                .iter()
                .map(|&w| w + rng.gen_range(-0.8..0.8))
                .collect()
        };
        let scale = if restart == 0 { 0.3 } else { 0.15 };
        let (ratio, w) = nelder_mead(&mut objective, &start, scale, budget, &mut evals);
        if ratio > best_ratio {
            best_ratio = ratio;
            best_w = Some(w);
        }
        restart += 1;
    }

    match best_w {
        Some(w) if best_ratio.is_finite() => Ok((best_ratio, knot_profile(&knots, &w))),
        _ => Err(CknError::DegenerateInput(
            "no admissible profile found in the search family".into(),
        )),
    }
}

/// Standard Nelder--Mead maximization; returns (best value, best point).
fn nelder_mead<F: FnMut(&[f64], &mut usize) -> f64>(
    objective: &mut F,
    start: &[f64],
    scale: f64,
    budget: usize,
    evals: &mut usize,
) -> (f64, Vec<f64>) {
    let k = start.len();
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k + 1);
    simplex.push((objective(start, evals), start.to_vec()));
    for i in 0..k {
        let mut p = start.to_vec();
        p[i] += scale;
        simplex.push((objective(&p, evals), p));
    }

    loop {
        // Descending by value: best first (maximization).
        simplex.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[0].0 - simplex[k].0;
        if (spread.abs() < 1e-10 && simplex[0].0.is_finite()) || *evals + 4 > budget {
            return (simplex[0].0, simplex[0].1.clone());
        }

        let centroid: Vec<f64> = (0..k)
            .map(|j| simplex[..k].iter().map(|(_, p)| p[j]).sum::<f64>() / k as f64)
            .collect();
        let worst = simplex[k].1.clone();
        let worst_val = simplex[k].0;
        let second_worst_val = simplex[k - 1].0;

        let reflect: Vec<f64> =
            (0..k).map(|j| centroid[j] + (centroid[j] - worst[j])).collect();
        let f_r = objective(&reflect, evals);
        if f_r > simplex[0].0 {
            let expand: Vec<f64> =
                (0..k).map(|j| centroid[j] + 2.0 * (centroid[j] - worst[j])).collect();
            let f_e = objective(&expand, evals);
            simplex[k] = if f_e > f_r { (f_e, expand) } else { (f_r, reflect) };
            continue;
        }
        if f_r > second_worst_val {
            simplex[k] = (f_r, reflect);
            continue;
        }
        let contract: Vec<f64> =
            (0..k).map(|j| centroid[j] + 0.5 * (worst[j] - centroid[j])).collect();
        let f_c = objective(&contract, evals);
        if f_c > worst_val {
            simplex[k] = (f_c, contract);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].1.clone();
        for entry in simplex.iter_mut().skip(1) {
            let p: Vec<f64> =
                (0..k).map(|j| best[j] + 0.5 * (entry.1[j] - best[j])).collect();
            *entry = (objective(&p, evals), p);
            if *evals + 4 > budget {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremals::{make_extremal, make_test_profile, TestProfileKind};
    use crate::params::{CknParams, SharpnessCase};
    use std::f64::consts::PI;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn hpw() -> CknParams {
        CknParams::new(3, 2.0, 2.0, 0.0, -2.0).unwrap()
    }

    fn case_i() -> CknParams {
        CknParams::new(3, 2.0, 3.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn remainder_values() {
        assert_eq!(remainder_rp(2.0, &[3.0, 4.0], &[3.0, 4.0]), 0.0);
        assert!(rel_err(remainder_rp(2.0, &[1.0, 0.0], &[0.0, 1.0]), 1.0) < 1e-14);
        assert!(rel_err(remainder_rp(3.0, &[1.0], &[2.0]), 4.0 / 3.0) < 1e-14);
        // Nonnegativity on random pairs.
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let p = 1.0 + 4.0 * next();
            let xi = [2.0 * next() - 1.0, 2.0 * next() - 1.0];
            let eta = [2.0 * next() - 1.0, 2.0 * next() - 1.0];
            assert!(remainder_rp(p, &xi, &eta) >= -1e-15);
        }
    }

    #[test]
    fn rp_integral_form_agrees() {
        assert!(rel_err(rp_integral_form(3.0, &[1.0], &[2.0]).unwrap(), 4.0 / 3.0) < 1e-10);
        assert_eq!(rp_integral_form(4.0, &[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        // p = 2: exactly half the squared distance.
        let v = rp_integral_form(2.0, &[0.3, -1.1], &[2.0, 0.4]).unwrap();
        let d2 = (0.3f64 - 2.0).powi(2) + (-1.1f64 - 0.4).powi(2);
        assert!(rel_err(v, 0.5 * d2) < 1e-12);

        let mut state = 99u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for i in 0..500 {
            let p = if i % 2 == 0 { 2.0 + 3.0 * next() } else { 1.05 + 0.9 * next() };
            let mut xi = [2.0 * next() - 1.0, 2.0 * next() - 1.0];
            let eta = [2.0 * next() - 1.0, 2.0 * next() - 1.0];
            if p < 2.0 {
                // Keep the segment away from the origin for p < 2.
                xi = [eta[0] + 0.3 * next(), eta[1] + 0.3 * next()];
            }
            let direct = remainder_rp(p, &xi, &eta);
            let dual = rp_integral_form(p, &xi, &eta).unwrap();
            assert!((direct - dual).abs() < 1e-9, "p={p} {xi:?} {eta:?}: {direct} vs {dual}");
        }
    }

    #[test]
    fn dp_values() {
        assert_eq!(dp_map(2.0, &[-3.0, 4.0]), vec![-3.0, 4.0]);
        assert!(rel_err(dp_map(3.0, &[4.0])[0], 2.0) < 1e-14);
        assert!(rel_err(dp_map(1.5, &[-8.0])[0], -64.0) < 1e-13);
        assert_eq!(dp_map(3.0, &[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn refined_holder_identity() {
        let f = vec![vec![1.0], vec![0.0]];
        let g = vec![vec![1.0], vec![1.0]];
        let w = vec![1.0, 1.0];
        assert!(refined_holder_residual(2.0, &f, &g, &w).abs() < 1e-12);
        // f = g: Hölder equality, remainder identically zero.
        for &p in &[1.5, 2.0, 3.0] {
            let h = vec![vec![0.3, 1.2], vec![2.0, -0.4]];
            assert!(refined_holder_residual(p, &h, &h, &w).abs() < 1e-12);
        }
        let mut state = 1234u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let p = 1.2 + 3.0 * next();
            let m = 1 + (next() * 3.0) as usize;
            let len = 10;
            let f: Vec<Vec<f64>> =
                (0..len).map(|_| (0..m).map(|_| 2.0 * next() - 1.0).collect()).collect();
            let g: Vec<Vec<f64>> =
                (0..len).map(|_| (0..m).map(|_| 2.0 * next() - 1.0).collect()).collect();
            let w: Vec<f64> = (0..len).map(|_| 0.1 + next()).collect();
            assert!(refined_holder_residual(p, &f, &g, &w).abs() < 1e-10);
        }
    }

    #[test]
    fn hpw_gaussian_functionals() {
        let params = hpw();
        let space = ModelSpace::euclidean(3);
        let gauss = make_test_profile(TestProfileKind::Gaussian, 1.0);
        let f = ckn_functionals(&params, &space, &gauss).unwrap();
        let m = (PI / 2.0).powf(1.5);
        assert!(rel_err(f.lhs.value, m) < 1e-9);
        assert!(rel_err(f.grad_term.value, 3.0 * m) < 1e-9);
        assert!(rel_err(f.q_term.value, 0.75 * m) < 1e-9);
    }

    #[test]
    fn case_ii_functionals_finite() {
        let params = CknParams::new(3, 2.0, 0.5, 0.0, 0.0).unwrap();
        let space = ModelSpace::euclidean(3);
        let e = make_extremal(&params, SharpnessCase::CaseII, 1.0, 1.0).unwrap();
        let f = ckn_functionals(&params, &space, &e).unwrap();
        assert!(f.lhs.value.is_finite() && f.lhs.value > 0.0);
        assert!(f.grad_term.value.is_finite() && f.grad_term.value > 0.0);
        assert!(f.q_term.value.is_finite() && f.q_term.value > 0.0);
    }

    #[test]
    fn ratio_at_extremals_hits_sharp_constant() {
        let space = ModelSpace::euclidean(3);
        let params = hpw();
        let gauss = make_test_profile(TestProfileKind::Gaussian, 1.0);
        let ratio = ckn_ratio(&params, &space, &gauss).unwrap();
        assert!(rel_err(ratio, 2.0 / 3.0) < 1e-9, "HPW gaussian ratio {ratio}");

        let params = case_i();
        let e = make_extremal(&params, SharpnessCase::CaseI, 1.0, 1.0).unwrap();
        let ratio = ckn_ratio(&params, &space, &e).unwrap();
        assert!(rel_err(ratio, 1.5) < 1e-8, "case I extremal ratio {ratio}");
    }

    #[test]
    fn ratio_below_sharp_for_nonextremal() {
        let params = hpw();
        let space = ModelSpace::euclidean(3);
        let bump = make_test_profile(TestProfileKind::PolyBump, 1.0);
        let ratio = ckn_ratio(&params, &space, &bump).unwrap();
        assert!(ratio < 2.0 / 3.0 - 1e-4, "bump ratio {ratio} not strictly below");
    }

    #[test]
    fn scaling_invariance() {
        let space = ModelSpace::euclidean(3);
        let params = hpw();
        let gauss = make_test_profile(TestProfileKind::Gaussian, 1.0);
        let base = ckn_ratio(&params, &space, &gauss).unwrap();
        for &delta in &[0.1, 1.0, 10.0] {
            let scaled = ckn_ratio(&params, &space, &gauss.dilate(delta)).unwrap();
            assert!(rel_err(scaled, base) < 1e-9, "delta = {delta}");
        }
    }

    #[test]
    fn main_identity_closes_flat() {
        let space = ModelSpace::euclidean(3);
        let gauss = make_test_profile(TestProfileKind::Gaussian, 1.0);
        let parts = main_identity(&hpw(), &space, &gauss).unwrap();
        assert!(parts.residual.abs() < 1e-8, "residual {}", parts.residual);
        assert_eq!(parts.curvature_term, 0.0);
    }

    #[test]
    fn main_identity_closes_hyperbolic() {
        let space = ModelSpace::new(3, 1.0).unwrap();
        let gauss = make_test_profile(TestProfileKind::Gaussian, 1.0);
        let parts = main_identity(&hpw(), &space, &gauss).unwrap();
        assert!(parts.residual.abs() < 1e-7, "residual {}", parts.residual);
        assert!(parts.curvature_term > 0.0);
    }

    #[test]
    fn main_identity_extremal_corrections_vanish() {
        let space = ModelSpace::euclidean(3);
        let params = case_i();
        let e = make_extremal(&params, SharpnessCase::CaseI, 1.0, 1.0).unwrap();
        let parts = main_identity(&params, &space, &e).unwrap();
        assert!(parts.rp_integral.abs() < 1e-10, "rp integral {}", parts.rp_integral);
        assert_eq!(parts.curvature_term, 0.0);
    }

    #[test]
    fn quantitative_margin_nonnegative() {
        let params = hpw();
        let gauss = make_test_profile(TestProfileKind::Gaussian, 1.0);
        let flat = quantitative_ckn_margin(&params, &ModelSpace::euclidean(3), &gauss).unwrap();
        assert!(flat >= -1e-12);
        let curved =
            quantitative_ckn_margin(&params, &ModelSpace::new(3, 1.0).unwrap(), &gauss).unwrap();
        assert!(curved >= -1e-12);
        assert!(curved < flat, "curved margin {curved} not below flat {flat}");
    }

    #[test]
    fn hardy_margin_values() {
        let bump = make_test_profile(TestProfileKind::PolyBump, 1.0);
        let flat = hardy_margin(3, 2.0, 0.0, &ModelSpace::euclidean(3), &bump).unwrap();
        assert!(flat >= -1e-12);
        let curved = hardy_margin(3, 2.0, 0.0, &ModelSpace::new(3, 1.0).unwrap(), &bump).unwrap();
        assert!(curved >= -1e-12);
        assert!(hardy_margin(3, 2.0, 1.0, &ModelSpace::euclidean(3), &bump).is_err());
    }

    #[test]
    fn knot_profile_shape() {
        let knots = vec![0.1, 1.0, 10.0];
        let profile = knot_profile(&knots, &[0.0, 1.0, 0.0]);
        assert!(rel_err(profile.eval(0.05), 1.0) < 1e-12);
        assert!(rel_err(profile.eval(1.0), std::f64::consts::E) < 1e-12);
        assert!(rel_err(profile.eval(100.0 - 1e-9), 0.0).abs() < 1e-6 || profile.eval(100.0) == 0.0);
        assert_eq!(profile.eval(101.0), 0.0);
        // Midpoint in log space between the first two knots.
        let mid = (0.1f64.ln() + 1.0f64.ln()) / 2.0;
        assert!(rel_err(profile.eval(mid.exp()), 0.5 * (1.0 + std::f64::consts::E)) < 1e-12);
        // Derivative consistent with finite differences inside a segment.
        let t = 0.4;
        let h = 1e-7;
        let fd = (profile.eval(t + h) - profile.eval(t - h)) / (2.0 * h);
        assert!(rel_err(profile.deriv(t), fd) < 1e-6);
    }

    #[test]
    fn optimizer_smoke() {
        let params = hpw();
        let space = ModelSpace::euclidean(3);
        let (ratio, profile) = optimize_ratio(&params, &space, 8, 600, 42).unwrap();
        assert!(ratio > 0.9 * (2.0 / 3.0), "optimizer reached only {ratio}");
        assert!(ratio < 2.0 / 3.0 + 1e-6);
        assert!(profile.support_radius().is_finite());
        // Determinism for a fixed seed.
        let (again, _) = optimize_ratio(&params, &space, 8, 600, 42).unwrap();
        assert_eq!(ratio.to_bits(), again.to_bits());
    }
}
