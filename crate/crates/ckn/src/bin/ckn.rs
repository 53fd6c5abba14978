//! Command-line surface: admissibility checks, single-profile verification,
//! parameter sweeps, and rigidity scans. Exit codes: 0 pass, 1 fail,
//! 2 usage error, 3 numerical nonconvergence.

use ckn::extremals::{make_extremal, make_test_profile, RadialProfile, TestProfileKind};
use ckn::geometry::ModelSpace;
use ckn::params::{CknParams, SharpnessCase};
use ckn::report::verification_report;
use ckn::rigidity::{t_lambda_compact, t_lambda_exp, TCase};
use ckn::CknError;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");
const CSV_HEADER: &str = "n,p,r,alpha,beta,gamma,b,profile,ratio,bound,margin,identity_residual,pass,error";

#[derive(Parser)]
#[command(name = "ckn", version, about = "Verification laboratory for sharp weighted interpolation inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Dimension n >= 2
    #[arg(short = 'n', long)]
    n: u32,
    /// Gradient exponent p > 1
    #[arg(short = 'p', long)]
    p: f64,
    /// Left-hand exponent r > 0
    #[arg(short = 'r', long)]
    r: f64,
    /// Gradient weight exponent
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Lower-order weight exponent
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
}

impl ParamArgs {
    fn build(&self) -> Result<CknParams, CknError> {
        CknParams::new(self.n, self.p, self.r, self.alpha, self.beta)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a parameter tuple: admissibility, derived exponents, case.
    Check {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Verify the inequality, the exact identity and the quantitative
    /// margins on one profile; prints a JSON report.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Curvature parameter b >= 0 (the space has curvature -b)
        #[arg(short = 'b', long, default_value_t = 0.0)]
        b: f64,
        /// Profile: gaussian | exp | poly_bump | plateau_bump | extremal
        #[arg(long, default_value = "gaussian")]
        profile: String,
        /// Scale of the library profiles
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Family parameter for --profile extremal
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Relative tolerance (overrides CKN_REL_TOL)
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Seed echoed into the report metadata
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a parameter-grid sweep from a JSON config; emits CSV.
    Sweep {
        /// JSON config file with keys n, p, r, alpha, beta, b, profiles, scale
        #[arg(long)]
        config: String,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<String>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Tabulate T(λ), F(λ) and their ratio over a log grid; emits CSV plot
    /// data plus a JSON summary.
    Rigidity {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'b', long, default_value_t = 0.0)]
        b: f64,
        /// Which family: exp (r = p) or compact (r < p)
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 0.1)]
        lambda_min: f64,
        #[arg(long, default_value_t = 10.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Seed echoed into the summary metadata
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
}

fn default_rel_tol(cli_override: Option<f64>) -> f64 {
    cli_override
        .or_else(|| std::env::var("CKN_REL_TOL").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1e-8)
}

fn build_profile(
    name: &str,
    scale: f64,
    lambda: f64,
    params: &CknParams,
) -> Result<RadialProfile, CknError> {
    if name == "extremal" {
        let case = params.classify_sharpness_case();
        if case == SharpnessCase::NotCovered {
            return Err(CknError::InvalidParameter(
                "tuple is not covered by a sharpness case; no extremal profile".into(),
            ));
        }
        return make_extremal(params, case, lambda, 1.0);
    }
    match TestProfileKind::from_name(name) {
        Some(kind) => Ok(make_test_profile(kind, scale)),
        None => Err(CknError::InvalidParameter(format!(
            "unknown profile '{name}'; expected gaussian, exp, poly_bump, plateau_bump or extremal"
        ))),
    }
}

fn emit(out: &Option<String>, body: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn exit_code_for(err: &CknError) -> ExitCode {
    match err {
        CknError::NonConvergence { .. }
        | CknError::NonIntegrable(_)
        | CknError::SingularityTooStrong { .. }
        | CknError::BudgetExhausted { .. } => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn cmd_check(args: &ParamArgs) -> ExitCode {
    let params = match args.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let integ = params.check_integrability();
    let admissible = params.is_admissible();
    let case = params.classify_sharpness_case();
    let report = json!({
        "params": params,
        "derived": {
            "gamma": params.gamma(),
            "q": params.q(),
            "s": params.s(),
            "sharp_constant": params.sharp_constant().ok(),
        },
        "case": case,
        "checks": [
            {"name": "lhs_weight_integrable", "value": integ.lhs_weight, "pass": integ.lhs_weight},
            {"name": "grad_weight_integrable", "value": integ.grad_weight, "pass": integ.grad_weight},
            {"name": "q_weight_integrable", "value": integ.q_weight, "pass": integ.q_weight},
            {"name": "admissible", "value": admissible, "pass": admissible},
        ],
        "meta": {"seed": 0, "version": VERSION},
    });
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    if admissible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    args: &ParamArgs,
    b: f64,
    profile_name: &str,
    scale: f64,
    lambda: f64,
    rel_tol: Option<f64>,
    seed: u64,
    out: &Option<String>,
) -> ExitCode {
    let rel_tol = default_rel_tol(rel_tol);
    let run = || -> Result<(bool, String), CknError> {
        let params = args.build()?;
        let space = ModelSpace::new(args.n, b)?;
        let profile = build_profile(profile_name, scale, lambda, &params)?;
        let rep = verification_report(&params, &space, &profile, rel_tol)?;
        let body = json!({
            "params": rep.params_echo,
            "derived": {
                "gamma": rep.params_echo.gamma(),
                "q": rep.params_echo.q(),
                "s": rep.params_echo.s(),
                "sharp_constant": rep.bound,
            },
            "case": rep.params_echo.classify_sharpness_case(),
            "ratio": rep.ratio,
            "bound": rep.bound,
            "margin": rep.margin,
            "checks": rep.residuals,
            "passed": rep.passed,
            "meta": {"seed": seed, "version": VERSION},
        });
        Ok((rep.passed, serde_json::to_string_pretty(&body).unwrap()))
    };
    match run() {
        Ok((passed, body)) => {
            if emit(out, &(body + "\n")).is_err() {
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[derive(Deserialize)]
struct SweepConfig {
    n: Vec<u32>,
    p: Vec<f64>,
    r: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    b: Vec<f64>,
    profiles: Vec<String>,
    #[serde(default = "default_scale")]
    scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

fn sweep_row(n: u32, p: f64, r: f64, alpha: f64, beta: f64, b: f64, profile_name: &str, scale: f64) -> String {
    let prefix = |gamma: String| format!("{n},{p},{r},{alpha},{beta},{gamma},{b},{profile_name}");
    let params = match CknParams::new(n, p, r, alpha, beta) {
        Ok(p) => p,
        Err(_) => return format!("{},,,,,false,invalid-parameters", prefix(String::new())),
    };
    let head = prefix(format!("{}", params.gamma()));
    if !params.is_admissible() {
        return format!("{head},,,,,false,inadmissible");
    }
    let space = match ModelSpace::new(n, b) {
        Ok(s) => s,
        Err(_) => return format!("{head},,,,,false,invalid-curvature"),
    };
    let profile = match build_profile(profile_name, scale, 1.0, &params) {
        Ok(p) => p,
        Err(e) => return format!("{head},,,,,false,{}", error_code(&e)),
    };
    match verification_report(&params, &space, &profile, 1e-8) {
        Ok(rep) => {
            let ident = rep
                .residuals
                .iter()
                .find(|c| c.name == "identity_residual")
                .map(|c| c.value)
                .unwrap_or(f64::NAN);
            format!(
                "{head},{:.12e},{:.12e},{:.12e},{:.6e},{},",
                rep.ratio, rep.bound, rep.margin, ident, rep.passed
            )
        }
        Err(e) => format!("{head},,,,,false,{}", error_code(&e)),
    }
}

fn error_code(e: &CknError) -> &'static str {
    match e {
        CknError::InvalidParameter(_) => "invalid-parameters",
        CknError::NonConvergence { .. } => "nonconvergence",
        CknError::SingularityTooStrong { .. } => "singularity",
        CknError::NonIntegrable(_) => "nonintegrable",
        CknError::CaseMismatch { .. } => "case-mismatch",
        CknError::DegenerateInput(_) => "degenerate",
        CknError::BudgetExhausted { .. } => "budget-exhausted",
    }
}

fn cmd_sweep(config_path: &str, out: &Option<String>, jobs: usize) -> ExitCode {
    let raw = match std::fs::read_to_string(config_path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read config {config_path}: {e}");
            return ExitCode::from(2);
        }
    };
    let config: SweepConfig = match serde_json::from_str(&raw) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: bad sweep config: {e}");
            return ExitCode::from(2);
        }
    };

    let mut cells = Vec::new();
    for &n in &config.n {
        for &p in &config.p {
            for &r in &config.r {
                for &alpha in &config.alpha {
                    for &beta in &config.beta {
                        for &b in &config.b {
                            for profile in &config.profiles {
                                cells.push((n, p, r, alpha, beta, b, profile.clone()));
                            }
                        }
                    }
                }
            }
        }
    }

    let scale = config.scale;
    let jobs = jobs.max(1).min(cells.len().max(1));
    let mut rows: Vec<String> = vec![String::new(); cells.len()];
    std::thread::scope(|scope| {
        let chunk = cells.len().div_ceil(jobs);
        for (cell_chunk, row_chunk) in cells.chunks(chunk).zip(rows.chunks_mut(chunk)) {
            scope.spawn(move || {
                for ((n, p, r, alpha, beta, b, profile), row) in
                    cell_chunk.iter().zip(row_chunk.iter_mut())
                {
                    *row = sweep_row(*n, *p, *r, *alpha, *beta, *b, profile, scale);
                }
            });
        }
    });

    let mut body = String::from(CSV_HEADER);
    body.push('\n');
    // A row that computed cleanly but failed its checks fails the sweep;
    // rows with an error marker are diagnostics, not verdicts.
    let mut failed = false;
    for row in rows {
        if row.ends_with(",false,") {
            failed = true;
        }
        body.push_str(&row);
        body.push('\n');
    }
    if emit(out, &body).is_err() {
        return ExitCode::from(1);
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_rigidity(
    args: &ParamArgs,
    b: f64,
    case: &str,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
    seed: u64,
    out: &Option<String>,
) -> ExitCode {
    let which = match case {
        "exp" => TCase::Exp,
        "compact" => TCase::Compact,
        other => {
            eprintln!("error: unknown case '{other}'; expected exp or compact");
            return ExitCode::from(2);
        }
    };
    if !(lambda_min > 0.0 && lambda_max > lambda_min && points >= 2) {
        eprintln!("error: need 0 < lambda_min < lambda_max and points >= 2");
        return ExitCode::from(2);
    }
    let params = match args.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let space = match ModelSpace::new(args.n, b) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let grid: Vec<f64> = (0..points)
        .map(|k| {
            (lambda_min.ln() + (lambda_max.ln() - lambda_min.ln()) * k as f64 / (points - 1) as f64)
                .exp()
        })
        .collect();

    // Per-point evaluation so one divergent point marks only its own row.
    let mut body = String::from("lambda,t,f,ratio,error\n");
    let mut failures = 0usize;
    let mut ratios = Vec::new();
    for &lambda in &grid {
        let t = match which {
            TCase::Exp => t_lambda_exp(&params, lambda),
            TCase::Compact => t_lambda_compact(&params, lambda),
        };
        let row = t.and_then(|t| {
            ckn::rigidity::f_lambda(&params, &space, lambda, which).map(|f| (t, f.value))
        });
        match row {
            Ok((t, f)) => {
                let ratio = f / t;
                ratios.push(ratio);
                body.push_str(&format!("{lambda:.8e},{t:.12e},{f:.12e},{ratio:.12},\n"));
            }
            Err(e) => {
                failures += 1;
                body.push_str(&format!("{lambda:.8e},,,,{}\n", error_code(&e)));
            }
        }
    }

    let all_unit = !ratios.is_empty() && ratios.iter().all(|r| (r - 1.0).abs() < 1e-8);
    let all_ge_one = !ratios.is_empty() && ratios.iter().all(|r| *r >= 1.0 - 1e-9);
    let summary = json!({
        "params": params,
        "space": space,
        "case": case,
        "points": grid.len(),
        "nonintegrable_points": failures,
        "all_ratios_unit": all_unit,
        "all_ratios_ge_one": all_ge_one,
        "meta": {"seed": seed, "version": VERSION},
    });
    if emit(out, &body).is_err() {
        return ExitCode::from(1);
    }
    eprintln!("{}", serde_json::to_string_pretty(&summary).unwrap());
    if failures > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check { params } => cmd_check(params),
        Command::Verify { params, b, profile, scale, lambda, rel_tol, seed, out } => {
            cmd_verify(params, *b, profile, *scale, *lambda, *rel_tol, *seed, out)
        }
        Command::Sweep { config, out, jobs } => cmd_sweep(config, out, *jobs),
        Command::Rigidity { params, b, case, lambda_min, lambda_max, points, seed, out } => {
            cmd_rigidity(params, *b, case, *lambda_min, *lambda_max, *points, *seed, out)
        }
    }
}
