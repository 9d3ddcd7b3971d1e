use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use zeta_resonance::bounds::{
    c_sigma, kappa_bound, kappa_max, s_constant, thm1_bound, thm2_exponent, KappaBinding, TheoremBound,
};
use zeta_resonance::constants::{EULER_GAMMA, EXP_EULER_GAMMA};
use zeta_resonance::primes::sieve_primes;
use zeta_resonance::report::fmt17;
use zeta_resonance::resonance::{
    build_resonator, double_sum_n_max, max_quadrature_step, moment_diagonal_closed_form,
    moment_double_sum_oracle, moment_quadrature, resonator_sup, restore_table, KernelSpec,
    MomentEstimate, MomentMethod, Objective, QuadratureConfig, ResonatorMode, ResonatorSpec,
    ResonatorTable,
};
use zeta_resonance::search::{default_grid_step, run_search_with_scan, ExtremeValueReport, SearchConfig};
use zeta_resonance::verify::{run_suite, Check, Suite};
use zeta_resonance::zeta::{zeta, zeta_truncated, ComplexPoint, EvalConfig};

use crate::args::*;
use crate::error::CliError;
use crate::output::{write_csv, Sink};

type Res<T> = Result<T, CliError>;

pub fn dispatch(cli: &Cli) -> Res<i32> {
    let format = cli.format.unwrap_or(Format::Json);
    let sink = Sink {
        out: cli.out.clone(),
        pretty: cli.pretty,
    };
    let csv_ok = matches!(
        cli.command,
        Command::Primes(_) | Command::Resonator(_) | Command::Search(_) | Command::Verify(_)
    );
    if format == Format::Csv && !csv_ok {
        return Err(CliError::Usage(
            "--format csv is available for primes, resonator, search and verify".into(),
        ));
    }
    match &cli.command {
        Command::Primes(a) => primes(a, format, &sink),
        Command::Zeta(a) => zeta_cmd(a, &sink),
        Command::Resonator(a) => resonator(a, format, &sink),
        Command::Moments(a) => moments(a, &sink),
        Command::Constants(a) => constants(a, &sink),
        Command::Bound(a) => bound(a, &sink),
        Command::Search(a) => search(a, format, &sink),
        Command::Verify(a) => verify(a, format, &sink),
    }
    .map(|code| code.unwrap_or(0))
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Res<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Res<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}

fn finite(v: f64, flag: &str) -> Res<()> {
    check(v.is_finite(), || format!("--{flag} must be finite, got {v}"))
}

fn positive(v: f64, flag: &str) -> Res<()> {
    check(v.is_finite() && v > 0.0, || format!("--{flag} must be finite and > 0, got {v}"))
}

fn open_unit(v: f64, flag: &str, lo: f64, hi: f64) -> Res<()> {
    check(v > lo && v < hi, || format!("--{flag} must lie in ({lo}, {hi}), got {v}"))
}

fn at_least_one(v: usize, flag: &str) -> Res<()> {
    check(v >= 1, || format!("--{flag} must be a positive integer"))
}

#[derive(Serialize, Deserialize)]
struct PrimesOut {
    limit: u64,
    count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    primes: Option<Vec<u64>>,
}

fn primes(a: &PrimesArgs, format: Format, sink: &Sink) -> Res<Option<i32>> {
    let limit = required(a.limit, "limit")?;
    check(limit >= 1, || "--limit must be at least 1".into())?;
    let table = sieve_primes(limit)?;
    match format {
        Format::Json => sink.json(&PrimesOut {
            limit,
            count: table.len(),
            primes: (!a.count_only).then(|| table.primes().to_vec()),
        })?,
        Format::Csv if a.count_only => {
            sink.csv(&["limit", "count"], &[vec![limit.to_string(), table.len().to_string()]])?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = table.primes().iter().map(|p| vec![p.to_string()]).collect();
            sink.csv(&["prime"], &rows)?
        }
    }
    Ok(None)
}

#[derive(Serialize, Deserialize)]
struct ZetaOut {
    sigma: f64,
    t: f64,
    ell: usize,
    trunc: Option<f64>,
    re: f64,
    im: f64,
    abs: f64,
    method: String,
    eval: EvalConfig,
}

fn zeta_cmd(a: &ZetaArgs, sink: &Sink) -> Res<Option<i32>> {
    let sigma = required(a.sigma, "sigma")?;
    let t = required(a.t, "t")?;
    let ell = a.ell.unwrap_or(1);
    finite(sigma, "sigma")?;
    finite(t, "t")?;
    at_least_one(ell, "ell")?;
    let eval = EvalConfig::default();
    let table = match a.trunc {
        Some(y) => {
            check(y.is_finite() && y >= 1.0, || format!("--trunc must be finite and >= 1, got {y}"))?;
            Some(sieve_primes(y.floor() as u64)?)
        }
        None => None,
    };
    let mut product = Complex64::new(1.0, 0.0);
    let mut abs = 1.0;
    for j in 1..=ell {
        let s = ComplexPoint::new(sigma, j as f64 * t);
        let v = match (&table, a.trunc) {
            (Some(p), Some(y)) => zeta_truncated(s, y, p)?,
            _ => zeta(s, &eval)?,
        };
        product *= v;
        abs *= v.norm();
    }
    sink.json(&ZetaOut {
        sigma,
        t,
        ell,
        trunc: a.trunc,
        re: product.re,
        im: product.im,
        abs,
        method: if a.trunc.is_some() { "euler_product" } else { "euler_maclaurin" }.into(),
        eval,
    })?;
    Ok(None)
}

fn resonator_spec(mode: ModeArg, x: f64, sigma: Option<f64>) -> Res<ResonatorSpec> {
    positive(x, "X")?;
    match mode {
        ModeArg::Line => Ok(ResonatorSpec::line_one(x)),
        ModeArg::Strip => {
            let sigma = required(sigma, "sigma")?;
            open_unit(sigma, "sigma", 0.5, 1.0)?;
            Ok(ResonatorSpec::strip(x, sigma))
        }
    }
}

fn coefficient_rows(table: &ResonatorTable) -> Vec<Vec<String>> {
    table.iter().map(|(p, r)| vec![p.to_string(), fmt17(r)]).collect()
}

#[derive(Serialize, Deserialize)]
struct ResonatorOut {
    prime_count: usize,
    log_sup: f64,
    table: ResonatorTable,
}

fn resonator(a: &ResonatorArgs, format: Format, sink: &Sink) -> Res<Option<i32>> {
    let mode = a.mode.unwrap_or(ModeArg::Line);
    let spec = resonator_spec(mode, required(a.x, "X")?, a.sigma)?;
    let primes = sieve_primes(spec.x.floor().max(1.0) as u64)?;
    let table = build_resonator(spec, &primes)?;
    restore_table(table.clone())?.validate()?;
    if let Some(path) = &a.dump {
        write_csv(path, &["prime", "r"], &coefficient_rows(&table))?;
    }
    match format {
        Format::Csv => sink.csv(&["prime", "r"], &coefficient_rows(&table))?,
        Format::Json => sink.json(&ResonatorOut {
            prime_count: table.primes().len(),
            log_sup: resonator_sup(&table),
            table,
        })?,
    }
    Ok(None)
}

#[derive(Serialize, Deserialize)]
struct MomentsOut {
    #[serde(rename = "X")]
    x: f64,
    #[serde(rename = "T")]
    t_height: f64,
    mode: ResonatorMode,
    objective: Objective,
    method: MomentMethod,
    estimate: MomentEstimate,
}

fn moments(a: &MomentsArgs, sink: &Sink) -> Res<Option<i32>> {
    let x = required(a.x, "X")?;
    let t_height = required(a.t_height, "T")?;
    positive(t_height, "T")?;
    let mode = a.mode.unwrap_or(ModeArg::Line);
    let spec = resonator_spec(mode, x, a.sigma)?;
    let ell = a.ell.unwrap_or(1);
    at_least_one(ell, "ell")?;
    let objective = match a.objective.unwrap_or(ObjectiveArg::One) {
        ObjectiveArg::One => Objective::One,
        ObjectiveArg::Joint => Objective::JointZetaTrunc {
            ell,
            sigma: spec.sigma,
            y: x,
        },
    };
    let method = a.method.unwrap_or(MethodArg::Quad);
    if method != MethodArg::Quad {
        check(objective == Objective::One, || {
            "--method sum and --method diagonal only support --objective one".into()
        })?;
        check(a.window_lo.is_none() && a.window_hi.is_none(), || {
            "windows are only supported by --method quad".into()
        })?;
    }
    let window = match (a.window_lo, a.window_hi) {
        (Some(lo), Some(hi)) => {
            finite(lo, "window-lo")?;
            finite(hi, "window-hi")?;
            check(lo < hi, || format!("--window-lo {lo} must be below --window-hi {hi}"))?;
            Some((lo, hi))
        }
        (None, None) => None,
        _ => return Err(CliError::Usage("give both --window-lo and --window-hi or neither".into())),
    };
    if let Some(step) = a.step {
        positive(step, "step")?;
    }
    let primes = sieve_primes(x.floor().max(1.0) as u64)?;
    let table = build_resonator(spec, &primes)?;
    let kernel = KernelSpec::for_height(t_height);
    let estimate = match method {
        MethodArg::Quad => {
            let grid = QuadratureConfig {
                step: Some(a.step.unwrap_or_else(|| max_quadrature_step(x))),
                ..QuadratureConfig::default()
            };
            moment_quadrature(&table, t_height, kernel, window, &objective, &grid, &primes)?
        }
        MethodArg::Sum => moment_double_sum_oracle(&table, kernel, double_sum_n_max(&table))?,
        MethodArg::Diagonal => moment_diagonal_closed_form(&table, kernel)?,
    };
    estimate.validate()?;
    sink.json(&MomentsOut {
        x,
        t_height,
        mode: spec.mode,
        objective,
        method: estimate.method,
        estimate,
    })?;
    Ok(None)
}

#[derive(Serialize, Deserialize)]
struct ConstantsOut {
    sigma: f64,
    ell: usize,
    beta: f64,
    rh: bool,
    gamma: f64,
    e_gamma: f64,
    c_sigma: f64,
    #[serde(rename = "S")]
    s: f64,
    kappa_max_uncond: f64,
    kappa_max_rh: f64,
    kappa_binding: KappaBinding,
}

fn constants(a: &ConstantsArgs, sink: &Sink) -> Res<Option<i32>> {
    let sigma = required(a.sigma, "sigma")?;
    open_unit(sigma, "sigma", 0.5, 1.0)?;
    let ell = a.ell.unwrap_or(1);
    at_least_one(ell, "ell")?;
    let beta = a.beta.unwrap_or(0.5);
    open_unit(beta, "beta", 0.0, 1.0)?;
    sink.json(&ConstantsOut {
        sigma,
        ell,
        beta,
        rh: a.rh,
        gamma: EULER_GAMMA,
        e_gamma: EXP_EULER_GAMMA,
        c_sigma: c_sigma(sigma)?,
        s: s_constant(sigma, ell)?,
        kappa_max_uncond: kappa_max(sigma, beta, false)?,
        kappa_max_rh: kappa_max(sigma, beta, true)?,
        kappa_binding: kappa_bound(sigma, beta, a.rh)?.binding,
    })?;
    Ok(None)
}

fn bound(a: &BoundArgs, sink: &Sink) -> Res<Option<i32>> {
    let thm = required(a.thm, "thm")?;
    let t_height = required(a.t_height, "T")?;
    positive(t_height, "T")?;
    let ell = a.ell.unwrap_or(1);
    at_least_one(ell, "ell")?;
    let result: TheoremBound = match thm {
        1 => thm1_bound(t_height, ell)?,
        2 | 3 => {
            let rh = thm == 3;
            let sigma = required(a.sigma, "sigma")?;
            open_unit(sigma, "sigma", 0.5, 1.0)?;
            let beta = required(a.beta, "beta")?;
            open_unit(beta, "beta", 0.0, 1.0)?;
            let kappa = match a.kappa {
                Some(k) => {
                    positive(k, "kappa")?;
                    k
                }
                None => 0.9 * kappa_max(sigma, beta, rh)?,
            };
            thm2_exponent(t_height, sigma, ell, beta, kappa, rh)?
        }
        other => return Err(CliError::Usage(format!("--thm must be 1, 2 or 3, got {other}"))),
    };
    result.validate()?;
    sink.json(&result)?;
    Ok(None)
}

fn search(a: &SearchArgs, format: Format, sink: &Sink) -> Res<Option<i32>> {
    let t_height = required(a.t_height, "T")?;
    let beta = required(a.beta, "beta")?;
    let sigma = required(a.sigma, "sigma")?;
    let ell = required(a.ell, "ell")?;
    check(t_height.is_finite() && t_height > 1.0, || format!("--T must be finite and > 1, got {t_height}"))?;
    open_unit(beta, "beta", 0.0, 1.0)?;
    check(sigma.is_finite() && sigma > 0.5, || format!("--sigma must be finite and > 1/2, got {sigma}"))?;
    at_least_one(ell, "ell")?;
    let mut cfg = SearchConfig::new(t_height, beta, sigma, ell);
    if let Some(x) = a.x {
        check(x.is_finite() && x >= 0.0, || format!("--X must be finite and >= 0, got {x}"))?;
        cfg.x = x;
    }
    cfg.grid_step = a.step.unwrap_or_else(|| default_grid_step(ell));
    positive(cfg.grid_step, "step")?;
    if let Some(top) = a.top {
        at_least_one(top, "top")?;
        cfg.top_k = top;
    }
    if let Some(tol) = a.tol {
        positive(tol, "tol")?;
        cfg.refine_tol = tol;
    }
    cfg.seed = a.seed.unwrap_or(0);

    let keep_rows = a.scan_csv.is_some() || format == Format::Csv;
    let (report, scan): (ExtremeValueReport, _) = run_search_with_scan(&cfg, keep_rows)?;
    report.validate()?;
    let rows: Vec<Vec<String>> = scan
        .rows
        .unwrap_or_default()
        .iter()
        .map(|r| {
            vec![
                fmt17(r.t),
                fmt17(r.guidance_score),
                r.joint_product.map(fmt17).unwrap_or_default(),
            ]
        })
        .collect();
    const HEADER: [&str; 3] = ["t", "guidance_score", "joint_product"];
    if let Some(path) = &a.scan_csv {
        write_csv(path, &HEADER, &rows)?;
    }
    match format {
        Format::Csv => sink.csv(&HEADER, &rows)?,
        Format::Json => sink.json(&report)?,
    }
    Ok(None)
}

fn verify(a: &VerifyArgs, format: Format, sink: &Sink) -> Res<Option<i32>> {
    let suite = match a.suite.unwrap_or(SuiteArg::All) {
        SuiteArg::Oracles => Suite::Oracles,
        SuiteArg::Identities => Suite::Identities,
        SuiteArg::Trends => Suite::Trends,
        SuiteArg::All => Suite::All,
    };
    let checks: Vec<Check> = run_suite(suite);
    match format {
        Format::Json => sink.json_lines(&checks)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        if c.passed() { "pass" } else { "fail" }.to_string(),
                        fmt17(c.measured),
                        fmt17(c.tolerance),
                    ]
                })
                .collect();
            sink.csv(&["name", "status", "measured", "tolerance"], &rows)?
        }
    }
    Ok(Some(if checks.iter().all(Check::passed) { 0 } else { 1 }))
}
