//! `hzn` — evaluate higher Herglotz-Zagier-Novikov functions, twisted zeta
//! values of indefinite forms and narrow ideal classes, reduction data of
//! real quadratic fields, and run reproducible identity-check suites.

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hzn_cli::report::{fmt17, RunReport};
use hzn_cli::{config_from_env, suites, table};
use hzn_core::herglotz::{eval, Route, TwistPair};
use hzn_core::quadfield::{
    forms_of, fundamental_unit, narrow_classes, red_set, wide_red_sets,
};
use hzn_core::zeta::{zq, ZetaRoute};
use hzn_core::{Complex64, SeriesConfig};

#[derive(Parser)]
#[command(
    name = "hzn",
    about = "Higher Herglotz-Zagier-Novikov functions and twisted zeta values of real quadratic fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F_k(x; alpha, beta).
    Eval(EvalArgs),
    /// Evaluate the twisted form zeta Z_Q(k; (alpha, beta)).
    Zq(ZqArgs),
    /// Class-zeta table over both routes (CSV).
    Table(TableArgs),
    /// Reduction report for a fundamental discriminant (JSON).
    Reduce(ReduceArgs),
    /// Run a named identity-check suite.
    Check(CheckArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Series index k >= 1.
    #[arg(long)]
    k: u32,
    /// Evaluation point, RE or RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// series | integral
    #[arg(long, default_value = "series")]
    route: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ZqArgs {
    /// Zeta exponent k >= 1.
    #[arg(long)]
    k: u32,
    /// Larger root w of Q(1, -x).
    #[arg(long)]
    w: f64,
    /// Smaller root w' (0 < w' < w).
    #[arg(long)]
    wp: f64,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// direct | hzn
    #[arg(long, default_value = "direct")]
    route: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 12)]
    discriminant: i64,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Twist file: one "alpha beta" pair per line, '#' comments.
    #[arg(long)]
    twists: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    discriminant: i64,
}

#[derive(Args)]
struct CheckArgs {
    /// fe2|fe3|fe6|dop|cocycle|binet|eta|asymp|limits|vz|table
    #[arg(long)]
    suite: String,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = config_from_env();
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(a, &cfg, started),
        Command::Zq(a) => cmd_zq(a, &cfg, started),
        Command::Table(a) => cmd_table(a, &cfg, started),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Check(a) => cmd_check(a, &cfg),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let diag = serde_json::json!({
                "status": "failed",
                "error": format!("{e:#}"),
            });
            eprintln!("{diag}");
            ExitCode::from(1)
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let mut parts = s.split(',');
    let re: f64 = parts
        .next()
        .ok_or_else(|| anyhow!("empty complex literal"))?
        .trim()
        .parse()
        .context("bad real part")?;
    let im: f64 = match parts.next() {
        Some(p) => p.trim().parse().context("bad imaginary part")?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(anyhow!("expected RE or RE,IM"));
    }
    Ok(Complex64::new(re, im))
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).unwrap());
    } else {
        for o in &report.outputs {
            println!("{} = {} + {} i   (err ~ {})", o.label, o.re, o.im, o.err);
        }
    }
}

fn cmd_eval(a: EvalArgs, cfg: &SeriesConfig, started: Instant) -> Result<ExitCode> {
    let x = parse_complex(&a.x)?;
    let route = match a.route.as_str() {
        "series" => Route::Series,
        "integral" => Route::Integral,
        other => return Err(anyhow!("unknown route '{other}' (series|integral)")),
    };
    let t = TwistPair::new(a.alpha, a.beta);
    let mut report = RunReport::new("eval");
    report.input("k", a.k);
    report.input("x", &a.x);
    report.input("alpha", a.alpha);
    report.input("beta", a.beta);
    report.input("route", &a.route);
    let v = eval(a.k, x, &t, route, cfg).map_err(|e| anyhow!("{e}"))?;
    report.output(
        &format!("F_{}(x; alpha, beta)", a.k),
        v.value.val,
        v.value.err,
    );
    report.wall_time_ms = started.elapsed().as_millis();
    emit(&report, a.json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_zq(a: ZqArgs, cfg: &SeriesConfig, started: Instant) -> Result<ExitCode> {
    let route = match a.route.as_str() {
        "direct" => ZetaRoute::Direct,
        "hzn" => ZetaRoute::Hzn,
        other => return Err(anyhow!("unknown route '{other}' (direct|hzn)")),
    };
    let form =
        hzn_core::quadfield::IndefForm::from_roots(a.w, a.wp).map_err(|e| anyhow!("{e}"))?;
    let t = TwistPair::new(a.alpha, a.beta);
    let mut report = RunReport::new("zq");
    report.input("k", a.k);
    report.input("w", a.w);
    report.input("wp", a.wp);
    report.input("alpha", a.alpha);
    report.input("beta", a.beta);
    report.input("route", &a.route);
    let v = zq(a.k, &form, &t, route, cfg).map_err(|e| anyhow!("{e}"))?;
    report.output("Z_Q(k; (alpha, beta))", v.value.val, v.value.err);
    report.wall_time_ms = started.elapsed().as_millis();
    emit(&report, a.json);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TableReport {
    command: String,
    discriminant: i64,
    k: u32,
    rows: Vec<serde_json::Value>,
    status: String,
    wall_time_ms: u128,
}

fn cmd_table(a: TableArgs, cfg: &SeriesConfig, started: Instant) -> Result<ExitCode> {
    let twists: Vec<(f64, f64)> = match &a.twists {
        Some(path) => {
            let content = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read twists file {path}"))?;
            table::parse_twists(&content)?
        }
        None => table::DEFAULT_TWISTS.to_vec(),
    };
    let rows = table::compute_table(a.discriminant, a.k, &twists, cfg)?;
    if a.json {
        let json_rows = rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "class_id": r.class_id,
                    "alpha": fmt17(r.alpha),
                    "beta": fmt17(r.beta),
                    "zcal_re": fmt17(r.direct.re),
                    "zcal_im": fmt17(r.direct.im),
                    "rhs_hklf_re": fmt17(r.hzn.re),
                    "rhs_hklf_im": fmt17(r.hzn.im),
                    "abs_diff": fmt17(r.abs_diff()),
                    "d_scaled_re": fmt17(r.direct.re * a.discriminant as f64),
                    "d_scaled_im": fmt17(r.direct.im * a.discriminant as f64),
                })
            })
            .collect();
        let report = TableReport {
            command: "table".into(),
            discriminant: a.discriminant,
            k: a.k,
            rows: json_rows,
            status: "ok".into(),
            wall_time_ms: started.elapsed().as_millis(),
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("{}", table::CSV_HEADER);
        for r in &rows {
            println!("{}", r.csv());
        }
        // Scaling note: the printed zcal column is the plain class sum; the
        // D-scaled variant D * zcal is reported here for comparison.
        for r in &rows {
            eprintln!(
                "note: class {} ({}, {}): D*zcal = {} + {} i",
                r.class_id,
                r.alpha,
                r.beta,
                fmt17(r.direct.re * a.discriminant as f64),
                fmt17(r.direct.im * a.discriminant as f64)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(a: ReduceArgs) -> Result<ExitCode> {
    let fd = fundamental_unit(a.discriminant).map_err(|e| anyhow!("{e}"))?;
    let classes = narrow_classes(&fd).map_err(|e| anyhow!("{e}"))?;
    let (t, u) = fd.unit();
    let quad = |w: &hzn_core::quadfield::QuadIrr| {
        serde_json::json!({
            "p": w.p(),
            "q": w.q(),
            "d": w.d(),
            "value": fmt17(w.value()),
            "conj_value": fmt17(w.conj_value()),
        })
    };
    let mut class_entries = Vec::new();
    for (ci, cycle) in classes.iter().enumerate() {
        let reds = red_set(cycle);
        let forms = forms_of(&reds).map_err(|e| anyhow!("{e}"))?;
        let wide = wide_red_sets(cycle);
        let (wide_b, wide_bs) = match &wide {
            Ok((a, b)) => (
                a.iter().map(quad).collect::<Vec<_>>(),
                b.iter().map(quad).collect::<Vec<_>>(),
            ),
            Err(_) => (Vec::new(), Vec::new()),
        };
        class_entries.push(serde_json::json!({
            "id": ci,
            "cycle": cycle.digits(),
            "red_set": reds.iter().map(quad).collect::<Vec<_>>(),
            "forms": forms.iter().map(|f| {
                let (fa, fb, fc) = f.coefficients();
                serde_json::json!({
                    "w": fmt17(f.w()),
                    "wp": fmt17(f.wp()),
                    "a": fmt17(fa),
                    "b": fmt17(fb),
                    "c": fmt17(fc),
                })
            }).collect::<Vec<_>>(),
            "wide_red": wide_b,
            "wide_red_star": wide_bs,
            "wide_split_error": wide.is_err(),
        }));
    }
    let doc = serde_json::json!({
        "discriminant": fd.discriminant(),
        "fundamental_unit": {
            "t": t.to_string(),
            "u": u.to_string(),
            "norm": fd.norm_eps(),
            "norm_eps_minus_1": fd.norm_eps_minus_1().to_string(),
            "value": fmt17(fd.unit_value()),
        },
        "class_count": classes.len(),
        "classes": class_entries,
    });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CheckReport {
    command: String,
    suite: String,
    samples: u64,
    tol: String,
    seed: u64,
    max_residual: String,
    status: String,
    details: Vec<String>,
    wall_time_ms: u128,
}

fn cmd_check(a: CheckArgs, cfg: &SeriesConfig) -> Result<ExitCode> {
    if !suites::SUITES.contains(&a.suite.as_str()) {
        return Err(anyhow!(
            "unknown suite '{}'; expected one of {:?}",
            a.suite,
            suites::SUITES
        ));
    }
    let samples = a.samples.unwrap_or_else(|| suites::default_samples(&a.suite));
    let tol = a.tol.unwrap_or_else(|| suites::default_tol(&a.suite));
    let started = Instant::now();
    let outcome = suites::run_suite(&a.suite, samples, tol, a.seed, cfg)?;
    if a.json {
        let report = CheckReport {
            command: "check".into(),
            suite: outcome.name.clone(),
            samples: outcome.samples,
            tol: fmt17(outcome.tol),
            seed: a.seed,
            max_residual: fmt17(outcome.max_residual),
            status: if outcome.pass { "ok" } else { "failed" }.into(),
            details: outcome.lines.clone(),
            wall_time_ms: started.elapsed().as_millis(),
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for line in &outcome.lines {
            println!("{line}");
        }
        println!("{}", outcome.summary());
    }
    Ok(if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
