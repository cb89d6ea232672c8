//! `superdyn` command line: classify matrices, search for witnesses, run the
//! law suite and generate the standard matrix families.
//!
//! Exit codes: 0 success, 1 witness budget exhausted or a law failed,
//! 2 usage or input error, 3 numerical failure.

pub mod error;
pub mod families;
pub mod matrix_file;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::Rng;
use serde_json::json;
use superdyn::classifier::{classify, DEFAULT_TOL};
use superdyn::generators::{cis_turns, rng};
use superdyn::lawcheck::{run_suite, LawId, SuiteConfig};
use superdyn::witness::{
    dirichlet_budget, operator_witness_search, vector_witness_search, SearchConfig,
};
use superdyn::CMatrix;

use error::{exit, CliError, CliResult};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "superdyn", version, about = "Super-recurrence and super-rigidity of matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the rigidity classes of a matrix file.
    Classify {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Search times n ≤ n-max for λ with ‖λAⁿ − I‖ (or ‖λAⁿx − x‖) ≤ epsilon.
    Witness {
        path: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
        /// `eK` (1-based basis vector), a JSON array, or a comma list.
        #[arg(long, conflicts_with = "operator")]
        vector: Option<String>,
        /// Operator residual (the default).
        #[arg(long)]
        operator: bool,
        /// Report every time instead of strict records.
        #[arg(long)]
        all_times: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the law suite on a matrix and seeded companions.
    Verify {
        path: PathBuf,
        /// Comma-separated law names (case-insensitive); all when omitted.
        #[arg(long, value_delimiter = ',')]
        laws: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long)]
        json: bool,
    },
    /// Write a matrix file for a named family (`key=value` parameters).
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Non-normative demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// First witness time against dimension for random unimodular diagonals.
    BudgetGrowth {
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        n_max: u64,
        #[arg(long)]
        json: bool,
    },
}

/// What a command prints and how it exits.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn new(code: i32, report: Option<&Report>, json: bool, text: String) -> Self {
        let stdout = match report {
            Some(r) if json => r.to_json(),
            _ => text,
        };
        Self { code, stdout }
    }
}

/// Applies `SUPERDYN_THREADS` (0 or unset = automatic).
pub fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("SUPERDYN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("SUPERDYN_THREADS must be a non-negative integer, got `{v}`")))?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Classify { path, tol, json } => cmd_classify(&path, tol, json),
        Command::Witness {
            path,
            n_max,
            epsilon,
            vector,
            operator: _,
            all_times,
            json,
        } => cmd_witness(&path, n_max, epsilon, vector.as_deref(), all_times, json),
        Command::Verify {
            path,
            laws,
            seed,
            samples,
            tol,
            n_max,
            epsilon,
            json,
        } => {
            let laws = parse_laws(&laws)?;
            let cfg = SuiteConfig {
                laws,
                tol,
                search: SearchConfig::new(n_max, epsilon),
                seed,
                samples,
                ..SuiteConfig::default()
            };
            cmd_verify(&path, &cfg, json)
        }
        Command::Gen {
            family,
            params,
            seed,
            out,
        } => cmd_gen(&family, &params, seed, out.as_deref()),
        Command::Demo {
            demo:
                Demo::BudgetGrowth {
                    max_dim,
                    epsilon,
                    samples,
                    seed,
                    n_max,
                    json,
                },
        } => demo_budget_growth(max_dim, epsilon, samples, seed, n_max, json),
    }
}

pub fn cmd_classify(path: &Path, tol: f64, json: bool) -> CliResult<Outcome> {
    let input = matrix_file::load(path)?;
    let k = classify(&input.matrix, tol)?;
    let config = json!({ "tol": tol, "field": matrix_file::field_tag(input.matrix.field()) });
    let mut text = format!("verdict: {:?}\n", k.verdict);
    match (&k.certificate, &k.obstruction) {
        (Some(c), _) => {
            text += &format!("radius: {}\n", c.radius);
            text += &format!("eigenbasis condition: {:.6}\n", c.eigenbasis_condition);
        }
        (None, Some(o)) => text += &format!("obstruction: {} ({})\n", o.kind.name(), o.detail),
        (None, None) => {}
    }
    for e in &k.spectrum.eigenvalues {
        text += &format!(
            "eigenvalue {} (algebraic {}, geometric {})\n",
            fmt_c(e.value),
            e.algebraic_mult,
            e.geometric_mult
        );
    }
    let r = Report::new("classify", input.digest, config, report::class(&k));
    Ok(Outcome::new(exit::OK, Some(&r), json, text))
}

/// `eK` (1-based), a JSON array of numbers or `[re, im]` pairs, or `a,b,c`.
pub fn parse_vector(s: &str, dim: usize) -> CliResult<Vec<Complex64>> {
    let s = s.trim();
    let bad = |why: &str| CliError::Usage(format!("--vector `{s}`: {why}"));
    let x: Vec<Complex64> = if let Some(k) = s.strip_prefix('e') {
        let k: usize = k.parse().map_err(|_| bad("expected eK with K a positive integer"))?;
        if k == 0 || k > dim {
            return Err(bad(&format!("basis index must lie in 1..={dim}")));
        }
        (0..dim)
            .map(|j| Complex64::new(if j + 1 == k { 1.0 } else { 0.0 }, 0.0))
            .collect()
    } else if s.starts_with('[') {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| bad(&format!("invalid JSON: {e}")))?;
        let items = v.as_array().ok_or_else(|| bad("expected a JSON array"))?;
        items
            .iter()
            .map(|it| match it {
                serde_json::Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
                serde_json::Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
                    (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                    _ => Err(bad("entries must be numbers or [re, im] pairs")),
                },
                _ => Err(bad("entries must be numbers or [re, im] pairs")),
            })
            .collect::<CliResult<_>>()?
    } else {
        s.split(',')
            .map(|t| families::parse_complex(t.trim()))
            .collect::<CliResult<_>>()?
    };
    if x.len() != dim {
        return Err(bad(&format!("has {} entries, matrix dimension is {dim}", x.len())));
    }
    if x.iter().any(|z| !z.is_finite()) {
        return Err(bad("entries must be finite"));
    }
    Ok(x)
}

pub fn cmd_witness(
    path: &Path,
    n_max: u64,
    epsilon: f64,
    vector: Option<&str>,
    all_times: bool,
    json: bool,
) -> CliResult<Outcome> {
    let input = matrix_file::load(path)?;
    let a = &input.matrix;
    let mut cfg = SearchConfig::new(n_max, epsilon);
    if all_times {
        cfg = cfg.all_times();
    }
    let (mode, search) = match vector {
        Some(v) => {
            let x = parse_vector(v, a.dim())?;
            ("vector", vector_witness_search(a, &x, &cfg)?)
        }
        None => ("operator", operator_witness_search(a, &cfg).map_err(|e| match e {
            superdyn::Error::ZeroPower => {
                CliError::Usage("the zero matrix has no witness at any time".into())
            }
            e => e.into(),
        })?),
    };
    let config = json!({
        "mode": mode,
        "n_max": n_max,
        "epsilon": epsilon,
        "record_only": !all_times,
    });
    let b = &search.best;
    let mut text = match search.first_success {
        Some(n) => {
            let c = search.certificates.iter().find(|c| c.n == n).unwrap_or(b);
            format!(
                "witness found at n = {n}: lambda = {}, residual {:e}\n",
                fmt_scalar(&c.lambda),
                c.residual
            )
        }
        None => format!(
            "budget exhausted (n ≤ {n_max}): best n = {}, lambda = {}, residual {:e}\n",
            b.n,
            fmt_scalar(&b.lambda),
            b.residual
        ),
    };
    for c in &search.certificates {
        text += &format!("  n = {:>8}  residual {:.6e}\n", c.n, c.residual);
    }
    let code = if search.success() { exit::OK } else { exit::NEGATIVE };
    let r = Report::new("witness", input.digest, config, report::search(&search));
    Ok(Outcome::new(code, Some(&r), json, text))
}

pub fn parse_laws(names: &[String]) -> CliResult<Vec<LawId>> {
    if names.is_empty() {
        return Ok(LawId::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| n.parse::<LawId>().map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

pub fn cmd_verify(path: &Path, cfg: &SuiteConfig, json: bool) -> CliResult<Outcome> {
    let input = matrix_file::load(path)?;
    let reports = run_suite(&input.matrix, cfg)?;
    let all = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &reports {
        text += &format!(
            "[{}] {}: margin {:.3e}; {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.law,
            r.margin,
            r.detail
        );
    }
    text += if all { "all laws hold\n" } else { "some laws failed\n" };
    let config = json!({
        "laws": cfg.laws.iter().map(|l| l.name()).collect::<Vec<_>>(),
        "tol": cfg.tol,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "max_cond": cfg.max_cond,
        "powers": cfg.powers,
        "n_max": cfg.search.n_max,
        "epsilon": cfg.search.epsilon,
    });
    let results = json!({
        "all_passed": all,
        "reports": reports.iter().map(report::law).collect::<Vec<_>>(),
    });
    let r = Report::new("verify", input.digest, config, results);
    Ok(Outcome::new(if all { exit::OK } else { exit::NEGATIVE }, Some(&r), json, text))
}

pub fn cmd_gen(family: &str, params: &[String], seed: u64, out: Option<&Path>) -> CliResult<Outcome> {
    let a = families::generate(family, params, seed)?;
    let text = matrix_file::MatrixFile::from_matrix(&a).to_json() + "\n";
    match out {
        Some(p) => {
            std::fs::write(p, &text).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            Ok(Outcome {
                code: exit::OK,
                stdout: format!("wrote {} ({}x{}, field {})\n", p.display(), a.dim(), a.dim(), matrix_file::field_tag(a.field())),
            })
        }
        None => Ok(Outcome {
            code: exit::OK,
            stdout: text,
        }),
    }
}

pub fn demo_budget_growth(
    max_dim: usize,
    epsilon: f64,
    samples: usize,
    seed: u64,
    n_max: u64,
    json: bool,
) -> CliResult<Outcome> {
    if max_dim == 0 || samples == 0 {
        return Err(CliError::Usage("max-dim and samples must be positive".into()));
    }
    let mut r = rng(seed);
    let cfg = SearchConfig::new(n_max, epsilon);
    let mut rows = Vec::new();
    let mut text = format!(
        "first n with ‖λAⁿ − I‖ ≤ {epsilon} for random unimodular diagonals ({samples} per dimension, n ≤ {n_max})\n   d  reached  median n     max n  pigeonhole bound\n"
    );
    for d in 1..=max_dim {
        let mut firsts: Vec<u64> = Vec::new();
        for _ in 0..samples {
            let entries: Vec<Complex64> =
                (0..d).map(|_| cis_turns(1.0, r.gen_range(0.0..1.0))).collect();
            let a = CMatrix::diag(&entries)?;
            if let Some(n) = operator_witness_search(&a, &cfg)?.first_success {
                firsts.push(n);
            }
        }
        firsts.sort_unstable();
        let median = firsts.get(firsts.len() / 2).copied();
        let max = firsts.last().copied();
        let delta = epsilon / ((d as f64).sqrt().min(2.0) * std::f64::consts::TAU);
        let bound = dirichlet_budget(d as u32, delta.min(0.49)).ok();
        let show = |v: Option<u64>| v.map_or("-".to_string(), |n| n.to_string());
        text += &format!(
            "{:>4}  {:>4}/{:<3} {:>8} {:>9}  {:>16}\n",
            d,
            firsts.len(),
            samples,
            show(median),
            show(max),
            show(bound)
        );
        rows.push(json!({
            "d": d,
            "reached": firsts.len(),
            "first_success": firsts,
            "pigeonhole_bound": bound,
        }));
    }
    let config = json!({
        "max_dim": max_dim,
        "epsilon": epsilon,
        "samples": samples,
        "seed": seed,
        "n_max": n_max,
    });
    let rep = Report::new("demo budget-growth", String::new(), config, json!({ "rows": rows }));
    Ok(Outcome::new(exit::OK, Some(&rep), json, text))
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn fmt_scalar(s: &superdyn::witness::ScaledScalar) -> String {
    let v = s.value();
    if v.is_finite() && (v.norm() > 0.0 || s.is_zero()) {
        fmt_c(v)
    } else {
        format!("({})·e^{}", fmt_c(s.mantissa), s.log_scale)
    }
}
