//! `harmonic-verify`: runs the verification suites and writes judged reports.
//!
//! Exit codes: 0 every verdict passes, 2 some verdict fails, 3 a numerical
//! procedure failed (accuracy, conditioning, truncation), 4 bad input
//! (arguments, config or data files).

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonic_core::automorphic::{ingest_maass, mean_square_report, MaassFormData};
use harmonic_core::report::{to_csv, to_svg, VerdictRow};
use harmonic_core::suites::{
    centered_circle_bump, claim_suite, kernel_eval_row, lemma1_suite, lemma2_suite, lemma3_suite, rs_unfold_suite, ClaimConfig, Lemma1Config, Lemma2Config,
    Lemma3Config, RsUnfoldConfig, SuiteOutcome,
};
use harmonic_core::test_vectors::{make_bump, w_nt, BumpSpec};
use harmonic_core::transforms::{flat_transform, psi_flat, sharp_transform, SharpMode, SharpOptions};
use harmonic_core::{Error, C64};
use serde::de::DeserializeOwned;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FAIL: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "harmonic-verify", version, about = "Verification suites for principal-series transforms and Maass-form identities")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// JSON file with the suite configuration (fields not given keep their defaults).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "harmonic-out")]
    out: PathBuf,
    /// Report formats to write.
    #[arg(long, global = true, value_delimiter = ',', default_value = "csv")]
    format: Vec<Format>,
    /// Seed for randomized controls (recorded in every output).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the relative quadrature tolerance of the suite.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace, window and decay bounds for the unipotent test vectors w_{N,T}.
    VerifyLemma1 {
        /// Comma-separated N values (T = N^(2/3)).
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<i64>>,
    },
    /// Value, window and decay bounds for the circle test functions u_{N,T}.
    VerifyLemma2 {
        /// Comma-separated N:T pairs, e.g. 64:16,128:26.
        #[arg(long, value_delimiter = ',')]
        pairs: Option<Vec<String>>,
        /// Im τ.
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Region bounds for the model transform ψ^♭(ξ, s).
    VerifyLemma3,
    /// Two-term asymptotics of the kernel factor.
    VerifyClaim {
        /// Comma-separated values of Im τ.
        #[arg(long, value_delimiter = ',')]
        tau_list: Option<Vec<f64>>,
    },
    /// Unfolding identity, automorphy certificate and spherical coefficients.
    RsUnfold {
        /// Maass-form data file.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Comma-separated real s values.
        #[arg(long, value_delimiter = ',')]
        s_list: Option<Vec<f64>>,
    },
    /// Validate a Maass-form data file.
    Ingest { path: PathBuf },
    /// Evaluate k_λ(c) (direct and asymptotic).
    KernelEval {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        c: f64,
    },
    /// Evaluate one transform value.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        /// Im τ (sharp).
        #[arg(long, default_value_t = 2.0)]
        tau: f64,
        /// Im λ (sharp).
        #[arg(long, default_value_t = 10.0)]
        lambda: f64,
        /// Centre of the circle bump (sharp).
        #[arg(long, default_value_t = 0.6)]
        bump_center: f64,
        /// Scale of the circle bump; its support radius is 0.4·scale (sharp).
        #[arg(long, default_value_t = 0.25)]
        bump_scale: f64,
        /// Use the asymptotic kernel (sharp).
        #[arg(long)]
        asymptotic: bool,
        /// N and T of w_{N,T} (flat).
        #[arg(long, default_value_t = 64)]
        n: i64,
        #[arg(long, default_value_t = 16.0)]
        t: f64,
        /// Im s (flat, psi-flat).
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        /// ξ (psi-flat).
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TransformKind {
    Sharp,
    Flat,
    PsiFlat,
}

/// Failure of a command, already classified by exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Accuracy { .. } | Error::Conditioning(_) | Error::Truncation(_) => EXIT_NUMERICAL,
            Error::Domain(_) | Error::Usage(_) | Error::Input(_) => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn load_config<C: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<C, Failure> {
    match path {
        None => Ok(C::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| input_error(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", p.display())))
        }
    }
}

fn default_data_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/maass_psl2z_even_r13.7797.json")
}

fn parse_pairs(pairs: &[String]) -> Result<Vec<(i64, f64)>, Failure> {
    pairs
        .iter()
        .map(|p| {
            let (n, t) = p.split_once(':').ok_or_else(|| input_error(format!("pair {p:?} is not of the form N:T")))?;
            let n = n.trim().parse().map_err(|_| input_error(format!("bad N in {p:?}")))?;
            let t = t.trim().parse().map_err(|_| input_error(format!("bad T in {p:?}")))?;
            Ok((n, t))
        })
        .collect()
}

/// Writes the requested formats; returns the CSV text.
fn emit(g: &GlobalOpts, outcome: &SuiteOutcome) -> Result<String, Failure> {
    std::fs::create_dir_all(&g.out).map_err(|e| input_error(format!("{}: {e}", g.out.display())))?;
    let config = serde_json::to_string(&outcome.config).expect("json values serialize");
    let csv = format!("# suite={} seed={} config={}\n{}", outcome.name, g.seed, config, to_csv(&outcome.all_rows()));
    let write = |name: String, text: &str| std::fs::write(g.out.join(&name), text).map_err(|e| input_error(format!("{name}: {e}")));
    if g.format.contains(&Format::Csv) {
        write(format!("{}.csv", outcome.name), &csv)?;
    }
    if g.format.contains(&Format::Json) {
        let doc = serde_json::json!({ "seed": g.seed, "outcome": outcome });
        write(format!("{}.json", outcome.name), &serde_json::to_string_pretty(&doc).expect("reports serialize"))?;
    }
    if g.format.contains(&Format::Svg) {
        for r in &outcome.reports {
            let name: String = r.name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
            write(format!("{name}.svg"), &to_svg(r))?;
        }
    }
    Ok(csv)
}

fn finish(g: &GlobalOpts, outcome: SuiteOutcome) -> Result<u8, Failure> {
    let csv = emit(g, &outcome)?;
    print!("{csv}");
    for n in &outcome.notes {
        eprintln!("note: {n}");
    }
    let failures = outcome.failures();
    for f in &failures {
        eprintln!("evaluation failure: {f}");
    }
    Ok(if !failures.is_empty() {
        EXIT_NUMERICAL
    } else if outcome.pass() {
        0
    } else {
        EXIT_FAIL
    })
}

fn single_row(g: &GlobalOpts, name: &str, row: VerdictRow) -> Result<u8, Failure> {
    let mut outcome = SuiteOutcome {
        name: name.into(),
        config: serde_json::Value::Null,
        reports: Vec::new(),
        rows: vec![row],
        notes: Vec::new(),
    };
    outcome.config = serde_json::json!({ "command": name });
    finish(g, outcome)
}

fn ingest_report(d: &MaassFormData) -> Result<SuiteOutcome, Failure> {
    let n = d.n_max();
    let ts: Vec<usize> = [50usize, 100, 200, 400, 800, 1600, 3200].into_iter().filter(|&t| t <= n).collect();
    let mut outcome = SuiteOutcome {
        name: "ingest".into(),
        config: serde_json::json!({ "R": d.r(), "N_max": n, "symmetry": d.symmetry(), "normalization": d.normalization() }),
        reports: Vec::new(),
        rows: Vec::new(),
        notes: vec![format!("mean-square constant C = {:.6e}", d.mean_square_constant()), format!("provenance: {}", d.provenance())],
    };
    if ts.len() >= 2 {
        outcome.reports.push(mean_square_report(d, &ts)?);
    }
    outcome.rows.push(VerdictRow {
        check_id: "ingest/schema".into(),
        params: format!("R={};N_max={n}", d.r()),
        value_lhs: d.mu(),
        value_rhs: 0.25 + d.r() * d.r(),
        rel_discrepancy: 0.0,
        tail_bound: 0.0,
        verdict: true,
    });
    Ok(outcome)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().map_err(|e| input_error(e.to_string()))?;
    }
    match &cli.command {
        Command::VerifyLemma1 { n_list } => {
            let mut cfg: Lemma1Config = load_config(&g.config)?;
            if let Some(n) = n_list {
                cfg.n_list = n.clone();
            }
            if let Some(t) = g.tol {
                cfg.rel_tol = t;
            }
            finish(g, lemma1_suite(&cfg)?)
        }
        Command::VerifyLemma2 { pairs, tau } => {
            let mut cfg: Lemma2Config = load_config(&g.config)?;
            if let Some(p) = pairs {
                cfg.pairs = parse_pairs(p)?;
            }
            if let Some(t) = tau {
                cfg.tau = *t;
            }
            if let Some(t) = g.tol {
                cfg.rel_tol = t;
            }
            finish(g, lemma2_suite(&cfg)?)
        }
        Command::VerifyLemma3 => {
            let mut cfg: Lemma3Config = load_config(&g.config)?;
            if let Some(t) = g.tol {
                cfg.rel_tol = t;
            }
            finish(g, lemma3_suite(&cfg)?)
        }
        Command::VerifyClaim { tau_list } => {
            let mut cfg: ClaimConfig = load_config(&g.config)?;
            if let Some(t) = tau_list {
                cfg.tau_list = t.clone();
            }
            if let Some(t) = g.tol {
                cfg.rel_tol = t;
            }
            finish(g, claim_suite(&cfg)?)
        }
        Command::RsUnfold { data, s_list } => {
            let mut cfg: RsUnfoldConfig = load_config(&g.config)?;
            cfg.seed = g.seed;
            if let Some(s) = s_list {
                cfg.s_list = s.clone();
            }
            if let Some(t) = g.tol {
                cfg.unfold.rel_tol = t;
            }
            let d = ingest_maass(data.clone().unwrap_or_else(default_data_path))?;
            finish(g, rs_unfold_suite(&d, &cfg)?)
        }
        Command::Ingest { path } => {
            let d = ingest_maass(path)?;
            finish(g, ingest_report(&d)?)
        }
        Command::KernelEval { tau, lambda, c } => {
            let row = kernel_eval_row(*tau, *lambda, *c, g.tol.unwrap_or(1e-10))?;
            single_row(g, "kernel-eval", row)
        }
        Command::Transform { kind, tau, lambda, bump_center, bump_scale, asymptotic, n, t, s, xi } => {
            let tol = g.tol.unwrap_or(1e-8);
            let (id, params, v) = match kind {
                TransformKind::Sharp => {
                    let psi = make_bump(BumpSpec::circle())?;
                    let u = centered_circle_bump(&psi, *bump_center, *bump_scale)?;
                    let mode = if *asymptotic { SharpMode::Asymptotic { threshold: 0.0 } } else { SharpMode::Direct };
                    let v = sharp_transform(&u, C64::new(0.0, *tau), C64::new(0.0, *lambda), SharpOptions { mode, acknowledge_degenerate: false, rel_tol: tol })?;
                    ("transform/sharp", format!("tau={tau}i;lambda={lambda}i;bump_center={bump_center};bump_scale={bump_scale};asymptotic={asymptotic}"), v)
                }
                TransformKind::Flat => {
                    let psi = make_bump(BumpSpec::line())?;
                    let w = w_nt(*n, *t, &psi)?;
                    ("transform/flat", format!("N={n};T={t};s={s}i"), flat_transform(&w, C64::new(0.0, *s), tol)?)
                }
                TransformKind::PsiFlat => {
                    let psi = make_bump(BumpSpec::line())?.to_line_function();
                    ("transform/psi-flat", format!("xi={xi};s={s}i"), psi_flat(&psi, *xi, C64::new(0.0, *s), tol)?)
                }
            };
            let row = VerdictRow { check_id: id.into(), params, value_lhs: v.re, value_rhs: v.im, rel_discrepancy: 0.0, tail_bound: 0.0, verdict: true };
            single_row(g, "transform", row)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
