//! `hankel`: command-line front end for the hankel-cones library.
//!
//! Results go to stdout as JSON, progress and errors to stderr. Exit codes:
//! 0 success / certified, 1 refuted or failed check, 2 inconclusive, and 3 or
//! more for errors (see [`CliError::exit_code`]).

mod run_config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use hankel_cones::convolution::{conv_power, hankel_form, lemma_constant, lemma_slack, LemmaConstant};
use hankel_cones::psd::{
    pairing_experiment, sample_psd, sample_ucone, search_pns, PairingReport, SearchSettings,
};
use hankel_cones::sampling::{normal_vec, rng, rng_stream};
use hankel_cones::sos::{
    build_gram_frame, check_hsos, check_sos, dual_membership, gram_to_tensor, random_psd, DualMembership,
};
use hankel_cones::tensor::{eval_form, hankel_to_symmetric, rank_one, GeneratingVector, SymmetricTensor};
use hankel_cones::vandermonde::{
    compose, decompose, dual_image_point, reconstruction_residual, ut_image, VandermondeCoefficients,
    VandermondeFrame,
};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use run_config::{NodeScheme, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "hankel",
    version,
    about = "Hankel tensors, their SOS and PSD cones, and the duals"
)]
struct Cli {
    /// JSON run configuration; missing fields take their defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Suppress progress messages on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Shape {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a Hankel form by convolution and by its symmetric tensor.
    Eval {
        #[arg(long, value_name = "FILE")]
        gv: PathBuf,
        /// Point, as `1,0.5,-2` or a JSON array.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Expand a generating vector into its symmetric tensor.
    Tensorize {
        #[arg(long, value_name = "FILE")]
        gv: PathBuf,
    },
    /// Vandermonde coefficients of a generating vector.
    Decompose {
        #[arg(long, value_name = "FILE")]
        gv: PathBuf,
        /// `chebyshev` or `custom:<file>`; overrides the configured scheme.
        #[arg(long)]
        nodes: Option<NodeScheme>,
    },
    /// SOS feasibility of a symmetric tensor.
    CheckSos {
        #[arg(long, value_name = "FILE")]
        tensor: PathBuf,
    },
    /// SOS feasibility of a Hankel tensor.
    CheckHsos {
        #[arg(long, value_name = "FILE")]
        gv: PathBuf,
    },
    /// Membership of a tensor in the dual SOS cone.
    DualCheck {
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
        #[command(flatten)]
        shape: Shape,
    },
    /// Search for a negative value of a Hankel form at random unit vectors.
    PsdSample {
        #[arg(long, value_name = "FILE")]
        gv: PathBuf,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Pair nonnegative Vandermonde compositions with samples of U(m, n).
    Pairing {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 20)]
        members: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Norm-inequality constant for convolution powers, with a random spot check.
    LemmaConst {
        #[command(flatten)]
        shape: Shape,
        /// Distinct points, as `0,1,2` or a JSON array; defaults to 0, 1, …, n-1.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Look for PSD Hankel forms that the SOS solver cannot certify; writes JSON lines.
    SearchPns {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also append candidate lines to this file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check the dual-image and Gram identities on random inputs.
    IdentityCheck {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the effective run configuration.
    ShowConfig,
}

/// A failed command. Printed as one JSON line on stderr.
#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind {
            "usage" => 3,
            "io" => 4,
            "parse" => 5,
            "config" => 6,
            _ => 7,
        }
    }
}

impl From<hankel_cones::Error> for CliError {
    fn from(e: hankel_cones::Error) -> Self {
        use hankel_cones::Error as E;
        let kind = match e {
            E::DimensionMismatch { .. } | E::ShapeMismatch { .. } => "shape",
            E::InvalidArgument(_) | E::OddOrder(_) | E::NotSymmetric { .. } => "invalid_argument",
            E::Overflow(_) => "overflow",
            E::Singular { .. } | E::DuplicateNodes { .. } | E::NotPsd { .. } => "numerical",
            E::NoConvergence { .. } => "no_convergence",
        };
        CliError::new(kind, e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::new("parse", format!("{}: {e}", path.display())))
}

fn parse_vector(s: &str) -> CliResult<Vec<f64>> {
    let s = s.trim();
    if s.starts_with('[') {
        return serde_json::from_str(s).map_err(|e| CliError::new("parse", format!("vector `{s}`: {e}")));
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::new("parse", format!("vector `{s}`: {e}")))
        })
        .collect()
}

fn emit<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::new("internal", e.to_string()))?;
    println!("{text}");
    Ok(())
}

struct Ctx {
    config: RunConfig,
    quiet: bool,
}

impl Ctx {
    fn progress(&self, msg: &str) {
        if !self.quiet {
            eprintln!("hankel: {msg}");
        }
    }

    /// Flag, then config, then a fresh seed (announced on stderr).
    fn seed(&self, flag: Option<u64>) -> u64 {
        if let Some(s) = flag.or(self.config.seed) {
            return s;
        }
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0);
        let seed = rng(nanos as u64).random();
        self.progress(&format!("auto seed {seed}"));
        seed
    }
}

#[derive(Serialize, Deserialize)]
struct EvalOutput {
    x: Vec<f64>,
    convolution: f64,
    tensor: f64,
    difference: f64,
}

#[derive(Serialize, Deserialize)]
struct DecomposeOutput {
    frame: VandermondeFrame,
    coefficients: VandermondeCoefficients,
    residual: f64,
    nonnegative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct DualCheckOutput {
    m: usize,
    n: usize,
    #[serde(flatten)]
    membership: DualMembership,
}

#[derive(Serialize, Deserialize)]
struct PairingOutput {
    seed: u64,
    m: usize,
    n: usize,
    members: usize,
    samples: usize,
    report: PairingReport,
}

#[derive(Serialize, Deserialize)]
struct SpotCheck {
    seed: u64,
    pairs: usize,
    sums3: usize,
    sums5: usize,
    min_slack: f64,
    pass: bool,
}

#[derive(Serialize, Deserialize)]
struct LemmaOutput {
    constant: LemmaConstant,
    spot_check: SpotCheck,
}

#[derive(Serialize, Deserialize)]
struct SearchHeader {
    seed: u64,
    m: usize,
    n: usize,
    trials: usize,
    psd_samples: usize,
    config: RunConfig,
}

#[derive(Serialize, Deserialize)]
struct IdentitySuite {
    cases: usize,
    max_error: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize, Deserialize)]
struct IdentityOutput {
    seed: u64,
    m: usize,
    n: usize,
    constraints: usize,
    gram_size: usize,
    dual_image: IdentitySuite,
    gram: IdentitySuite,
    pass: bool,
}

fn run(cli: Cli) -> CliResult<u8> {
    let config = match &cli.config {
        Some(path) => read_json::<RunConfig>(path)?,
        None => RunConfig::default(),
    };
    config.validate().map_err(|e| CliError::new("config", e))?;
    let ctx = Ctx {
        config,
        quiet: cli.quiet,
    };
    let solver = &ctx.config.solver;

    match cli.command {
        Command::Eval { gv, x } => {
            let gv: GeneratingVector = read_json(&gv)?;
            let x = parse_vector(&x)?;
            let convolution = hankel_form(&gv, &x)?;
            let tensor = eval_form(&hankel_to_symmetric(&gv), &x)?;
            emit(&EvalOutput {
                x,
                convolution,
                tensor,
                difference: convolution - tensor,
            })?;
        }
        Command::Tensorize { gv } => {
            let gv: GeneratingVector = read_json(&gv)?;
            emit(&hankel_to_symmetric(&gv))?;
        }
        Command::Decompose { gv, nodes } => {
            let gv: GeneratingVector = read_json(&gv)?;
            let frame = nodes
                .as_ref()
                .unwrap_or(&ctx.config.nodes)
                .frame(gv.m(), gv.n())?;
            let warning = frame.conditioning_warning();
            if let Some(w) = &warning {
                ctx.progress(w);
            }
            let coefficients = decompose(&gv, &frame)?;
            let residual = reconstruction_residual(&gv, &coefficients, &frame)?;
            emit(&DecomposeOutput {
                nonnegative: coefficients.is_nonnegative(),
                frame,
                coefficients,
                residual,
                warning,
            })?;
        }
        Command::CheckSos { tensor } => {
            let t: SymmetricTensor = read_json(&tensor)?;
            let verdict = check_sos(&t, solver)?;
            emit(&verdict)?;
            return Ok(verdict.exit_code() as u8);
        }
        Command::CheckHsos { gv } => {
            let gv: GeneratingVector = read_json(&gv)?;
            let verdict = check_hsos(&gv, solver)?;
            emit(&verdict)?;
            return Ok(verdict.exit_code() as u8);
        }
        Command::DualCheck { b, shape } => {
            let b: SymmetricTensor = read_json(&b)?;
            if (b.m(), b.n()) != (shape.m, shape.n) {
                return Err(CliError::new(
                    "shape",
                    format!(
                        "tensor has shape ({}, {}), expected ({}, {})",
                        b.m(),
                        b.n(),
                        shape.m,
                        shape.n
                    ),
                ));
            }
            let frame = build_gram_frame(shape.m, shape.n)?;
            let membership = dual_membership(&b, &frame, solver.eps_psd)?;
            emit(&DualCheckOutput {
                m: shape.m,
                n: shape.n,
                membership,
            })?;
            return Ok(if membership.member { 0 } else { 1 });
        }
        Command::PsdSample { gv, count, seed } => {
            let gv: GeneratingVector = read_json(&gv)?;
            let seed = ctx.seed(seed);
            let count = count.unwrap_or(ctx.config.psd_samples);
            if count == 0 {
                return Err(CliError::new("usage", "--count must be at least 1"));
            }
            emit(&sample_psd(&gv, count, seed, solver)?)?;
        }
        Command::Pairing {
            shape,
            members,
            samples,
            seed,
            jobs,
        } => {
            let seed = ctx.seed(seed);
            let frame = ctx.config.nodes.frame(shape.m, shape.n)?;
            // members come from stream 0; sample j is seeded with seed ^ (j + 1)
            let mut r = rng_stream(seed, 0);
            let vs = (0..members)
                .map(|_| {
                    let alpha = (0..frame.len()).map(|_| r.random_range(0.0..1.0)).collect();
                    compose(&VandermondeCoefficients { alpha }, &frame)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let ys = (0..samples)
                .map(|j| sample_ucone(shape.m, shape.n, ctx.config.ucone_terms, seed ^ (j as u64 + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            let report = pairing_experiment(&vs, &ys, jobs.max(1))?;
            let pass = report.pass;
            emit(&PairingOutput {
                seed,
                m: shape.m,
                n: shape.n,
                members,
                samples,
                report,
            })?;
            return Ok(if pass { 0 } else { 1 });
        }
        Command::LemmaConst { shape, points, seed } => {
            let points = points.as_deref().map(parse_vector).transpose()?;
            let constant = lemma_constant(shape.n, shape.m, points.as_deref(), solver)?;
            let seed = ctx.seed(seed);
            let mut r = rng(seed);
            let pairs = ctx.config.lemma_pairs;
            let (sums3, sums5) = (pairs * 2 / 5, pairs * 2 / 5);
            let mut min_slack = f64::INFINITY;
            for (terms, count) in [(2, pairs), (3, sums3), (5, sums5)] {
                for _ in 0..count {
                    let xs: Vec<Vec<f64>> = (0..terms).map(|_| normal_vec(&mut r, shape.n)).collect();
                    min_slack = min_slack.min(lemma_slack(constant.constant, shape.m, &xs));
                }
            }
            if !min_slack.is_finite() {
                min_slack = 0.0;
            }
            let pass = min_slack >= -1e-9;
            emit(&LemmaOutput {
                constant,
                spot_check: SpotCheck {
                    seed,
                    pairs,
                    sums3,
                    sums5,
                    min_slack,
                    pass,
                },
            })?;
            return Ok(if pass { 0 } else { 1 });
        }
        Command::SearchPns {
            shape,
            trials,
            seed,
            jobs,
            out,
        } => {
            let seed = ctx.seed(seed);
            let settings = SearchSettings {
                trials,
                seed,
                psd_samples: ctx.config.psd_samples,
                jobs: jobs.max(1),
            };
            let header = SearchHeader {
                seed,
                m: shape.m,
                n: shape.n,
                trials,
                psd_samples: settings.psd_samples,
                config: ctx.config.clone(),
            };
            let found = search_pns(shape.m, shape.n, &settings, solver)?;
            ctx.progress(&format!(
                "{trials} trials, {} candidates (inconclusive)",
                found.len()
            ));
            let mut lines = vec![serde_json::to_string(&serde_json::json!({ "header": header }))
                .map_err(|e| CliError::new("internal", e.to_string()))?];
            for c in &found {
                lines.push(serde_json::to_string(c).map_err(|e| CliError::new("internal", e.to_string()))?);
            }
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            for l in &lines {
                writeln!(lock, "{l}").map_err(|e| CliError::new("io", e.to_string()))?;
            }
            if let Some(path) = out {
                let mut f = fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
                for l in &lines[1..] {
                    writeln!(f, "{l}").map_err(|e| CliError::new("io", e.to_string()))?;
                }
            }
        }
        Command::IdentityCheck { shape, seed } => {
            let (m, n) = (shape.m, shape.n);
            let seed = ctx.seed(seed);
            let gram_frame = build_gram_frame(m, n)?;
            let vframe = ctx.config.nodes.frame(m, n)?;
            let mut r = rng(seed);

            let mut worst: f64 = 0.0;
            for _ in 0..200 {
                let x = normal_vec(&mut r, n);
                let lhs = ut_image(&conv_power(&x, m), &vframe)?;
                let rhs = dual_image_point(&rank_one(&x, m).to_symmetric(), &vframe)?;
                for (a, b) in lhs.iter().zip(&rhs) {
                    worst = worst.max((a - b).abs() / b.abs().max(1.0));
                }
            }
            let dual_image = IdentitySuite {
                cases: 200,
                max_error: worst,
                tolerance: 1e-9,
                pass: worst <= 1e-9,
            };

            let mut worst: f64 = 0.0;
            let d = gram_frame.dim();
            for _ in 0..100 {
                let q = random_psd(&mut r, d, d);
                let t = gram_to_tensor(&q, &gram_frame)?;
                for _ in 0..20 {
                    let w = normal_vec(&mut r, n);
                    let direct = q.quadratic_form(&gram_frame.monomials(&w));
                    let form = eval_form(&t, &w)?;
                    worst = worst.max((form - direct).abs() / (1.0 + direct.abs()));
                }
            }
            let gram = IdentitySuite {
                cases: 2000,
                max_error: worst,
                tolerance: 1e-9,
                pass: worst <= 1e-9,
            };
            let pass = dual_image.pass && gram.pass;
            emit(&IdentityOutput {
                seed,
                m,
                n,
                constraints: gram_frame.constraints().len(),
                gram_size: d,
                dual_image,
                gram,
                pass,
            })?;
            return Ok(if pass { 0 } else { 1 });
        }
        Command::ShowConfig => emit(&ctx.config)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            report(&CliError::new("usage", first));
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code())
        }
    }
}

fn report(e: &CliError) {
    let line = serde_json::json!({ "error": e.kind, "message": e.message });
    eprintln!("{line}");
}
