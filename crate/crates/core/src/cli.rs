//! Command-line front end. Every subcommand writes one JSON report (or a CSV
//! table where one exists) and exits with
//! 0 on success, 2 on invalid input, 3 when a check fails and 4 when an
//! eigen-iteration does not converge.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::files::{parse_model_file, parse_potential_file, parse_word};
use crate::gibbs::{
    build_gibbs_measure_with, check_random_words, cylinder_measure, sample_trajectory, verify_gibbs_bounds,
    GibbsMeasureModel, DEFAULT_M_MAX,
};
use crate::mixing::{birkhoff_average, birkhoff_standard_error, decay_csv, decay_table, fitted_log_slope, subdominant_ratio};
use crate::perm::{FiniteSupportPermutation, PermutationSpec, WindowConfiguration};
use crate::potential::{decay_envelope, FiniteRangePotential};
use crate::quasi_inv::{cocycle_bound, cocycle_g, cocycle_limit, m_of, verify_cocycle_identity, verify_quasi_invariance};
use crate::sft::{check_mixing, compute_k0, compute_p0, left_right_sets, p0_search_cap, q_pairs, wielandt_bound, Cylinder, SftModel, SymbolSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser, Serialize)]
#[command(name = "sft-gibbs", version, about = "Gibbs measures on mixing subshifts of finite type")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    /// Model file (TOML).
    pub model: PathBuf,
    /// Potential file, replacing the model's [potential] section.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// Decay rate of the variation envelope (default: from the file, else 0.5).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Longest word length minus one used to estimate c1 and c2.
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    pub m_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PermArgs {
    /// P of the swap involution σ_{P,k}.
    #[arg(long = "swap-P", requires = "swap_k", conflicts_with = "perm")]
    pub swap_p: Option<i64>,
    /// k of the swap involution σ_{P,k}.
    #[arg(long = "swap-k", requires = "swap_p")]
    pub swap_k: Option<i64>,
    /// Permutation as JSON: [[from, to], ...] or {"swap": {"P": 5, "k": 2}}.
    #[arg(long)]
    pub perm: Option<String>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Primitivity test and exponent.
    CheckMixing { model: PathBuf },
    /// k0, P0(k), L/R sets and the pair set Q.
    Constants {
        model: PathBuf,
        /// Block width for P0 (default k0).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Pressure, eigenvectors, chain and Gibbs constants.
    GibbsBuild {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Exact measure of a cylinder.
    Cylinder {
        #[command(flatten)]
        model: ModelArgs,
        /// Constraint POS=SYM[,SYM...]; repeatable.
        #[arg(long = "at")]
        at: Vec<String>,
        /// Word placed at --offset.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        offset: i64,
    },
    /// Gibbs constants on every word up to --m-max and on random words.
    VerifyGibbsBounds {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1000)]
        random_words: usize,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// Cocycle G_N on one configuration.
    Cocycle {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        perm: PermArgs,
        /// Configuration, as a word placed at --window-offset.
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        window_offset: i64,
        /// Truncation N (default M(τ) + r).
        #[arg(long = "N")]
        n: Option<i64>,
    },
    /// Sandwich α ≤ μ(T_σ⁻¹C)/μ(C) ≤ β on every cylinder on [−N, N].
    VerifyQuasiInvariance {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        perm: PermArgs,
        #[arg(long = "N")]
        n: i64,
    },
    /// log ratio against the cocycle limit on every cylinder on [−N, N].
    VerifyCocycleIdentity {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        perm: PermArgs,
        #[arg(long = "N")]
        n: i64,
    },
    /// Factorization gaps |μ(E ∩ S^{−n}F) − μ(E)μ(F)| for n = 0..=n_max.
    MixingDecay {
        #[command(flatten)]
        model: ModelArgs,
        /// Past event, POS=SYM[,SYM...] with POS ≤ 0; repeatable.
        #[arg(long = "e", required = true)]
        e: Vec<String>,
        /// Future event, POS=SYM[,SYM...] with POS ≥ 1; repeatable.
        #[arg(long = "f", required = true)]
        f: Vec<String>,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// One seeded trajectory.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1000)]
        length: usize,
    },
    /// Frequency of a cylinder along one seeded trajectory.
    Birkhoff {
        #[command(flatten)]
        model: ModelArgs,
        /// Constraint POS=SYM[,SYM...]; repeatable.
        #[arg(long = "at", required = true)]
        at: Vec<String>,
        #[arg(long = "Q", default_value_t = 100_000)]
        q: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckMixing { .. } => "check-mixing",
            Command::Constants { .. } => "constants",
            Command::GibbsBuild { .. } => "gibbs-build",
            Command::Cylinder { .. } => "cylinder",
            Command::VerifyGibbsBounds { .. } => "verify-gibbs-bounds",
            Command::Cocycle { .. } => "cocycle",
            Command::VerifyQuasiInvariance { .. } => "verify-quasi-invariance",
            Command::VerifyCocycleIdentity { .. } => "verify-cocycle-identity",
            Command::MixingDecay { .. } => "mixing-decay",
            Command::Sample { .. } => "sample",
            Command::Birkhoff { .. } => "birkhoff",
        }
    }
}

/// `(c1, c2, C, α, β)` as used by a command; absent entries are `null`.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Constants {
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

struct Outcome {
    pass: bool,
    result: Value,
    constants: Constants,
    csv: Option<String>,
}

impl Outcome {
    fn new(pass: bool, result: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            pass,
            result: to_value(result)?,
            constants: Constants::default(),
            csv: None,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct Report<'a> {
    schema: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a Cli,
    seed: u64,
    constants: Constants,
    pass: bool,
    exit_code: i32,
    result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        _ => EXIT_INVALID,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "ParseError",
        Error::Io(_) => "IoError",
        Error::NoConvergence(_) => "NoConvergence",
        Error::NotMixing => "NotMixing",
        Error::NotInvolution => "NotInvolution",
        Error::WindowTooSmall { .. } => "WindowTooSmall",
        Error::NullCylinder => "NullCylinder",
        Error::OutsideGamma => "OutsideGamma",
        Error::BadSupport(_) => "BadSupport",
        Error::KTooSmall { .. } => "KTooSmall",
        _ => "ValidationError",
    }
}

/// Runs one parsed invocation. Returns the exit code and the report text.
pub fn run(cli: &Cli) -> (i32, String) {
    let outcome = execute(cli);
    let (code, pass, result, constants, error, csv) = match outcome {
        Ok(o) => {
            let code = if o.pass { EXIT_OK } else { EXIT_VIOLATION };
            (code, o.pass, o.result, o.constants, None, o.csv)
        }
        Err(e) => {
            let err = json!({ "kind": error_kind(&e), "message": e.to_string() });
            (exit_code_for(&e), false, Value::Null, Constants::default(), Some(err), None)
        }
    };
    if cli.format == Format::Csv && error.is_none() {
        if let Some(csv) = csv {
            return (code, csv);
        }
        let e = Error::BadParameters(format!("csv output is not available for {}", cli.command.name()));
        let err = json!({ "kind": error_kind(&e), "message": e.to_string() });
        return (EXIT_INVALID, render(cli, EXIT_INVALID, false, Value::Null, Constants::default(), Some(err)));
    }
    (code, render(cli, code, pass, result, constants, error))
}

fn render(cli: &Cli, code: i32, pass: bool, result: Value, constants: Constants, error: Option<Value>) -> String {
    let report = Report {
        schema: SCHEMA_VERSION,
        tool: "sft-gibbs",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        config: cli,
        seed: cli.seed,
        constants,
        pass,
        exit_code: code,
        result,
        error,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    s
}

/// Parses `args`, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let (code, text) = run(&cli);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("sft-gibbs: cannot write {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => {
            use std::io::Write;
            // a closed pipe (`| head`) is not an error
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
        }
    }
    eprintln!("{}: exit {code}", cli.command.name());
    code
}

struct Loaded {
    model: SftModel,
    phi: FiniteRangePotential,
    alpha: f64,
    gm: GibbsMeasureModel,
}

fn load_model(path: &PathBuf) -> Result<SftModel> {
    Ok(parse_model_file(path)?.model)
}

fn load(args: &ModelArgs) -> Result<Loaded> {
    let file = parse_model_file(&args.model)?;
    let (phi, file_alpha) = match &args.potential {
        Some(p) => parse_potential_file(p, &file.model)?,
        None => (
            file.potential.clone().unwrap_or_else(|| FiniteRangePotential::zero(&file.model)),
            file.alpha,
        ),
    };
    let alpha = args.alpha.unwrap_or(file_alpha);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadAlpha(alpha));
    }
    let mut gm = build_gibbs_measure_with(&file.model, &phi, args.m_max)?;
    if let Some(p) = file.stochastic {
        gm = gm.with_perturbed_chain(p, None)?;
    }
    Ok(Loaded {
        model: file.model,
        phi,
        alpha,
        gm,
    })
}

fn permutation(args: &PermArgs) -> Result<FiniteSupportPermutation> {
    match (args.swap_p, args.swap_k, &args.perm) {
        (Some(p), Some(k), None) => FiniteSupportPermutation::swap_involution(p, k),
        (None, None, Some(text)) => serde_json::from_str::<PermutationSpec>(text)
            .map_err(|e| Error::InvalidPermutation(e.to_string()))?
            .build(),
        _ => Err(Error::BadParameters("give either --swap-P with --swap-k, or --perm".into())),
    }
}

/// Parses `POS=SYM[,SYM...]` constraints into a cylinder.
pub fn parse_constraints(model: &SftModel, items: &[String]) -> Result<Cylinder> {
    let mut cyl = Cylinder::whole();
    for item in items {
        let bad = || Error::BadParameters(format!("constraint {item:?} is not POS=SYM[,SYM...]"));
        let (pos, syms) = item.split_once('=').ok_or_else(bad)?;
        let pos: i64 = pos.trim().parse().map_err(|_| bad())?;
        let set: SymbolSet = syms
            .split(',')
            .map(|s| {
                model
                    .symbol_index(s.trim())
                    .ok_or_else(|| Error::BadParameters(format!("unknown symbol {s:?}")))
            })
            .collect::<Result<_>>()?;
        cyl = cyl.with_set(pos, set)?;
    }
    Ok(cyl)
}

fn word(model: &SftModel, text: &str) -> Result<Vec<usize>> {
    parse_word(model, text).map_err(Error::BadParameters)
}

fn names(model: &SftModel, set: &SymbolSet) -> Vec<String> {
    set.iter().map(|&s| model.name(s).to_string()).collect()
}

fn gibbs_constants(gm: &GibbsMeasureModel) -> Constants {
    Constants {
        c1: Some(gm.gibbs_constants.c1),
        c2: Some(gm.gibbs_constants.c2),
        ..Constants::default()
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::CheckMixing { model } => {
            let model = load_model(model)?;
            let report = check_mixing(&model);
            Outcome::new(
                true,
                json!({
                    "is_mixing": report.is_mixing,
                    "M": report.exponent,
                    "wielandt_bound": wielandt_bound(model.alphabet_size()),
                }),
            )
        }
        Command::Constants { model, k } => {
            let model = load_model(model)?;
            let k0 = compute_k0(&model)?;
            let k = k.unwrap_or(k0);
            let p0 = compute_p0(&model, k)?;
            let sets: Vec<Value> = (0..model.alphabet_size())
                .map(|a| {
                    let (l, r) = left_right_sets(&model, a)?;
                    Ok(json!({ "symbol": model.name(a), "L": names(&model, &l), "R": names(&model, &r) }))
                })
                .collect::<Result<_>>()?;
            let q: Vec<[&str; 2]> = q_pairs(&model).iter().map(|&(a, b)| [model.name(a), model.name(b)]).collect();
            Outcome::new(
                true,
                json!({
                    "M": check_mixing(&model).exponent,
                    "k0": k0,
                    "k": k,
                    "P0": p0,
                    "P0_search_cap": p0_search_cap(&model, k),
                    "left_right": sets,
                    "Q": q,
                }),
            )
        }
        Command::GibbsBuild { model } => {
            let l = load(model)?;
            let env = decay_envelope(&l.model, &l.phi, l.alpha)?;
            let mut o = Outcome::new(true, json!({ "measure": l.gm.summary(), "envelope": env }))?;
            o.constants = gibbs_constants(&l.gm);
            Ok(o)
        }
        Command::Cylinder { model, at, word: w, offset } => {
            let l = load(model)?;
            let mut cyl = parse_constraints(&l.model, at)?;
            if let Some(w) = w {
                cyl = cyl.intersect(&Cylinder::word(*offset, &word(&l.model, w)?));
            }
            let m = cylinder_measure(&l.gm, &cyl);
            let mut o = Outcome::new(
                true,
                json!({ "constraints": at, "word": w, "offset": offset, "measure": m.value, "exact": m.exact }),
            )?;
            o.constants = gibbs_constants(&l.gm);
            Ok(o)
        }
        Command::VerifyGibbsBounds { model, random_words, max_len } => {
            let l = load(model)?;
            let bounds = verify_gibbs_bounds(&l.gm, &l.phi, model.m_max)?;
            let random = check_random_words(&l.gm, &l.phi, *random_words, *max_len, cli.seed)?;
            let pass = bounds.c1_hat > 0.0 && bounds.c1_hat <= bounds.c2_hat && random.violations == 0;
            let csv = format!(
                "quantity,value\nc1,{:e}\nc2,{:e}\nwords_checked,{}\nrandom_checked,{}\nrandom_min,{:e}\nrandom_max,{:e}\nrandom_violations,{}\n",
                bounds.c1_hat, bounds.c2_hat, bounds.words_checked, random.checked, random.min_ratio, random.max_ratio, random.violations
            );
            let mut o = Outcome::new(pass, json!({ "bounds": bounds, "random_words": random }))?;
            o.constants = gibbs_constants(&l.gm);
            o.csv = Some(csv);
            Ok(o)
        }
        Command::Cocycle { model, perm, window, window_offset, n } => {
            let l = load(model)?;
            let tau = permutation(perm)?;
            let x = WindowConfiguration::new(*window_offset, word(&l.model, window)?);
            let n = n.unwrap_or(m_of(&tau) + l.phi.range() as i64);
            let eval = cocycle_g(&l.model, &l.phi, &tau, &x, n)?;
            let limit = cocycle_limit(&l.model, &l.phi, &tau, &x)?;
            let bound = cocycle_bound(&l.model, &l.phi, &tau, l.alpha)?;
            let pass = eval.value.abs() <= bound.c + 1e-12 || n < m_of(&tau);
            let mut o = Outcome::new(
                pass,
                json!({ "permutation": tau, "M": m_of(&tau), "evaluation": eval, "limit": limit, "bound": bound }),
            )?;
            o.constants = Constants { c: Some(bound.c), ..gibbs_constants(&l.gm) };
            Ok(o)
        }
        Command::VerifyQuasiInvariance { model, perm, n } => {
            let l = load(model)?;
            let sigma = permutation(perm)?;
            let rep = verify_quasi_invariance(&l.gm, &l.phi, &sigma, *n, l.alpha)?;
            let mut o = Outcome::new(rep.pass, &rep)?;
            o.constants = Constants {
                c1: Some(rep.c1),
                c2: Some(rep.c2),
                c: Some(rep.cocycle_bound.c),
                alpha: Some(rep.alpha_bound),
                beta: Some(rep.beta_bound),
            };
            o.csv = Some(rep.to_csv());
            Ok(o)
        }
        Command::VerifyCocycleIdentity { model, perm, n } => {
            let l = load(model)?;
            let sigma = permutation(perm)?;
            let rep = verify_cocycle_identity(&l.gm, &l.phi, &sigma, *n)?;
            let mut csv = String::from("word,log_ratio,cocycle_min,cocycle_max,residual,pass\n");
            for r in &rep.rows {
                csv.push_str(&format!(
                    "{},{:e},{:e},{:e},{:e},{}\n",
                    r.word, r.log_ratio, r.cocycle_min, r.cocycle_max, r.residual, r.pass
                ));
            }
            let mut o = Outcome::new(rep.pass, &rep)?;
            o.constants = gibbs_constants(&l.gm);
            o.csv = Some(csv);
            Ok(o)
        }
        Command::MixingDecay { model, e, f, n_max } => {
            let l = load(model)?;
            let e = parse_constraints(&l.model, e)?;
            let f = parse_constraints(&l.model, f)?;
            let rho = subdominant_ratio(&l.gm)?;
            let rows = decay_table(&l.gm, &e, &f, *n_max)?;
            // K₀ ρⁿ is exact for two-state chains; elsewhere it is reported only
            let exact = l.gm.state_count() == 2;
            let violations: Vec<usize> = rows
                .iter()
                .filter(|r| r.gap > r.rate_bound * (1.0 + 1e-9) + 1e-15)
                .map(|r| r.n)
                .collect();
            let fit: Vec<_> = rows.iter().filter(|r| r.n >= 2).copied().collect();
            let mut o = Outcome::new(
                !exact || violations.is_empty(),
                json!({
                    "rho": rho,
                    "rate_bound_exact": exact,
                    "fitted_log_slope": fitted_log_slope(&fit, 1e-13),
                    "log_rho": rho.ln(),
                    "rows": rows,
                    "violations": violations,
                }),
            )?;
            o.constants = gibbs_constants(&l.gm);
            o.csv = Some(decay_csv(&rows));
            Ok(o)
        }
        Command::Sample { model, length } => {
            let l = load(model)?;
            let traj = sample_trajectory(&l.gm, *length, cli.seed);
            let symbols: Vec<&str> = traj.symbols.iter().map(|&s| l.model.name(s)).collect();
            let mut csv = String::from("index,symbol\n");
            for (i, s) in symbols.iter().enumerate() {
                csv.push_str(&format!("{i},{s}\n"));
            }
            let mut o = Outcome::new(true, json!({ "length": length, "symbols": symbols }))?;
            o.constants = gibbs_constants(&l.gm);
            o.csv = Some(csv);
            Ok(o)
        }
        Command::Birkhoff { model, at, q } => {
            let l = load(model)?;
            let cyl = parse_constraints(&l.model, at)?;
            let avg = birkhoff_average(&l.gm, &cyl, *q, cli.seed)?;
            let exact = cylinder_measure(&l.gm, &cyl).value;
            let rho = subdominant_ratio(&l.gm)?;
            let se = birkhoff_standard_error(exact, *q, rho);
            let pass = (avg - exact).abs() <= 5.0 * se;
            let mut o = Outcome::new(
                pass,
                json!({ "average": avg, "exact": exact, "standard_error": se, "envelope": 5.0 * se, "Q": q }),
            )?;
            o.constants = gibbs_constants(&l.gm);
            Ok(o)
        }
    }
}
