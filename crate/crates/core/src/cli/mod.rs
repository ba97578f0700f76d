//! Command-line front end. [`dispatch`] is a pure function from arguments to
//! an exit code and the two output streams, so it can be tested in-process.

mod render;
mod sftfile;

use std::fmt::Debug;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bridge::{
    build_sft, emit_dsys, frobenius_component_orbits, limit_degree_system, parse_dsys_with_limit, point_count_direct,
    point_count_matrix, sft_to_system, BridgeError, DifferenceSystem, DsysError, SftWithFrobenius, DEFAULT_M_MAX,
};
use crate::ff::{build_field_with_limit, FfError, DEFAULT_SCAN_LIMIT};
use crate::sft::{enumerate_periodic, periodic_counts, prune_with_map, word_count, Sft, SftError, DEFAULT_CAP};
use crate::spectral::{entropy_bounds, limit_degree, LimitDegreeResult, SpectralError, DEFAULT_MAX_ITER, DEFAULT_WINDOW};
use crate::zeta::{
    char_poly_reversed, dynamical_zeta, make_twist, twisted_counts, twisted_log_derivative, twisted_zeta_series, zeta_series,
    TwistData, ZetaError,
};

pub use sftfile::{parse_sft_file, SftFile, SftFileError};

/// What the binary writes and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "shiftzeta", version, about = "Exact invariants of subshifts of finite type and difference systems over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Input file (`.sft` or `.dsys`).
    file: PathBuf,
    /// Emit the structured report instead of text.
    #[arg(long)]
    json: bool,
    /// Largest finite field scanned exhaustively.
    #[arg(long, env = "SHIFTZETA_SCAN_LIMIT", default_value_t = DEFAULT_SCAN_LIMIT)]
    scan_limit: u64,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    /// Bracket width, as a fraction, decimal, or `1e-6`.
    #[arg(long, default_value = "1/1000000")]
    tol: String,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[arg(long, default_value_t = 12)]
    max_l: usize,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompositions, entropy, strong core, zeta, and (for systems) the Frobenius action.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        entropy: EntropyArgs,
        #[command(flatten)]
        limit: LimitArgs,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Bound on enumerated periodic words.
        #[arg(long, env = "SHIFTZETA_CAP", default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Communicating classes, irreducible and σ-components, strong core.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Certified bracket for the Perron eigenvalue.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        entropy: EntropyArgs,
    },
    /// Stabilisation of word-count growth ratios.
    LimitDegree {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        limit: LimitArgs,
    },
    /// Dynamical zeta function 1/det(I - tA) and its series.
    Zeta {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Zeta function twisted by the `perm:` automorphism or by Frobenius.
    TwistedZeta {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Point counts of a difference system, directly and by the trace formula.
    Points {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// Maximal periodic quotient of each σ-component.
    StrongCore {
        #[command(flatten)]
        common: Common,
    },
    /// Difference system over F_(p^e) whose shift is the given one.
    FromSft {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: usize,
    },
}

enum Failure {
    /// Bad invocation or unreadable input: exit 2.
    Usage(String),
    /// Well-formed input on which the computation fails: exit 1.
    Domain { name: String, message: String },
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

// Variant name of a leaf error enum, from its Debug form.
fn leaf_name(err: &impl Debug) -> String {
    let debug = format!("{err:?}");
    debug.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or("Error").to_string()
}

fn bridge_name(err: &BridgeError) -> String {
    match err {
        BridgeError::Field(e) => leaf_name(e),
        BridgeError::Sft(e) => leaf_name(e),
        BridgeError::Spectral(e) => spectral_name(e),
        other => leaf_name(other),
    }
}

fn spectral_name(err: &SpectralError) -> String {
    match err {
        SpectralError::Sft(e) => leaf_name(e),
        other => leaf_name(other),
    }
}

impl From<BridgeError> for Failure {
    fn from(err: BridgeError) -> Self {
        Failure::Domain { name: bridge_name(&err), message: err.to_string() }
    }
}

impl From<SpectralError> for Failure {
    fn from(err: SpectralError) -> Self {
        Failure::Domain { name: spectral_name(&err), message: err.to_string() }
    }
}

macro_rules! leaf_failure {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(err: $ty) -> Self {
                Failure::Domain { name: leaf_name(&err), message: err.to_string() }
            }
        }
    )*};
}

leaf_failure!(ZetaError, SftError, FfError);

enum Input {
    Sft(SftFile),
    Dsys(DifferenceSystem),
}

struct Loaded {
    input: Input,
    digest: String,
}

fn load(path: &Path, scan_limit: u64) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| usage(format!("{} is not UTF-8 text", path.display())))?;
    let is_sft = match path.extension().and_then(|e| e.to_str()) {
        Some("sft") => true,
        Some("dsys") => false,
        _ => text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .is_some_and(|l| l.starts_with("sft")),
    };
    let input = if is_sft {
        Input::Sft(parse_sft_file(&text).map_err(|e| {
            let name = match e {
                SftFileError::Syntax { .. } => "SyntaxError",
                SftFileError::Semantic { .. } => "SemanticError",
            };
            usage(format!("{name}: {e}"))
        })?)
    } else {
        Input::Dsys(parse_dsys_with_limit(&text, scan_limit).map_err(|e| {
            let name = match &e {
                DsysError::Syntax { .. } => "SyntaxError".to_string(),
                DsysError::Semantic { source, .. } => bridge_name(source),
            };
            usage(format!("{name}: {e}"))
        })?)
    };
    Ok(Loaded { input, digest })
}

/// The shift an input stands for: the file's shift, or the (unpruned)
/// shift built from a system.
fn shift_of(input: &Input) -> Result<(Sft, Option<SftWithFrobenius>), Failure> {
    match input {
        Input::Sft(f) => Ok((f.sft.clone(), None)),
        Input::Dsys(sys) => {
            let built = build_sft(sys, DEFAULT_M_MAX)?;
            Ok((built.sft.clone(), Some(built)))
        }
    }
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let value = if let Some((n, d)) = text.split_once('/') {
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        BigRational::new(n.trim().parse().ok()?, d)
    } else {
        let (mantissa, exponent) = match text.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
        let scale = exponent - i32::try_from(frac_part.len()).ok()?;
        if scale.unsigned_abs() > 10_000 {
            return None;
        }
        let ten = BigRational::from_integer(10.into());
        if scale >= 0 {
            BigRational::from_integer(digits) * num_traits::pow(ten, scale as usize)
        } else {
            BigRational::from_integer(digits) / num_traits::pow(ten, scale.unsigned_abs() as usize)
        }
    };
    Some(value)
}

fn tolerance(text: &str) -> Result<BigRational, Failure> {
    match parse_rational(text) {
        Some(t) if t.is_positive() => Ok(t),
        _ => Err(usage(format!("--tol must be a positive number, got `{text}`"))),
    }
}

struct Report {
    command: &'static str,
    digest: String,
    result: Value,
    text: String,
    warnings: Vec<String>,
}

impl Report {
    fn render(&self, json_output: bool) -> String {
        if json_output {
            let value = json!({
                "command": self.command,
                "input_digest": self.digest,
                "result": self.result,
                "warnings": self.warnings,
            });
            let mut out = serde_json::to_string_pretty(&value).expect("JSON values serialise");
            out.push('\n');
            out
        } else {
            let mut out = self.text.clone();
            for w in &self.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            out
        }
    }
}

/// Runs the command line `args` (program name first).
pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return if err.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let json_output = common_of(&cli.command).json;
    match run(cli.command) {
        Ok(report) => Outcome { code: 0, stdout: report.render(json_output), stderr: String::new() },
        Err(Failure::Usage(message)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {message}\n") },
        Err(Failure::Domain { name, message }) => {
            Outcome { code: 1, stdout: String::new(), stderr: format!("error: {name}: {message}\n") }
        }
    }
}

fn common_of(command: &Command) -> &Common {
    match command {
        Command::Analyze { common, .. }
        | Command::Decompose { common }
        | Command::Entropy { common, .. }
        | Command::LimitDegree { common, .. }
        | Command::Zeta { common, .. }
        | Command::TwistedZeta { common, .. }
        | Command::Points { common, .. }
        | Command::StrongCore { common }
        | Command::FromSft { common, .. } => common,
    }
}

fn run(command: Command) -> Result<Report, Failure> {
    let common = common_of(&command);
    let loaded = load(&common.file, common.scan_limit)?;
    let digest = loaded.digest.clone();
    let mut warnings = Vec::new();
    let (name, (result, text)) = match &command {
        Command::Analyze { entropy, limit, order, cap, .. } => {
            ("analyze", analyze(&loaded.input, entropy, limit, *order, *cap, &mut warnings)?)
        }
        Command::Decompose { .. } => {
            let (x, built) = shift_of(&loaded.input)?;
            note_pruning(&x, &mut warnings);
            ("decompose", render::decomposition(&x, built.as_ref()))
        }
        Command::Entropy { entropy, .. } => {
            let (x, _) = shift_of(&loaded.input)?;
            ("entropy", entropy_report(&x, entropy, &mut warnings)?)
        }
        Command::LimitDegree { limit, .. } => ("limit-degree", limit_report(&loaded.input, limit, &mut warnings)?),
        Command::Zeta { order, .. } => {
            let (x, _) = shift_of(&loaded.input)?;
            ("zeta", zeta_report(&x, *order)?)
        }
        Command::TwistedZeta { order, .. } => {
            let twist = match &loaded.input {
                Input::Sft(f) => {
                    let perm = f.perm.as_ref().ok_or_else(|| usage("twisted-zeta needs a `perm:` line in the .sft file"))?;
                    make_twist(&f.sft, perm)?
                }
                Input::Dsys(sys) => build_sft(sys, DEFAULT_M_MAX)?.twist,
            };
            ("twisted-zeta", twisted_report(&twist, *order))
        }
        Command::Points { max_n, .. } => {
            let Input::Dsys(sys) = &loaded.input else {
                return Err(usage("points needs a .dsys difference system"));
            };
            ("points", points_report(sys, *max_n)?)
        }
        Command::StrongCore { .. } => {
            let (x, built) = shift_of(&loaded.input)?;
            note_pruning(&x, &mut warnings);
            ("strong-core", render::strong_core_report(&x, built.as_ref()))
        }
        Command::FromSft { p, e, .. } => {
            let Input::Sft(f) = &loaded.input else {
                return Err(usage("from-sft needs a .sft file"));
            };
            let ctx = build_field_with_limit(*p, *e, common.scan_limit)?;
            let text = emit_dsys(&sft_to_system(&f.sft, &ctx)?);
            ("from-sft", (json!({ "dsys": text, "p": p, "e": e }), text))
        }
    };
    Ok(Report { command: name, digest, result, text, warnings })
}

fn note_pruning(x: &Sft, warnings: &mut Vec<String>) {
    let (_, kept) = prune_with_map(x);
    if kept.len() < x.len() {
        let dropped: Vec<&str> = (0..x.len()).filter(|i| !kept.contains(i)).map(|i| x.label(i)).collect();
        warnings.push(format!("states without an infinite forward path were pruned: {}", dropped.join(" ")));
    }
}

fn entropy_report(x: &Sft, args: &EntropyArgs, warnings: &mut Vec<String>) -> Result<(Value, String), Failure> {
    let tol = tolerance(&args.tol)?;
    note_pruning(x, warnings);
    let bracket = entropy_bounds(x, &tol, args.max_iter)?;
    Ok(render::bracket(&bracket, &tol))
}

fn limit_report(input: &Input, args: &LimitArgs, warnings: &mut Vec<String>) -> Result<(Value, String), Failure> {
    let (x, _) = shift_of(input)?;
    note_pruning(&x, warnings);
    let essential = prune_with_map(&x).0;
    let result = match input {
        Input::Dsys(sys) => limit_degree_system(sys, args.max_l, args.window)?,
        Input::Sft(_) => limit_degree(&essential, args.max_l, args.window)?,
    };
    let counts: Vec<String> =
        (1..=args.max_l).map(|l| word_count(&essential, l).map(|c| c.to_string())).collect::<Result<_, _>>()?;
    if matches!(result, LimitDegreeResult::NotStabilized { .. }) {
        warnings.push(format!("ratios did not stabilise over the last {} lengths", args.window));
    }
    Ok(render::limit(&result, &counts))
}

fn zeta_report(x: &Sft, order: usize) -> Result<(Value, String), Failure> {
    let det = char_poly_reversed(x)?;
    let zeta = dynamical_zeta(x)?;
    let series = zeta_series(x, order);
    let counts: Vec<String> = periodic_counts(x, order).iter().map(ToString::to_string).collect();
    Ok(render::zeta(&det, &zeta, &series, &counts))
}

fn twisted_report(twist: &TwistData, order: usize) -> (Value, String) {
    let counts = twisted_counts(twist, twist.order());
    let log_derivative = twisted_log_derivative(twist);
    let series = twisted_zeta_series(twist, order);
    render::twisted(twist, &counts, &log_derivative, &series)
}

fn points_report(sys: &DifferenceSystem, max_n: usize) -> Result<(Value, String), Failure> {
    let built = build_sft(sys, DEFAULT_M_MAX)?;
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        rows.push((n, point_count_direct(sys, n)?, point_count_matrix(sys, n)?));
    }
    if let Some(&(n, direct, matrix)) = rows.iter().find(|(_, d, m)| d != m) {
        return Err(Failure::Domain {
            name: "TraceIdentityViolation".into(),
            message: format!("n = {n}: direct count {direct}, trace {matrix}"),
        });
    }
    Ok(render::points(&built, &rows))
}

fn analyze(
    input: &Input,
    entropy: &EntropyArgs,
    limit: &LimitArgs,
    order: usize,
    cap: usize,
    warnings: &mut Vec<String>,
) -> Result<(Value, String), Failure> {
    let tol = tolerance(&entropy.tol)?;
    let (x, built) = shift_of(input)?;
    note_pruning(&x, warnings);
    let mut result = serde_json::Map::new();
    let mut text = String::new();

    let (value, t) = render::decomposition(&x, built.as_ref());
    result.insert("decomposition".into(), value);
    text.push_str(&t);

    // the decomposition text already lists the strong core
    let (value, _) = render::strong_core_report(&x, built.as_ref());
    result.insert("strong_core".into(), value);

    match entropy_bounds(&x, &tol, entropy.max_iter) {
        Ok(bracket) => {
            let (value, t) = render::bracket(&bracket, &tol);
            result.insert("entropy".into(), value);
            text.push_str(&t);
        }
        Err(err @ (SpectralError::NoCycle | SpectralError::EmptyShift | SpectralError::DidNotConverge { .. })) => {
            warnings.push(format!("entropy: {err}"));
            result.insert("entropy".into(), Value::Null);
        }
        Err(err) => return Err(err.into()),
    }

    let essential = prune_with_map(&x).0;
    match limit_degree(&essential, limit.max_l, limit.window) {
        Ok(ld) => {
            let counts: Vec<String> =
                (1..=limit.max_l).map(|l| word_count(&essential, l).map(|c| c.to_string())).collect::<Result<_, _>>()?;
            let (value, t) = render::limit(&ld, &counts);
            result.insert("limit_degree".into(), value);
            text.push_str(&t);
        }
        Err(err) => {
            warnings.push(format!("limit degree: {err}"));
            result.insert("limit_degree".into(), Value::Null);
        }
    }

    if !x.is_empty() {
        let (value, t) = zeta_report(&x, order)?;
        result.insert("zeta".into(), value);
        text.push_str(&t);
    }

    let mut periodic = serde_json::Map::new();
    for n in 1..=3 {
        match enumerate_periodic(&x, n, cap) {
            Ok(words) => {
                let labelled: Vec<Value> =
                    words.iter().map(|w| Value::from(w.iter().map(|&s| x.label(s)).collect::<Vec<_>>().join(" "))).collect();
                periodic.insert(n.to_string(), Value::from(labelled));
            }
            Err(err) => {
                warnings.push(format!("periodic words of length {n}: {err}"));
                break;
            }
        }
    }
    text.push_str(&format!("periodic words up to length 3: {}\n", periodic.values().map(|v| v.as_array().map_or(0, Vec::len)).sum::<usize>()));
    result.insert("periodic_words".into(), Value::Object(periodic));

    if let (Some(built), Input::Dsys(sys)) = (&built, input) {
        let d = built.twist.order();
        let (value, t) = twisted_report(&built.twist, order);
        result.insert("twisted_zeta".into(), value);
        text.push_str(&t);
        let (value, t) = points_report(sys, 2 * d * built.m)?;
        result.insert("points".into(), value);
        text.push_str(&t);
        let orbits = frobenius_component_orbits(built);
        result.insert("spec_sigma_component_count".into(), Value::from(orbits.len()));
        text.push_str(&format!("connected components of the spectrum: {}\n", orbits.len()));
    }
    Ok((Value::Object(result), text))
}
