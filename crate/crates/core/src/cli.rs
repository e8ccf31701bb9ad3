//! Command-line front end: `enumerate`, `classify`, `nodes` and `bsuj`.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::report::{BsujReport, ClassificationReport, Coefficients, NodeReport, SignatureRecord};
use crate::{
    builtin_manifold, classify, enumerate_classes, enumerate_signatures, load_manifold,
    BundleSector, HoweSignature, Int, ManifoldModel, SolveOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDECIDED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MODEL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "orbit-strata", version, about = "Orbit-type strata of SU(n) gauge theories")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Sup-norm bound for lattice scans; also caps the representatives shown
    /// for an infinite family.
    #[arg(long, global = true, default_value_t = 10)]
    pub bound: Int,
    /// JSON manifold model used instead of `--manifold`.
    #[arg(long, global = true, value_name = "PATH")]
    pub model_file: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ManifoldChoice {
    S4,
    S2xs2,
    T4,
    Lens,
    Sigma,
}

impl ManifoldChoice {
    fn catalog_name(self) -> &'static str {
        match self {
            ManifoldChoice::S4 => "S4",
            ManifoldChoice::S2xs2 => "S2xS2",
            ManifoldChoice::T4 => "T4",
            ManifoldChoice::Lens => "LensP3xS1",
            ManifoldChoice::Sigma => "Sigma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefficientChoice {
    Z,
    Zg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List Howe signatures of SU(n).
    Enumerate {
        n: u32,
        /// List permutation classes instead of ordered signatures.
        #[arg(long)]
        classes: bool,
    },
    /// Classify the orbit types of SU(n) over a base manifold.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        manifold: Option<ManifoldChoice>,
        /// Model parameters, comma separated (`p` for lens, `s` for sigma).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<Int>,
        /// Second Chern number of the bundle.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        c2: Int,
    },
    /// Chern-Simons node scan over a genus-s surface.
    Nodes {
        #[arg(long = "J", alias = "j", value_name = "K|M")]
        j: HoweSignature,
        /// Must agree with the signature when given.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 0)]
        genus: u32,
    },
    /// Postnikov stage and cohomology presentation of B SU(J).
    Bsuj {
        #[arg(long = "J", alias = "j", value_name = "K|M")]
        j: HoweSignature,
        #[arg(long, value_enum, default_value_t = CoefficientChoice::Z)]
        coefficients: CoefficientChoice,
    },
}

#[derive(Debug, Serialize)]
struct EnumerationListing {
    n: u32,
    classes: bool,
    signatures: Vec<SignatureRecord>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ModelSchema(_) | Error::ModelInvariant(_) => EXIT_MODEL,
            Error::Undecided(_) => EXIT_UNDECIDED,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: message.into() }
}

fn render<T: Serialize>(value: &T, text: impl FnOnce() -> String, format: Format) -> String {
    match format {
        Format::Text => text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn resolve_model(
    global: &GlobalArgs,
    manifold: Option<ManifoldChoice>,
    params: &[Int],
) -> Result<ManifoldModel, CliError> {
    match (&global.model_file, manifold) {
        (Some(path), None) => {
            let doc = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(load_manifold(&doc)?)
        }
        (Some(_), Some(_)) => Err(usage("--manifold and --model-file are mutually exclusive")),
        (None, Some(choice)) => Ok(builtin_manifold(choice.catalog_name(), params)?),
        (None, None) => Err(usage("one of --manifold or --model-file is required")),
    }
}

/// Executes a parsed command and returns its standard output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let global = &cli.global;
    match &cli.command {
        Command::Enumerate { n, classes } => {
            let sigs = if *classes { enumerate_classes(*n)? } else { enumerate_signatures(*n)? };
            let listing = EnumerationListing {
                n: *n,
                classes: *classes,
                signatures: sigs.iter().map(SignatureRecord::from).collect(),
            };
            let text = || sigs.iter().map(|j| format!("{j}\n")).collect();
            Ok(render(&listing, text, global.format))
        }
        Command::Classify { n, manifold, params, c2 } => {
            let model = resolve_model(global, *manifold, params)?;
            if global.bound < 1 {
                return Err(usage(format!("--bound must be >= 1, got {}", global.bound)));
            }
            let shown = usize::try_from(global.bound).unwrap_or(usize::MAX);
            let opts = SolveOptions { bound: global.bound, max_representatives: shown };
            let catalog = classify(*n, &model, &BundleSector::new(*c2), &opts)?;
            let report = ClassificationReport::build(&catalog, &model, params, shown)?;
            Ok(render(&report, || report.to_text(), global.format))
        }
        Command::Nodes { j, n, genus } => {
            if let Some(n) = n {
                if j.n() != *n as u64 {
                    return Err(usage(format!("{j} is a signature for n = {}, not {n}", j.n())));
                }
            }
            let report = NodeReport::build(j, *genus, global.bound)?;
            Ok(render(&report, || report.to_text(), global.format))
        }
        Command::Bsuj { j, coefficients } => {
            let coefficients = match coefficients {
                CoefficientChoice::Z => Coefficients::Z,
                CoefficientChoice::Zg => Coefficients::Zg,
            };
            let report = BsujReport::build(j, coefficients);
            Ok(render(&report, || report.to_text(), global.format))
        }
    }
}

/// Parses `args`, writes the result to `out` and diagnostics to `err`, and
/// returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
