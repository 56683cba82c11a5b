use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use planar_choquet::io::{
    render_decomposition_table, render_phi_table, render_probe, render_summary,
    render_verification, InputDocument, IoError, OutputDocument, PhiDocument, ProbeRecord,
    SampleDocument, VerificationDocument,
};
use planar_choquet::{
    boundary_phi, decompose, lottery, phi_at, phi_invariant, verify, Decomposition, Error,
    FiniteDistribution, Mode, PlanePoint, ProbeEvaluation, Rational, Scalar,
};

#[derive(Parser, Debug)]
#[command(
    name = "planar-choquet",
    version,
    about = "Decompose planar mean-zero distributions into one-, two- and three-point components"
)]
struct Cli {
    /// Arithmetic mode; overrides the mode declared in the input file.
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Translate the input to mean zero instead of rejecting it.
    #[arg(long, global = true)]
    recenter: bool,
    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the invariant on every probe direction, or on one.
    Phi {
        file: PathBuf,
        /// Probe direction as "x,y".
        #[arg(long)]
        probe: Option<String>,
    },
    /// Print the decomposition.
    Decompose { file: PathBuf },
    /// Decompose (or read a saved decomposition) and compare its mixture with the input.
    Verify {
        file: PathBuf,
        /// Decomposition written earlier by `decompose --output json`.
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Draw from the two-stage lottery and summarise the frequencies.
    Sample {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

const INVALID_INPUT: u8 = 2;
const NONZERO_MEAN: u8 = 3;
const FAILURE: u8 = 4;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonZeroMean { .. } => NONZERO_MEAN,
            Error::InternalInconsistency(_) | Error::FactorizationMismatch { .. } => FAILURE,
            _ => INVALID_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Model(inner) => inner.into(),
            other => Failure::new(INVALID_INPUT, other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(INVALID_INPUT, format!("{}: {e}", path.display())))
}

fn input_file(command: &Command) -> &Path {
    match command {
        Command::Phi { file, .. }
        | Command::Decompose { file }
        | Command::Verify { file, .. }
        | Command::Sample { file, .. } => file,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = read(input_file(&cli.command)).and_then(|text| {
        let doc = InputDocument::from_json(&text)?;
        match cli.mode.unwrap_or(doc.mode) {
            Mode::Exact => run::<Rational>(&cli, &doc),
            Mode::Float => run::<f64>(&cli, &doc),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Input as read, input at mean zero, and the translation between them.
type Loaded<S> = (FiniteDistribution<S>, FiniteDistribution<S>, PlanePoint<S>);

/// Loads the input, translating it to mean zero when asked.
fn load<S: Scalar>(cli: &Cli, doc: &InputDocument) -> Result<Loaded<S>, Failure> {
    let p = doc.to_distribution::<S>()?;
    if cli.recenter {
        let (centred, offset) = p.recenter();
        Ok((p, centred, offset))
    } else {
        p.ensure_centered()?;
        Ok((p.clone(), p, PlanePoint::origin()))
    }
}

fn decompose_input<S: Scalar>(
    centred: &FiniteDistribution<S>,
    offset: PlanePoint<S>,
) -> Result<Decomposition<S>, Failure> {
    let mut d = decompose(centred)?;
    d.offset = offset;
    Ok(d)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: serde::Serialize>(value: &T) {
    emit(&(serde_json::to_string_pretty(value).expect("document serializes") + "\n"));
}

fn run<S: Scalar>(cli: &Cli, doc: &InputDocument) -> Result<(), Failure> {
    let (original, centred, offset) = load::<S>(cli, doc)?;
    match &cli.command {
        Command::Phi {
            probe: Some(text), ..
        } => {
            let direction = parse_direction::<S>(text)?;
            let split = phi_at(&centred, &direction)?;
            let factored = boundary_phi(&centred, &direction)?;
            match cli.output {
                Output::Json => print_json(&ProbeRecord::new(&ProbeEvaluation {
                    direction,
                    interior: split.0,
                    boundary: split.1,
                    total: split.2,
                })),
                Output::Table => emit(&render_probe(&direction, &split, &factored)),
            }
        }
        Command::Phi { probe: None, .. } => {
            let report = phi_invariant(&centred)?;
            match cli.output {
                Output::Json => print_json(&PhiDocument::new(&report)),
                Output::Table => emit(&render_phi_table(&report)),
            }
            if !report.consistent {
                return Err(Failure::new(FAILURE, "probe evaluations disagree"));
            }
        }
        Command::Decompose { .. } => {
            let d = decompose_input(&centred, offset)?;
            match cli.output {
                Output::Json => {
                    let report = phi_invariant(&centred)?;
                    print_json(&OutputDocument::new(&d, Some(&report)));
                }
                Output::Table => emit(&render_decomposition_table(&d)),
            }
        }
        Command::Verify { decomposition, .. } => {
            let d = match decomposition {
                Some(path) => load_replay::<S>(path)?,
                None => decompose_input(&centred, offset)?,
            };
            let report = verify(&original, &d);
            match cli.output {
                Output::Json => print_json(&VerificationDocument::new(&report)),
                Output::Table => emit(&render_verification(&report)),
            }
            if !report.passed() {
                return Err(Failure::new(
                    FAILURE,
                    "decomposition does not reproduce the input",
                ));
            }
        }
        Command::Sample { n, seed, .. } => {
            let d = decompose_input(&centred, offset)?;
            let summary = lottery::run(&d, *n, *seed)
                .map_err(|e| Failure::new(INVALID_INPUT, e.to_string()))?;
            match cli.output {
                Output::Json => print_json(&SampleDocument::new(&summary)),
                Output::Table => emit(&render_summary(&summary)),
            }
        }
    }
    Ok(())
}

/// A saved decomposition that cannot be read back counts as a failed
/// verification, not as bad input.
fn load_replay<S: Scalar>(path: &Path) -> Result<Decomposition<S>, Failure> {
    let text = read(path)?;
    let replay = |e: IoError| Failure::new(FAILURE, format!("{}: {e}", path.display()));
    let doc = OutputDocument::from_json(&text).map_err(replay)?;
    if doc.mode != S::MODE {
        return Err(Failure::new(
            INVALID_INPUT,
            format!(
                "{}: decomposition is in {} mode, input is in {} mode",
                path.display(),
                doc.mode,
                S::MODE
            ),
        ));
    }
    doc.to_decomposition::<S>().map_err(replay)
}

fn parse_direction<S: Scalar>(text: &str) -> Result<PlanePoint<S>, Failure> {
    let bad = |why: String| Failure::new(INVALID_INPUT, format!("--probe '{text}': {why}"));
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| bad("expected \"x,y\"".into()))?;
    let x = S::parse_text(x).map_err(|e| bad(e.to_string()))?;
    let y = S::parse_text(y).map_err(|e| bad(e.to_string()))?;
    let d = PlanePoint::new(x, y);
    if d.is_origin() {
        return Err(bad("direction must be nonzero".into()));
    }
    Ok(d)
}
