//! Command-line front end: reads state documents, runs the decomposition,
//! entropy, Bell-set and LOCC routines, and writes JSON reports.
//!
//! Exit codes follow grep: 0 when the answer is positive (decomposable,
//! criterion holds, protocol succeeds), 1 when it is negative, 2 on error.
//! Errors are reported as a JSON record on stdout.

pub mod doc;
pub mod error;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use schmidtkit::bell::{
    check_a_prime, enumerate_a_prime_sets, special_family, BellSet, Orientation, DEFAULT_SUBSET_CAP,
};
use schmidtkit::entropy::{entanglement_report, MCS_SYMMETRY_TOL};
use schmidtkit::locc::{audit_decoder, simulate, synthesize};
use schmidtkit::ssd::{decompose, to_mcs, MCS_VERIFY_TOL, ORTHOGONALITY_GUARD};
use schmidtkit::states::assemble_density;
use schmidtkit::DEFAULT_TOL;
use serde::Serialize;

use crate::doc::*;
use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "SCHMIDTKIT_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "schmidtkit",
    version,
    about = "Simultaneous Schmidt decomposition toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide simultaneous Schmidt decomposability (exit 0 yes, 1 no)
    Check(SsdArgs),
    /// Full report: verdict, local unitaries, maximally correlated form, entropies
    Decompose {
        #[command(flatten)]
        ssd: SsdArgs,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Leave unitaries and the correlation matrix out of the report
        #[arg(long)]
        no_matrices: bool,
    },
    /// Entropies and coherent information of the weighted mixture
    Entropy(SsdArgs),
    #[command(subcommand)]
    Bell(BellCommand),
    #[command(subcommand)]
    Locc(LoccCommand),
}

#[derive(Debug, Args)]
struct SsdArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum BellCommand {
    /// Test the index criterion for a set of Bell states
    Check {
        #[arg(long)]
        d: usize,
        /// "n,m;n,m;..."
        #[arg(long, allow_hyphen_values = true)]
        indices: String,
    },
    /// Count (and optionally list) every passing subset of a given size
    Enumerate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: u128,
    },
    /// The d-member family {(n, fn+g)} or {(fm+g, m)}
    Family {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        f: i64,
        #[arg(long, allow_hyphen_values = true)]
        g: i64,
        #[arg(long, value_enum, default_value_t = Orient::N)]
        orient: Orient,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Orient {
    N,
    M,
}

#[derive(Debug, Subcommand)]
enum LoccCommand {
    /// Build the one-way discrimination protocol for a Bell set
    Synth {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        indices: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Sample the protocol on its own members (or on --indices)
    Simulate {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        /// Run against this set instead of the protocol's members
        #[arg(long, allow_hyphen_values = true)]
        indices: Option<String>,
    },
}

/// Parses "n,m;n,m;..." (whitespace tolerated, negatives reduced mod d).
pub fn parse_indices(d: usize, text: &str) -> CliResult<BellSet> {
    let pairs = text
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, item)| {
            let bad = || {
                CliError::field(
                    format!("indices[{i}]"),
                    format!("expected n,m, got {item:?}"),
                )
            };
            let (n, m) = item.split_once(',').ok_or_else(bad)?;
            let n = n.trim().parse::<i64>().map_err(|_| bad())?;
            let m = m.trim().parse::<i64>().map_err(|_| bad())?;
            Ok((n, m))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(BellSet::from_pairs(d, &pairs)?)
}

struct Outcome {
    json: String,
    output: Option<PathBuf>,
    code: i32,
}

impl Outcome {
    fn new<T: Serialize>(doc: &T, positive: bool) -> Self {
        Self {
            json: to_json(doc),
            output: None,
            code: if positive { 0 } else { 1 },
        }
    }

    fn to(mut self, output: Option<PathBuf>) -> Self {
        self.output = output;
        self
    }
}

fn tolerances(tol: f64) -> ToleranceDoc {
    ToleranceDoc {
        ssd: tol,
        orthogonality_guard: ORTHOGONALITY_GUARD,
        mcs_verify: MCS_VERIFY_TOL,
        mcs_symmetry: MCS_SYMMETRY_TOL,
    }
}

fn ssd_report(
    command: &str,
    args: &SsdArgs,
    full: bool,
    matrices: bool,
) -> CliResult<ReportDocument> {
    let states: StatesDocument = doc::read_document(&args.input)?;
    let ensemble = states.ensemble()?;
    let result = decompose(ensemble.vectors(), args.tol, args.seed)?;
    let mut report = ReportDocument {
        tool: "schmidtkit".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        seed: args.seed,
        tolerances: tolerances(args.tol),
        verdict: VerdictDoc::from(&result.verdict),
        witness: result.verdict.witness.as_ref().map(WitnessDoc::from),
        form: None,
        mcs: None,
        entanglement: None,
    };
    if !full {
        return Ok(report);
    }
    report.form = result.form.as_ref().map(|f| FormDoc::new(f, matrices));
    let rho = assemble_density(&ensemble)?;
    let entanglement = if result.verdict.decomposable {
        let mcs = to_mcs(&ensemble, &result)?;
        report.mcs = Some(McsDoc::new(&mcs, matrices));
        entanglement_report(&rho, true)?
    } else {
        entanglement_report(&rho, false)?
    };
    report.entanglement = Some(EntanglementDoc::from(&entanglement));
    Ok(report)
}

fn execute(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Check(args) => {
            let r = ssd_report("check", &args, false, false)?;
            Ok(Outcome::new(&r, r.verdict.decomposable))
        }
        Command::Decompose {
            ssd,
            output,
            no_matrices,
        } => {
            let r = ssd_report("decompose", &ssd, true, !no_matrices)?;
            Ok(Outcome::new(&r, r.verdict.decomposable).to(output))
        }
        Command::Entropy(args) => {
            let r = ssd_report("entropy", &args, true, false)?;
            let e = r.entanglement.expect("full report carries entropies");
            Ok(Outcome::new(&e, true))
        }
        Command::Bell(cmd) => bell(cmd),
        Command::Locc(cmd) => locc(cmd),
    }
}

fn bell(cmd: BellCommand) -> CliResult<Outcome> {
    match cmd {
        BellCommand::Check { d, indices } => {
            let set = parse_indices(d, &indices)?;
            let v = check_a_prime(&set);
            let doc = BellCheckDoc {
                d,
                indices: BellSetDoc::from(&set).indices,
                holds: v.holds,
                witness: v.witness.map(|(p, q, r)| [p, q, r]),
            };
            Ok(Outcome::new(&doc, v.holds))
        }
        BellCommand::Enumerate { d, size, list, cap } => {
            let tally = enumerate_a_prime_sets(d, size, list, cap)?;
            Ok(Outcome::new(&EnumerationDoc::from(&tally), true))
        }
        BellCommand::Family { d, f, g, orient } => {
            let orientation = match orient {
                Orient::N => Orientation::NParam,
                Orient::M => Orientation::MParam,
            };
            let set = special_family(d, f, g, orientation)?;
            Ok(Outcome::new(&BellSetDoc::from(&set), true))
        }
    }
}

fn locc(cmd: LoccCommand) -> CliResult<Outcome> {
    match cmd {
        LoccCommand::Synth {
            d,
            indices,
            output,
            seed,
        } => {
            let set = parse_indices(d, &indices)?;
            let p = synthesize(&set, seed)?;
            Ok(Outcome::new(&ProtocolDoc::from(&p), true).to(output))
        }
        LoccCommand::Simulate {
            protocol,
            trials,
            seed,
            indices,
        } => {
            let pdoc: ProtocolDoc = doc::read_document(&protocol)?;
            let p = pdoc.protocol()?;
            let set = match indices {
                Some(text) => parse_indices(p.d, &text)?,
                None => BellSet::from_pairs(p.d, &pdoc.member_pairs())?,
            };
            let report = simulate(&p, &set, trials, seed)?;
            let audit = audit_decoder(&p, &set)?;
            let doc = SimulationDoc::new(&p, &report, &audit);
            let ok = report.success_rate == 1.0 && audit.exact();
            Ok(Outcome::new(&doc, ok))
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn fail(out: &mut dyn Write, e: &CliError) -> i32 {
    let record = serde_json::json!({ "error": e.record() });
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&record).unwrap_or_default()
    );
    2
}

/// Runs one command. `args` includes the program name; reports go to `out`
/// unless an `--output` file is given.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => return fail(out, &CliError::Usage(e.to_string())),
    };
    let outcome = match execute(cli.command) {
        Ok(o) => o,
        Err(e) => return fail(out, &e),
    };
    match &outcome.output {
        Some(path) => {
            if let Err(e) = write_file(path, &outcome.json) {
                return fail(out, &e);
            }
        }
        None => {
            if out.write_all(outcome.json.as_bytes()).is_err() {
                return 2;
            }
        }
    }
    outcome.code
}
