//! `pcf`: command-line front end for the `properfrac` library.

mod commands;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use properfrac::report::{to_json_string, CsvTable};
use properfrac::{Error, ParseError};

#[derive(Parser, Debug)]
#[command(name = "pcf", version, about = "Proper continued fractions and the joint Gauss map")]
pub struct Cli {
    /// Refinement budget for interval values, in bits.
    #[arg(long, global = true, env = "PCF_PRECISION_BITS", default_value_t = 4096,
          value_parser = clap::value_parser!(u32).range(64..))]
    pub precision_bits: u32,

    /// Seed for every random choice.
    #[arg(long, global = true, env = "PCF_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, env = "PCF_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true, env = "PCF_OUT")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand x with a numerator rule and print the convergents.
    Expand {
        /// `p/q`, decimal, `(sqrtD-k)/m`, `golden`, or `random:SEED`.
        x: String,
        /// `4,3,2`, `all:N`, `rcf-of:Y`, `varnum` or `engel`.
        #[arg(long, default_value = "all:1")]
        numerators: String,
        #[arg(long = "len", default_value_t = 20)]
        len: usize,
    },
    /// Candidate pairs and their realizability, by numerator or denominator.
    Classify {
        x: String,
        /// Numerator range, e.g. `1..50`, `1..=50` or `7`.
        #[arg(long, conflicts_with = "q", required_unless_present = "q")]
        p: Option<String>,
        /// Denominator range.
        #[arg(long)]
        q: Option<String>,
        /// Also run the brute-force oracle (numerator mode only).
        #[arg(long)]
        oracle: bool,
        /// Cap for the oracle's search.
        #[arg(long, default_value = "1000000")]
        search_bound: String,
    },
    /// Random orbits of the joint map: growth digests and cylinder counts.
    Simulate {
        #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        orbits: u64,
        /// Fix y for every orbit (default: random).
        #[arg(long)]
        y: Option<String>,
        /// Also write the frequency table as CSV here.
        #[arg(long)]
        freq_out: Option<PathBuf>,
        /// Run each orbit in double precision instead (frequencies only).
        #[arg(long)]
        float: bool,
    },
    /// Growth rate of q_n along one orbit.
    Growth {
        /// Default: random from the seed.
        #[arg(long)]
        x: Option<String>,
        /// Default: random from the seed.
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// y(x) for a special family, on a grid or at one point.
    Yofx {
        /// `varnum`, `engel` or `greedy:N`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 200)]
        grid: u64,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Print the digits of y(x) for this x instead of a grid.
        #[arg(long)]
        x: Option<String>,
    },
    /// All expansions of a rational in (0, 1).
    Rational {
        x: String,
        /// List every expansion, not just the counts.
        #[arg(long)]
        list: bool,
    },
    /// Expansion of 1 - x derived from an expansion of x.
    OneMinus {
        x: String,
        #[arg(long, default_value = "all:1")]
        numerators: String,
        #[arg(long = "len", default_value_t = 10)]
        len: usize,
    },
    /// Merge steps k, k+1, k+2 of an expansion into one.
    PushDown {
        x: String,
        #[arg(long, default_value = "all:1")]
        numerators: String,
        #[arg(long = "len", default_value_t = 10)]
        len: usize,
        #[arg(long)]
        k: usize,
    },
    /// Split one step (a', b', x') into three.
    Lift {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Numerators that make the approximation bound nearly tight.
    Sharpness {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        eps: String,
    },
    /// Check that the Beatty sequences of 1/x and 1/(1-x) partition 1..=n.
    Rayleigh {
        x: String,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
    },
    /// Eigenvalues of the digit matrix [[0, a], [1, b]].
    Eigen { a: String, b: String },
    /// Monte Carlo areas of the smallest cylinders.
    Cylinders {
        #[arg(long, default_value_t = 1000)]
        side: u64,
    },
}

/// What a command hands back for printing.
pub struct Rendered {
    pub json: serde_json::Value,
    pub table: CsvTable,
    /// Extra CSV files (always CSV, whatever `--format` says).
    pub side_tables: Vec<(PathBuf, CsvTable)>,
    /// An internal identity that should hold did not.
    pub violation: Option<String>,
}

#[derive(Debug)]
pub enum Failure {
    Parse { what: &'static str, input: String, err: ParseError },
    Core(Error),
    Invariant(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECISION: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse { .. } | Failure::Core(Error::Parse(_)) => EXIT_PARSE,
            Failure::Core(Error::PrecisionExhausted { .. }) => EXIT_PRECISION,
            Failure::Invariant(_) => EXIT_INVARIANT,
            Failure::Core(_) | Failure::Io(_) => EXIT_OTHER,
        }
    }

    fn report(&self) -> String {
        match self {
            Failure::Parse { what, input, err } => format!(
                "error: cannot parse {what}: {}\n  {input}\n  {}^\n",
                err.msg,
                " ".repeat(err.pos.min(input.len()))
            ),
            Failure::Core(e) => format!("error: {e}\n"),
            Failure::Invariant(m) => format!("error: invariant violated: {m}\n"),
            Failure::Io(e) => format!("error: {e}\n"),
        }
    }
}

fn emit(cli: &Cli, r: &Rendered) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Json => to_json_string(&r.json),
        Format::Csv => r.table.render()?,
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    for (path, table) in &r.side_tables {
        fs::write(path, table.render()?)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let rendered = commands::dispatch(cli)?;
    emit(cli, &rendered)?;
    match rendered.violation {
        Some(m) => Err(Failure::Invariant(m)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprint!("{}", f.report());
            ExitCode::from(f.exit_code())
        }
    }
}
