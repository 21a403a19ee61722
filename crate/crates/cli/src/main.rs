//! `ait`: exhaustive toy-machine Kolmogorov complexity, Shannon coding,
//! structure functions and LZ78 upper bounds from the command line.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use ait_core::complexity::{SearchConfig, DEFAULT_WORK_BUDGET};
use ait_core::machines::MachineId;
use ait_core::rng::DEFAULT_SEED;
use ait_core::structure::DEFAULT_SLACK;
use ait_core::{ErrorKind, StepLimits};
use clap::{Args, Parser, Subcommand};

use input::{BitsArg, BytesArg};

#[derive(Debug)]
pub enum CliError {
    Core(ait_core::Error),
    Usage(String),
}

impl From<ait_core::Error> for CliError {
    fn from(e: ait_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Domain => 1,
                ErrorKind::Resource => 2,
                ErrorKind::Usage => 3,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

pub enum Output {
    Json(serde_json::Value),
    Text(String),
    Bytes(Vec<u8>),
}

#[derive(Debug, Parser)]
#[command(name = "ait", version, about = "Algorithmic information toolkit on toy prefix machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit TSV instead of JSON where a tabular form exists
    #[arg(long, global = true)]
    tsv: bool,
    /// Worker threads for program enumeration
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Maximum number of candidate programs an enumeration may cover
    #[arg(long, global = true, default_value_t = DEFAULT_WORK_BUDGET)]
    budget: u64,
    /// Output cap in bits for a single program run
    #[arg(long, global = true, default_value_t = StepLimits::default().max_output_bits)]
    max_output_bits: usize,
}

#[derive(Debug, Args)]
pub struct MachineArg {
    /// Plain machine: A or B
    #[arg(long, default_value = "A")]
    pub machine: MachineId,
}

#[derive(Debug, Args)]
pub struct GivenArg {
    /// Auxiliary string y as '0'/'1' text
    #[arg(long, default_value = "")]
    pub given: String,
}

#[derive(Debug, Args)]
pub struct StructArg {
    #[command(flatten)]
    pub x: BitsArg,
    /// Length of x; defaults to |x|
    #[arg(long)]
    pub n: Option<usize>,
    /// Search limit for bitmap complexities
    #[arg(long)]
    pub limit: Option<usize>,
    /// Allow n = 4, reporting points above the search limit as upper bounds
    #[arg(long)]
    pub bounded: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kolmogorov complexity K_M(x) by exhaustive search
    K {
        #[command(flatten)]
        machine: MachineArg,
        #[command(flatten)]
        x: BitsArg,
        /// Longest program length searched; defaults to the literal program length
        #[arg(long)]
        limit: Option<usize>,
    },
    /// K_M(x) for every string of length n
    Ktable {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        n: usize,
        /// Defaults to the longest literal program over n-bit strings
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Partial algorithmic probability of x
    Prob {
        #[command(flatten)]
        machine: MachineArg,
        #[command(flatten)]
        x: BitsArg,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Partial Kraft sum over all halting programs
    Kraft {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        limit: usize,
    },
    /// Conditional complexity K(x/y) on the auxiliary-input machine
    Cond {
        #[command(flatten)]
        x: BitsArg,
        #[command(flatten)]
        given: GivenArg,
        /// Defaults to the literal program length 3|x| + 3
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Information I(y:x) = K(x) - K(x/y) on the auxiliary-input machine
    Info {
        #[command(flatten)]
        x: BitsArg,
        #[command(flatten)]
        given: GivenArg,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Shannon entropy of a distribution file (CSV: symbol,probability)
    Entropy {
        #[arg(long)]
        dist: PathBuf,
    },
    /// Shannon-Fano code with Kraft and prefix checks
    Sfcode {
        #[arg(long)]
        dist: PathBuf,
    },
    /// Structure function h_x(alpha)
    Structfn(StructArg),
    /// Minimal sufficient statistic
    Mss {
        #[command(flatten)]
        s: StructArg,
        #[arg(long, default_value_t = DEFAULT_SLACK)]
        slack: usize,
    },
    /// Structure curve with heuristic randomness labels
    Randreport {
        #[command(flatten)]
        s: StructArg,
        #[arg(long, default_value_t = DEFAULT_SLACK)]
        slack: usize,
        #[arg(long, default_value_t = 2)]
        alpha_window: usize,
        #[arg(long, default_value_t = 1)]
        h_margin: usize,
        #[arg(long, default_value_t = 2)]
        k_margin: usize,
    },
    /// Two-part code length of x inside a model set
    Twopart {
        #[command(flatten)]
        x: BitsArg,
        /// Model set as a 2^n-bit indicator bitmap
        #[arg(long)]
        set: String,
    },
    /// LZ78-encode bytes; the code is padded with zero bits to a byte boundary
    LzEncode {
        #[command(flatten)]
        input: BytesArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the code here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit the code as hexadecimal text
        #[arg(long)]
        hex_out: bool,
    },
    /// Decode an LZ78 code produced by lz-encode
    LzDecode {
        /// Code file; standard input when absent
        #[arg(long)]
        file: Option<PathBuf>,
        /// The code is hexadecimal text
        #[arg(long)]
        hex: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// LZ78 upper bound on the information content of bytes
    Estimate {
        #[command(flatten)]
        input: BytesArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Decompressor constant added to the code length
        #[arg(long, default_value_t = 0)]
        c_dec: u64,
    },
    /// Compare LZ78 bounds of two byte strings
    Compare {
        #[command(flatten)]
        input: BytesArg,
        /// Second input; defaults to seeded random bytes of equal length
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        c_dec: u64,
    },
    /// Enumerate all halting programs, optionally through a cache file
    Enumerate {
        /// A, B or Acond
        #[arg(long, default_value = "A")]
        machine: MachineId,
        /// Auxiliary input for Acond
        #[arg(long)]
        given: Option<String>,
        #[arg(long, required_unless_present = "load")]
        limit: Option<usize>,
        #[arg(long, conflicts_with = "load")]
        save: Option<PathBuf>,
        #[arg(long)]
        load: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let limits = StepLimits::new(cli.max_output_bits)?;
    let cfg = SearchConfig::default()
        .with_workers(cli.workers)
        .with_budget(cli.budget)
        .with_limits(limits);
    let tsv = cli.tsv;
    use commands::*;
    match cli.command {
        Command::K { machine, x, limit } => k(machine.machine, &x.read()?, limit, &cfg, tsv),
        Command::Ktable { machine, n, limit } => ktable(machine.machine, n, limit, &cfg, tsv),
        Command::Prob { machine, x, limit } => prob(machine.machine, &x.read()?, limit, &cfg, tsv),
        Command::Kraft { machine, limit } => kraft(machine.machine, limit, &cfg, tsv),
        Command::Cond { x, given, limit } => cond(&x.read()?, &given.given, limit, &cfg, tsv),
        Command::Info { x, given, limit } => info(&x.read()?, &given.given, limit, &cfg, tsv),
        Command::Entropy { dist } => entropy(&dist, tsv),
        Command::Sfcode { dist } => sfcode(&dist, tsv),
        Command::Structfn(s) => structfn(&s, &cfg, tsv),
        Command::Mss { s, slack } => mss(&s, slack, &cfg, tsv),
        Command::Randreport {
            s,
            slack,
            alpha_window,
            h_margin,
            k_margin,
        } => randreport(&s, slack, [alpha_window, h_margin, k_margin], &cfg, tsv),
        Command::Twopart { x, set } => twopart(&x.read()?, &input::parse_bits(&set, false)?, &cfg, tsv),
        Command::LzEncode {
            input,
            seed,
            out,
            hex_out,
        } => lz_encode(&input.read(seed)?, hex_out, out.as_deref()),
        Command::LzDecode { file, hex, out } => lz_decode(file.as_deref(), hex, out.as_deref()),
        Command::Estimate { input, seed, c_dec } => estimate(&input.read(seed)?, c_dec, tsv),
        Command::Compare {
            input,
            against,
            seed,
            c_dec,
        } => compare(&input.read(seed)?, against.as_deref(), seed, c_dec, tsv),
        Command::Enumerate {
            machine,
            given,
            limit,
            save,
            load,
        } => enumerate(machine, given.as_deref(), limit, save.as_deref(), load.as_deref(), &cfg, tsv),
    }
}

fn emit(output: Output) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match output {
        Output::Json(v) => writeln!(out, "{v}")?,
        Output::Text(s) => out.write_all(s.as_bytes())?,
        Output::Bytes(b) => out.write_all(&b)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(output) => match emit(output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("ait: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("ait: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
