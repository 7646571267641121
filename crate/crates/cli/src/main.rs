//! `plateau`: exact analysis of p-ary / vectorial plateaued functions,
//! partial geometric difference sets, matrix characterizations, and
//! m-sequence cross-correlation.
//!
//! Exit codes: 0 = all checks passed, 1 = a mathematical check failed
//! (a finding), 2 = usage or I/O error.

mod reports;
mod sweep;

use clap::{Parser, Subcommand, ValueEnum};
use plateau_core::error::Error;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "plateau", version, about)]
struct Cli {
    /// Worker threads (0 = automatic). Reports are identical regardless.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Report format; csv applies to xcorr spectra and sweep summaries.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (report file, truth-table file, or sweep directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print canonical modulus, primitive element, and trace profile.
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Override modulus coefficients c_0,...,c_n (must be irreducible).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        modulus: Option<Vec<u64>>,
    },
    /// Classify a function and cross-validate every characterization.
    Analyze {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<u32>,
        /// Analyze the power map x^d.
        #[arg(long)]
        power: Option<u64>,
        /// Analyze the p-ary function Tr(x^d).
        #[arg(long)]
        trace_power: Option<u64>,
        /// Analyze a truth-table file.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Verify the ternary level-set partition of Tr(x^d) as PGDS.
    Partition {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u64,
    },
    /// Cross-correlation spectrum, Walsh bridge, three-valued classifier.
    Xcorr {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u64,
    },
    /// Direct sum of two p-ary truth tables, with the matrix identity.
    Kronecker {
        /// Truth-table file for the left summand.
        f: PathBuf,
        /// Truth-table file for the right summand.
        g: PathBuf,
    },
    /// Verify a set file as a PGDS by delta counts and character sums.
    PgdsVerify {
        #[arg(long)]
        file: PathBuf,
    },
    /// Matrix identity, second-derivative sum, and autocorrelation energy.
    MatrixVerify {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        trace_power: Option<u64>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Batch-run checks over a range of decimations; resumable.
    Sweep {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        /// Single value or half-open range A..B.
        #[arg(long)]
        d: String,
        /// Comma-separated subset of classify,graph-pgds,partition,xcorr.
        #[arg(long)]
        checks: Option<String>,
        /// Skip d not coprime to p^n - 1.
        #[arg(long)]
        bijective_only: bool,
    },
}

fn exit_code_for(_err: &Error) -> i32 {
    // usage / IO problems, as opposed to mathematical findings
    2
}

fn run(cli: &Cli) -> Result<(Option<String>, bool), Error> {
    let out_path = cli.out.as_deref();
    let csv = cli.format == Format::Csv;
    let csv_unsupported = || {
        Err(Error::Precondition(
            "--format csv is only available for xcorr and sweep".into(),
        ))
    };
    let (text, pass) = match &cli.cmd {
        Cmd::Field { p, n, modulus } => {
            if csv {
                return csv_unsupported();
            }
            reports::cmd_field(*p, *n, modulus.clone())?
        }
        Cmd::Analyze {
            p,
            n,
            m,
            power,
            trace_power,
            file,
        } => {
            if csv {
                return csv_unsupported();
            }
            reports::cmd_analyze(*p, *n, *m, *power, *trace_power, file.as_deref())?
        }
        Cmd::Partition { p, n, d } => {
            if csv {
                return csv_unsupported();
            }
            reports::cmd_partition(*p, *n, *d)?
        }
        Cmd::Xcorr { p, n, d } => reports::cmd_xcorr(*p, *n, *d, csv)?,
        Cmd::Kronecker { f, g } => {
            if csv {
                return csv_unsupported();
            }
            // --out names the truth-table file; the report goes to stdout
            let (text, pass) = reports::cmd_kronecker(f, g, out_path)?;
            print!("{text}");
            return Ok((None, pass));
        }
        Cmd::PgdsVerify { file } => {
            if csv {
                return csv_unsupported();
            }
            reports::cmd_pgds_verify(file)?
        }
        Cmd::MatrixVerify {
            p,
            n,
            trace_power,
            file,
        } => {
            if csv {
                return csv_unsupported();
            }
            reports::cmd_matrix_verify(*p, *n, *trace_power, file.as_deref())?
        }
        Cmd::Sweep {
            p,
            n,
            d,
            checks,
            bijective_only,
        } => {
            let dir = out_path.ok_or_else(|| {
                Error::Precondition("sweep requires --out <directory>".into())
            })?;
            let range = sweep::parse_d_range(d)?;
            let checks = sweep::parse_checks(checks.as_deref())?;
            let (summary, pass) = sweep::cmd_sweep(*p, *n, range, &checks, *bijective_only, dir)?;
            // summary CSV also goes to stdout for piping
            print!("{summary}");
            return Ok((None, pass));
        }
    };
    match out_path {
        Some(path) => std::fs::write(path, &text)?,
        None => print!("{text}"),
    }
    Ok((None, pass))
}

fn main() {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .expect("rayon pool init");
    }
    let started = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    match outcome {
        Ok((_, true)) => std::process::exit(0),
        Ok((_, false)) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}
