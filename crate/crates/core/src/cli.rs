//! The `mdist` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::candidates::matching_distance;
use crate::decision::{decide_leq, slice_bars};
use crate::fpres::{parse_presentation_bytes, FpresError};
use crate::matching::bottleneck_distance;
use crate::oracle::{grid_samples, GridSpec};
use crate::presentation::Presentation;
use crate::rational::{ExtRational, ParseRationalError, Rational};
use crate::slices::{DualPoint, SlopeOutOfRange};

/// Seed used by `compute` when none is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: FpresError },
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Slope(#[from] SlopeOutOfRange),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "mdist", version, about = "Exact matching distance of two-parameter persistence modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute d_M of two presentations.
    Compute {
        first: PathBuf,
        second: PathBuf,
        /// Seed for the random plane order.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also print an approximate decimal with this many digits.
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Decide d_M <= LAMBDA; exits 0 for yes and 1 for no.
    Decide {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        lambda: String,
    },
    /// Bottleneck distance of the slice barcodes at the dual point a,b.
    Bottleneck {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        slice: String,
    },
    /// Lower bound for d_M from a grid of slices on both sides.
    Sample {
        first: PathBuf,
        second: PathBuf,
        /// Grid size as NAxNB.
        #[arg(long)]
        grid: String,
        /// Range of intercepts as lo,hi; defaults to one covering all grades.
        #[arg(long, allow_hyphen_values = true)]
        brange: Option<String>,
    },
    /// Parse and validate a presentation.
    Validate { file: PathBuf },
}

fn load(path: &Path) -> Result<Presentation, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_presentation_bytes(&bytes).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn parse_pair(s: &str, sep: char, what: &str) -> Result<(String, String), CliError> {
    s.split_once(sep)
        .map(|(x, y)| (x.trim().to_string(), y.trim().to_string()))
        .ok_or_else(|| CliError::Usage(format!("{what}: expected two values separated by '{sep}', got '{s}'")))
}

fn parse_slice(s: &str) -> Result<DualPoint, CliError> {
    let (a, b) = parse_pair(s, ',', "--slice")?;
    Ok(DualPoint::new(a.parse()?, b.parse()?)?)
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let (na, nb) = parse_pair(&s.to_ascii_lowercase(), 'x', "--grid")?;
    let num = |t: &str| {
        t.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("--grid: '{t}' is not a positive integer")))
    };
    Ok((num(&na)?, num(&nb)?))
}

fn format_ext(v: &ExtRational, decimal: Option<usize>) -> String {
    match (v, decimal) {
        (ExtRational::Finite(r), Some(d)) => format!("{r}\napprox {}", r.to_decimal_string(d)),
        _ => v.to_string(),
    }
}

/// Runs one command, writing its report to `out`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Compute { first, second, seed, decimal } => {
            let (q, q2) = (load(&first)?, load(&second)?);
            let res = matching_distance(&q, &q2, seed);
            writeln!(out, "{}", format_ext(&res.value, decimal))?;
            writeln!(out, "seed {seed}")?;
            Ok(0)
        }
        Command::Decide { first, second, lambda } => {
            let (q, q2) = (load(&first)?, load(&second)?);
            let lambda: Rational = lambda.parse()?;
            if lambda.is_negative() {
                return Err(CliError::Usage("--lambda must be nonnegative".into()));
            }
            let yes = decide_leq(&q, &q2, &lambda);
            writeln!(out, "{}", if yes { "yes" } else { "no" })?;
            Ok(if yes { 0 } else { 1 })
        }
        Command::Bottleneck { first, second, slice } => {
            let (q, q2) = (load(&first)?, load(&second)?);
            let s = parse_slice(&slice)?;
            let d = bottleneck_distance(&slice_bars(&q, &s), &slice_bars(&q2, &s));
            writeln!(out, "{d}")?;
            Ok(0)
        }
        Command::Sample { first, second, grid, brange } => {
            let (q, q2) = (load(&first)?, load(&second)?);
            let (na, nb) = parse_grid(&grid)?;
            let mut spec = GridSpec::covering(&q, &q2, na, nb);
            if let Some(r) = brange {
                let (lo, hi) = parse_pair(&r, ',', "--brange")?;
                (spec.b_lo, spec.b_hi) = (lo.parse()?, hi.parse()?);
                if spec.b_lo > spec.b_hi {
                    return Err(CliError::Usage("--brange: lo exceeds hi".into()));
                }
            }
            let samples = grid_samples(&q, &q2, &spec);
            let bound = samples.iter().map(|s| s.distance.clone()).max().unwrap_or(ExtRational::Finite(Rational::zero()));
            writeln!(out, "lower_bound\t{bound}")?;
            writeln!(out, "a\tb\td_B\tside")?;
            for s in &samples {
                let side = if s.swapped { "ge1" } else { "le1" };
                writeln!(out, "{}\t{}\t{}\t{side}", s.slice.a, s.slice.b, s.distance)?;
            }
            Ok(0)
        }
        Command::Validate { file } => {
            let q = load(&file)?;
            writeln!(
                out,
                "ok: field {}, {} generators, {} relations",
                q.field.characteristic(),
                q.num_generators(),
                q.num_relations()
            )?;
            Ok(0)
        }
    }
}

/// Entry point for the binary: parses `args`, runs, reports errors to stderr.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
