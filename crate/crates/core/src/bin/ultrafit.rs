use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ultrafit::fan::q4_census;
use ultrafit::io::{parse_distance_matrix, run_fit, witness_report, FitOptions, Format, Method};
use ultrafit::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(version, about = "Least-squares equidistant tree fitting")]
struct Cli {
    /// Worker threads for the parallel solvers (default: all cores).
    #[arg(long, global = true, env = "ULTRAFIT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit an equidistant tree to a distance matrix.
    Fit {
        #[arg(long, default_value = "upgma", value_parser = parse_method)]
        method: Method,
        /// Matrix file, or `-` for standard input.
        #[arg(long)]
        input: PathBuf,
        /// Defaults to csv for `.csv` files and phylip otherwise.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
        /// List every projection cone containing the data.
        #[arg(long)]
        list_cones: bool,
        /// Run the solver in exact rational arithmetic.
        #[arg(long)]
        exact_rational: bool,
    },
    /// Sample the cells of the projection-cone fan at four taxa.
    Census {
        /// Only 4 is supported.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(4..=4))]
        n: u8,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Cone membership of the comb witness `d(1,j) = a`, all else `b`.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Phylip,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Newick,
    Json,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("ultrafit: {message}");
    ExitCode::from(code)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::InvalidWitness { .. } | Error::InvalidTaxa(_) => EXIT_USAGE,
        _ => 1,
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_json<T: serde::Serialize>(value: &T) {
    emit(&serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            return fail(EXIT_USAGE, e);
        }
    }

    match cli.command {
        Command::Fit {
            method,
            input,
            format,
            output,
            list_cones,
            exact_rational,
        } => {
            let text = if input.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(&input)
            };
            let text = match text {
                Ok(t) => t,
                Err(e) => return fail(EXIT_NO_INPUT, format!("{}: {e}", input.display())),
            };
            let format = match format {
                Some(InputFormat::Csv) => Format::Csv,
                Some(InputFormat::Phylip) => Format::Phylip,
                None if input.extension().is_some_and(|x| x == "csv") => Format::Csv,
                None => Format::Phylip,
            };
            let d = match parse_distance_matrix(&text, format) {
                Ok(d) => d,
                Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", input.display())),
            };
            let options = FitOptions {
                method,
                list_cones,
                exact_rational,
            };
            match run_fit(&d, &options) {
                Ok(report) => match output {
                    Output::Newick => emit(&report.newick),
                    Output::Json => print_json(&report),
                },
                Err(e) => return fail(error_code(&e), e),
            }
        }
        Command::Census { samples, seed, .. } => print_json(&q4_census(samples, seed)),
        Command::Witness { n, a, b } => match witness_report(n, a, b) {
            Ok(report) => print_json(&report),
            Err(e) => return fail(error_code(&e), e),
        },
    }
    ExitCode::SUCCESS
}
