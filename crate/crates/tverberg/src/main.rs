use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tverberg::commands::{self, CliError, Ctx};
use tverberg::input::{parse_indices, parse_point, InputDocument};
use tverberg::Report;
use tverberg_core::Vector;

/// Exact Radon and Tverberg partitions, Tverberg regions and their cores,
/// with certificates that can be re-checked.
///
/// Exit codes: 0 verdict reached (including "none exists"), 1 a report
/// failed `verify`, 2 bad input or arguments, 3 a hypothesis of the
/// command does not hold, 4 a search budget ran out.
#[derive(Parser)]
#[command(name = "tverberg", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output (for `plot`: the SVG path).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Input {
    /// Point-set document; standard input when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Basis of the affine dependences.
    Deps(Input),
    /// Radon partition of every basis dependence.
    Radon(Input),
    /// Search for a Tverberg r-partition.
    Tverberg {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
        /// Maximum number of partitions to examine.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// The Tverberg region T_r as a union of cells.
    Region {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
    },
    /// The core C^t_r: points of T_r that survive deleting any t points.
    Core {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
    },
    /// Certified membership of one point in C^t_r.
    CoreMember {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        /// Comma-separated exact coordinates, e.g. `1/2,0`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Dimensions of T_1, T_2, ... and their sum (needs dim T_2 ≤ 0).
    CascadeCheck(Input),
    /// Partition into at least t+2 parts through the unique Radon point.
    CascadeConstruct {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        t: usize,
        /// Split every block by sign, giving 2(t+1) parts when there are t+1 blocks.
        #[arg(long)]
        split_all: bool,
    },
    /// Single-point moves from (A, B) to (B, A) keeping a point in both hulls.
    FlipPath {
        #[command(flatten)]
        input: Input,
        /// Comma-separated 1-based indices.
        #[arg(long)]
        start_a: String,
        #[arg(long)]
        start_b: String,
        /// Fixed point; defaults to a common point of the start hulls.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Maximum number of states to visit.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Tukey depth of a point (d ≤ 3), or the Rado check with --t.
    Depth {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "t", required_unless_present = "t")]
        point: Option<String>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Whether points of depth > t exist, with a witness and its depth.
    RadoCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        t: usize,
    },
    /// Named example with its canonical checks.
    Gallery {
        /// paper-counterexample, cross, line-<n> or curated-cascade-<k>.
        name: String,
    },
    /// SVG of a planar set with a witness partition and cell points of T_r.
    Plot {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        r: usize,
    },
    /// Re-checks every certificate of a JSON report.
    Verify { report: Option<PathBuf> },
}

fn point_arg(text: &str) -> Result<Vector, CliError> {
    parse_point(text).map_err(CliError::usage)
}

fn indices_arg(text: &str) -> Result<Vec<usize>, CliError> {
    parse_indices(text).map_err(CliError::usage)
}

fn load(input: &Input) -> Result<Ctx, CliError> {
    Ctx::new(InputDocument::load(input.input.as_deref())?)
}

fn dispatch(cli: &Cli, argv: Vec<String>) -> Result<Report, CliError> {
    use commands::run;
    match &cli.command {
        Command::Deps(i) => {
            let c = load(i)?;
            run("deps", argv, Some(c.doc.clone()), || commands::deps(&c))
        }
        Command::Radon(i) => {
            let c = load(i)?;
            run("radon", argv, Some(c.doc.clone()), || commands::radon(&c))
        }
        Command::Tverberg { input, r, budget } => {
            let c = load(input)?;
            run("tverberg", argv, Some(c.doc.clone()), || commands::tverberg(&c, *r, *budget))
        }
        Command::Region { input, r } => {
            let c = load(input)?;
            run("region", argv, Some(c.doc.clone()), || commands::region(&c, *r))
        }
        Command::Core { input, r, t } => {
            let c = load(input)?;
            run("core", argv, Some(c.doc.clone()), || commands::core(&c, *r, *t))
        }
        Command::CoreMember { input, r, t, point } => {
            let c = load(input)?;
            let p = point_arg(point)?;
            run("core-member", argv, Some(c.doc.clone()), || commands::core_member_cmd(&c, *r, *t, p))
        }
        Command::CascadeCheck(i) => {
            let c = load(i)?;
            run("cascade-check", argv, Some(c.doc.clone()), || commands::cascade_check(&c.set))
        }
        Command::CascadeConstruct { input, t, split_all } => {
            let c = load(input)?;
            run("cascade-construct", argv, Some(c.doc.clone()), || commands::cascade_construct(&c.set, *t, *split_all))
        }
        Command::FlipPath { input, start_a, start_b, point, budget } => {
            let c = load(input)?;
            let (a, b) = (indices_arg(start_a)?, indices_arg(start_b)?);
            let p = point.as_deref().map(point_arg).transpose()?;
            run("flip-path", argv, Some(c.doc.clone()), || commands::flip_path(&c, &a, &b, p, *budget))
        }
        Command::Depth { input, point, t } => {
            let c = load(input)?;
            match (point, t) {
                (Some(p), _) => {
                    let p = point_arg(p)?;
                    run("depth", argv, Some(c.doc.clone()), || commands::depth(&c, p))
                }
                (None, Some(t)) => run("depth", argv, Some(c.doc.clone()), || commands::rado(&c, *t)),
                (None, None) => Err(CliError::usage("depth needs --point or --t")),
            }
        }
        Command::RadoCheck { input, t } => {
            let c = load(input)?;
            run("rado-check", argv, Some(c.doc.clone()), || commands::rado(&c, *t))
        }
        Command::Gallery { name } => {
            let c = Ctx::new(commands::gallery_input(name)?)?;
            run("gallery", argv, Some(c.doc.clone()), || commands::gallery_checks(name, &c.set))
        }
        Command::Plot { input, r } => {
            let c = load(input)?;
            let path = cli.output.clone().ok_or_else(|| CliError::usage("plot needs --output <file.svg>"))?;
            run("plot", argv, Some(c.doc.clone()), || commands::plot(&c, *r, &path))
        }
        Command::Verify { .. } => unreachable!("handled separately"),
    }
}

fn verify(path: Option<&std::path::Path>) -> Result<(), CliError> {
    let text = match path {
        Some(p) if p != std::path::Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| CliError::usage(format!("cannot read report: {e}")))?
        }
        _ => std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::usage(e.to_string()))?,
    };
    let report = Report::from_json(&text).map_err(|e| CliError::usage(format!("not a report: {e}")))?;
    report.verify().map_err(|e| CliError { code: 1, message: format!("verification failed: {e}") })?;
    println!("verified: {} report, all certificates check", report.command);
    Ok(())
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    match (&cli.output, &cli.command) {
        (Some(path), cmd) if !matches!(cmd, Command::Plot { .. }) => {
            std::fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
        }
        _ => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: --threads must be a positive number");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Verify { report } => verify(report.as_deref()).map(|_| 0),
        _ => dispatch(&cli, argv).and_then(|report| {
            emit(&cli, &report)?;
            if !report.certificates_verified {
                eprintln!("error: an embedded certificate failed re-verification");
                return Ok(1);
            }
            Ok(report.status.exit_code())
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
