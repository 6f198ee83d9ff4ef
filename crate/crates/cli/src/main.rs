//! The `parabolica` workbench: build k-parabolic arrangements and Coxeter
//! complexes, run the verification suites, and decide discrete homotopy of
//! loops.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use parabolica_cli::{build, decide, exit_code_for_error, io, suites};

#[derive(Parser)]
#[command(
    name = "parabolica",
    about = "Workbench for k-parabolic subspace arrangements and discrete homotopy of Coxeter complexes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArgs {
    /// Cartan-Killing type label (A3, B3, D4, H3, F4, E6, I2(7), ...).
    #[arg(long = "type")]
    type_label: Option<String>,
    /// Coxeter matrix file: first line the rank, then the rows; `inf` for an
    /// infinite bond.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an object and serialize it (JSON/DOT/text).
    Build {
        #[command(flatten)]
        system: SystemArgs,
        /// The parameter k of the k-parabolic arrangement (q = n + 1 - k).
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// What to emit: arrangement, lattice, graph or presentation.
        #[arg(long)]
        emit: String,
        /// Output directory (overridden by PARABOLICA_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bound on the number of 2-cells of a complex.
        #[arg(long, default_value_t = parabolica_core::complex::DEFAULT_CELL_CAP)]
        cell_cap: usize,
    },
    /// Run verification suites and write a report.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        /// k for the k4-triviality suite (must be > 3).
        #[arg(long)]
        k: Option<usize>,
        /// Suite name (repeatable): galois, arrangement-equalities,
        /// theorem-3-3, theorem-4-1, k4-triviality, or all.
        #[arg(long = "suite", required = true)]
        suites: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = parabolica_core::complex::DEFAULT_CELL_CAP)]
        cell_cap: usize,
        /// Bound on coset definitions in the triviality probe.
        #[arg(long, default_value_t = 1_000_000)]
        coset_cap: usize,
        /// Run independent suites concurrently (report order is unchanged).
        #[arg(long)]
        parallel: bool,
        /// Include per-check runtimes in the serialized report (makes the
        /// file non-reproducible byte-for-byte).
        #[arg(long)]
        timings: bool,
    },
    /// Decide discrete homotopy of two loops.
    Decide {
        #[command(flatten)]
        system: SystemArgs,
        /// First loop file (`word: ...` or `chambers: ...`).
        #[arg(long)]
        loop1: PathBuf,
        /// Second loop file.
        #[arg(long)]
        loop2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for_error(&err) as u8)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Build {
            system,
            k,
            emit,
            out,
            cell_cap,
        } => {
            let sys = io::load_system(system.type_label.as_deref(), system.matrix_file.as_deref())?;
            let emit: build::Emit = emit.parse()?;
            let out_dir = io::resolve_out_dir(out);
            let path = build::run(&sys, k, emit, &out_dir, cell_cap)?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Verify {
            system,
            k,
            suites: suite_names,
            out,
            cell_cap,
            coset_cap,
            parallel,
            timings,
        } => {
            let sys = io::load_system(system.type_label.as_deref(), system.matrix_file.as_deref())?;
            anyhow::ensure!(
                cell_cap > 0 && coset_cap > 0,
                "effort bounds must be positive (cell-cap {cell_cap}, coset-cap {coset_cap})"
            );
            let caps = suites::Caps {
                cell_cap,
                coset_cap,
            };
            let report = suites::run_suites(&suite_names, &sys, k, caps, parallel)?;
            report.print_console();
            let out_dir = io::resolve_out_dir(out);
            std::fs::create_dir_all(&out_dir)?;
            let config = format!(
                "verify --type {} --suite {} (cell-cap {}, coset-cap {})",
                sys.describe(),
                suite_names.join(","),
                cell_cap,
                coset_cap
            );
            let json_path = out_dir.join(format!(
                "report_{}_{}.json",
                sys.describe().replace(['(', ')'], ""),
                suite_names.join("-")
            ));
            io::write_json(&json_path, &report.to_json(&config, timings))?;
            let csv_path = json_path.with_extension("csv");
            std::fs::write(&csv_path, report.to_csv())?;
            println!("wrote {} and {}", json_path.display(), csv_path.display());
            Ok(report.exit_code())
        }
        Command::Decide {
            system,
            loop1,
            loop2,
            out,
        } => {
            let sys = io::load_system(system.type_label.as_deref(), system.matrix_file.as_deref())?;
            let out_dir = io::resolve_out_dir(out);
            decide::run(&sys, &loop1, &loop2, &out_dir)?;
            Ok(0)
        }
    }
}
