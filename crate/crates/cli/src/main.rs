//! `angstruct`: normal surfaces and angle structures on triangulated
//! pseudo-manifolds, in exact arithmetic.
//!
//! Exit status is 0 when the answer is feasible/true, 1 when it is
//! infeasible/false and 2 on any error.

#![allow(clippy::needless_range_loop)]

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use angstruct::StructureKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "angstruct", version, about = "Exact normal-surface and angle-structure computations")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Leave the elapsed time out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Edge degrees, vertex links and boundary summary.
    Info(FileArg),
    /// The tetrahedral and edge solutions, checked to be a basis of the solution space.
    Basis(FileArg),
    /// Generalised Euler characteristic of a vector, or of the standard solutions.
    Chi {
        #[command(flatten)]
        file: FileArg,
        /// Comma-separated normal coordinates (quads first, then triangles).
        #[arg(long)]
        vector: Option<String>,
    },
    /// Vertex solutions of the projective solution space.
    Vertices(FileArg),
    /// Decide whether an angle structure of the given kind exists.
    Decide {
        #[command(flatten)]
        file: FileArg,
        /// generalised, semi or strict
        #[arg(long, value_parser = parse_kind)]
        kind: StructureKind,
    },
    /// Decide existence of a wedge structure with prescribed area-curvature.
    Prescribe {
        #[command(flatten)]
        file: FileArg,
        /// Area-curvature file (`area <tet> <vertex> <p/q>`, `curv <edge> <p/q>`).
        data: PathBuf,
        /// generalised, semi or strict
        #[arg(long, value_parser = parse_kind)]
        kind: StructureKind,
    },
    /// Gauss–Bonnet check or realization on a vertex link.
    Gb {
        #[command(flatten)]
        file: FileArg,
        /// Vertex class index or label.
        #[arg(long, default_value = "0")]
        vertex: String,
        /// Corner angles, comma-separated; defaults to 1/3 at every corner.
        #[arg(long, conflicts_with_all = ["curvature", "area"])]
        angles: Option<String>,
        /// Prescribed curvature per link vertex, comma-separated.
        #[arg(long, requires = "area")]
        curvature: Option<String>,
        /// Prescribed area per link cell, comma-separated.
        #[arg(long, requires = "curvature")]
        area: Option<String>,
    },
}

#[derive(Args, Debug)]
struct FileArg {
    /// Triangulation file.
    file: PathBuf,
}

fn parse_kind(s: &str) -> Result<StructureKind, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, argv) {
        Ok((report, status)) => {
            report.print(cli.json);
            ExitCode::from(status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
