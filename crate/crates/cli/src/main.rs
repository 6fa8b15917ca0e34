//! `isogeo`: curvature grids, geodesic traces, verification suites and mesh
//! export for surfaces in simply isotropic and pseudo-isotropic space.
//!
//! Exit codes: 0 success, 2 invalid specification or arguments, 3 I/O error,
//! 4 geodesic started at a lightlike point, 5 a verification check failed.

mod commands;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "isogeo", version, about = "Geometry of surfaces in isotropic and pseudo-isotropic 3-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Surface specification: a JSON file path, `-` for stdin, or an inline JSON object.
    spec: String,
}

#[derive(Args)]
struct Output {
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Curvatures and Gauss map on a parameter grid (CSV).
    Curvature {
        #[command(flatten)]
        input: Input,
        /// Grid size as NUxNV.
        #[arg(long, default_value = "10x10", value_parser = parse_grid)]
        grid: (usize, usize),
        #[command(flatten)]
        output: Output,
    },
    /// Integrate a geodesic (CSV).
    Geodesic {
        #[command(flatten)]
        input: Input,
        /// Connection: `r` (relative) or `lc` (Levi-Civita).
        #[arg(long = "type", value_enum, default_value = "r")]
        kind: GeodesicType,
        /// Start point as u,v.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        start: (f64, f64),
        /// Initial parameter velocity as du,dv.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        velocity: (f64, f64),
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        /// Surface specification (see `curvature`); omit with --all-catalog.
        #[arg(conflicts_with = "all_catalog", required_unless_present = "all_catalog")]
        spec: Option<String>,
        /// Verify every standard catalog surface.
        #[arg(long)]
        all_catalog: bool,
        #[arg(long, default_value = "all", value_parser = ["flatness", "egregium", "codazzi", "umbilic", "minimal", "sphere-geodesics", "all"])]
        suite: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override every check's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Finite-difference step (default: 1e-4 times the domain diameter).
        #[arg(long, env = "ISOGEO_FD_STEP")]
        fd_step: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Export a grid mesh (OBJ) or point cloud (CSV).
    Sample {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "10x10", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long, value_enum, default_value = "obj")]
        format: SampleFormat,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GeodesicType {
    R,
    Lc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Obj,
    Csv,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X', ','])
        .ok_or_else(|| format!("expected NUxNV, got `{s}`"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad grid size `{t}`: {e}"));
    let (nu, nv) = (n(a)?, n(b)?);
    if nu == 0 || nv == 0 {
        return Err("grid sizes must be positive".into());
    }
    Ok((nu, nv))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got `{s}`"))?;
    let n = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number `{t}`: {e}"));
    Ok((n(a)?, n(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curvature { input, grid, output } => commands::curvature(&input.spec, grid, output.out.as_deref()),
        Command::Geodesic { input, kind, start, velocity, t_end, step, output } => {
            let kind = match kind {
                GeodesicType::R => isogeo::ConnectionKind::Relative,
                GeodesicType::Lc => isogeo::ConnectionKind::LeviCivita,
            };
            commands::geodesic(&input.spec, kind, start, velocity, t_end, step, output.out.as_deref())
        }
        Command::Verify { spec, all_catalog: _, suite, samples, seed, tol, fd_step, output } => {
            let opts = isogeo::verify::VerifyOptions { samples, seed, tol, fd_step };
            commands::verify(spec.as_deref(), &suite, &opts, output.out.as_deref())
        }
        Command::Sample { input, grid, format, output } => {
            commands::sample(&input.spec, grid, matches!(format, SampleFormat::Obj), output.out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(e) = &f.error {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(f.code)
        }
    }
}
