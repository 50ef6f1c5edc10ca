//! `minsurf`: minimal surfaces from Enneper–Weierstrass data.
//!
//! Exit codes: 0 success, 2 numeric or validation failure, 3 input or
//! schema error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "minsurf", version, about = "Minimal surfaces from Enneper–Weierstrass data")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Quadrature and period tolerance (overrides the spec file).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Offset of the quasi-random sample sequence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Proceed with specs that fail validation.
    #[arg(long, global = true)]
    pub force: bool,
}

/// A spec file path or the name of a built-in surface.
#[derive(Debug, Clone, Args)]
pub struct SpecArg {
    pub spec: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Cg,
    Jacobi,
    GaussSeidel,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in surfaces.
    Catalog {
        /// Print the spec file of one entry instead.
        #[arg(long, value_name = "NAME")]
        emit_spec: Option<String>,
    },
    /// Check nullity, holomorphy, zeros and periods.
    Validate {
        #[command(flatten)]
        spec: SpecArg,
        /// Number of sample points (overrides the spec file).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Periods of the homology basis cycles.
    Periods {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Flux (imaginary periods) of the homology basis cycles.
    Flux {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Evaluate the immersion and null curve.
    Eval {
        #[command(flatten)]
        spec: SpecArg,
        /// Parameter point `re,im`; repeatable.
        #[arg(long, required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Triangle mesh of the parameter grid as OBJ.
    Mesh {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 64)]
        nu: usize,
        #[arg(long, default_value_t = 64)]
        nv: usize,
        /// Output file (default stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Coordinates written as x, y, z (1-based).
        #[arg(long, default_value = "1,2,3")]
        axes: String,
        /// Sidecar CSV with per-vertex K and λ.
        #[arg(long)]
        scalars: Option<PathBuf>,
        /// Mesh the associated surface at this phase.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
    },
    /// Curvature sweep over the parameter grid as CSV.
    Sweep {
        #[command(flatten)]
        spec: SpecArg,
        /// Grid shape `NUxNV`.
        #[arg(long, default_value = "32x32")]
        grid: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Gauss map, unit normal and generalized Gauss map.
    Gauss {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Metric, curvatures and mean curvature vector.
    Curvature {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, required = true, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Total Gaussian curvature over the domain.
    Totalcurvature {
        #[command(flatten)]
        spec: SpecArg,
        /// Base resolution of the midpoint sums.
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Length of the image of a parameter path.
    Length {
        #[command(flatten)]
        spec: SpecArg,
        /// Radial segment `a:b` at angle `--angle`.
        #[arg(long, conflicts_with = "path", required_unless_present = "path")]
        ray: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        angle: f64,
        /// JSON polyline `[[re, im], ...]`.
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Spec file of the associated surface `Re(e^{it} Z)`.
    Associate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Spec file of the conjugate surface `Im Z`.
    Conjugate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dirichlet-minimizing grid for fixed boundary values.
    Minimize {
        /// CSV rows `i,j,x1,...,xn` of the fixed nodes.
        boundary: PathBuf,
        /// Grid shape `MxN`.
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value_t = SolverArg::Cg)]
        solver: SolverArg,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Grid spacings (default: unit square).
        #[arg(long)]
        hu: Option<f64>,
        #[arg(long)]
        hv: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
