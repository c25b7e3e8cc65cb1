use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aflab::checks::{convergence_study, run_suite, OriginPolicy, RunOptions, Verdict};
use aflab::geometry::SphereGrid;
use aflab::oracle::spec_oracle_reports;
use aflab::report;
use aflab::shapespec::{parse_shape_spec, ShapeSpec};
use clap::{Parser, Subcommand, ValueEnum};

/// Curvature-integral identities and inequalities on sampled hypersurfaces.
#[derive(Parser)]
#[command(name = "aflab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite on one shape.
    Run {
        /// Shape-spec JSON file.
        #[arg(long)]
        shape: PathBuf,
        /// Comma-separated check ids, `all` or `table1`.
        #[arg(long, default_value = "all")]
        checks: String,
        /// `N` for curves or `NlatxNlon` for surfaces.
        #[arg(long)]
        grid: Option<String>,
        /// Report file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Origin for checks registered with the as-given policy:
        /// as-given, circumcenter or steiner.
        #[arg(long)]
        origin: Option<String>,
        /// Skip the refined-grid evaluation.
        #[arg(long)]
        no_refine: bool,
    },
    /// Tabulate one check over a sequence of grids.
    Convergence {
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        check: String,
        /// Comma-separated grid sizes, e.g. `16,32,64` or `16x32,32x64`.
        #[arg(long)]
        grids: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare the sampled quantities against independent references.
    Oracle {
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_grid(text: &str, dim: usize) -> Result<SphereGrid, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad grid size '{text}'"));
    let grid = match (dim, text.split_once('x')) {
        (1, None) => SphereGrid::s1(num(text)?),
        (2, Some((a, b))) => SphereGrid::s2(num(a)?, num(b)?),
        (2, None) => {
            let n = num(text)?;
            SphereGrid::s2(n, 2 * n)
        }
        _ => return Err(format!("grid '{text}' does not fit a dimension-{dim} shape")),
    };
    grid.map_err(|e| e.to_string())
}

fn default_grid(dim: usize) -> SphereGrid {
    if dim == 1 {
        SphereGrid::s1(128)
    } else {
        SphereGrid::s2(48, 96)
    }
    .expect("default grids are valid")
}

fn load_shape(path: &Path) -> Result<ShapeSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_shape_spec(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid_for(spec: &ShapeSpec, grid: Option<&str>) -> Result<SphereGrid, String> {
    match grid {
        Some(g) => parse_grid(g, spec.dim()),
        None => Ok(default_grid(spec.dim())),
    }
}

fn execute(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Run {
            shape,
            checks,
            grid,
            out,
            format,
            origin,
            no_refine,
        } => {
            let spec = load_shape(&shape)?;
            let grid = grid_for(&spec, grid.as_deref())?;
            let origin_override = origin
                .map(|o| o.parse::<OriginPolicy>())
                .transpose()
                .map_err(|e| e.to_string())?;
            let selection: Vec<String> = checks.split(',').map(|s| s.trim().to_string()).collect();
            let opts = RunOptions {
                refine: !no_refine,
                origin_override,
            };
            let shape = spec.to_shape().map_err(|e| e.to_string())?;
            let results = run_suite(&shape, &grid, &selection, &opts).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => report::results_json(&results),
                Format::Csv => report::results_csv(&results),
            }
            .map_err(|e| e.to_string())?;
            emit(out.as_deref(), &text)?;
            Ok(results.iter().all(|r| r.verdict != Verdict::Fail))
        }
        Command::Convergence {
            shape,
            check,
            grids,
            out,
            format,
        } => {
            let spec = load_shape(&shape)?;
            let grids = grids
                .split(',')
                .map(|g| parse_grid(g, spec.dim()))
                .collect::<Result<Vec<_>, _>>()?;
            let shape = spec.to_shape().map_err(|e| e.to_string())?;
            let rows = convergence_study(&shape, &check, &grids).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => report::convergence_json(&check, &rows),
                Format::Csv => report::convergence_csv(&rows),
            }
            .map_err(|e| e.to_string())?;
            emit(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Oracle {
            shape,
            grid,
            out,
            format,
        } => {
            let spec = load_shape(&shape)?;
            let grid = grid_for(&spec, grid.as_deref())?;
            let reports = spec_oracle_reports(&spec, &grid).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => report::oracle_json(&reports),
                Format::Csv => report::oracle_csv(&reports),
            }
            .map_err(|e| e.to_string())?;
            emit(out.as_deref(), &text)?;
            Ok(reports.iter().all(|r| r.passed()))
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("AFLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("AFLAB_THREADS must be a positive integer, got '{value}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| execute(cli));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("aflab: {message}");
            ExitCode::from(2)
        }
    }
}
