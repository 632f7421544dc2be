//! The `polyvem` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use polyvem_core::checks::{run_checks, CheckConfig};
use polyvem_core::geometry::{mesh_metrics, validate_mesh};
use polyvem_core::solver::{self, LinearSolver};
use polyvem_core::study::{
    error_norms, fill_rates, projected_samples, solve_level, study_csv, study_mesh,
    ManufacturedSolution, StudyRow,
};
use polyvem_core::Mesh;

use crate::config::RunConfig;
use crate::io::{load_mesh, mesh_to_string, samples_csv, solution_csv, write_text};
use crate::{AppError, DirectSolver};

#[derive(Debug, Parser)]
#[command(
    name = "polyvem",
    version,
    about = "Virtual elements for 2D linear elasticity on polygonal meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a convergence study and write the per-level CSV.
    Study(StudyArgs),
    /// Solve one level and write the DOFs and projected samples.
    Solve(SolveArgs),
    /// Generate a mesh file.
    Mesh(MeshArgs),
    /// Run the randomized invariant suites.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
    /// Suppress progress lines.
    #[arg(long)]
    quiet: bool,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
struct MeshOpts {
    /// square | lshape
    #[arg(long)]
    domain: Option<String>,
    /// triangles | tri-mid | dsquares | squares | voronoi | gvoronoi
    #[arg(long)]
    mesh: Option<String>,
    /// Split every edge near one endpoint.
    #[arg(long)]
    small_edges: bool,
    /// Split position as a fraction of the edge length.
    #[arg(long)]
    edge_fraction: Option<String>,
}

#[derive(Debug, Args)]
struct ModelOpts {
    /// Polynomial degree, 1 or 2.
    #[arg(long)]
    k: Option<String>,
    /// Poisson ratio.
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    young: Option<String>,
    /// Density.
    #[arg(long)]
    rho: Option<String>,
    /// dofi | dtangent
    #[arg(long)]
    stab: Option<String>,
    /// sine | poly3
    #[arg(long)]
    solution: Option<String>,
}

#[derive(Debug, Args)]
struct StudyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    mesh: MeshOpts,
    #[command(flatten)]
    model: ModelOpts,
    /// Comma-separated, strictly increasing.
    #[arg(long)]
    levels: Option<String>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    mesh: MeshOpts,
    #[command(flatten)]
    model: ModelOpts,
    #[arg(long)]
    level: Option<String>,
    /// Solve on this mesh file instead of a generated one.
    #[arg(long)]
    input: Option<String>,
    /// Where to write Π u_h sampled at cell centroids.
    #[arg(long)]
    samples: Option<String>,
}

#[derive(Debug, Args)]
struct MeshArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    mesh: MeshOpts,
    #[arg(long)]
    level: Option<String>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Random cells per suite.
    #[arg(long)]
    cells: Option<String>,
}

type Entries = Vec<(&'static str, Option<String>)>;

impl Common {
    fn entries(&self) -> Entries {
        vec![("out", self.out.clone()), ("seed", self.seed.clone())]
    }
}

impl MeshOpts {
    fn entries(&self) -> Entries {
        vec![
            ("domain", self.domain.clone()),
            ("mesh", self.mesh.clone()),
            ("small-edges", self.small_edges.then(|| "true".to_string())),
            ("edge-fraction", self.edge_fraction.clone()),
        ]
    }
}

impl ModelOpts {
    fn entries(&self) -> Entries {
        vec![
            ("k", self.k.clone()),
            ("nu", self.nu.clone()),
            ("young", self.young.clone()),
            ("rho", self.rho.clone()),
            ("stab", self.stab.clone()),
            ("solution", self.solution.clone()),
        ]
    }
}

fn resolve(common: &Common, entries: Entries) -> Result<RunConfig, AppError> {
    let mut config = RunConfig::default();
    if let Some(path) = &common.config {
        config.apply_file(path)?;
    }
    for (key, value) in common.entries().into_iter().chain(entries) {
        if let Some(v) = value {
            config
                .set(key, &v)
                .map_err(|m| AppError::Usage(format!("--{key}: {m}")))?;
        }
    }
    Ok(config)
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    quiet: bool,
}

impl Io<'_> {
    fn progress(&mut self, line: std::fmt::Arguments) {
        if !self.quiet {
            let _ = writeln!(self.err, "{line}");
        }
    }

    fn echo(&mut self, config: &RunConfig) {
        let _ = writeln!(self.out, "# resolved configuration");
        let _ = write!(self.out, "{}", config.to_text());
    }

    fn emit(&mut self, path: Option<&PathBuf>, text: &str) -> Result<(), AppError> {
        match path {
            Some(p) => write_text(p, text),
            None => {
                let _ = write!(self.out, "{text}");
                Ok(())
            }
        }
    }
}

fn row_line(row: &StudyRow, method: &str) -> String {
    format!(
        "level {}: h = {:.4e}, ndof = {}, err_l2 = {:.4e}, err_h1 = {:.4e} [{method}]",
        row.level, row.h, row.ndof, row.err_l2, row.err_h1
    )
}

fn study(args: &StudyArgs, io: &mut Io, lin: &dyn LinearSolver) -> Result<(), AppError> {
    let mut entries = args.mesh.entries();
    entries.extend(args.model.entries());
    entries.push(("levels", args.levels.clone()));
    let config = resolve(&args.common, entries)?;
    io.echo(&config);
    let study = config.study()?;
    let mut rows = Vec::with_capacity(study.levels.len());
    for &level in &study.levels {
        let result = solve_level(&study, level, lin)?;
        io.progress(format_args!(
            "{}",
            row_line(&result.row, result.solution.report.method)
        ));
        rows.push(result.row);
    }
    fill_rates(&mut rows);
    io.emit(config.out.as_ref(), &study_csv(&rows))
}

fn loaded_mesh(path: &Path) -> Result<Mesh, AppError> {
    let mesh = load_mesh(path)?;
    if let Some(v) = validate_mesh(&mesh).first() {
        return Err(AppError::Usage(format!(
            "{}: invalid mesh: {v}",
            path.display()
        )));
    }
    Ok(mesh)
}

fn solve(args: &SolveArgs, io: &mut Io, lin: &dyn LinearSolver) -> Result<(), AppError> {
    let mut entries = args.mesh.entries();
    entries.extend(args.model.entries());
    entries.extend([
        ("level", args.level.clone()),
        ("input", args.input.clone()),
        ("samples", args.samples.clone()),
    ]);
    let config = resolve(&args.common, entries)?;
    io.echo(&config);
    let study = config.single_level()?;
    let (mesh, map, solution, row) = match &config.input {
        None => {
            let r = solve_level(&study, config.level, lin)?;
            (r.mesh, r.map, r.solution, r.row)
        }
        Some(path) => {
            let mesh = loaded_mesh(path)?;
            let exact = ManufacturedSolution::new(study.solution, study.material, study.domain)?;
            let zero = |_| [0.0, 0.0];
            let f = |p| polyvem_core::study::ExactSolution::f(&exact, p);
            let (map, solution) =
                solver::solve_problem(&mesh, &study.discretization(), &f, &zero, lin)?;
            let (err_l2, err_h1) =
                error_norms(&mesh, &map, &study.material, &exact, &solution.dofs)?;
            let row = StudyRow {
                level: config.level,
                h: mesh_metrics(&mesh).h,
                ndof: map.num_dofs(),
                err_l2,
                err_h1,
                rate_l2: None,
                rate_h1: None,
            };
            (mesh, map, solution, row)
        }
    };
    io.progress(format_args!("{}", row_line(&row, solution.report.method)));
    io.emit(config.out.as_ref(), &solution_csv(&map, &solution.dofs))?;
    if let Some(path) = &config.samples {
        let samples = projected_samples(&mesh, &map, &study.material, &solution.dofs)?;
        write_text(path, &samples_csv(&samples))?;
    }
    Ok(())
}

fn mesh(args: &MeshArgs, io: &mut Io) -> Result<(), AppError> {
    let mut entries = args.mesh.entries();
    entries.push(("level", args.level.clone()));
    let config = resolve(&args.common, entries)?;
    if config.out.is_some() {
        io.echo(&config);
    }
    let fraction = config.small_edges.then_some(config.edge_fraction);
    let mesh = study_mesh(
        config.domain,
        config.mesh,
        config.level,
        config.seed,
        fraction,
    )?;
    let metrics = mesh_metrics(&mesh);
    io.progress(format_args!(
        "{} vertices, {} cells, h = {:.4e}, min edge = {:.4e}",
        mesh.num_vertices(),
        mesh.num_cells(),
        metrics.h,
        metrics.min_edge()
    ));
    io.emit(config.out.as_ref(), &mesh_to_string(&mesh))
}

fn check(args: &CheckArgs, io: &mut Io, lin: &dyn LinearSolver) -> Result<bool, AppError> {
    let config = resolve(&args.common, vec![("cells", args.cells.clone())])?;
    io.echo(&config);
    let reports = run_checks(
        &CheckConfig {
            cells: config.cells,
            seed: config.seed,
        },
        lin,
    );
    let mut text = String::new();
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        text.push_str(&format!(
            "{status} {:<14} cases = {:>5}  worst = {:.3e}  tol = {:.0e}",
            r.name, r.cases, r.worst, r.tol
        ));
        if let Some(f) = &r.failure {
            text.push_str(&format!("  ({f})"));
        }
        text.push('\n');
    }
    io.emit(config.out.as_ref(), &text)?;
    Ok(reports.iter().all(|r| r.passed()))
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 for
/// invalid input, 2 for numerical failures.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let quiet = match &cli.command {
        Command::Study(a) => a.common.quiet,
        Command::Solve(a) => a.common.quiet,
        Command::Mesh(a) => a.common.quiet,
        Command::Check(a) => a.common.quiet,
    };
    let lin = DirectSolver::default();
    let mut io = Io { out, err, quiet };
    let result = match &cli.command {
        Command::Study(a) => study(a, &mut io, &lin).map(|_| true),
        Command::Solve(a) => solve(a, &mut io, &lin).map(|_| true),
        Command::Mesh(a) => mesh(a, &mut io).map(|_| true),
        Command::Check(a) => check(a, &mut io, &lin),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(io.err, "error: invariant checks failed");
            2
        }
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            e.exit_code()
        }
    }
}
