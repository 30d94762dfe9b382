use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use tropical_core::{default_max_passes, solve_gp, RPoint, TropicalError, TropicalSeries};
use tropical_experiments::{discussion_diagnostics, sweep, write_csv, SweepConfig};
use tropical_sandpile::{compare_with_exact, SandpileError, SandpileGrid};

use crate::render::{render_svg, FillMode, RenderSpec};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, files or values supplied by the user (exit 1).
    Input(String),
    /// Solver or output failure (exit 2).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<TropicalError> for CliError {
    fn from(e: TropicalError) -> Self {
        if e.is_input_error() { CliError::Input(e.to_string()) } else { CliError::Internal(e.to_string()) }
    }
}

impl From<SandpileError> for CliError {
    fn from(e: SandpileError) -> Self {
        if e.is_input_error() { CliError::Input(e.to_string()) } else { CliError::Internal(e.to_string()) }
    }
}

impl From<tropical_experiments::ExperimentError> for CliError {
    fn from(e: tropical_experiments::ExperimentError) -> Self {
        if e.is_input_error() { CliError::Input(e.to_string()) } else { CliError::Internal(e.to_string()) }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "tropical", version, about = "Exact tropical series through lattice points")]
pub struct Cli {
    /// Print solver traces and progress to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the minimal series through the points and print it as JSON.
    Solve {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        max_passes: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write an SVG drawing here.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the main output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relax the sandpile 3 + Σδ_p and write its picture and deviation report.
    Sandpile {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        max_passes: Option<usize>,
    },
    /// Print the deviation report comparing the sandpile with the exact curve.
    Compare {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long)]
        max_passes: Option<usize>,
    },
    /// Run a seeded sweep of random trials.
    Experiment {
        /// TOML file with keys s, n, trials, seed and optionally jobs,
        /// max_passes, timing, extended.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        max_passes: Option<usize>,
        /// Write trials.csv, summary.json (and diagnostics.json) here;
        /// otherwise print to stdout in the chosen format.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Draw a series JSON file as SVG.
    Render {
        /// Series JSON file, or `-` for stdin.
        series: PathBuf,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(64..))]
        canvas: u32,
        #[arg(long, default_value_t = 2.0)]
        stroke: f64,
        #[arg(long, value_enum, default_value_t = FillMode::None)]
        fill: FillMode,
        #[arg(long, default_value_t = 4.0)]
        marker_radius: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
    Pgm,
}

#[derive(Args, Debug, Default)]
struct PointArgs {
    /// Exact points `x,y` (e.g. `1/3,1/2`); repeat the flag or separate with `;`.
    #[arg(long = "points", allow_hyphen_values = true)]
    points: Vec<String>,
    /// File with one `x,y` point per line; `#` starts a comment.
    #[arg(long)]
    points_file: Option<PathBuf>,
}

impl PointArgs {
    fn collect(&self) -> CliResult<Vec<RPoint>> {
        let mut text: Vec<String> = self.points.clone();
        if let Some(path) = &self.points_file {
            let body = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            text.extend(body.lines().map(|l| l.split('#').next().unwrap_or("").to_string()));
        }
        parse_points(&text.join(";"))
    }
}

/// Parses `x,y` pairs separated by `;` or newlines.
pub fn parse_points(text: &str) -> CliResult<Vec<RPoint>> {
    text.split([';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<RPoint>().map_err(|e| CliError::Input(format!("point `{s}`: {e}"))))
        .collect()
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Internal(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Internal(format!("stdout: {e}"))),
    }
}

fn solve(points: &[RPoint], max_passes: Option<usize>, verbose: bool) -> CliResult<TropicalSeries> {
    let (f, trace) = solve_gp(points, max_passes.unwrap_or_else(|| default_max_passes(points.len())))?;
    if verbose {
        eprintln!("{}", serde_json::to_string(&trace).expect("trace serializes"));
    }
    Ok(f)
}

fn lattice_points(points: &PointArgs, s: usize) -> CliResult<(Vec<RPoint>, SandpileGrid)> {
    let pts = points.collect()?;
    let grid = SandpileGrid::tropical_state(s, &pts)?;
    Ok((pts, grid.relaxed()))
}

fn experiment_config(
    path: Option<&Path>,
    s: Vec<u32>,
    n: Vec<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    jobs: Option<usize>,
    max_passes: Option<usize>,
) -> CliResult<SweepConfig> {
    let mut cfg = match path {
        Some(p) => {
            let body = fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            toml::from_str::<SweepConfig>(&body)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?
        }
        None => {
            if s.is_empty() || n.is_empty() {
                return Err(CliError::Input("experiment needs --config or both --s and --n".into()));
            }
            SweepConfig {
                s: s.clone(),
                n: n.clone(),
                trials: trials.unwrap_or(10),
                seed: seed.unwrap_or(0),
                jobs: 1,
                max_passes: None,
                timing: false,
                extended: false,
            }
        }
    };
    if !s.is_empty() {
        cfg.s = s;
    }
    if !n.is_empty() {
        cfg.n = n;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(v) = seed {
        cfg.seed = v;
    }
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    if max_passes.is_some() {
        cfg.max_passes = max_passes;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| CliError::Internal(format!("{}: {e}", dir.display())))
}

pub fn execute(cli: Cli) -> CliResult {
    let verbose = cli.verbose;
    match cli.command {
        Command::Solve { points, max_passes, format, svg, out } => {
            let pts = points.collect()?;
            let f = solve(&pts, max_passes, verbose)?;
            let drawing = || render_svg(&f, &pts, &RenderSpec::default());
            if let Some(path) = &svg {
                write_output(Some(path), drawing()?.as_bytes())?;
            }
            let body = match format {
                Format::Json => f.to_json_pretty() + "\n",
                Format::Svg => drawing()?,
                other => return Err(CliError::Input(format!("solve cannot emit {other:?}"))),
            };
            write_output(out.as_deref(), body.as_bytes())
        }
        Command::Sandpile { points, s, radius, out_dir, max_passes } => {
            let (pts, grid) = lattice_points(&points, s)?;
            let f = solve(&pts, max_passes, verbose)?;
            let report = compare_with_exact(&f, &grid, radius)?;
            create_dir(&out_dir)?;
            write_output(Some(&out_dir.join("sandpile.pgm")), &grid.to_pgm()?)?;
            write_output(Some(&out_dir.join("topplings.u32le")), &grid.topplings_le_u32()?)?;
            write_output(Some(&out_dir.join("deviation.json")), (report.to_json() + "\n").as_bytes())?;
            if verbose {
                eprintln!("wrote sandpile.pgm, topplings.u32le, deviation.json to {}", out_dir.display());
            }
            Ok(())
        }
        Command::Compare { points, s, radius, max_passes } => {
            let (pts, grid) = lattice_points(&points, s)?;
            let f = solve(&pts, max_passes, verbose)?;
            let report = compare_with_exact(&f, &grid, radius)?;
            write_output(None, (report.to_json() + "\n").as_bytes())
        }
        Command::Experiment { config, s, n, trials, seed, jobs, max_passes, out_dir, format } => {
            let cfg = experiment_config(config.as_deref(), s, n, trials, seed, jobs, max_passes)?;
            let result = sweep(&cfg)?;
            if verbose {
                eprintln!("{} trials, {} failures", result.records.len(), result.failures.len());
            }
            let mut csv = Vec::new();
            write_csv(&result.records, &mut csv)?;
            let summary = serde_json::to_string_pretty(&result.report(&cfg)).expect("report serializes") + "\n";
            match out_dir {
                Some(dir) => {
                    create_dir(&dir)?;
                    write_output(Some(&dir.join("trials.csv")), &csv)?;
                    write_output(Some(&dir.join("summary.json")), summary.as_bytes())?;
                    if cfg.extended {
                        let diag = serde_json::to_string_pretty(&discussion_diagnostics(&result.records))
                            .expect("diagnostics serialize")
                            + "\n";
                        write_output(Some(&dir.join("diagnostics.json")), diag.as_bytes())?;
                    }
                }
                None => match format {
                    Format::Csv => write_output(None, &csv)?,
                    Format::Json => write_output(None, summary.as_bytes())?,
                    other => return Err(CliError::Input(format!("experiment cannot emit {other:?}"))),
                },
            }
            if result.failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Internal(format!("{} trials failed", result.failures.len())))
            }
        }
        Command::Render { series, points, canvas, stroke, fill, marker_radius, out } => {
            let body = if series.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("stdin: {e}")))?
            } else {
                fs::read_to_string(&series).map_err(|e| CliError::Input(format!("{}: {e}", series.display())))?
            };
            let f = TropicalSeries::from_json(&body)?;
            let pts = points.collect()?;
            let spec = RenderSpec { canvas, stroke, fill, marker_radius };
            write_output(out.as_deref(), render_svg(&f, &pts, &spec)?.as_bytes())
        }
    }
}

/// Parses `argv` and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
