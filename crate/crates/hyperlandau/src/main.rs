use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperlandau::cli::{
    cmd_figure, cmd_spectrum, cmd_spinor, cmd_verify, cmd_wavefunction, CliError, FigureKind,
    ModelKind, OutputFormat, OutputTable, RunConfig,
};
use hyperlandau::dirac::Frame;

/// Bound states of Dirac and Dirac-Weyl particles on a hyperboloid in a
/// perpendicular magnetic field.
#[derive(Parser)]
#[command(name = "hyperlandau", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Level table (n, epsilon, E_plus, E_minus)
    Spectrum(CommonArgs),
    /// Normalized radial functions sampled on the grid
    Wavefunction(CommonArgs),
    /// Spinor components sampled along u at phi = 0
    Spinor(CommonArgs),
    /// Run the cross-validation suite
    Verify(CommonArgs),
    /// Plot-ready data files
    Figure {
        /// What to emit
        #[arg(value_enum)]
        which: WhichFigure,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichFigure {
    Potentials,
    Levels,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Weyl,
    Dirac,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    Rotation,
    Hyperbolic,
}

#[derive(Args)]
struct CommonArgs {
    /// Dimensionless field intensity A0
    #[arg(long, default_value_t = 5.0)]
    a0: f64,
    /// Twice the angular momentum eigenvalue (lambda = lambda2/2)
    #[arg(long, default_value_t = 14)]
    lambda2: i64,
    /// Level index
    #[arg(long)]
    n: Option<u32>,
    /// Particle mass (0 selects the massless limit)
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Hyperboloid pseudo-radius R
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, value_enum, default_value_t = ModelArg::Weyl)]
    model: ModelArg,
    /// Grid lower end (default 1e-3)
    #[arg(long)]
    umin: Option<f64>,
    /// Grid upper end (default adapts to the slowest tail)
    #[arg(long)]
    umax: Option<f64>,
    /// Grid point count (default 8000)
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path (stdout when omitted; figure derives one file per table)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Frame factor convention for spinor assembly
    #[arg(long, value_enum, default_value_t = FrameArg::Rotation)]
    frame: FrameArg,
    /// Perturb epsilon_1 inside the spectrum check (verify self-test)
    #[arg(long, hide = true)]
    inject_fault: Option<f64>,
}

impl CommonArgs {
    fn into_config(self) -> RunConfig {
        RunConfig {
            a0: self.a0,
            two_lambda: self.lambda2,
            n: self.n,
            mass: self.mass,
            radius: self.radius,
            model: match self.model {
                ModelArg::Weyl => ModelKind::Weyl,
                ModelArg::Dirac => ModelKind::Dirac,
            },
            u_min: self.umin,
            u_max: self.umax,
            points: self.points,
            format: match self.format {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Csv => OutputFormat::Csv,
            },
            out: self.out,
            frame: match self.frame {
                FrameArg::Rotation => Frame::RotationForm,
                FrameArg::Hyperbolic => Frame::HyperbolicForm,
            },
            inject_fault: self.inject_fault,
        }
    }
}

fn emit_table(table: &OutputTable, config: &RunConfig) -> Result<(), CliError> {
    let rendered = table.render(config.format);
    match &config.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => {
            std::io::stdout().write_all(rendered.as_bytes())?;
        }
    }
    Ok(())
}

/// figure emits one file per table: `<stem>_<label>.<ext>` next to --out,
/// or `figure_<label>.<ext>` in the working directory.
fn figure_path(out: Option<&Path>, label: &str, format: OutputFormat) -> PathBuf {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    match out {
        Some(p) => {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("figure");
            p.with_file_name(format!("{stem}_{label}.{ext}"))
        }
        None => PathBuf::from(format!("figure_{label}.{ext}")),
    }
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Spectrum(args) => {
            let config = args.into_config();
            let table = cmd_spectrum(&config)?;
            emit_table(&table, &config)?;
            Ok(0)
        }
        Command::Wavefunction(args) => {
            let config = args.into_config();
            let table = cmd_wavefunction(&config)?;
            emit_table(&table, &config)?;
            Ok(0)
        }
        Command::Spinor(args) => {
            let config = args.into_config();
            let table = cmd_spinor(&config)?;
            emit_table(&table, &config)?;
            Ok(0)
        }
        Command::Figure { which, common } => {
            let config = common.into_config();
            let which = match which {
                WhichFigure::Potentials => FigureKind::Potentials,
                WhichFigure::Levels => FigureKind::Levels,
            };
            for (label, table) in cmd_figure(&config, which)? {
                let path = figure_path(config.out.as_deref(), &label, config.format);
                std::fs::write(&path, table.render(config.format))?;
                println!("{}", path.display());
            }
            Ok(0)
        }
        Command::Verify(args) => {
            let config = args.into_config();
            let report = cmd_verify(&config)?;
            for check in &report.checks {
                println!(
                    "{}: {} (residual {:.3e}, tolerance {:.1e}, {} ms)",
                    check.name,
                    if check.pass { "pass" } else { "FAIL" },
                    check.residual,
                    check.tolerance,
                    check.millis,
                );
            }
            let rendered = report.to_json();
            if let Some(path) = &config.out {
                std::fs::write(path, rendered)?;
            } else {
                println!("{rendered}");
            }
            Ok(if report.pass { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
