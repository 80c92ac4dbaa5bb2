use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qcorr::experiment::output::{csv_string, regenerate_figure, write_csv};
use qcorr::experiment::{run_point, run_sweep, workers_from_env, FigureId, SweepSpec};
use qcorr::{Bipartition, QcorrError, UinConvention};

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Consonance and uncertainty-induced nonlocality of a Gisin state under Hawking decoherence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point and print a CSV row.
    Point {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, allow_negative_numbers = true)]
        psi: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        /// Hawking temperature T_H (0 = no evaporation).
        #[arg(long, allow_negative_numbers = true)]
        temp: f64,
        /// initial | accessible | inaccessible | spacetime
        #[arg(long, value_parser = parse_region)]
        region: Bipartition,
        /// strict | radial-limit
        #[arg(long, value_parser = parse_convention, default_value = "strict")]
        convention: UinConvention,
    },
    /// Run a sweep described by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Regenerate one of the figure presets.
    Figure {
        /// fig1 | fig3 | fig4 | fig5 | fig6 | fig7 | fig8
        #[arg(value_parser = parse_figure)]
        id: FigureId,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also render one SVG per measure.
        #[arg(long)]
        svg: bool,
    },
}

fn parse_region(s: &str) -> Result<Bipartition, String> {
    s.parse().map_err(|e: QcorrError| e.to_string())
}

fn parse_convention(s: &str) -> Result<UinConvention, String> {
    s.parse().map_err(|e: QcorrError| e.to_string())
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    s.parse().map_err(|e: QcorrError| e.to_string())
}

fn run(cli: Cli) -> qcorr::Result<()> {
    match cli.command {
        Command::Point {
            lambda,
            psi,
            omega,
            temp,
            region,
            convention,
        } => {
            let record = run_point(lambda, psi, omega, temp, region, convention)?;
            print!("{}", csv_string(&[record])?);
        }
        Command::Sweep { config, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| QcorrError::Usage(format!("{}: {e}", config.display())))?;
            let spec = SweepSpec::from_json(&text)?;
            let records = run_sweep(&spec, workers_from_env()?)?;
            std::fs::create_dir_all(&out).map_err(|e| QcorrError::Io {
                path: out.clone(),
                source: e,
            })?;
            let stem = config
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "sweep".into());
            let path = out.join(format!("{stem}.csv"));
            write_csv(&records, &path)?;
            eprintln!("wrote {} rows to {}", records.len(), path.display());
        }
        Command::Figure { id, out, svg } => {
            let result = regenerate_figure(id, &out, svg, workers_from_env()?)?;
            for f in &result.files {
                eprintln!("wrote {}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qcorr: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
