use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vortex_atlas::atlas::{self, exit_code, SweepSpec};
use vortex_atlas::equilibria::Family;
use vortex_atlas::Error;

#[derive(Parser)]
#[command(
    name = "vortex-atlas",
    version,
    about = "Relative equilibria of ±1 point vortices on the sphere"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configuration file and print the trajectory.
    Simulate {
        /// Configuration JSON: {"vortices": [{"pos": [x,y,z], "strength": s}], "poles": 0}
        config: PathBuf,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Energy-momentum stability report of a family member.
    Classify {
        /// Descriptor JSON, inline or as a file path.
        descriptor: String,
        #[command(flatten)]
        common: Common,
    },
    /// Verdicts over a θ₀ grid.
    Sweep {
        /// Sweep JSON file; overrides the grid options below.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "DNh")]
        family: Vec<String>,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 0.005)]
        theta_start: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2 - 0.005)]
        theta_stop: f64,
        #[arg(long, default_value_t = 0.005)]
        grid_step: f64,
        #[arg(long, default_value_t = 0)]
        kp: usize,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda_n: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Energy-momentum diagram for 2 or 3 vortex pairs.
    Diagram {
        #[arg(long, default_value_t = 2)]
        n_pairs: usize,
        #[arg(long, default_value_t = 0.005)]
        grid_step: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Critical latitudes of the ring families next to the reference values.
    Thresholds {
        #[arg(long, default_value_t = 0.005)]
        grid_step: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_family(s: &str) -> Result<Family, Error> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| Error::Parse(format!("unknown family {s:?}")))
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn check_format(f: Option<Format>, allowed: &[Format], default: Format) -> Result<Format, Error> {
    let f = f.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Error::Parse("format not supported by this command".into()))
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("diagram");
    path.with_file_name(format!("{stem}{suffix}"))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate {
            config,
            t_end,
            tol,
            common,
        } => {
            check_format(common.format, &[Format::Csv], Format::Csv)?;
            let out = atlas::cmd_simulate(&read(&config)?, t_end, tol)?;
            emit(&common.out, &out.csv)?;
            match out.failure {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Classify { descriptor, common } => {
            check_format(common.format, &[Format::Json], Format::Json)?;
            let text = if descriptor.trim_start().starts_with('{') {
                descriptor
            } else {
                read(Path::new(&descriptor))?
            };
            emit(&common.out, &(atlas::cmd_classify(&text)? + "\n"))
        }
        Command::Sweep {
            spec,
            family,
            n_min,
            n_max,
            theta_start,
            theta_stop,
            grid_step,
            kp,
            lambda_n,
            common,
        } => {
            let format = check_format(common.format, &[Format::Csv, Format::Json], Format::Csv)?;
            let spec = match spec {
                Some(p) => serde_json::from_str::<SweepSpec>(&read(&p)?)?,
                None => SweepSpec {
                    families: family
                        .iter()
                        .map(|f| parse_family(f))
                        .collect::<Result<_, _>>()?,
                    n_min,
                    n_max: n_max.unwrap_or(n_min),
                    theta_start,
                    theta_stop,
                    theta_step: grid_step,
                    kp,
                    lambda_n,
                },
            };
            emit(
                &common.out,
                &atlas::cmd_sweep(&spec, format == Format::Json)?,
            )
        }
        Command::Diagram {
            n_pairs,
            grid_step,
            common,
        } => {
            let format = check_format(
                common.format,
                &[Format::Svg, Format::Csv, Format::Json],
                Format::Svg,
            )?;
            let d = atlas::cmd_diagram(n_pairs, grid_step)?;
            match (format, &common.out) {
                (Format::Svg, Some(path)) => {
                    std::fs::write(path, d.to_svg())?;
                    std::fs::write(sibling(path, ".csv"), d.to_csv())?;
                    std::fs::write(sibling(path, "_bifurcations.csv"), d.bifurcations_csv())?;
                    Ok(())
                }
                (Format::Svg, None) => emit(&None, &d.to_svg()),
                (Format::Csv, out) => emit(out, &d.to_csv()),
                (Format::Json, out) => emit(out, &(d.to_json() + "\n")),
            }
        }
        Command::Thresholds { grid_step, common } => {
            let format = check_format(common.format, &[Format::Csv, Format::Json], Format::Csv)?;
            if format == Format::Json {
                let rows = atlas::threshold_table(grid_step)?;
                return emit(&common.out, &(serde_json::to_string_pretty(&rows)? + "\n"));
            }
            let (csv, notes) = atlas::cmd_thresholds(grid_step)?;
            for n in notes {
                eprintln!("note: {n}");
            }
            emit(&common.out, &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
