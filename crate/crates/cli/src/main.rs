use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twoquanta::{ExecMode, Scheme, Statistics};
use twoquanta_cli::{CliError, RunConfig};

#[derive(Parser)]
#[command(
    name = "twoquanta",
    version,
    about = "Transition amplitudes for one and two free quanta"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transition probability in both formulations (TOML)
    Probability(Common),
    /// Probability over a grid of detector positions (CSV)
    Scan(Common),
    /// Amplitude density on a space-time lattice (CSV)
    Field(Common),
    /// Rotation-symmetry check of the amplitude density (TOML)
    Audit(Common),
    /// Reference transitions against their published probabilities (CSV)
    PaperSuite(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    statistics: Option<Statistics>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    sources: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    detectors: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    t_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_f: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
    /// Evaluation time of the time-symmetric amplitude
    #[arg(long, allow_negative_numbers = true)]
    time: Option<f64>,
    #[arg(long)]
    nodes_per_axis: Option<usize>,
    #[arg(long)]
    truncation_sigmas: Option<f64>,
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    /// Normalize scan or field output
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    normalize: Option<bool>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xc_range: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xd_range: Option<Vec<f64>>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    n_space: Option<usize>,
    #[arg(long)]
    n_time: Option<usize>,
    /// Run without the thread pool
    #[arg(long)]
    sequential: bool,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    match s {
        "gauss-legendre" | "gauss-legendre-composite" => Ok(Scheme::GaussLegendreComposite),
        "simpson" => Ok(Scheme::Simpson),
        _ => Err(format!("unknown scheme `{s}` (gauss-legendre, simpson)")),
    }
}

fn pair(name: &str, v: Vec<f64>, errors: &mut Vec<String>) -> Option<[f64; 2]> {
    match v[..] {
        [lo, hi] => Some([lo, hi]),
        _ => {
            errors.push(format!(
                "--{name}: expected `lo,hi`, got {} value(s)",
                v.len()
            ));
            None
        }
    }
}

impl Common {
    fn resolve(self) -> Result<(RunConfig, Option<PathBuf>), CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let mut errors = Vec::new();
        let t = &mut c.transition;
        if let Some(v) = self.statistics {
            t.statistics = v;
        }
        if let Some(v) = self.sources {
            t.sources = v;
        }
        if let Some(v) = self.detectors {
            t.detectors = v;
        }
        if let Some(v) = self.t_i {
            t.t_i = v;
        }
        if let Some(v) = self.t_f {
            t.t_f = v;
        }
        if let Some(v) = self.width {
            t.width = v;
        }
        if self.time.is_some() {
            c.time = self.time;
        }
        if let Some(v) = self.nodes_per_axis {
            c.quadrature.nodes_per_axis = v;
        }
        if let Some(v) = self.truncation_sigmas {
            c.quadrature.truncation_sigmas = v;
        }
        if let Some(v) = self.scheme {
            c.quadrature.scheme = v;
        }
        if self.sequential {
            c.quadrature.exec = ExecMode::Sequential;
        }
        if let Some(v) = self.normalize {
            c.scan.normalize = v;
            c.field.normalize = v;
        }
        if let Some(r) = self.xc_range.and_then(|v| pair("xc-range", v, &mut errors)) {
            c.scan.xc_range = r;
        }
        if let Some(r) = self.xd_range.and_then(|v| pair("xd-range", v, &mut errors)) {
            c.scan.xd_range = r;
        }
        if let Some(v) = self.nx {
            c.scan.nx = v;
        }
        if let Some(v) = self.ny {
            c.scan.ny = v;
        }
        if let Some(v) = self.n_space {
            c.field.n_space = v;
        }
        if let Some(v) = self.n_time {
            c.field.n_time = v;
        }
        let c = match c.materialize() {
            Ok(c) if errors.is_empty() => c,
            Ok(_) => return Err(CliError::Invalid(errors)),
            Err(CliError::Invalid(more)) => {
                errors.extend(more);
                return Err(CliError::Invalid(errors));
            }
            Err(e) => return Err(e),
        };
        Ok((c, self.output))
    }
}

type Runner = fn(&RunConfig) -> Result<String, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, common): (Runner, Common) = match cli.command {
        Command::Probability(c) => (twoquanta_cli::probability_report, c),
        Command::Scan(c) => (twoquanta_cli::scan_csv, c),
        Command::Field(c) => (twoquanta_cli::field_csv, c),
        Command::Audit(c) => (twoquanta_cli::audit_report, c),
        Command::PaperSuite(c) => (|c: &RunConfig| twoquanta_cli::paper_suite(&c.quadrature), c),
    };
    let (config, output) = common.resolve()?;
    let text = command(&config)?;
    match output {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
