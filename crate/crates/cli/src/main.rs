use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qgrating::commands::{self, CliError, InferSettings};
use qgrating::config::RunConfig;
use qgrating::presets;
use qgrating_core::oracle::SweepConfig;
use qgrating_core::InferenceMethod;

/// Cavity transmission spectra of lattice atoms.
#[derive(Parser)]
#[command(name = "qgrating", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute transmission spectra and write them as CSV (and SVG).
    Spectrum(Box<SpectrumArgs>),
    /// Compare every reduced distribution against brute-force enumeration.
    OracleCheck(OracleArgs),
    /// Recover the number distribution and the phase from a spectrum CSV.
    Infer(InferArgs),
    /// List presets, or print the configuration of one.
    Presets { name: Option<String> },
}

#[derive(Args)]
struct SpectrumArgs {
    /// Start from a named preset (see `qgrating presets`).
    #[arg(long)]
    preset: Option<String>,
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// mi, sf or custom(path)
    #[arg(long)]
    state: Option<String>,
    /// single, two-max, two-min or general
    #[arg(long)]
    geometry: Option<String>,
    /// General geometry: probed mode as kind,kx_d,phase
    #[arg(long)]
    mode0: Option<String>,
    /// General geometry: second mode as kind,kx_d,phase
    #[arg(long)]
    mode1: Option<String>,
    /// Number of atoms.
    #[arg(short = 'N', long)]
    atoms: Option<String>,
    /// Number of lattice sites.
    #[arg(short = 'M', long)]
    sites: Option<String>,
    /// Number of illuminated sites.
    #[arg(short = 'K', long)]
    illuminated: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta1: Option<String>,
    /// Pump strength; defaults to kappa.
    #[arg(long, allow_hyphen_values = true)]
    eta0: Option<String>,
    /// min,max,points in units of delta0
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Skip the extra points placed around narrow lines.
    #[arg(long)]
    no_refine: bool,
    /// comb, envelope or badcavity
    #[arg(long)]
    mode: Option<String>,
    /// Seed for --measure.
    #[arg(long)]
    seed: Option<String>,
    /// Sample a measurement outcome and report the projected state.
    #[arg(long)]
    measure: bool,
    /// Enumeration cap for the general geometry.
    #[arg(long)]
    cap: Option<String>,
    /// Output CSV; several curves go to <stem>_<label>.csv.
    #[arg(short, long)]
    output: Option<String>,
    /// Also write an SVG plot.
    #[arg(long)]
    plot: Option<PathBuf>,
}

impl SpectrumArgs {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let mut v: Vec<(&'static str, String)> = [
            ("state", &self.state),
            ("geometry", &self.geometry),
            ("mode0", &self.mode0),
            ("mode1", &self.mode1),
            ("N", &self.atoms),
            ("M", &self.sites),
            ("K", &self.illuminated),
            ("kappa", &self.kappa),
            ("delta0", &self.delta0),
            ("delta1", &self.delta1),
            ("eta0", &self.eta0),
            ("grid", &self.grid),
            ("mode", &self.mode),
            ("seed", &self.seed),
            ("cap", &self.cap),
            ("output", &self.output),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect();
        if self.no_refine {
            v.push(("refine", "false".into()));
        }
        if self.measure {
            v.push(("measure", "true".into()));
        }
        v
    }
}

#[derive(Args)]
struct OracleArgs {
    /// Largest atom number N.
    #[arg(long, default_value_t = 6)]
    max_atoms: u32,
    /// Largest site count M.
    #[arg(long, default_value_t = 6)]
    max_sites: usize,
    /// Relative tolerance for every check.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Largest number of configurations enumerated for one (N, M).
    #[arg(long, default_value_t = qgrating_core::oracle::DEFAULT_CAP)]
    cap: u64,
    /// Print every individual check.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct InferArgs {
    /// Spectrum CSV as written by `qgrating spectrum`.
    input: PathBuf,
    /// Overrides the header: single, two-max or two-min.
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    delta0: Option<f64>,
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    eta0: Option<f64>,
    /// Atoms on the illuminated sites (diffraction minimum).
    #[arg(long)]
    region_atoms: Option<u32>,
    /// auto, linear or envelope
    #[arg(long, default_value = "auto")]
    method: String,
    /// Variance-over-mean threshold between the phases.
    #[arg(long)]
    threshold: Option<f64>,
    /// Condition-number limit for the linear inversion.
    #[arg(long)]
    condition_limit: Option<f64>,
    /// Where to write the recovered distribution.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn run_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let (mut curves, stem, title) = match &args.preset {
        Some(name) => {
            let p = presets::lookup(name).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown preset {name:?}; available: {}",
                    presets::NAMES.join(", ")
                ))
            })?;
            (p.curves, Some(p.name.to_string()), p.name.to_string())
        }
        None => (
            vec![("spectrum".to_string(), RunConfig::default())],
            None,
            "spectrum".to_string(),
        ),
    };
    let file = match &args.config {
        Some(path) => Some(
            std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?,
        ),
        None => None,
    };
    let flags = args.flags();
    for (_, cfg) in &mut curves {
        if let Some(text) = &file {
            cfg.apply_file(text).map_err(|e| {
                CliError::Usage(format!(
                    "{}: {e}",
                    args.config.as_ref().expect("config path").display()
                ))
            })?;
        }
        for (k, v) in &flags {
            cfg.apply_flag(k, v)?;
        }
    }
    let mut stdout = std::io::stdout().lock();
    let written = commands::run_spectrum(
        &curves,
        stem.as_deref(),
        args.plot.as_deref(),
        &title,
        &mut stdout,
    )?;
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn run_infer(args: InferArgs) -> Result<(), CliError> {
    let method = match args.method.as_str() {
        "auto" => None,
        "linear" => Some(InferenceMethod::LinearInversion),
        "envelope" | "envelope-fit" => Some(InferenceMethod::EnvelopeFit),
        other => {
            return Err(CliError::Usage(format!(
                "--method must be auto, linear or envelope, got {other:?}"
            )))
        }
    };
    let settings = InferSettings {
        geometry: args.geometry,
        kappa: args.kappa,
        delta0: args.delta0,
        delta1: args.delta1,
        eta0: args.eta0,
        region_atoms: args.region_atoms,
        method,
        threshold: args.threshold,
        condition_limit: args.condition_limit,
        distribution_output: args.output,
    };
    commands::run_infer(&args.input, &settings, &mut std::io::stdout().lock())?;
    Ok(())
}

fn run_presets(name: Option<String>) -> Result<(), CliError> {
    match name {
        None => {
            for p in presets::all() {
                println!("{:<8} {}", p.name, p.description);
            }
        }
        Some(name) => {
            let p = presets::lookup(&name)
                .ok_or_else(|| CliError::Usage(format!("unknown preset {name:?}")))?;
            println!("# {}: {}", p.name, p.description);
            for (label, cfg) in &p.curves {
                println!("\n# curve {label}");
                print!("{}", commands::config_text(cfg));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => run_spectrum(*a),
        Command::OracleCheck(a) => {
            let mut cfg = SweepConfig::new(a.max_atoms, a.max_sites);
            cfg.tolerance = a.tolerance;
            cfg.cap = a.cap;
            commands::run_oracle_check(&cfg, a.verbose, &mut std::io::stdout().lock()).map(|_| ())
        }
        Command::Infer(a) => run_infer(a),
        Command::Presets { name } => run_presets(name),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
