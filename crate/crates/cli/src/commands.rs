//! Subcommand implementations, independent of argument parsing.

use std::fs;
use std::path::{Path, PathBuf};

use qgrating_core::geometry::CouplingProfile;
use qgrating_core::inference::{
    classify_phase, extract_distribution_with, InferenceOptions, DEFAULT_PHASE_THRESHOLD,
};
use qgrating_core::oracle::{exact_general_expectation, reduction_sweep, CheckRecord, SweepConfig};
use qgrating_core::spectra::{
    badcavity_two_mode_max, badcavity_two_mode_min, comb_centers, comb_terms, envelope_single_mode,
    envelope_two_mode_max, envelope_two_mode_min, refine_grid, spectrum_expectation,
    state_spectrum, state_terms, steady_state_photons, uniform_grid, voigt_single_mode,
    EnvelopeShape,
};
use qgrating_core::states::{
    mi_odd_site_distribution, project_measurement, sample_outcome_seeded,
    sf_imbalance_distribution, uniform_filling,
};
use qgrating_core::{
    AtomicState, CavityParams, InferenceMethod, LatticeRegion, Mapping, NumberDistribution, Phase,
    Spectrum, SpectrumMeta, Statistic,
};

use crate::config::{ConfigError, GeometrySpec, RunConfig, SpectrumMode, StateSpec};
use crate::formats::{self, FormatError};
use crate::plot;

/// Uniform points in a grid chosen automatically.
pub const AUTO_GRID_POINTS: usize = 2001;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] qgrating_core::Error),
    #[error("numerical failure: {0}")]
    Numerical(qgrating_core::Error),
    #[error("{0}")]
    InvariantFailure(String),
}

impl CliError {
    /// 1 for bad input (including an exceeded enumeration cap), 2 for a
    /// numerical failure, 3 when an oracle check fails.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Config(_)
            | CliError::Format { .. }
            | CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                qgrating_core::Error::QuadratureDiverged { .. }
                | qgrating_core::Error::NoResonances => 2,
                _ => 1,
            },
            CliError::Numerical(_) => 2,
            CliError::InvariantFailure(_) => 3,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn params_of(cfg: &RunConfig) -> Result<CavityParams, CliError> {
    Ok(CavityParams::new(
        cfg.kappa,
        cfg.delta0,
        cfg.delta1_value(),
        cfg.eta0_value(),
    )?)
}

fn mapping_of(geometry: &GeometrySpec) -> Option<Mapping> {
    match geometry {
        GeometrySpec::Single => Some(Mapping::SingleMode),
        GeometrySpec::TwoMax => Some(Mapping::TwoModeMax),
        GeometrySpec::TwoMin => Some(Mapping::TwoModeMin),
        GeometrySpec::General { .. } => None,
    }
}

/// For a custom state at a diffraction minimum, `N` is the atom number on the
/// illuminated sites and the file gives the odd-site count.
fn build_state(cfg: &RunConfig) -> Result<AtomicState, CliError> {
    match &cfg.state {
        StateSpec::Mi => Ok(AtomicState::mott_uniform(cfg.atoms, cfg.sites)?),
        StateSpec::Sf => Ok(AtomicState::superfluid(cfg.atoms, cfg.sites)?),
        StateSpec::Custom(path) => {
            let statistic = match cfg.geometry {
                GeometrySpec::TwoMin => Statistic::OddSiteCount {
                    region_atoms: cfg.atoms,
                },
                _ => Statistic::SubsetCount,
            };
            let dist =
                formats::read_distribution(&read_text(path)?, statistic).map_err(|source| {
                    CliError::Format {
                        path: path.clone(),
                        source,
                    }
                })?;
            Ok(AtomicState::Custom(dist))
        }
    }
}

/// Distribution sampled by a measurement: the illuminated atom number, or the
/// odd-site count at a diffraction minimum.
fn measured_distribution(
    state: &AtomicState,
    region: &LatticeRegion,
    mapping: Mapping,
) -> Result<NumberDistribution, CliError> {
    match (mapping, state) {
        (Mapping::TwoModeMin, AtomicState::MottInsulator(f)) => {
            Ok(mi_odd_site_distribution(f, region)?)
        }
        (Mapping::TwoModeMin, AtomicState::Superfluid { atoms, sites }) => {
            if region.illuminated() != *sites {
                return Err(usage(
                    "measurement at a diffraction minimum needs the whole lattice illuminated (K = M)",
                ));
            }
            Ok(sf_imbalance_distribution(*atoms, *sites)?)
        }
        _ => Ok(state.subset_distribution(region)?),
    }
}

/// Atom number on the illuminated sites when it is sharp, as needed to place
/// the diffraction-minimum lines.
fn sharp_region_atoms(cfg: &RunConfig, state: &AtomicState, region: &LatticeRegion) -> Option<u32> {
    match state {
        AtomicState::MottInsulator(f) => Some(f.illuminated_total(region)),
        AtomicState::Superfluid { atoms, sites } if region.illuminated() == *sites => Some(*atoms),
        AtomicState::Custom(_) => Some(cfg.atoms),
        _ => None,
    }
}

fn auto_grid(cfg: &RunConfig, lo: f64, hi: f64) -> Result<Vec<f64>, CliError> {
    let g = match cfg.grid {
        Some(g) => uniform_grid(g.min, g.max, g.points)?,
        None => uniform_grid(lo, hi, AUTO_GRID_POINTS)?,
    };
    Ok(g)
}

/// One computed curve with the extra header fields describing it.
#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub spectrum: Spectrum,
    pub extra: Vec<(&'static str, String)>,
}

impl Curve {
    pub fn csv(&self) -> String {
        formats::write_spectrum(&self.spectrum, &self.extra)
    }
}

pub fn compute_curve(label: &str, cfg: &RunConfig) -> Result<Curve, CliError> {
    let params = params_of(cfg)?;
    let region = LatticeRegion::new(cfg.sites, cfg.illuminated)?;
    if cfg.measure
        && (cfg.mode != SpectrumMode::Comb || matches!(cfg.geometry, GeometrySpec::General { .. }))
    {
        return Err(usage(
            "measure needs mode = comb and a single, two-max or two-min geometry",
        ));
    }
    let mut extra = vec![("mode", cfg.mode.label().to_string())];
    let spectrum = match (&cfg.geometry, cfg.mode) {
        (GeometrySpec::General { .. }, SpectrumMode::Comb) => {
            general_spectrum(cfg, &params, &region, &mut extra)?
        }
        (GeometrySpec::General { .. }, _) => {
            return Err(usage(
                "envelope and badcavity modes need a single, two-max or two-min geometry",
            ))
        }
        (geometry, SpectrumMode::Comb) => {
            let mapping = mapping_of(geometry).expect("mapped geometry");
            let state = build_state(cfg)?;
            if mapping == Mapping::TwoModeMin {
                if let Some(n) = sharp_region_atoms(cfg, &state, &region) {
                    extra.push(("atoms", n.to_string()));
                }
            }
            let projected = if cfg.measure {
                let dist = measured_distribution(&state, &region, mapping)?;
                let seed = cfg.seed.unwrap_or(0);
                let outcome = sample_outcome_seeded(&dist, seed);
                extra.push(("seed", seed.to_string()));
                extra.push(("measured", outcome.to_string()));
                Some(project_measurement(&dist, outcome)?)
            } else {
                None
            };
            let terms = match &projected {
                Some(d) => comb_terms(d, mapping)?,
                None => state_terms(&state, &region, mapping)?.0,
            };
            let centers = comb_centers(&terms, &params);
            let pad = (10.0 * params.kappa()).max(2.0 * params.delta0().max(params.delta1()));
            let (lo, hi) = match (centers.first(), centers.last()) {
                (Some(&a), Some(&b)) => (a - pad, b + pad),
                _ => (-pad, pad),
            };
            let mut grid = auto_grid(cfg, lo, hi)?;
            if cfg.refine {
                grid = refine_grid(&grid, &centers, params.kappa())?;
            }
            match &projected {
                Some(d) => {
                    let mut s = spectrum_expectation(d, mapping, &params, &grid)?;
                    s.meta_mut().state = format!("{}-measured", state.label());
                    s
                }
                None => state_spectrum(&state, &region, mapping, &params, &grid)?,
            }
        }
        (geometry, mode) => {
            if cfg.state != StateSpec::Sf {
                return Err(usage(format!(
                    "{} mode describes the superfluid; set state = sf",
                    mode.label()
                )));
            }
            let mapping = mapping_of(geometry).expect("mapped geometry");
            let env = match mapping {
                Mapping::SingleMode => {
                    envelope_single_mode(cfg.atoms, cfg.sites, cfg.illuminated, &params)?
                }
                Mapping::TwoModeMax => {
                    envelope_two_mode_max(cfg.atoms, cfg.sites, cfg.illuminated, &params)?
                }
                Mapping::TwoModeMin => {
                    if cfg.illuminated != cfg.sites {
                        return Err(usage(format!(
                            "{} mode at a diffraction minimum needs K = M",
                            mode.label()
                        )));
                    }
                    extra.push(("atoms", cfg.atoms.to_string()));
                    envelope_two_mode_min(cfg.atoms, cfg.sites, &params)?
                }
            };
            match env.shape() {
                EnvelopeShape::Gaussian => {}
                EnvelopeShape::SingleLine => {
                    return Err(usage(format!(
                        "no number fluctuations: the comb is a single line at {}, use mode = comb",
                        env.center()
                    )))
                }
                EnvelopeShape::Empty => {
                    return Err(usage("no atoms couple the modes: the spectrum vanishes"))
                }
            }
            if let Some((x, h)) = env.satellite() {
                extra.push(("satellite", format!("{x}:{h}")));
            }
            let (c, s) = (env.center(), env.sigma());
            match mode {
                SpectrumMode::Envelope => {
                    let grid = auto_grid(cfg, c - 5.0 * s, c + 5.0 * s)?;
                    let values = grid.iter().map(|&x| env.value(x).unwrap_or(0.0)).collect();
                    Spectrum::new(
                        grid,
                        values,
                        SpectrumMeta::new("sf-envelope", mapping.name(), params),
                    )?
                }
                _ => {
                    let half = 5.0 * s + 10.0 * params.kappa();
                    let grid = auto_grid(cfg, c - half, c + half)?;
                    let r = match mapping {
                        Mapping::SingleMode => voigt_single_mode(&params, c, s, &grid),
                        Mapping::TwoModeMax => badcavity_two_mode_max(&params, c, s, &grid),
                        Mapping::TwoModeMin => badcavity_two_mode_min(&params, c, s, &grid),
                    };
                    let mut sp = r.map_err(CliError::Numerical)?;
                    sp.meta_mut().state = "sf-badcavity".into();
                    sp.meta_mut().geometry = mapping.name().into();
                    sp
                }
            }
        }
    };
    Ok(Curve {
        label: label.into(),
        spectrum,
        extra,
    })
}

/// Arbitrary mode pair: the Mott state is one configuration, the superfluid is
/// averaged over every Fock configuration. With a second mode its photon
/// number is reported, otherwise that of the probed mode.
fn general_spectrum(
    cfg: &RunConfig,
    params: &CavityParams,
    region: &LatticeRegion,
    extra: &mut Vec<(&'static str, String)>,
) -> Result<Spectrum, CliError> {
    let GeometrySpec::General { mode0, mode1 } = &cfg.geometry else {
        unreachable!("general geometry")
    };
    let g0 = mode0.geometry().map_err(CliError::Usage)?;
    let g1 = match mode1 {
        Some(m) => Some(m.geometry().map_err(CliError::Usage)?),
        None => None,
    };
    let p00 = CouplingProfile::new(&g0, &g0, region);
    let profiles = g1.map(|g1| {
        (
            CouplingProfile::new(&g1, &g1, region),
            CouplingProfile::new(&g1, &g0, region),
        )
    });
    let couplings = |occ: &[u32]| {
        let d00 = p00.evaluate_raw(occ).re;
        match &profiles {
            Some((p11, p10)) => (d00, p11.evaluate_raw(occ).re, p10.evaluate_raw(occ)),
            None => (d00, 0.0, Default::default()),
        }
    };
    let shift = params.delta0().max(params.delta1()) * cfg.atoms as f64;
    let pad = (10.0 * params.kappa()).max(2.0 * params.delta0().max(params.delta1()));
    let grid = auto_grid(cfg, -shift - pad, 2.0 * shift + pad)?;
    let report_one = profiles.is_some();
    extra.push(("reported_mode", if report_one { "1" } else { "0" }.into()));
    let (n0, n1) = match &cfg.state {
        StateSpec::Mi => {
            let occ = uniform_filling(cfg.atoms, cfg.sites)?;
            let (d00, d11, d10) = couplings(occ.as_slice());
            grid.iter()
                .map(|&dp| steady_state_photons(d00, d11, d10, params, dp))
                .unzip()
        }
        StateSpec::Sf => exact_general_expectation(couplings, params, &grid, cfg.atoms, cfg.sites, cfg.cap)?,
        StateSpec::Custom(_) => {
            return Err(usage(
                "a general geometry needs the full configuration, so custom distributions are not accepted",
            ))
        }
    };
    let values = if report_one { n1 } else { n0 };
    Ok(Spectrum::new(
        grid,
        values,
        SpectrumMeta::new(cfg.state.label(), "general", *params),
    )?)
}

/// File name for a curve: the output itself for a single curve, otherwise
/// `<stem>_<label>.csv`.
pub fn curve_path(output: &Path, label: &str, single: bool) -> PathBuf {
    if single {
        return output.to_path_buf();
    }
    let stem = output
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("spectrum");
    let ext = output.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    output.with_file_name(format!("{stem}_{label}.{ext}"))
}

/// Computes every curve, writes the CSV files (or prints a single curve when
/// no output is given) and the optional SVG. Returns the paths written.
pub fn run_spectrum(
    curves: &[(String, RunConfig)],
    default_stem: Option<&str>,
    plot_path: Option<&Path>,
    title: &str,
    stdout: &mut dyn std::io::Write,
) -> Result<Vec<PathBuf>, CliError> {
    if curves.is_empty() {
        return Err(usage("nothing to compute"));
    }
    let computed = curves
        .iter()
        .map(|(label, cfg)| compute_curve(label, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let mut written = Vec::new();
    let output = curves[0].1.output.clone().or_else(|| {
        (curves.len() > 1)
            .then(|| PathBuf::from(format!("{}.csv", default_stem.unwrap_or("spectrum"))))
    });
    match output {
        Some(out) => {
            for c in &computed {
                let path = curve_path(&out, &c.label, computed.len() == 1);
                write_text(&path, &c.csv())?;
                written.push(path);
            }
        }
        None => {
            stdout
                .write_all(computed[0].csv().as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    if let Some(p) = plot_path {
        let pairs: Vec<(String, Spectrum)> = computed
            .iter()
            .map(|c| (c.label.clone(), c.spectrum.clone()))
            .collect();
        write_text(p, &plot::render_svg(&pairs, title))?;
        written.push(p.to_path_buf());
    }
    Ok(written)
}

/// Worst error and status of one kind of check across all sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub worst: f64,
}

pub fn summarize(records: &[CheckRecord]) -> Vec<CheckSummary> {
    let mut out: Vec<CheckSummary> = Vec::new();
    for r in records {
        let entry = match out.iter_mut().position(|s| s.name == r.name) {
            Some(i) => &mut out[i],
            None => {
                out.push(CheckSummary {
                    name: r.name.clone(),
                    cases: 0,
                    failures: 0,
                    worst: 0.0,
                });
                out.last_mut().expect("just pushed")
            }
        };
        entry.cases += 1;
        entry.worst = entry.worst.max(r.error);
        if !r.passed {
            entry.failures += 1;
        }
    }
    out
}

/// Runs the reduction sweep and prints a pass/fail table. Any failed check
/// turns into [`CliError::InvariantFailure`].
pub fn run_oracle_check(
    config: &SweepConfig,
    verbose: bool,
    out: &mut dyn std::io::Write,
) -> Result<Vec<CheckSummary>, CliError> {
    let records = reduction_sweep(config)?;
    let summary = summarize(&records);
    let mut text = String::new();
    if verbose {
        for r in &records {
            text.push_str(&format!(
                "{:<28} N={:<3} M={:<3} detail={:<5} error={:.3e} {}\n",
                r.name,
                r.atoms,
                r.sites,
                r.detail,
                r.error,
                if r.passed { "PASS" } else { "FAIL" }
            ));
        }
    }
    text.push_str(&format!(
        "{:<28} {:>7} {:>12}  status\n",
        "check", "cases", "worst error"
    ));
    for s in &summary {
        text.push_str(&format!(
            "{:<28} {:>7} {:>12.3e}  {}\n",
            s.name,
            s.cases,
            s.worst,
            if s.failures == 0 { "PASS" } else { "FAIL" }
        ));
    }
    let failed: usize = summary.iter().map(|s| s.failures).sum();
    text.push_str(&format!(
        "{} checks over N <= {}, M <= {}: {}\n",
        records.len(),
        config.max_atoms,
        config.max_sites,
        if failed == 0 {
            "all passed".to_string()
        } else {
            format!("{failed} failed")
        }
    ));
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?;
    if failed > 0 {
        return Err(CliError::InvariantFailure(format!(
            "{failed} reduction checks disagree with enumeration"
        )));
    }
    Ok(summary)
}

/// Settings for [`run_infer`]; unset cavity values come from the CSV header.
#[derive(Debug, Clone, Default)]
pub struct InferSettings {
    pub geometry: Option<String>,
    pub kappa: Option<f64>,
    pub delta0: Option<f64>,
    pub delta1: Option<f64>,
    pub eta0: Option<f64>,
    pub region_atoms: Option<u32>,
    pub method: Option<InferenceMethod>,
    pub threshold: Option<f64>,
    pub condition_limit: Option<f64>,
    pub distribution_output: Option<PathBuf>,
}

fn header_value(
    file: &formats::SpectrumFile,
    key: &str,
    flag: Option<f64>,
    path: &Path,
) -> Result<Option<f64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| {
            usage(format!(
                "{}: header value {key}={v} is not a number",
                path.display()
            ))
        }),
    }
}

/// Default location of the recovered distribution: next to the input.
pub fn distribution_path(input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("spectrum");
    input.with_file_name(format!("{stem}_distribution.csv"))
}

/// Recovers the number distribution from a spectrum file, prints the
/// `key: value` report and writes the distribution.
pub fn run_infer(
    input: &Path,
    settings: &InferSettings,
    out: &mut dyn std::io::Write,
) -> Result<(qgrating_core::InferenceResult, Option<Phase>), CliError> {
    let file = formats::read_spectrum(&read_text(input)?).map_err(|source| CliError::Format {
        path: input.to_path_buf(),
        source,
    })?;
    let geometry = settings
        .geometry
        .clone()
        .or_else(|| file.get("geometry").map(str::to_string))
        .ok_or_else(|| usage("no geometry in the header; pass --geometry"))?;
    let mapping = match geometry.as_str() {
        "single" => Mapping::SingleMode,
        "two-max" => Mapping::TwoModeMax,
        "two-min" => Mapping::TwoModeMin,
        other => {
            return Err(usage(format!(
                "cannot invert a {other} spectrum; geometry must be single, two-max or two-min"
            )))
        }
    };
    let kappa = header_value(&file, "kappa", settings.kappa, input)?
        .ok_or_else(|| usage("no kappa in the header; pass --kappa"))?;
    let delta0 = header_value(&file, "delta0", settings.delta0, input)?.unwrap_or(1.0);
    let delta1 = header_value(&file, "delta1", settings.delta1, input)?.unwrap_or(delta0);
    let eta0 = header_value(&file, "eta0", settings.eta0, input)?.unwrap_or(kappa);
    let params = CavityParams::new(kappa, delta0, delta1, eta0)?;
    let region_atoms = match settings.region_atoms {
        Some(n) => Some(n),
        None => match file.get("atoms") {
            Some(v) => Some(
                v.parse()
                    .map_err(|_| usage(format!("header value atoms={v} is not an atom number")))?,
            ),
            None => None,
        },
    };
    if mapping == Mapping::TwoModeMin && region_atoms.is_none() {
        return Err(usage("a diffraction-minimum spectrum needs --region-atoms"));
    }
    let spectrum = Spectrum::new(
        file.detunings.clone(),
        file.values.clone(),
        SpectrumMeta::new(
            file.get("state").unwrap_or("unknown"),
            mapping.name(),
            params,
        ),
    )?;
    let opts = InferenceOptions {
        condition_limit: settings
            .condition_limit
            .unwrap_or(qgrating_core::inference::DEFAULT_CONDITION_LIMIT),
        region_atoms,
        method: settings.method,
    };
    let result =
        extract_distribution_with(&spectrum, &params, mapping, &opts).map_err(|e| match e {
            qgrating_core::Error::InvalidParameter(_) | qgrating_core::Error::NoResonances => {
                CliError::Numerical(e)
            }
            other => CliError::Core(other),
        })?;
    let threshold = settings.threshold.unwrap_or(DEFAULT_PHASE_THRESHOLD);
    let phase = match classify_phase(&result, threshold) {
        Ok(p) => Some(p),
        Err(qgrating_core::Error::IndeterminatePhase) => None,
        Err(e) => return Err(e.into()),
    };
    let dist_path = settings
        .distribution_output
        .clone()
        .unwrap_or_else(|| distribution_path(input));
    write_text(
        &dist_path,
        &formats::write_distribution(&result.distribution),
    )?;
    let mut report = formats::write_inference(&result, phase, threshold);
    report.push_str(&format!("distribution: {}\n", dist_path.display()));
    out.write_all(report.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?;
    Ok((result, phase))
}

/// Config-file text reproducing one curve.
pub fn config_text(cfg: &RunConfig) -> String {
    let mut lines = vec![
        format!(
            "state = {}",
            match &cfg.state {
                StateSpec::Custom(p) => format!("custom({})", p.display()),
                s => s.label().to_string(),
            }
        ),
        format!("geometry = {}", cfg.geometry.label()),
    ];
    if let GeometrySpec::General { mode0, mode1 } = &cfg.geometry {
        let kind = |k| match k {
            qgrating_core::ModeKind::Traveling => "traveling",
            qgrating_core::ModeKind::Standing => "standing",
        };
        lines.push(format!(
            "mode0 = {},{},{}",
            kind(mode0.kind),
            mode0.kx_d,
            mode0.phase
        ));
        if let Some(m) = mode1 {
            lines.push(format!("mode1 = {},{},{}", kind(m.kind), m.kx_d, m.phase));
        }
    }
    lines.push(format!("N = {}", cfg.atoms));
    lines.push(format!("M = {}", cfg.sites));
    lines.push(format!("K = {}", cfg.illuminated));
    lines.push(format!("kappa = {}", cfg.kappa));
    lines.push(format!("delta0 = {}", cfg.delta0));
    lines.push(format!("delta1 = {}", cfg.delta1_value()));
    lines.push(format!("eta0 = {}", cfg.eta0_value()));
    if let Some(g) = cfg.grid {
        lines.push(format!("grid = {},{},{}", g.min, g.max, g.points));
    }
    lines.push(format!("mode = {}", cfg.mode.label()));
    let mut text = lines.join("\n");
    text.push('\n');
    text
}
