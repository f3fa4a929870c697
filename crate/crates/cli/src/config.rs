//! Run configuration: flat `key = value` files, overridden by flags.

use std::fmt;
use std::path::PathBuf;

use qgrating_core::{ModeGeometry, ModeKind};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Mi,
    Sf,
    Custom(PathBuf),
}

impl StateSpec {
    pub fn label(&self) -> &'static str {
        match self {
            StateSpec::Mi => "mi",
            StateSpec::Sf => "sf",
            StateSpec::Custom(_) => "custom",
        }
    }
}

/// One mode of a general geometry: `kind,kx_d,phase` with angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub kind: ModeKind,
    pub kx_d: f64,
    pub phase: f64,
}

impl ModeSpec {
    pub fn geometry(&self) -> Result<ModeGeometry, String> {
        ModeGeometry::new(self.kind, self.kx_d, self.phase).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeometrySpec {
    Single,
    TwoMax,
    TwoMin,
    /// Probed mode 0 and, optionally, a second mode 1 that is reported.
    General {
        mode0: ModeSpec,
        mode1: Option<ModeSpec>,
    },
}

impl GeometrySpec {
    pub fn label(&self) -> &'static str {
        match self {
            GeometrySpec::Single => "single",
            GeometrySpec::TwoMax => "two-max",
            GeometrySpec::TwoMin => "two-min",
            GeometrySpec::General { .. } => "general",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMode {
    Comb,
    Envelope,
    BadCavity,
}

impl SpectrumMode {
    pub fn label(&self) -> &'static str {
        match self {
            SpectrumMode::Comb => "comb",
            SpectrumMode::Envelope => "envelope",
            SpectrumMode::BadCavity => "badcavity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub state: StateSpec,
    pub geometry: GeometrySpec,
    pub atoms: u32,
    pub sites: usize,
    pub illuminated: usize,
    pub kappa: f64,
    pub delta0: f64,
    /// Defaults to `delta0`.
    pub delta1: Option<f64>,
    /// Defaults to `kappa`.
    pub eta0: Option<f64>,
    /// Chosen from the line positions when absent.
    pub grid: Option<GridSpec>,
    pub refine: bool,
    pub mode: SpectrumMode,
    pub seed: Option<u64>,
    /// Sample a measurement outcome with `seed` and report the projected state.
    pub measure: bool,
    pub cap: u64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            state: StateSpec::Sf,
            geometry: GeometrySpec::Single,
            atoms: 30,
            sites: 30,
            illuminated: 15,
            kappa: 0.1,
            delta0: 1.0,
            delta1: None,
            eta0: None,
            grid: None,
            refine: true,
            mode: SpectrumMode::Comb,
            seed: None,
            measure: false,
            cap: qgrating_core::oracle::DEFAULT_CAP,
            output: None,
        }
    }
}

/// Where a bad value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub origin: Origin,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.origin {
            Origin::Line(n) if self.key.is_empty() => write!(f, "line {n}: {}", self.message),
            Origin::Line(n) => write!(f, "line {n}: {}: {}", self.key, self.message),
            Origin::Flag => write!(f, "--{}: {}", self.key, self.message),
        }
    }
}

fn parse_num<T: std::str::FromStr>(value: &str, what: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("expected {what}, got {value:?}"))
}

fn parse_real(value: &str) -> Result<f64, String> {
    let v: f64 = parse_num(value, "a number")?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got {value:?}"))
    }
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("expected true or false, got {other:?}")),
    }
}

pub fn parse_mode(value: &str) -> Result<ModeSpec, String> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected kind,kx_d,phase, got {value:?}"));
    }
    let kind = match parts[0] {
        "traveling" | "travelling" => ModeKind::Traveling,
        "standing" => ModeKind::Standing,
        other => {
            return Err(format!(
                "mode kind must be traveling or standing, got {other:?}"
            ))
        }
    };
    Ok(ModeSpec {
        kind,
        kx_d: parse_real(parts[1])?,
        phase: parse_real(parts[2])?,
    })
}

pub fn parse_grid(value: &str) -> Result<GridSpec, String> {
    let inner = value.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected min,max,points, got {value:?}"));
    }
    let grid = GridSpec {
        min: parse_real(parts[0])?,
        max: parse_real(parts[1])?,
        points: parse_num(parts[2], "a point count")?,
    };
    if grid.points < 2 || grid.max <= grid.min {
        return Err(format!(
            "grid needs min < max and at least 2 points, got {value:?}"
        ));
    }
    Ok(grid)
}

fn parse_state(value: &str) -> Result<StateSpec, String> {
    let v = value.trim();
    match v {
        "mi" => Ok(StateSpec::Mi),
        "sf" => Ok(StateSpec::Sf),
        _ => {
            let path = v
                .strip_prefix("custom(")
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| v.strip_prefix("custom:"))
                .ok_or_else(|| format!("state must be mi, sf or custom(path), got {v:?}"))?;
            if path.is_empty() {
                return Err("custom state needs a file path".into());
            }
            Ok(StateSpec::Custom(PathBuf::from(path)))
        }
    }
}

impl RunConfig {
    /// Keys accepted in config files; flags use the same names.
    pub const KEYS: &'static [&'static str] = &[
        "state", "geometry", "N", "M", "K", "kappa", "delta0", "delta1", "eta0", "grid", "refine",
        "mode", "seed", "measure", "cap", "output", "mode0", "mode1",
    ];

    /// Sets one key. `N`, `M` and `K` also answer to `atoms`, `sites` and
    /// `illuminated`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key {
            "state" => self.state = parse_state(value)?,
            "geometry" => {
                self.geometry = match value {
                    "single" => GeometrySpec::Single,
                    "two-max" => GeometrySpec::TwoMax,
                    "two-min" => GeometrySpec::TwoMin,
                    "general" => match &self.geometry {
                        g @ GeometrySpec::General { .. } => g.clone(),
                        _ => GeometrySpec::General {
                            mode0: ModeSpec {
                                kind: ModeKind::Traveling,
                                kx_d: 0.0,
                                phase: 0.0,
                            },
                            mode1: None,
                        },
                    },
                    other => {
                        return Err(format!(
                            "geometry must be single, two-max, two-min or general, got {other:?}"
                        ))
                    }
                }
            }
            "mode0" | "mode1" => {
                let parsed = parse_mode(value)?;
                let (mut m0, mut m1) = match &self.geometry {
                    GeometrySpec::General { mode0, mode1 } => (*mode0, *mode1),
                    _ => (
                        ModeSpec {
                            kind: ModeKind::Traveling,
                            kx_d: 0.0,
                            phase: 0.0,
                        },
                        None,
                    ),
                };
                if key == "mode0" {
                    m0 = parsed;
                } else {
                    m1 = Some(parsed);
                }
                self.geometry = GeometrySpec::General {
                    mode0: m0,
                    mode1: m1,
                };
            }
            "N" | "atoms" => self.atoms = parse_num(value, "a nonnegative integer")?,
            "M" | "sites" => self.sites = parse_num(value, "a positive integer")?,
            "K" | "illuminated" => self.illuminated = parse_num(value, "a positive integer")?,
            "kappa" => self.kappa = parse_real(value)?,
            "delta0" => self.delta0 = parse_real(value)?,
            "delta1" => self.delta1 = Some(parse_real(value)?),
            "eta0" => self.eta0 = Some(parse_real(value)?),
            "grid" => self.grid = Some(parse_grid(value)?),
            "refine" => self.refine = parse_bool(value)?,
            "mode" => {
                self.mode = match value {
                    "comb" => SpectrumMode::Comb,
                    "envelope" => SpectrumMode::Envelope,
                    "badcavity" => SpectrumMode::BadCavity,
                    other => {
                        return Err(format!(
                            "mode must be comb, envelope or badcavity, got {other:?}"
                        ))
                    }
                }
            }
            "seed" => self.seed = Some(parse_num(value, "an unsigned integer")?),
            "measure" => self.measure = parse_bool(value)?,
            "cap" => self.cap = parse_num(value, "an unsigned integer")?,
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Applies a config file. Blank lines and `#` comments are skipped; every
    /// error names its line.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    origin: Origin::Line(i + 1),
                    key: String::new(),
                    message: format!("expected key = value, got {line:?}"),
                });
            };
            let key = key.trim();
            self.set(key, value).map_err(|message| ConfigError {
                origin: Origin::Line(i + 1),
                key: key.into(),
                message,
            })?;
        }
        Ok(())
    }

    pub fn apply_flag(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.set(key, value).map_err(|message| ConfigError {
            origin: Origin::Flag,
            key: key.into(),
            message,
        })
    }

    pub fn delta1_value(&self) -> f64 {
        self.delta1.unwrap_or(self.delta0)
    }

    pub fn eta0_value(&self) -> f64 {
        self.eta0.unwrap_or(self.kappa)
    }
}
