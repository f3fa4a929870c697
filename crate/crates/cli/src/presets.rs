//! Named parameter sets for the standard figures.

use crate::config::{GeometrySpec, GridSpec, RunConfig, StateSpec};

/// Rubidium-87 on the D2 line: coupling `g`, atom-cavity detuning `Δa` and
/// cavity decay `κ`, all as `2π × MHz`.
pub mod rb87 {
    pub const G_MHZ: f64 = 10.4;
    pub const DETUNING_MHZ: f64 = 30.0;
    pub const KAPPA_MHZ: f64 = 1.4;

    /// Single-atom dispersive shift `g²/Δa` in `2π × MHz`.
    pub fn delta0_mhz() -> f64 {
        G_MHZ * G_MHZ / DETUNING_MHZ
    }

    /// `κ` in units of `δ₀`.
    pub fn kappa_over_delta0() -> f64 {
        KAPPA_MHZ / delta0_mhz()
    }
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// Labelled curves, in output order.
    pub curves: Vec<(String, RunConfig)>,
}

fn base(
    atoms: u32,
    sites: usize,
    illuminated: usize,
    kappa: f64,
    geometry: GeometrySpec,
    grid: (f64, f64),
) -> RunConfig {
    RunConfig {
        atoms,
        sites,
        illuminated,
        kappa,
        geometry,
        grid: Some(GridSpec {
            min: grid.0,
            max: grid.1,
            points: 2001,
        }),
        ..RunConfig::default()
    }
}

fn mi_and_sf(cfg: RunConfig) -> Vec<(String, RunConfig)> {
    let mi = RunConfig {
        state: StateSpec::Mi,
        ..cfg.clone()
    };
    let sf = RunConfig {
        state: StateSpec::Sf,
        ..cfg
    };
    vec![("mi".into(), mi), ("sf".into(), sf)]
}

pub const NAMES: &[&str] = &[
    "default", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig3d", "rb87",
];

pub fn lookup(name: &str) -> Option<Preset> {
    let single = GeometrySpec::Single;
    let preset = match name {
        "default" => Preset {
            name: "default",
            description: "superfluid, N = M = 30, K = 15, single mode, kappa = 0.1 delta0",
            curves: vec![("sf".into(), base(30, 30, 15, 0.1, single, (0.0, 30.0)))],
        },
        "fig2a" => Preset {
            name: "fig2a",
            description: "single mode, N = M = 30, K = 15, kappa = 0.1: Mott insulator and superfluid",
            curves: mi_and_sf(base(30, 30, 15, 0.1, single, (0.0, 30.0))),
        },
        "fig2b" => Preset {
            name: "fig2b",
            description: "single mode, N = M = 30, K = 15, kappa = 1: Mott insulator and superfluid",
            curves: mi_and_sf(base(30, 30, 15, 1.0, single, (0.0, 30.0))),
        },
        "fig2c" => Preset {
            name: "fig2c",
            description: "single mode superfluid, N = M = 70, kappa = 0.05, K = 10, 35, 68",
            curves: [10, 35, 68]
                .into_iter()
                .map(|k| (format!("k{k}"), base(70, 70, k, 0.05, single.clone(), (0.0, 72.0))))
                .collect(),
        },
        "fig3a" | "fig3b" => {
            let (kappa, description) = if name == "fig3a" {
                (0.1, "diffraction maximum, N = M = 30, K = 15, kappa = 0.1: Mott insulator and superfluid")
            } else {
                (1.0, "diffraction maximum, N = M = 30, K = 15, kappa = 1: Mott insulator and superfluid")
            };
            Preset {
                name: if name == "fig3a" { "fig3a" } else { "fig3b" },
                description,
                curves: mi_and_sf(base(30, 30, 15, kappa, GeometrySpec::TwoMax, (-5.0, 50.0))),
            }
        }
        "fig3c" | "fig3d" => {
            let (kappa, description) = if name == "fig3c" {
                (0.1, "diffraction minimum, N = M = 30, K = 30, kappa = 0.1: Mott insulator and superfluid")
            } else {
                (1.0, "diffraction minimum, N = M = 30, K = 30, kappa = 1: Mott insulator and superfluid")
            };
            Preset {
                name: if name == "fig3c" { "fig3c" } else { "fig3d" },
                description,
                curves: mi_and_sf(base(30, 30, 30, kappa, GeometrySpec::TwoMin, (0.0, 60.0))),
            }
        }
        "rb87" => Preset {
            name: "rb87",
            description: "87Rb, g = 2pi 10.4 MHz, detuning 2pi 30 MHz, kappa = 2pi 1.4 MHz; single mode, N = M = 30, K = 15",
            curves: mi_and_sf(base(30, 30, 15, rb87::kappa_over_delta0(), single, (0.0, 30.0))),
        },
        _ => return None,
    };
    Some(preset)
}

pub fn all() -> Vec<Preset> {
    NAMES.iter().filter_map(|n| lookup(n)).collect()
}
