//! Transmission spectra.
//!
//! The exact spectrum of a state is the comb `Σ_q p(q) f_q(Δp)`, where `f_q`
//! is the steady-state photon number for the configurations with statistic
//! `q`. The Gaussian envelopes in [`envelope_single_mode`] and friends and the
//! convolution integrals such as [`voigt_single_mode`] approximate that comb
//! and are kept separate from it.

mod badcavity;
mod envelope;
mod grid;
mod photons;
#[cfg(test)]
mod properties;

use alloc::{format, string::String, vec::Vec};

pub use badcavity::{
    badcavity_two_mode_max, badcavity_two_mode_min, voigt_single_mode, BADCAVITY_TOLERANCE,
};
pub use envelope::{
    envelope_single_mode, envelope_two_mode_max, envelope_two_mode_min, Envelope, EnvelopeShape,
};
pub use grid::{refine_grid, uniform_grid, validate_grid};
pub use photons::{single_mode_photons, steady_state_photons, two_mode_photons};

use crate::geometry::LatticeRegion;
use crate::states::{
    joint_subset_distribution, mi_odd_site_distribution, sf_imbalance_distribution, AtomicState,
    JointDistribution, NumberDistribution, Statistic,
};
use crate::{Error, Result};

/// Cavity constants. Frequencies are in units of `δ₀` by convention, but any
/// consistent unit works.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    kappa: f64,
    delta0: f64,
    delta1: f64,
    eta0: f64,
}

impl CavityParams {
    pub fn new(kappa: f64, delta0: f64, delta1: f64, eta0: f64) -> Result<Self> {
        let ok = kappa.is_finite()
            && kappa > 0.0
            && delta0.is_finite()
            && delta0 > 0.0
            && delta1.is_finite()
            && delta1 > 0.0
            && eta0.is_finite()
            && eta0 >= 0.0;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "cavity parameters need κ > 0, δ₀ > 0, δ₁ > 0, η₀ ≥ 0 (got κ = {kappa}, δ₀ = {delta0}, δ₁ = {delta1}, η₀ = {eta0})"
            )));
        }
        Ok(Self {
            kappa,
            delta0,
            delta1,
            eta0,
        })
    }

    /// `δ₀ = δ₁ = 1` and `η₀ = κ`, so a resolved single-mode peak has height 1.
    pub fn with_kappa(kappa: f64) -> Result<Self> {
        Self::new(kappa, 1.0, 1.0, kappa)
    }

    pub fn with_eta0(self, eta0: f64) -> Result<Self> {
        Self::new(self.kappa, self.delta0, self.delta1, eta0)
    }

    pub fn with_delta1(self, delta1: f64) -> Result<Self> {
        Self::new(self.kappa, self.delta0, delta1, self.eta0)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    /// Peak of a resolved single-mode Lorentzian, `|η₀|²/κ²`.
    pub fn peak(&self) -> f64 {
        self.eta0 * self.eta0 / (self.kappa * self.kappa)
    }
}

impl Default for CavityParams {
    fn default() -> Self {
        Self {
            kappa: 0.1,
            delta0: 1.0,
            delta1: 1.0,
            eta0: 0.1,
        }
    }
}

/// How the statistic `q` enters the photon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mapping {
    /// One probed mode with `|u₀|² = 1`: `D₀₀ = q`, resonance at `δ₀ q`.
    SingleMode,
    /// Two modes at a diffraction maximum: `D₁₁ = D₁₀ = q`, doublet at
    /// `0` and `2δ₁ q`.
    TwoModeMax,
    /// Two modes at a diffraction minimum: `D₁₁ = N`, `|D₁₀| = |2q − N|`
    /// with `q` the odd-site count.
    TwoModeMin,
}

impl Mapping {
    pub fn name(&self) -> &'static str {
        match self {
            Mapping::SingleMode => "single",
            Mapping::TwoModeMax => "two-max",
            Mapping::TwoModeMin => "two-min",
        }
    }

    /// Photon-number parameters for the configurations with statistic `q`.
    pub fn resonance(&self, q: u32, statistic: Statistic) -> Result<Resonance> {
        let qf = q as f64;
        match (self, statistic) {
            (Mapping::SingleMode, Statistic::SubsetCount) => Ok(Resonance::Single { shift: qf }),
            (Mapping::TwoModeMax, Statistic::SubsetCount) => Ok(Resonance::Coupled {
                d11: qf,
                d10_abs2: qf * qf,
            }),
            (Mapping::TwoModeMin, Statistic::OddSiteCount { region_atoms }) => {
                let imbalance = 2.0 * qf - region_atoms as f64;
                Ok(Resonance::Coupled {
                    d11: region_atoms as f64,
                    d10_abs2: imbalance * imbalance,
                })
            }
            _ => Err(Error::MappingMismatch {
                mapping: self.name(),
                statistic: statistic.name(),
            }),
        }
    }
}

/// Photon number of one comb component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resonance {
    /// Single mode with self-coupling `D₀₀ = shift`.
    Single { shift: f64 },
    /// Coupled modes with `D₀₀ = D₁₁ = d11` and `|D₁₀|² = d10_abs2`.
    Coupled { d11: f64, d10_abs2: f64 },
}

impl Resonance {
    pub fn photons(&self, params: &CavityParams, dp: f64) -> f64 {
        match *self {
            Resonance::Single { shift } => single_mode_photons(shift, params, dp),
            Resonance::Coupled { d11, d10_abs2 } => two_mode_photons(d11, d10_abs2, params, dp),
        }
    }

    /// Approximate line centres (exact for `κ` much smaller than the
    /// splitting). A coupled component without coupling has no line.
    pub fn centers(&self, params: &CavityParams) -> Vec<f64> {
        match *self {
            Resonance::Single { shift } => alloc::vec![params.delta0() * shift],
            Resonance::Coupled { d11, d10_abs2 } => {
                if d10_abs2 == 0.0 {
                    return Vec::new();
                }
                let mid = params.delta1() * d11;
                let half = params.delta1() * crate::math::sqrt(d10_abs2);
                alloc::vec![mid - half, mid + half]
            }
        }
    }
}

/// Descriptive metadata carried with a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMeta {
    pub state: String,
    pub geometry: String,
    pub params: CavityParams,
    /// Set when the spectrum uses a reduction beyond the closed forms, e.g.
    /// the trinomial path for a diffraction minimum with `K < M`.
    pub extended: bool,
}

impl SpectrumMeta {
    pub fn new(state: &str, geometry: &str, params: CavityParams) -> Self {
        Self {
            state: state.into(),
            geometry: geometry.into(),
            params,
            extended: false,
        }
    }
}

/// Photon number sampled on a strictly increasing detuning grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    detunings: Vec<f64>,
    values: Vec<f64>,
    meta: SpectrumMeta,
}

impl Spectrum {
    pub fn new(detunings: Vec<f64>, values: Vec<f64>, meta: SpectrumMeta) -> Result<Self> {
        validate_grid(&detunings)?;
        if values.len() != detunings.len() {
            return Err(Error::DimensionMismatch {
                expected: detunings.len(),
                got: values.len(),
            });
        }
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidParameter(format!(
                "photon number {v} at grid index {i}"
            )));
        }
        Ok(Self {
            detunings,
            values,
            meta,
        })
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &SpectrumMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut SpectrumMeta {
        &mut self.meta
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest sample as `(Δp, value)`.
    pub fn peak(&self) -> (f64, f64) {
        self.detunings.iter().zip(&self.values).fold(
            (f64::NAN, f64::NEG_INFINITY),
            |best, (&x, &v)| if v > best.1 { (x, v) } else { best },
        )
    }

    /// Interior samples strictly above the left neighbour and not below the
    /// right one, as `(Δp, value)`.
    pub fn local_maxima(&self) -> Vec<(f64, f64)> {
        self.values
            .windows(3)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0] && w[1] >= w[2])
            .map(|(i, w)| (self.detunings[i + 1], w[1]))
            .collect()
    }
}

/// Weighted comb `Σ w_k f_k(Δp)`, evaluated point by point in a fixed term
/// order so every grid value is independent of the others.
fn evaluate_comb(terms: &[(f64, Resonance)], params: &CavityParams, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&dp| terms.iter().map(|(w, r)| w * r.photons(params, dp)).sum())
        .collect()
}

/// Comb components `(p(q), resonance)` of a distribution under a mapping.
pub fn comb_terms(dist: &NumberDistribution, mapping: Mapping) -> Result<Vec<(f64, Resonance)>> {
    dist.iter()
        .filter(|&(_, p)| p > 0.0)
        .map(|(q, p)| mapping.resonance(q, dist.statistic()).map(|r| (p, r)))
        .collect()
}

/// Comb components of a joint (odd-site, even-site) distribution for a
/// diffraction minimum: `D₁₁ = q_odd + q_even`, `D₁₀ = q_odd − q_even`.
pub fn odd_even_terms(joint: &JointDistribution) -> Vec<(f64, Resonance)> {
    joint
        .entries()
        .iter()
        .map(|&(odd, even, p)| {
            let imbalance = odd as f64 - even as f64;
            (
                p,
                Resonance::Coupled {
                    d11: (odd + even) as f64,
                    d10_abs2: imbalance * imbalance,
                },
            )
        })
        .collect()
}

/// Exact expectation spectrum `Σ_q p(q) f_q(Δp)`.
pub fn spectrum_expectation(
    dist: &NumberDistribution,
    mapping: Mapping,
    params: &CavityParams,
    grid: &[f64],
) -> Result<Spectrum> {
    validate_grid(grid)?;
    let terms = comb_terms(dist, mapping)?;
    let values = evaluate_comb(&terms, params, grid);
    Spectrum::new(
        grid.to_vec(),
        values,
        SpectrumMeta::new("distribution", mapping.name(), *params),
    )
}

/// Diffraction-minimum spectrum from the joint odd/even-site distribution.
pub fn spectrum_expectation_odd_even(
    joint: &JointDistribution,
    params: &CavityParams,
    grid: &[f64],
) -> Result<Spectrum> {
    validate_grid(grid)?;
    let values = evaluate_comb(&odd_even_terms(joint), params, grid);
    let mut meta = SpectrumMeta::new("distribution", Mapping::TwoModeMin.name(), *params);
    meta.extended = true;
    Spectrum::new(grid.to_vec(), values, meta)
}

/// Comb components of a prescribed state seen through `mapping` on `region`.
/// The flag is set when the trinomial reduction was needed.
pub fn state_terms(
    state: &AtomicState,
    region: &LatticeRegion,
    mapping: Mapping,
) -> Result<(Vec<(f64, Resonance)>, bool)> {
    match (mapping, state) {
        (Mapping::SingleMode | Mapping::TwoModeMax, _) => Ok((
            comb_terms(&state.subset_distribution(region)?, mapping)?,
            false,
        )),
        (Mapping::TwoModeMin, AtomicState::MottInsulator(fillings)) => Ok((
            comb_terms(&mi_odd_site_distribution(fillings, region)?, mapping)?,
            false,
        )),
        (Mapping::TwoModeMin, AtomicState::Superfluid { atoms, sites }) => {
            if *sites != region.sites() {
                return Err(Error::DimensionMismatch {
                    expected: region.sites(),
                    got: *sites,
                });
            }
            if region.illuminated() == *sites && sites % 2 == 0 {
                Ok((
                    comb_terms(&sf_imbalance_distribution(*atoms, *sites)?, mapping)?,
                    false,
                ))
            } else {
                let joint = joint_subset_distribution(
                    *atoms,
                    *sites,
                    region.odd_sites(),
                    region.even_sites(),
                )?;
                Ok((odd_even_terms(&joint), true))
            }
        }
        (Mapping::TwoModeMin, AtomicState::Custom(dist)) => Ok((comb_terms(dist, mapping)?, false)),
    }
}

/// Exact spectrum of a prescribed state.
pub fn state_spectrum(
    state: &AtomicState,
    region: &LatticeRegion,
    mapping: Mapping,
    params: &CavityParams,
    grid: &[f64],
) -> Result<Spectrum> {
    validate_grid(grid)?;
    let (terms, extended) = state_terms(state, region, mapping)?;
    let values = evaluate_comb(&terms, params, grid);
    let mut meta = SpectrumMeta::new(state.label(), mapping.name(), *params);
    meta.extended = extended;
    Spectrum::new(grid.to_vec(), values, meta)
}

/// Line centres of all comb components, sorted and deduplicated.
pub fn comb_centers(terms: &[(f64, Resonance)], params: &CavityParams) -> Vec<f64> {
    let mut centers: Vec<f64> = terms.iter().flat_map(|(_, r)| r.centers(params)).collect();
    centers.sort_by(f64::total_cmp);
    centers.dedup_by(|a, b| crate::math::abs(*a - *b) <= 1e-12 * (1.0 + crate::math::abs(*b)));
    centers
}
