//! Gaussian envelopes of the comb peak heights.

use super::CavityParams;
use crate::geometry::LatticeRegion;
use crate::math::{self, SQRT_2PI};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeShape {
    /// Smooth Gaussian through the comb peaks.
    Gaussian,
    /// No number fluctuations: the comb is one line at `center`, so there
    /// is no envelope to evaluate.
    SingleLine,
    /// No atoms couple the modes; the spectrum vanishes.
    Empty,
}

/// Envelope `α δ/(√(2π) σ) exp(−(Δp − c)²/2σ²)` of the comb peak heights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    shape: EnvelopeShape,
    center: f64,
    sigma: f64,
    alpha: f64,
    delta: f64,
    spacing: f64,
    satellite: Option<(f64, f64)>,
}

impl Envelope {
    fn build(center: f64, sigma: f64, alpha: f64, delta: f64, spacing: f64) -> Self {
        let shape = if sigma > 0.0 {
            EnvelopeShape::Gaussian
        } else {
            EnvelopeShape::SingleLine
        };
        Self {
            shape,
            center,
            sigma,
            alpha,
            delta,
            spacing,
            satellite: None,
        }
    }

    pub fn shape(&self) -> EnvelopeShape {
        self.shape
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Distance between neighbouring comb components.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Classical line that does not follow the envelope, as
    /// `(position, height)`.
    pub fn satellite(&self) -> Option<(f64, f64)> {
        self.satellite
    }

    /// Height of the Gaussian at its centre.
    pub fn peak(&self) -> Option<f64> {
        self.value(self.center)
    }

    /// Envelope value, or `None` when there is no Gaussian to evaluate.
    pub fn value(&self, dp: f64) -> Option<f64> {
        match self.shape {
            EnvelopeShape::Gaussian => {
                let z = (dp - self.center) / self.sigma;
                Some(self.alpha * self.delta / (SQRT_2PI * self.sigma) * math::exp(-0.5 * z * z))
            }
            EnvelopeShape::SingleLine | EnvelopeShape::Empty => None,
        }
    }
}

fn mean_and_fluctuation(atoms: u32, sites: usize, subset: usize) -> Result<(f64, f64)> {
    let region = LatticeRegion::new(sites, subset)?;
    let ratio = region.illuminated() as f64 / region.sites() as f64;
    let mean = atoms as f64 * ratio;
    Ok((mean, math::sqrt(mean * (1.0 - ratio))))
}

/// Envelope of the single-mode comb: centre `δ₀N_K`, width
/// `δ₀√(N_K(1 − K/M))`, `α = |η₀|²/κ²`.
pub fn envelope_single_mode(
    atoms: u32,
    sites: usize,
    subset: usize,
    params: &CavityParams,
) -> Result<Envelope> {
    let (mean, fluct) = mean_and_fluctuation(atoms, sites, subset)?;
    let d = params.delta0();
    Ok(Envelope::build(d * mean, d * fluct, params.peak(), d, d))
}

/// Envelope of the right satellite at a diffraction maximum: centre and width
/// doubled, `α = |η₀|²/(2κ²)`, plus the classical left line at `Δp = 0` of
/// height `|η₀|²/(4κ²)`.
pub fn envelope_two_mode_max(
    atoms: u32,
    sites: usize,
    subset: usize,
    params: &CavityParams,
) -> Result<Envelope> {
    let (mean, fluct) = mean_and_fluctuation(atoms, sites, subset)?;
    let d = params.delta1();
    if atoms == 0 {
        let mut env = Envelope::build(0.0, 0.0, 0.0, d, 2.0 * d);
        env.shape = EnvelopeShape::Empty;
        return Ok(env);
    }
    let mut env = Envelope::build(
        2.0 * d * mean,
        2.0 * d * fluct,
        0.5 * params.peak(),
        d,
        2.0 * d,
    );
    env.satellite = Some((0.0, 0.25 * params.peak()));
    Ok(env)
}

/// Envelope at a diffraction minimum with the whole lattice illuminated:
/// centre `δ₁N`, width `δ₁√N`, components every `2δ₁`, `α = |η₀|²/κ²`.
pub fn envelope_two_mode_min(atoms: u32, sites: usize, params: &CavityParams) -> Result<Envelope> {
    LatticeRegion::whole(sites)?;
    let d = params.delta1();
    let n = atoms as f64;
    let mut env = Envelope::build(d * n, d * math::sqrt(n), params.peak(), d, 2.0 * d);
    if atoms == 0 {
        env.shape = EnvelopeShape::Empty;
    }
    Ok(env)
}
