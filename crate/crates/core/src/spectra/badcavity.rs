//! Gaussian-weighted photon-number integrals for the regime where `κ` is
//! comparable to the comb spacing and the comb merges into a continuum.

use alloc::{format, vec::Vec};

use super::{validate_grid, CavityParams, Spectrum, SpectrumMeta};
use crate::math::{self, SQRT_2PI};
use crate::quadrature::{integrate, QuadOptions};
use crate::{Error, Result};

/// Absolute quadrature tolerance in units of the resolved peak `|η₀|²/κ²`.
pub const BADCAVITY_TOLERANCE: f64 = 1e-10;

const GAUSS_WINDOW: f64 = 8.0;
const RESONANCE_WINDOW: f64 = 50.0;

fn check_sigma(sigma: f64, center: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) || !center.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "envelope needs a finite centre and σ > 0 (got centre {center}, σ {sigma})"
        )));
    }
    Ok(())
}

/// Breakpoints covering the Gaussian window and a neighbourhood of each
/// resonance, clipped to `[lower, ∞)`.
fn breakpoints(lower: f64, gauss: (f64, f64), resonances: &[f64], kappa: f64) -> Vec<f64> {
    let mut pts = Vec::with_capacity(4 + 3 * resonances.len());
    pts.push(gauss.0);
    pts.push(gauss.1);
    for &r in resonances {
        pts.push(r - RESONANCE_WINDOW * kappa);
        pts.push(r);
        pts.push(r + RESONANCE_WINDOW * kappa);
    }
    for p in pts.iter_mut() {
        if *p < lower {
            *p = lower;
        }
    }
    pts.push(lower);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Integrates `prefactor · ∫ integrand` at every grid point and wraps the
/// result as a spectrum.
fn integrate_grid<W, F>(
    params: &CavityParams,
    prefactor: f64,
    grid: &[f64],
    geometry: &str,
    windows: W,
    integrand: F,
) -> Result<Spectrum>
where
    W: Fn(f64) -> Vec<f64>,
    F: Fn(f64, f64) -> f64,
{
    validate_grid(grid)?;
    let meta = SpectrumMeta::new("gaussian", geometry, *params);
    if prefactor == 0.0 {
        return Spectrum::new(grid.to_vec(), alloc::vec![0.0; grid.len()], meta);
    }
    let tolerance = BADCAVITY_TOLERANCE * params.peak();
    let opts = QuadOptions {
        abs_tol: tolerance / prefactor,
        ..QuadOptions::default()
    };
    let mut values = Vec::with_capacity(grid.len());
    for &dp in grid {
        let res = integrate(|w| integrand(dp, w), &windows(dp), &opts);
        if !res.converged {
            return Err(Error::QuadratureDiverged {
                detuning: dp,
                error: res.error * prefactor,
                tolerance,
            });
        }
        values.push((prefactor * res.value).max(0.0));
    }
    Spectrum::new(grid.to_vec(), values, meta)
}

/// Single-mode Voigt contour
/// `|η₀|²/(√(2π)σ) ∫₀^∞ exp(−(ω − c)²/2σ²) / ((Δp − ω)² + κ²) dω`.
pub fn voigt_single_mode(
    params: &CavityParams,
    center: f64,
    sigma: f64,
    grid: &[f64],
) -> Result<Spectrum> {
    check_sigma(sigma, center)?;
    let kappa = params.kappa();
    let kappa2 = kappa * kappa;
    let prefactor = params.eta0() * params.eta0() / (SQRT_2PI * sigma);
    let gauss = (center - GAUSS_WINDOW * sigma, center + GAUSS_WINDOW * sigma);
    integrate_grid(
        params,
        prefactor,
        grid,
        "single",
        |dp| breakpoints(0.0, gauss, &[dp], kappa),
        |dp, w| {
            let z = (w - center) / sigma;
            let d = dp - w;
            math::exp(-0.5 * z * z) / (d * d + kappa2)
        },
    )
}

/// Two modes at a diffraction minimum, `Δ' = Δp − c`:
/// `|η₀|²/(√(2π)σ) ∫ ω² exp(−ω²/2σ²) / ((Δ'² − ω² − κ²)² + 4κ²Δ'²) dω`
/// over the whole real line. The integrand is even in `ω`, so twice the
/// half-line integral is used.
pub fn badcavity_two_mode_min(
    params: &CavityParams,
    center: f64,
    sigma: f64,
    grid: &[f64],
) -> Result<Spectrum> {
    check_sigma(sigma, center)?;
    let kappa = params.kappa();
    let kappa2 = kappa * kappa;
    let prefactor = 2.0 * params.eta0() * params.eta0() / (SQRT_2PI * sigma);
    let gauss = (0.0, GAUSS_WINDOW * sigma);
    integrate_grid(
        params,
        prefactor,
        grid,
        "two-min",
        |dp| {
            let s = dp - center;
            let r2 = s * s - kappa2;
            if r2 > 0.0 {
                breakpoints(0.0, gauss, &[math::sqrt(r2)], kappa)
            } else {
                breakpoints(0.0, gauss, &[], kappa)
            }
        },
        |dp, w| {
            let s = dp - center;
            let s2 = s * s;
            let z = w / sigma;
            let real = s2 - w * w - kappa2;
            w * w * math::exp(-0.5 * z * z) / (real * real + 4.0 * kappa2 * s2)
        },
    )
}

/// Two modes at a diffraction maximum:
/// `|η₀|²/(4√(2π)σ) ∫₀^∞ ω² exp(−(ω − c)²/2σ²) / ([Δp(Δp − ω) + κ²]² + κ²ω²) dω`.
pub fn badcavity_two_mode_max(
    params: &CavityParams,
    center: f64,
    sigma: f64,
    grid: &[f64],
) -> Result<Spectrum> {
    check_sigma(sigma, center)?;
    let kappa = params.kappa();
    let kappa2 = kappa * kappa;
    let prefactor = params.eta0() * params.eta0() / (4.0 * SQRT_2PI * sigma);
    let gauss = (center - GAUSS_WINDOW * sigma, center + GAUSS_WINDOW * sigma);
    integrate_grid(
        params,
        prefactor,
        grid,
        "two-max",
        |dp| {
            if dp > 0.0 {
                breakpoints(0.0, gauss, &[dp + kappa2 / dp], kappa)
            } else {
                breakpoints(0.0, gauss, &[], kappa)
            }
        },
        |dp, w| {
            let z = (w - center) / sigma;
            let real = dp * (dp - w) + kappa2;
            w * w * math::exp(-0.5 * z * z) / (real * real + kappa2 * w * w)
        },
    )
}
