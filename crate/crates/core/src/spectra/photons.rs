//! Steady-state photon numbers for a single Fock configuration.

use num_complex::Complex64;

use super::CavityParams;

/// Single probed mode with self-coupling `D₀₀ = q`:
/// `|η₀|² / ((Δp − δ₀ q)² + κ²)`.
pub fn single_mode_photons(q: f64, params: &CavityParams, dp: f64) -> f64 {
    let detuning = dp - params.delta0() * q;
    let kappa = params.kappa();
    params.eta0() * params.eta0() / (detuning * detuning + kappa * kappa)
}

/// Photon number in the unprobed mode of a coupled pair with equal
/// self-couplings `D₀₀ = D₁₁ = d11` and `|D₁₀|² = d10_abs2`:
///
/// `δ₁²|D₁₀|²|η₀|² / ([Δ'² − δ₁²|D₁₀|² − κ²]² + 4κ²Δ'²)`, `Δ' = Δp − δ₁ D₁₁`.
pub fn two_mode_photons(d11: f64, d10_abs2: f64, params: &CavityParams, dp: f64) -> f64 {
    let delta1 = params.delta1();
    let splitting2 = delta1 * delta1 * d10_abs2;
    if splitting2 == 0.0 {
        return 0.0;
    }
    let kappa2 = params.kappa() * params.kappa();
    let shifted = dp - delta1 * d11;
    let shifted2 = shifted * shifted;
    let real = shifted2 - splitting2 - kappa2;
    let denom = real * real + 4.0 * kappa2 * shifted2;
    splitting2 * params.eta0() * params.eta0() / denom
}

/// Photon numbers `(⟨a₀†a₀⟩, ⟨a₁†a₁⟩)` of the full coupled steady state with
/// the probe driving mode 0 and both bare modes degenerate.
///
/// Unlike [`two_mode_photons`] this allows `D₀₀ ≠ D₁₁`, a complex `D₁₀` and
/// `δ₀ ≠ δ₁`; it reduces to the single-mode Lorentzian for `D₁₀ = 0` and to
/// [`two_mode_photons`] for `D₀₀ = D₁₁`, `δ₀ = δ₁`.
pub fn steady_state_photons(
    d00: f64,
    d11: f64,
    d10: Complex64,
    params: &CavityParams,
    dp: f64,
) -> (f64, f64) {
    let kappa = params.kappa();
    let c0 = Complex64::new(-kappa, dp - params.delta0() * d00);
    let c1 = Complex64::new(-kappa, dp - params.delta1() * d11);
    let denom = c0 * c1 + params.delta0() * params.delta1() * d10.norm_sqr();
    let eta = params.eta0();
    let a0 = -eta * c1 / denom;
    let a1 = Complex64::new(0.0, -eta * params.delta0()) * d10 / denom;
    (a0.norm_sqr(), a1.norm_sqr())
}
