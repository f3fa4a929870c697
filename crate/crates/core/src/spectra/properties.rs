//! Cross-module checks of the comb against its envelopes and integrals.

use proptest::prelude::*;

use super::{
    badcavity_two_mode_max, badcavity_two_mode_min, envelope_single_mode, envelope_two_mode_max,
    envelope_two_mode_min, spectrum_expectation, state_spectrum, uniform_grid, voigt_single_mode,
};
use crate::states::{sf_imbalance_distribution, sf_subset_distribution};
use crate::{AtomicState, CavityParams, LatticeRegion, Mapping, NumberDistribution, Statistic};

fn worst_ratio(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / y - 1.0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn comb_peaks_follow_the_envelope() {
    let p = CavityParams::with_kappa(0.02).unwrap();
    let env = envelope_single_mode(30, 30, 15, &p).unwrap();
    let dist = sf_subset_distribution(30, 30, 15).unwrap();
    let sigma_q = env.sigma() / p.delta0();
    let qs: Vec<f64> = (0..=30)
        .map(f64::from)
        .filter(|q| (q - 15.0).abs() <= 2.0 * sigma_q)
        .collect();
    let s = spectrum_expectation(&dist, Mapping::SingleMode, &p, &qs).unwrap();
    let ratios: Vec<f64> = qs
        .iter()
        .zip(s.values())
        .map(|(&q, &v)| v / env.value(q).unwrap())
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios
        .iter()
        .map(|r| (r / mean - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(spread <= 0.03, "spread {spread}");
}

#[test]
fn voigt_matches_comb_when_lines_overlap() {
    let p = CavityParams::with_kappa(1.0).unwrap();
    let env = envelope_single_mode(30, 30, 15, &p).unwrap();
    let (c, s) = (env.center(), env.sigma());
    let grid = uniform_grid(c - 3.0 * s, c + 3.0 * s, 121).unwrap();
    let comb = spectrum_expectation(
        &sf_subset_distribution(30, 30, 15).unwrap(),
        Mapping::SingleMode,
        &p,
        &grid,
    )
    .unwrap();
    let v = voigt_single_mode(&p, c, s, &grid).unwrap();
    assert!(worst_ratio(v.values(), comb.values()) <= 0.02);
}

/// The two-mode combs have spacing 2δ, so at κ = δ the comb still ripples and
/// the smooth integrals only converge to it once κ is several δ.
#[test]
fn two_mode_integrals_converge_to_comb_for_broad_lines() {
    for (kappa, tol_min, tol_max) in [(2.0, 0.045, 0.015), (4.0, 0.01, 0.01)] {
        let p = CavityParams::with_kappa(kappa).unwrap();

        let env = envelope_two_mode_min(30, 30, &p).unwrap();
        let (c, s) = (env.center(), env.sigma());
        let grid = uniform_grid(c - 3.0 * s, c + 3.0 * s, 121).unwrap();
        let comb = spectrum_expectation(
            &sf_imbalance_distribution(30, 30).unwrap(),
            Mapping::TwoModeMin,
            &p,
            &grid,
        )
        .unwrap();
        let v = badcavity_two_mode_min(&p, c, s, &grid).unwrap();
        let err = worst_ratio(v.values(), comb.values());
        assert!(err <= tol_min, "κ = {kappa}: minimum {err}");

        let env = envelope_two_mode_max(30, 30, 15, &p).unwrap();
        let (c, s) = (env.center(), env.sigma());
        let grid = uniform_grid(c - 3.0 * s, c + 3.0 * s, 121).unwrap();
        let comb = spectrum_expectation(
            &sf_subset_distribution(30, 30, 15).unwrap(),
            Mapping::TwoModeMax,
            &p,
            &grid,
        )
        .unwrap();
        let v = badcavity_two_mode_max(&p, c, s, &grid).unwrap();
        let err = worst_ratio(v.values(), comb.values());
        assert!(err <= tol_max, "κ = {kappa}: maximum {err}");
    }
}

#[test]
fn partial_minimum_uses_both_site_classes() {
    // with K < M the odd and even illuminated sites fluctuate independently,
    // so the lines sit at δ(q_odd + q_even) ± δ|q_odd − q_even|
    let p = CavityParams::with_kappa(0.05).unwrap();
    let region = LatticeRegion::new(12, 5).unwrap();
    let grid = uniform_grid(-1.0, 25.0, 2601).unwrap();
    let s = state_spectrum(
        &AtomicState::superfluid(12, 12).unwrap(),
        &region,
        Mapping::TwoModeMin,
        &p,
        &grid,
    )
    .unwrap();
    assert!(s.meta().extended);
    for (x, h) in s.local_maxima() {
        if h > 1e-3 * s.peak().1 {
            assert!((x - x.round()).abs() < 0.02, "line at {x}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectra_are_nonnegative(
        probs in prop::collection::vec(0.0f64..1.0, 1..12),
        offset in 0u32..10,
        kappa in 0.01f64..3.0,
        mapping in prop::sample::select(vec![Mapping::SingleMode, Mapping::TwoModeMax]),
    ) {
        prop_assume!(probs.iter().sum::<f64>() > 1e-3);
        let d = NumberDistribution::normalized(offset, probs, Statistic::SubsetCount).unwrap();
        let p = CavityParams::with_kappa(kappa).unwrap();
        let grid = uniform_grid(-5.0, 50.0, 221).unwrap();
        let s = spectrum_expectation(&d, mapping, &p, &grid).unwrap();
        prop_assert!(s.values().iter().all(|&v| v >= 0.0 && v.is_finite()));
    }

    #[test]
    fn minimum_integral_is_even(x in 0.0f64..20.0, kappa in 0.2f64..3.0) {
        let p = CavityParams::with_kappa(kappa).unwrap();
        let s = badcavity_two_mode_min(&p, 30.0, 30f64.sqrt(), &[30.0 - x, 30.0 + x + 1e-9]).unwrap();
        let v = s.values();
        prop_assert!((v[0] - v[1]).abs() <= 1e-6 * v[0].max(1e-12));
    }
}
