//! Recovery of the atom-number distribution from a measured spectrum.
//!
//! Each candidate value of the statistic contributes a known photon-number
//! curve, so the spectrum is linear in the distribution. The weights are
//! found by nonnegative least squares. When the curves overlap so much that
//! the normal equations are ill-conditioned, a discretized Gaussian with free
//! centre and width is fitted instead and only its moments are meaningful.

use alloc::{format, vec, vec::Vec};

use crate::linalg::{dot, minimize_2d, SymMatrix};
use crate::math;
use crate::spectra::{CavityParams, Mapping, Resonance, Spectrum};
use crate::states::{GaussianApprox, NumberDistribution, Statistic};
use crate::{Error, Result};

/// Default threshold on `variance / mean` separating the phases.
pub const DEFAULT_PHASE_THRESHOLD: f64 = 0.1;

/// Default limit on the condition number of the normal equations.
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e6;

/// Candidate lines may sit this many `κ` outside the sampled range.
const MARGIN_KAPPA: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InferenceMethod {
    /// Nonnegative linear inversion of the comb.
    LinearInversion,
    /// Gaussian fit of the envelope; only the moments are estimated.
    EnvelopeFit,
}

impl InferenceMethod {
    pub fn name(&self) -> &'static str {
        match self {
            InferenceMethod::LinearInversion => "linear",
            InferenceMethod::EnvelopeFit => "envelope-fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    MiLike,
    SfLike,
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::MiLike => "MI-like",
            Phase::SfLike => "SF-like",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    pub distribution: NumberDistribution,
    pub mean: f64,
    pub variance: f64,
    /// Root-mean-square residual of the fit relative to the spectrum peak.
    pub residual: f64,
    pub method: InferenceMethod,
    /// Condition number of the normal equations of the linear inversion.
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferenceOptions {
    pub condition_limit: f64,
    /// Atom number on the illuminated sites; required for the diffraction
    /// minimum, where the line positions depend on it.
    pub region_atoms: Option<u32>,
    /// Use this method regardless of conditioning.
    pub method: Option<InferenceMethod>,
}

impl Default for InferenceOptions {
    fn default() -> Self {
        Self {
            condition_limit: DEFAULT_CONDITION_LIMIT,
            region_atoms: None,
            method: None,
        }
    }
}

/// One column of the forward model: the curve of a single value of the
/// observable, and how its weight is shared among values of `q`.
struct Column {
    key: u32,
    values: Vec<f64>,
}

struct Model {
    columns: Vec<Column>,
    statistic: Statistic,
    max_q: u32,
}

impl Model {
    fn column_slices(&self) -> Vec<&[f64]> {
        self.columns.iter().map(|c| c.values.as_slice()).collect()
    }
}

fn curve(res: Resonance, params: &CavityParams, grid: &[f64]) -> Vec<f64> {
    grid.iter().map(|&dp| res.photons(params, dp)).collect()
}

fn build_model(
    spectrum: &Spectrum,
    params: &CavityParams,
    mapping: Mapping,
    region_atoms: Option<u32>,
) -> Result<Model> {
    let grid = spectrum.detunings();
    let margin = MARGIN_KAPPA * params.kappa();
    let (lo, hi) = (grid[0] - margin, grid[grid.len() - 1] + margin);
    let inside = |x: f64| x >= lo && x <= hi;
    let mut columns = Vec::new();
    let (statistic, max_q) = match mapping {
        Mapping::SingleMode => {
            let top = math::floor(hi / params.delta0()).max(-1.0);
            for q in 0..=(top as i64).max(-1) {
                let q = q as u32;
                if inside(params.delta0() * q as f64) {
                    let r = mapping.resonance(q, Statistic::SubsetCount)?;
                    columns.push(Column {
                        key: q,
                        values: curve(r, params, grid),
                    });
                }
            }
            (Statistic::SubsetCount, columns.last().map_or(0, |c| c.key))
        }
        Mapping::TwoModeMax => {
            // q = 0 has no coupling and leaves no trace
            let top = math::floor(hi / (2.0 * params.delta1())).max(0.0);
            for q in 1..=top as u32 {
                let r = mapping.resonance(q, Statistic::SubsetCount)?;
                columns.push(Column {
                    key: q,
                    values: curve(r, params, grid),
                });
            }
            (Statistic::SubsetCount, columns.last().map_or(0, |c| c.key))
        }
        Mapping::TwoModeMin => {
            let n = region_atoms.ok_or_else(|| {
                Error::InvalidParameter(
                    "the diffraction minimum needs the illuminated atom number".into(),
                )
            })?;
            let statistic = Statistic::OddSiteCount { region_atoms: n };
            // columns are keyed by the imbalance |2q − N| > 0
            let d1 = params.delta1();
            let mut d = if n % 2 == 0 { 2 } else { 1 };
            while d <= n {
                let (left, right) = (d1 * (n - d) as f64, d1 * (n + d) as f64);
                if inside(left) || inside(right) {
                    let q = (n + d) / 2;
                    columns.push(Column {
                        key: d,
                        values: curve(mapping.resonance(q, statistic)?, params, grid),
                    });
                }
                d += 2;
            }
            (statistic, n)
        }
    };
    if columns.is_empty() {
        return Err(Error::NoResonances);
    }
    Ok(Model {
        columns,
        statistic,
        max_q,
    })
}

fn peak_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

fn rms_residual(model: &[f64], data: &[f64], peak: f64) -> f64 {
    let ss: f64 = model.iter().zip(data).map(|(m, d)| (m - d) * (m - d)).sum();
    math::sqrt(ss / data.len() as f64) / peak
}

/// Least squares over the free columns; any negative weight is clipped to
/// zero and its column dropped before solving again.
fn nonnegative_solve(model: &Model, data: &[f64]) -> Result<Vec<f64>> {
    let all = model.column_slices();
    let mut free: Vec<usize> = (0..all.len()).collect();
    let mut weights = vec![0.0; all.len()];
    while !free.is_empty() {
        let cols: Vec<&[f64]> = free.iter().map(|&i| all[i]).collect();
        let chol = SymMatrix::gram(&cols)
            .cholesky()
            .ok_or_else(|| Error::InvalidParameter("singular normal equations".into()))?;
        let rhs: Vec<f64> = cols.iter().map(|c| dot(c, data)).collect();
        let x = chol.solve(&rhs);
        if x.iter().all(|&v| v >= 0.0) {
            for (&i, v) in free.iter().zip(x) {
                weights[i] = v;
            }
            return Ok(weights);
        }
        free = free
            .into_iter()
            .zip(x)
            .filter(|&(_, v)| v > 0.0)
            .map(|(i, _)| i)
            .collect();
    }
    Ok(weights)
}

/// Spreads column weights over `q` and normalizes.
fn to_distribution(model: &Model, weights: &[f64]) -> Result<NumberDistribution> {
    let mut probs = vec![0.0; model.max_q as usize + 1];
    for (col, &w) in model.columns.iter().zip(weights) {
        match model.statistic {
            Statistic::SubsetCount => probs[col.key as usize] += w,
            Statistic::OddSiteCount { region_atoms: n } => {
                // the spectrum only sees |2q − N|: split evenly between the mirror pair
                probs[((n + col.key) / 2) as usize] += 0.5 * w;
                probs[((n - col.key) / 2) as usize] += 0.5 * w;
            }
        }
    }
    if !(probs.iter().sum::<f64>() > 0.0) {
        return Err(Error::InvalidParameter(
            "spectrum carries no comb weight".into(),
        ));
    }
    NumberDistribution::normalized(0, probs, model.statistic)
}

fn linear_inversion(
    model: &Model,
    data: &[f64],
    peak: f64,
    condition: f64,
) -> Result<InferenceResult> {
    let weights = nonnegative_solve(model, data)?;
    let fitted: Vec<f64> = (0..data.len())
        .map(|j| {
            model
                .columns
                .iter()
                .zip(&weights)
                .map(|(c, w)| w * c.values[j])
                .sum()
        })
        .collect();
    let distribution = to_distribution(model, &weights)?;
    Ok(InferenceResult {
        mean: distribution.mean(),
        variance: distribution.variance(),
        residual: rms_residual(&fitted, data, peak),
        distribution,
        method: InferenceMethod::LinearInversion,
        condition,
    })
}

/// Weighted least-squares parabola through `ln s` on the points above 10 % of
/// the peak, giving a centre and width in detuning units.
fn log_parabola(grid: &[f64], data: &[f64], peak: f64) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(data)
        .filter(|&(_, &s)| s >= 0.1 * peak)
        .map(|(&x, &s)| (x, s))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let x0 = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    // weight s² compensates for the log transform of additive noise
    let mut m = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for &(x, s) in &pts {
        let u = x - x0;
        let basis = [1.0, u, u * u];
        let w = s * s;
        let y = math::ln(s);
        for i in 0..3 {
            r[i] += w * basis[i] * y;
            for j in 0..3 {
                m[i][j] += w * basis[i] * basis[j];
            }
        }
    }
    let gram = SymMatrix::from_rows(3, m.iter().flatten().copied().collect());
    let c = gram.cholesky()?.solve(&r);
    if !(c[2] < 0.0) {
        return None;
    }
    Some((x0 - c[1] / (2.0 * c[2]), math::sqrt(-0.5 / c[2])))
}

fn envelope_fit(
    model: &Model,
    spectrum: &Spectrum,
    params: &CavityParams,
    mapping: Mapping,
    condition: f64,
) -> Result<InferenceResult> {
    let data = spectrum.values();
    let grid = spectrum.detunings();
    let peak = peak_of(data);
    let statistic = model.statistic;
    let max_q = model.max_q;

    // initial centre and width in units of q
    let (center_dp, width_dp) = log_parabola(grid, data, peak).unwrap_or_else(|| {
        let (x, _) = spectrum.peak();
        (x, grid[grid.len() - 1] - grid[0])
    });
    let (mu0, sigma0) = match mapping {
        Mapping::SingleMode => (center_dp / params.delta0(), width_dp / params.delta0()),
        Mapping::TwoModeMax => (
            center_dp / (2.0 * params.delta1()),
            width_dp / (2.0 * params.delta1()),
        ),
        Mapping::TwoModeMin => (max_q as f64 / 2.0, width_dp / (2.0 * params.delta1())),
    };
    let sigma0 = sigma0.max(0.5);

    // full curves per q, so the Gaussian can put weight anywhere on 0..=max_q
    let curves: Vec<Vec<f64>> = (0..=max_q)
        .map(|q| {
            mapping
                .resonance(q, statistic)
                .map(|r| curve(r, params, grid))
        })
        .collect::<Result<_>>()?;
    let forward = |mu: f64, sigma: f64| -> (NumberDistribution, Vec<f64>) {
        let dist = GaussianApprox {
            center: mu,
            width: sigma,
        }
        .discretize(max_q, statistic);
        let mut out = vec![0.0; grid.len()];
        for (q, p) in dist.iter() {
            if p > 0.0 {
                for (o, v) in out.iter_mut().zip(&curves[q as usize]) {
                    *o += p * v;
                }
            }
        }
        (dist, out)
    };
    // the overall scale is profiled out
    let misfit = |x: [f64; 2]| -> f64 {
        let (_, m) = forward(x[0], math::exp(x[1]));
        let mm = dot(&m, &m);
        if !(mm > 0.0) {
            return f64::INFINITY;
        }
        let a = dot(&m, data) / mm;
        m.iter()
            .zip(data)
            .map(|(mi, d)| (a * mi - d) * (a * mi - d))
            .sum()
    };
    let (best, _) = minimize_2d(misfit, [mu0, math::ln(sigma0)], [0.5, 0.2], 1e-14, 4000);
    let (distribution, m) = forward(best[0], math::exp(best[1]));
    let a = dot(&m, data) / dot(&m, &m);
    let fitted: Vec<f64> = m.iter().map(|v| a * v).collect();
    Ok(InferenceResult {
        mean: distribution.mean(),
        variance: distribution.variance(),
        residual: rms_residual(&fitted, data, peak),
        distribution,
        method: InferenceMethod::EnvelopeFit,
        condition,
    })
}

/// Estimates the distribution behind `spectrum` with default options.
pub fn extract_distribution(
    spectrum: &Spectrum,
    params: &CavityParams,
    mapping: Mapping,
) -> Result<InferenceResult> {
    extract_distribution_with(spectrum, params, mapping, &InferenceOptions::default())
}

pub fn extract_distribution_with(
    spectrum: &Spectrum,
    params: &CavityParams,
    mapping: Mapping,
    opts: &InferenceOptions,
) -> Result<InferenceResult> {
    let data = spectrum.values();
    let peak = peak_of(data);
    if !(peak > 0.0) {
        return Err(Error::InvalidParameter(
            "spectrum is identically zero".into(),
        ));
    }
    let model = build_model(spectrum, params, mapping, opts.region_atoms)?;
    let condition = SymMatrix::gram(&model.column_slices()).condition();
    match opts.method {
        Some(InferenceMethod::EnvelopeFit) => {
            envelope_fit(&model, spectrum, params, mapping, condition)
        }
        Some(InferenceMethod::LinearInversion) => linear_inversion(&model, data, peak, condition),
        None => {
            if condition <= opts.condition_limit {
                if let Ok(r) = linear_inversion(&model, data, peak, condition) {
                    return Ok(r);
                }
            }
            envelope_fit(&model, spectrum, params, mapping, condition)
        }
    }
}

/// SF-like when `variance / mean` exceeds `threshold`.
pub fn classify_phase(result: &InferenceResult, threshold: f64) -> Result<Phase> {
    if !(result.mean > 1e-12) {
        return Err(Error::IndeterminatePhase);
    }
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "phase threshold {threshold}"
        )));
    }
    Ok(if result.variance / result.mean > threshold {
        Phase::SfLike
    } else {
        Phase::MiLike
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LatticeRegion;
    use crate::spectra::{refine_grid, spectrum_expectation, state_spectrum, uniform_grid};
    use crate::states::{sf_imbalance_distribution, sf_subset_distribution, AtomicState};
    use proptest::prelude::*;

    fn sf_spectrum(kappa: f64) -> (Spectrum, CavityParams) {
        let p = CavityParams::with_kappa(kappa).unwrap();
        let base = uniform_grid(0.0, 30.0, 2001).unwrap();
        let centers: Vec<f64> = (0..=30).map(|q| q as f64).collect();
        let grid = refine_grid(&base, &centers, kappa).unwrap();
        let d = sf_subset_distribution(30, 30, 15).unwrap();
        (
            spectrum_expectation(&d, Mapping::SingleMode, &p, &grid).unwrap(),
            p,
        )
    }

    #[test]
    fn clean_comb_round_trip() {
        let (s, p) = sf_spectrum(0.05);
        let r = extract_distribution(&s, &p, Mapping::SingleMode).unwrap();
        assert_eq!(r.method, InferenceMethod::LinearInversion);
        let truth = sf_subset_distribution(30, 30, 15).unwrap();
        for q in 0..=30 {
            assert!((r.distribution.prob(q) - truth.prob(q)).abs() < 1e-3);
        }
        assert!((r.mean - 15.0).abs() < 1e-6);
        assert!((r.variance - 7.5).abs() < 1e-6);
        assert!(r.residual < 1e-8);
    }

    #[test]
    fn mott_round_trip() {
        let p = CavityParams::with_kappa(0.05).unwrap();
        let grid = uniform_grid(0.0, 30.0, 2001).unwrap();
        let region = LatticeRegion::new(30, 15).unwrap();
        let s = state_spectrum(
            &AtomicState::mott_uniform(30, 30).unwrap(),
            &region,
            Mapping::SingleMode,
            &p,
            &grid,
        )
        .unwrap();
        let r = extract_distribution(&s, &p, Mapping::SingleMode).unwrap();
        assert!((r.mean - 15.0).abs() < 1e-6);
        assert!(r.variance < 1e-6);
        assert_eq!(
            classify_phase(&r, DEFAULT_PHASE_THRESHOLD),
            Ok(Phase::MiLike)
        );
    }

    #[test]
    fn broadened_comb_moments() {
        let (s, p) = sf_spectrum(1.0);
        let r = extract_distribution(&s, &p, Mapping::SingleMode).unwrap();
        assert!((r.mean / 15.0 - 1.0).abs() < 5e-3);
        assert!((r.variance / 7.5 - 1.0).abs() < 0.05);
        let forced = extract_distribution_with(
            &s,
            &p,
            Mapping::SingleMode,
            &InferenceOptions {
                method: Some(InferenceMethod::EnvelopeFit),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(forced.method, InferenceMethod::EnvelopeFit);
        assert!((forced.mean / 15.0 - 1.0).abs() < 5e-3, "{}", forced.mean);
        assert!(
            (forced.variance / 7.5 - 1.0).abs() < 0.05,
            "{}",
            forced.variance
        );
    }

    #[test]
    fn strongly_overlapping_lines_fall_back_to_envelope() {
        let (s, p) = sf_spectrum(5.0);
        let r = extract_distribution(&s, &p, Mapping::SingleMode).unwrap();
        assert_eq!(r.method, InferenceMethod::EnvelopeFit);
        assert!(r.condition > DEFAULT_CONDITION_LIMIT);
        assert!((r.mean / 15.0 - 1.0).abs() < 5e-3);
        assert!((r.variance / 7.5 - 1.0).abs() < 0.05);
    }

    #[test]
    fn two_mode_round_trips() {
        let p = CavityParams::with_kappa(0.05).unwrap();
        let grid = uniform_grid(-2.0, 62.0, 4001).unwrap();
        let d = sf_subset_distribution(30, 30, 15).unwrap();
        let s = spectrum_expectation(&d, Mapping::TwoModeMax, &p, &grid).unwrap();
        let r = extract_distribution(&s, &p, Mapping::TwoModeMax).unwrap();
        // q = 0 is invisible at a maximum; its weight is 2^-30
        assert!((r.mean - 15.0).abs() < 1e-6);
        assert!((r.variance - 7.5).abs() < 1e-5);

        let d = sf_imbalance_distribution(30, 30).unwrap();
        let s = spectrum_expectation(&d, Mapping::TwoModeMin, &p, &grid).unwrap();
        let opts = InferenceOptions {
            region_atoms: Some(30),
            ..Default::default()
        };
        let r = extract_distribution_with(&s, &p, Mapping::TwoModeMin, &opts).unwrap();
        // a balanced configuration leaves no trace, so the rest is renormalized
        let seen = 1.0 - d.prob(15);
        assert_eq!(r.distribution.prob(15), 0.0);
        for q in (0..=30).filter(|&q| q != 15) {
            assert!(
                (r.distribution.prob(q) - d.prob(q) / seen).abs() < 1e-9,
                "q = {q}"
            );
        }
        assert!(extract_distribution(&s, &p, Mapping::TwoModeMin).is_err());
    }

    #[test]
    fn residual_grows_with_broadening() {
        let mut last = 0.0;
        for kappa in [0.02, 0.05, 0.1] {
            let (s, p) = sf_spectrum(kappa);
            let r = extract_distribution(&s, &p, Mapping::SingleMode).unwrap();
            assert!((r.mean / 15.0 - 1.0).abs() < 5e-3);
            assert!((r.variance / 7.5 - 1.0).abs() < 0.02);
            assert!(r.residual + 1e-12 >= last);
            last = r.residual;
        }
    }

    #[test]
    fn phase_rules() {
        let mk = |mean, variance| InferenceResult {
            distribution: NumberDistribution::delta(0, Statistic::SubsetCount),
            mean,
            variance,
            residual: 0.0,
            method: InferenceMethod::LinearInversion,
            condition: 1.0,
        };
        assert_eq!(classify_phase(&mk(15.0, 0.0), 0.1), Ok(Phase::MiLike));
        assert_eq!(classify_phase(&mk(15.0, 7.5), 0.1), Ok(Phase::SfLike));
        assert_eq!(
            classify_phase(&mk(0.0, 0.0), 0.1),
            Err(Error::IndeterminatePhase)
        );
    }

    #[test]
    fn empty_spectrum_is_rejected() {
        let p = CavityParams::with_kappa(0.1).unwrap();
        let grid = uniform_grid(0.0, 10.0, 11).unwrap();
        let s = Spectrum::new(
            grid.clone(),
            vec![0.0; 11],
            crate::SpectrumMeta::new("x", "single", p),
        )
        .unwrap();
        assert!(extract_distribution(&s, &p, Mapping::SingleMode).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn drive_strength_does_not_matter(scale in 0.01f64..100.0, k in 3usize..=27) {
            let p = CavityParams::with_kappa(0.1).unwrap();
            let grid = uniform_grid(-1.0, 31.0, 1601).unwrap();
            let d = sf_subset_distribution(30, 30, k).unwrap();
            let a = spectrum_expectation(&d, Mapping::SingleMode, &p, &grid).unwrap();
            let ps = p.with_eta0(0.1 * scale).unwrap();
            let b = spectrum_expectation(&d, Mapping::SingleMode, &ps, &grid).unwrap();
            let ra = extract_distribution(&a, &p, Mapping::SingleMode).unwrap();
            let rb = extract_distribution(&b, &ps, Mapping::SingleMode).unwrap();
            for q in 0..=30 {
                prop_assert!((ra.distribution.prob(q) - rb.distribution.prob(q)).abs() < 1e-9);
            }
        }
    }
}
