//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so every criterion is
//! evaluated and reported even when an earlier one fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use qgrating_core::inference::extract_distribution;
use qgrating_core::oracle::{reduction_sweep, SweepConfig};
use qgrating_core::quadrature::{integrate, QuadOptions};
use qgrating_core::spectra::{
    badcavity_two_mode_max, badcavity_two_mode_min, comb_centers, envelope_single_mode,
    envelope_two_mode_max, envelope_two_mode_min, refine_grid, single_mode_photons,
    spectrum_expectation, state_spectrum, state_terms, uniform_grid, voigt_single_mode,
};
use qgrating_core::states::{
    project_measurement, sample_outcome_seeded, sf_imbalance_distribution, sf_subset_distribution,
};
use qgrating_core::{
    AtomicState, CavityParams, LatticeRegion, Mapping, NumberDistribution, Spectrum, Statistic,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Uniform 2001-point grid with three extra points per half width around
/// every comb line.
fn figure_grid(
    lo: f64,
    hi: f64,
    state: &AtomicState,
    region: &LatticeRegion,
    mapping: Mapping,
    p: &CavityParams,
) -> Vec<f64> {
    let base = uniform_grid(lo, hi, 2001).unwrap();
    let (terms, _) = state_terms(state, region, mapping).unwrap();
    refine_grid(&base, &comb_centers(&terms, p), p.kappa()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Detuning where a single-point evaluation of `f` crosses `level`, by
/// bisection between `a` (above) and `b` (below).
fn crossing<F: Fn(f64) -> f64>(f: F, level: f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if f(m) >= level {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let records = reduction_sweep(&SweepConfig::new(6, 6)).expect("sweep runs");
    let elapsed = start.elapsed().as_secs_f64();
    let spectra: Vec<_> = records
        .iter()
        .filter(|r| r.name.ends_with("spectrum"))
        .collect();
    let worst = spectra.iter().map(|r| r.error).fold(0.0, f64::max);
    let failed: Vec<_> = records.iter().filter(|r| !r.passed).collect();
    outcome(
        failed.is_empty() && worst <= 1e-12 && elapsed < 60.0,
        format!(
            "{} checks ({} spectra), worst spectrum rel. error {:.1e}, {} failing, {:.2} s",
            records.len(),
            spectra.len(),
            worst,
            failed.len(),
            elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = CavityParams::with_kappa(0.1).unwrap();
    let region = LatticeRegion::new(30, 15).unwrap();
    let mi = AtomicState::mott_uniform(30, 30).unwrap();
    let sf = AtomicState::superfluid(30, 30).unwrap();
    let grid = figure_grid(0.0, 30.0, &sf, &region, Mapping::SingleMode, &p);

    let mi_s = state_spectrum(&mi, &region, Mapping::SingleMode, &p, &grid).unwrap();
    let maxima = mi_s.local_maxima();
    let (center, peak) = mi_s.peak();
    let at = |x: f64| {
        state_spectrum(&mi, &region, Mapping::SingleMode, &p, &[x])
            .unwrap()
            .values()[0]
    };
    let left = crossing(at, peak / 2.0, center, center - 10.0 * p.kappa());
    let right = crossing(at, peak / 2.0, center, center + 10.0 * p.kappa());
    let fwhm = right - left;
    let mi_ok = maxima.len() == 1
        && (center - 15.0).abs() <= 0.01
        && (fwhm / (2.0 * p.kappa()) - 1.0).abs() <= 0.01;

    let sf_s = state_spectrum(&sf, &region, Mapping::SingleMode, &p, &grid).unwrap();
    let dist = sf_subset_distribution(30, 30, 15).unwrap();
    let maxima = sf_s.local_maxima();
    let p_max = dist.iter().map(|(_, v)| v).fold(0.0, f64::max);
    let h_max = maxima.iter().map(|m| m.1).fold(0.0, f64::max);
    let mut worst_pos: f64 = 0.0;
    let mut worst_height: f64 = 0.0;
    let mut missing = 0;
    for (q, pq) in dist.iter().filter(|&(_, v)| v >= 1e-3) {
        let target = p.delta0() * q as f64;
        match maxima
            .iter()
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
        {
            Some(&(x, h)) if (x - target).abs() <= 0.05 => {
                worst_pos = worst_pos.max((x - target).abs());
                worst_height = worst_height.max((h / h_max - pq / p_max).abs());
            }
            _ => missing += 1,
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let sf_ok = missing == 0 && worst_pos <= 0.05 && worst_height <= 0.02;
    outcome(
        mi_ok && sf_ok && elapsed < 5.0,
        format!(
            "MI centre {center:.4}, FWHM/2κ {:.5}; SF max offset {worst_pos:.1e}, max height deviation {worst_height:.4}, {missing} lines missing, {elapsed:.2} s",
            fwhm / (2.0 * p.kappa())
        ),
    )
}

fn criterion_3() -> Outcome {
    let p = CavityParams::with_kappa(0.05).unwrap();
    let sf = AtomicState::superfluid(70, 70).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [10usize, 35, 68] {
        let region = LatticeRegion::new(70, k).unwrap();
        let grid = figure_grid(0.0, 72.0, &sf, &region, Mapping::SingleMode, &p);
        let s = state_spectrum(&sf, &region, Mapping::SingleMode, &p, &grid).unwrap();
        let maxima = s.local_maxima();
        // Gaussian maximum-likelihood fit to the peak heights: weighted moments
        let w: f64 = maxima.iter().map(|m| m.1).sum();
        let mu = maxima.iter().map(|m| m.0 * m.1).sum::<f64>() / w;
        let var = maxima.iter().map(|m| (m.0 - mu).powi(2) * m.1).sum::<f64>() / w;
        let expected = envelope_single_mode(70, 70, k, &p).unwrap().sigma();
        let err = (var.sqrt() / expected - 1.0).abs();
        ok &= err <= 0.05;
        parts.push(format!(
            "K={k}: σ {:.4} vs {:.4} ({:.2}%)",
            var.sqrt(),
            expected,
            100.0 * err
        ));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, m, kappa) in [
        (30u32, 30usize, 0.1),
        (70, 70, 0.05),
        (12, 6, 1.0),
        (5, 5, 0.3),
    ] {
        let p = CavityParams::with_kappa(kappa).unwrap();
        let region = LatticeRegion::whole(m).unwrap();
        let grid = uniform_grid(-5.0, n as f64 + 5.0, 2001).unwrap();
        let sf = state_spectrum(
            &AtomicState::superfluid(n, m).unwrap(),
            &region,
            Mapping::SingleMode,
            &p,
            &grid,
        )
        .unwrap();
        let mi = state_spectrum(
            &AtomicState::mott_uniform(n, m).unwrap(),
            &region,
            Mapping::SingleMode,
            &p,
            &grid,
        )
        .unwrap();
        for (a, b) in sf.values().iter().zip(mi.values()) {
            worst = worst.max(rel(*a, *b));
        }
    }
    outcome(
        worst <= 1e-12,
        format!("worst rel. difference SF vs MI {worst:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for kappa in [0.1, 1.0] {
        let p = CavityParams::with_kappa(kappa).unwrap();
        let grid = uniform_grid(-10.0, 70.0, 4001).unwrap();
        for k in (2..=30).step_by(2) {
            let region = LatticeRegion::new(30, k).unwrap();
            let s = state_spectrum(
                &AtomicState::mott_uniform(30, 30).unwrap(),
                &region,
                Mapping::TwoModeMin,
                &p,
                &grid,
            )
            .unwrap();
            worst = worst.max(s.values().iter().fold(0.0_f64, |a, &v| a.max(v)) / p.peak());
        }
    }
    let p = CavityParams::with_kappa(0.1).unwrap();
    let region = LatticeRegion::whole(30).unwrap();
    let sf = AtomicState::superfluid(30, 30).unwrap();
    let grid = figure_grid(0.0, 60.0, &sf, &region, Mapping::TwoModeMin, &p);
    let s = state_spectrum(&sf, &region, Mapping::TwoModeMin, &p, &grid).unwrap();
    let lines: Vec<f64> = s
        .local_maxima()
        .into_iter()
        .filter(|m| m.1 >= 1e-3 * s.peak().1)
        .map(|m| m.0)
        .collect();
    // the balanced configurations leave a gap at δ₀N; every line sits on the
    // 2δ₀ lattice and the closest neighbours are 2δ₀ apart
    let off_lattice = lines
        .iter()
        .map(|x| (x / 2.0 - (x / 2.0).round()).abs() * 2.0)
        .fold(0.0, f64::max);
    let min_spacing = lines
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let nonzero = s.peak().1 > 0.0;
    outcome(
        worst <= 1e-15 && nonzero && lines.len() >= 2 && off_lattice <= 0.05 && (min_spacing - 2.0).abs() <= 0.05,
        format!(
            "MI max {worst:.1e}·|η₀|²/κ²; SF has {} lines, largest offset from the 2δ₀ lattice {off_lattice:.1e}, closest spacing {min_spacing:.4}",
            lines.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for kappa in [0.1, 1.0] {
        let p = CavityParams::with_kappa(kappa).unwrap();
        let region = LatticeRegion::new(30, 15).unwrap();
        let mi = AtomicState::mott_uniform(30, 30).unwrap();
        let grid = figure_grid(-5.0, 50.0, &mi, &region, Mapping::TwoModeMax, &p);
        let s = state_spectrum(&mi, &region, Mapping::TwoModeMax, &p, &grid).unwrap();
        let maxima = s.local_maxima();
        let n_k = 15.0;
        let left = maxima
            .iter()
            .min_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
            .copied();
        let right = maxima
            .iter()
            .min_by(|a, b| (a.0 - 2.0 * n_k).abs().total_cmp(&(b.0 - 2.0 * n_k).abs()))
            .copied();
        let env = envelope_two_mode_max(30, 30, 15, &p).unwrap();
        let (_, satellite) = env.satellite().unwrap();
        match (left, right) {
            (Some(l), Some(r)) => {
                let height_err = (l.1 / satellite - 1.0).abs();
                let good = maxima.len() == 2
                    && l.0.abs() <= 0.05
                    && (r.0 - 2.0 * n_k).abs() <= 0.05
                    && (p.delta1() * n_k < 10.0 * kappa || height_err <= 0.05);
                ok &= good;
                parts.push(format!(
                    "κ={kappa}: lines at {:.3}, {:.3}, left height/(|η₀|²/4κ²) = {:.4}",
                    l.0,
                    r.0,
                    l.1 / satellite
                ));
            }
            _ => {
                ok = false;
                parts.push(format!("κ={kappa}: doublet not found"));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn window_error(approx: &Spectrum, exact: &Spectrum, lo: f64, hi: f64) -> f64 {
    approx
        .detunings()
        .iter()
        .zip(approx.values().iter().zip(exact.values()))
        .filter(|(x, _)| **x >= lo && **x <= hi)
        .map(|(_, (a, e))| (a / e - 1.0).abs())
        .fold(0.0, f64::max)
}

fn criterion_7() -> Outcome {
    let p = CavityParams::with_kappa(1.0).unwrap();
    let sf = AtomicState::superfluid(30, 30).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;

    let env = envelope_single_mode(30, 30, 15, &p).unwrap();
    let (c, s) = (env.center(), env.sigma());
    let grid = uniform_grid(c - 3.0 * s, c + 3.0 * s, 201).unwrap();
    let region = LatticeRegion::new(30, 15).unwrap();
    let comb = state_spectrum(&sf, &region, Mapping::SingleMode, &p, &grid).unwrap();
    match voigt_single_mode(&p, c, s, &grid) {
        Ok(v) => {
            let err = window_error(&v, &comb, c - 3.0 * s, c + 3.0 * s);
            ok &= err <= 0.02;
            parts.push(format!("single {:.2}% (≤2%)", 100.0 * err));
        }
        Err(e) => {
            ok = false;
            parts.push(format!("single: {e}"));
        }
    }

    let env = envelope_two_mode_min(30, 30, &p).unwrap();
    let (c, s) = (env.center(), env.sigma());
    let grid = uniform_grid(c - 3.0 * s, c + 3.0 * s, 201).unwrap();
    let comb = spectrum_expectation(
        &sf_imbalance_distribution(30, 30).unwrap(),
        Mapping::TwoModeMin,
        &p,
        &grid,
    )
    .unwrap();
    match badcavity_two_mode_min(&p, c, s, &grid) {
        Ok(v) => {
            let err = window_error(&v, &comb, c - 3.0 * s, c + 3.0 * s);
            ok &= err <= 0.03;
            parts.push(format!("minimum {:.2}% (≤3%)", 100.0 * err));
        }
        Err(e) => {
            ok = false;
            parts.push(format!("minimum: {e}"));
        }
    }

    let env = envelope_two_mode_max(30, 30, 15, &p).unwrap();
    let (c, s) = (env.center(), env.sigma());
    let grid = uniform_grid(c - 3.0 * s, c + 3.0 * s, 201).unwrap();
    let comb = state_spectrum(&sf, &region, Mapping::TwoModeMax, &p, &grid).unwrap();
    match badcavity_two_mode_max(&p, c, s, &grid) {
        Ok(v) => {
            let err = window_error(&v, &comb, c - 3.0 * s, c + 3.0 * s);
            ok &= err <= 0.03;
            parts.push(format!("maximum {:.2}% (≤3%)", 100.0 * err));
        }
        Err(e) => {
            ok = false;
            parts.push(format!("maximum: {e}"));
        }
    }
    outcome(
        ok,
        format!(
            "κ=δ₀, worst pointwise deviation over ±3σ_ω: {}",
            parts.join(", ")
        ),
    )
}

/// `∫ n(Δp) dΔp` of a single-mode comb by quadrature on a ±200κ window plus
/// the exact Lorentzian tails outside it.
fn integrated(terms: &[(f64, qgrating_core::spectra::Resonance)], p: &CavityParams) -> f64 {
    let centers = comb_centers(terms, p);
    let lo = centers[0] - 200.0 * p.kappa();
    let hi = centers[centers.len() - 1] + 200.0 * p.kappa();
    let mut breaks = vec![lo];
    breaks.extend(centers.iter().copied());
    breaks.push(hi);
    let f = |x: f64| terms.iter().map(|(w, r)| w * r.photons(p, x)).sum::<f64>();
    let opts = QuadOptions {
        abs_tol: 1e-10 * p.peak(),
        ..QuadOptions::default()
    };
    let inner = integrate(f, &breaks, &opts);
    assert!(inner.converged);
    let k = p.kappa();
    let amp = p.eta0() * p.eta0() / k;
    let tails: f64 = terms
        .iter()
        .zip(terms.iter().map(|(_, r)| r.centers(p)[0]))
        .map(|((w, _), c)| w * amp * (PI - ((hi - c) / k).atan() - ((c - lo) / k).atan()))
        .sum();
    inner.value + tails
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    for kappa in [0.05, 0.1, 1.0] {
        let p = CavityParams::with_kappa(kappa).unwrap();
        let expected = PI * p.eta0() * p.eta0() / kappa;
        let mut states: Vec<(AtomicState, LatticeRegion)> = vec![
            (
                AtomicState::mott_uniform(30, 30).unwrap(),
                LatticeRegion::new(30, 15).unwrap(),
            ),
            (
                AtomicState::superfluid(30, 30).unwrap(),
                LatticeRegion::new(30, 15).unwrap(),
            ),
            (
                AtomicState::superfluid(70, 70).unwrap(),
                LatticeRegion::new(70, 10).unwrap(),
            ),
        ];
        let custom =
            NumberDistribution::normalized(3, vec![0.2, 0.0, 0.5, 0.3], Statistic::SubsetCount)
                .unwrap();
        states.push((
            AtomicState::Custom(custom),
            LatticeRegion::new(30, 15).unwrap(),
        ));
        for (state, region) in &states {
            let (terms, _) = state_terms(state, region, Mapping::SingleMode).unwrap();
            worst = worst.max((integrated(&terms, &p) / expected - 1.0).abs());
        }
    }
    outcome(
        worst <= 1e-3,
        format!("worst deviation from π|η₀|²/κ: {:.2e}", worst),
    )
}

fn criterion_9() -> Outcome {
    let p = CavityParams::with_kappa(0.05).unwrap();
    let region = LatticeRegion::new(30, 15).unwrap();
    let sf = AtomicState::superfluid(30, 30).unwrap();
    let grid = figure_grid(0.0, 30.0, &sf, &region, Mapping::SingleMode, &p);
    let s = state_spectrum(&sf, &region, Mapping::SingleMode, &p, &grid).unwrap();
    let r = extract_distribution(&s, &p, Mapping::SingleMode).unwrap();
    let mi = AtomicState::mott_uniform(30, 30).unwrap();
    let s = state_spectrum(&mi, &region, Mapping::SingleMode, &p, &grid).unwrap();
    let rm = extract_distribution(&s, &p, Mapping::SingleMode).unwrap();
    let mean_err = (r.mean / 15.0 - 1.0).abs();
    let var_err = (r.variance / 7.5 - 1.0).abs();
    outcome(
        mean_err <= 5e-3 && var_err <= 0.02 && rm.variance < 1e-3,
        format!(
            "SF mean {:.6} ({:.1e}), variance {:.6} ({:.1e}); MI variance {:.1e}",
            r.mean, mean_err, r.variance, var_err, rm.variance
        ),
    )
}

fn criterion_10() -> Outcome {
    let p = CavityParams::with_kappa(0.1).unwrap();
    let dist = sf_subset_distribution(30, 30, 15).unwrap();
    let grid = uniform_grid(0.0, 30.0, 2001).unwrap();
    let mut outcomes: Vec<u32> = (0..5)
        .map(|seed| sample_outcome_seeded(&dist, seed))
        .collect();
    outcomes.extend([0, 12, 30]);
    let mut worst: f64 = 0.0;
    let mut single = true;
    for &q in &outcomes {
        let projected = project_measurement(&dist, q).unwrap();
        let grid = refine_grid(&grid, &[q as f64], p.kappa()).unwrap();
        let s = spectrum_expectation(&projected, Mapping::SingleMode, &p, &grid).unwrap();
        for (&x, &v) in s.detunings().iter().zip(s.values()) {
            worst = worst.max(rel(v, single_mode_photons(q as f64, &p, x)));
        }
        let maxima = s.local_maxima();
        let (x, _) = s.peak();
        single &= (x - q as f64).abs() < 1e-12 && maxima.len() <= 1;
    }
    outcome(
        worst <= 1e-12 && single,
        format!(
            "outcomes {outcomes:?}: worst rel. deviation from the single Lorentzian {worst:.1e}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", criterion_1),
        ("single-mode comb (N=M=30, K=15, κ=0.1δ₀)", criterion_2),
        ("envelope width (N=M=70, K=10/35/68)", criterion_3),
        ("whole-lattice collapse", criterion_4),
        ("diffraction-minimum Mott null", criterion_5),
        ("diffraction-maximum satellites", criterion_6),
        ("bad-cavity integrals vs comb", criterion_7),
        ("sum rule", criterion_8),
        ("inference round trip", criterion_9),
        ("measurement projection", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let r = run();
        if !r.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if r.passed { "PASS" } else { "FAIL" },
            name,
            r.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
