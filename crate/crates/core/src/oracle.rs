//! Brute-force superfluid expectation values.
//!
//! Every Fock configuration `(q_1, …, q_M)` with `Σ q_i = N` is visited with
//! its multinomial weight `N!/(q_1!…q_M!) M^{−N}`. This is exponentially
//! expensive and exists to validate the binomial and trinomial reductions.

use alloc::{collections::BTreeMap, format, string::String, vec, vec::Vec};
use core::ops::Range;

use num_complex::Complex64;

use crate::geometry::{LatticeRegion, OccupationVector};
use crate::math::{self, ln_factorial, PairwiseAccumulator};
use crate::spectra::{
    single_mode_photons, state_spectrum, two_mode_photons, CavityParams, Mapping, Spectrum,
    SpectrumMeta,
};
use crate::states::{
    joint_subset_distribution, sf_imbalance_distribution, sf_subset_distribution, AtomicState,
    NumberDistribution, Statistic,
};
use crate::{Error, Result};

/// Default limit on the number of configurations visited.
pub const DEFAULT_CAP: u64 = 100_000_000;

/// A configuration with its log superfluid weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedConfiguration {
    pub occupation: OccupationVector,
    pub log_weight: f64,
}

impl WeightedConfiguration {
    pub fn weight(&self) -> f64 {
        math::exp(self.log_weight)
    }
}

/// Number of compositions of `atoms` into `sites` nonnegative parts,
/// `C(N + M − 1, M − 1)`, saturating at `u128::MAX`.
pub fn composition_count(atoms: u32, sites: usize) -> u128 {
    if sites == 0 {
        return u128::from(atoms == 0);
    }
    binomial_count(atoms as u128 + sites as u128 - 1, sites as u128 - 1)
}

fn binomial_count(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // c · (n − i) is divisible by (i + 1) after the multiplication
        c = match c.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    c
}

fn check_cap(atoms: u32, sites: usize, cap: u64) -> Result<u128> {
    if sites == 0 {
        return Err(Error::InvalidParameter(
            "enumeration needs at least one site".into(),
        ));
    }
    let count = composition_count(atoms, sites);
    if count > cap as u128 {
        return Err(Error::EnumerationCap { count, cap });
    }
    Ok(count)
}

/// Composition with the given rank in the enumeration order, which is
/// decreasing lexicographic: `(N, 0, …, 0)` has rank 0 and `(0, …, 0, N)` is
/// last.
pub fn unrank(atoms: u32, sites: usize, mut rank: u128) -> Option<Vec<u32>> {
    if sites == 0 || rank >= composition_count(atoms, sites) {
        return None;
    }
    let mut occ = vec![0u32; sites];
    let mut left = atoms;
    for i in 0..sites - 1 {
        let rest = sites - i - 1;
        // try the largest first component, counting completions of the tail
        let mut q = left;
        loop {
            let block = composition_count(left - q, rest);
            if rank < block {
                break;
            }
            rank -= block;
            q -= 1;
        }
        occ[i] = q;
        left -= q;
    }
    occ[sites - 1] = left;
    Some(occ)
}

/// Advances to the next composition; false after the last one.
fn next_composition(occ: &mut [u32]) -> bool {
    let m = occ.len();
    if m < 2 {
        return false;
    }
    let Some(i) = (0..m - 1).rev().find(|&i| occ[i] > 0) else {
        return false;
    };
    let tail: u32 = occ[i + 1..].iter().sum();
    occ[i] -= 1;
    for x in occ[i + 1..].iter_mut() {
        *x = 0;
    }
    occ[i + 1] = tail + 1;
    true
}

fn log_weight(occ: &[u32], atoms: u32, ln_sites: f64, ln_fact: &[f64]) -> f64 {
    let denom: f64 = occ.iter().map(|&q| ln_fact[q as usize]).sum();
    ln_fact[atoms as usize] - denom - atoms as f64 * ln_sites
}

/// Iterator over a contiguous rank range of compositions.
#[derive(Debug, Clone)]
pub struct Compositions {
    atoms: u32,
    ln_sites: f64,
    ln_fact: Vec<f64>,
    current: Vec<u32>,
    remaining: u128,
}

impl Compositions {
    fn new(atoms: u32, sites: usize, ranks: Range<u128>) -> Self {
        let total = composition_count(atoms, sites);
        let end = ranks.end.min(total);
        let start = ranks.start.min(end);
        let current = unrank(atoms, sites, start).unwrap_or_default();
        Self {
            atoms,
            ln_sites: math::ln(sites as f64),
            ln_fact: (0..=atoms).map(ln_factorial).collect(),
            current,
            remaining: end - start,
        }
    }

    /// Calls `visit(occupation, weight)` for each remaining configuration.
    pub fn for_each_weighted<F: FnMut(&[u32], f64)>(mut self, mut visit: F) {
        while self.remaining > 0 {
            let w = math::exp(log_weight(
                &self.current,
                self.atoms,
                self.ln_sites,
                &self.ln_fact,
            ));
            visit(&self.current, w);
            self.remaining -= 1;
            if self.remaining > 0 {
                next_composition(&mut self.current);
            }
        }
    }
}

impl Iterator for Compositions {
    type Item = WeightedConfiguration;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let item = WeightedConfiguration {
            occupation: OccupationVector::new(self.current.clone()),
            log_weight: log_weight(&self.current, self.atoms, self.ln_sites, &self.ln_fact),
        };
        self.remaining -= 1;
        if self.remaining > 0 {
            next_composition(&mut self.current);
        }
        Some(item)
    }
}

/// All configurations of `atoms` on `sites`, refusing more than
/// [`DEFAULT_CAP`].
pub fn enumerate_configurations(atoms: u32, sites: usize) -> Result<Compositions> {
    enumerate_configurations_capped(atoms, sites, DEFAULT_CAP)
}

pub fn enumerate_configurations_capped(atoms: u32, sites: usize, cap: u64) -> Result<Compositions> {
    let count = check_cap(atoms, sites, cap)?;
    Ok(Compositions::new(atoms, sites, 0..count))
}

/// Configurations with ranks in `ranks`, for splitting the enumeration into
/// independent chunks.
pub fn enumerate_chunk(
    atoms: u32,
    sites: usize,
    ranks: Range<u128>,
    cap: u64,
) -> Result<Compositions> {
    check_cap(atoms, sites, cap)?;
    Ok(Compositions::new(atoms, sites, ranks))
}

/// Superfluid expectation `M^{−N} Σ N!/(q_1!…q_M!) f(q)`.
pub fn exact_expectation<F: FnMut(&[u32]) -> f64>(f: F, atoms: u32, sites: usize) -> Result<f64> {
    exact_expectation_capped(f, atoms, sites, DEFAULT_CAP)
}

pub fn exact_expectation_capped<F: FnMut(&[u32]) -> f64>(
    mut f: F,
    atoms: u32,
    sites: usize,
    cap: u64,
) -> Result<f64> {
    let mut acc = PairwiseAccumulator::new();
    enumerate_configurations_capped(atoms, sites, cap)?
        .for_each_weighted(|occ, w| acc.push(w * f(occ)));
    Ok(acc.total())
}

/// Vector-valued expectation: `f` fills one value per output slot.
pub fn exact_expectation_vec<F: FnMut(&[u32], &mut [f64])>(
    mut f: F,
    len: usize,
    atoms: u32,
    sites: usize,
    cap: u64,
) -> Result<Vec<f64>> {
    let mut accs = vec![PairwiseAccumulator::new(); len];
    let mut buf = vec![0.0; len];
    enumerate_configurations_capped(atoms, sites, cap)?.for_each_weighted(|occ, w| {
        f(occ, &mut buf);
        for (acc, &v) in accs.iter_mut().zip(&buf) {
            acc.push(w * v);
        }
    });
    Ok(accs.iter().map(PairwiseAccumulator::total).collect())
}

/// Mott-insulator expectation: a single configuration, weight 1.
pub fn mott_expectation<F: FnOnce(&[u32]) -> f64>(f: F, fillings: &OccupationVector) -> f64 {
    f(fillings.as_slice())
}

/// Distribution of an integer statistic under superfluid weights.
pub fn exact_distribution<F: FnMut(&[u32]) -> u32>(
    mut stat: F,
    statistic: Statistic,
    atoms: u32,
    sites: usize,
    cap: u64,
) -> Result<NumberDistribution> {
    let mut bins: Vec<PairwiseAccumulator> = Vec::new();
    enumerate_configurations_capped(atoms, sites, cap)?.for_each_weighted(|occ, w| {
        let v = stat(occ) as usize;
        if bins.len() <= v {
            bins.resize(v + 1, PairwiseAccumulator::new());
        }
        bins[v].push(w);
    });
    NumberDistribution::from_probabilities(
        bins.iter().map(PairwiseAccumulator::total).collect(),
        statistic,
    )
}

/// Joint distribution of two integer statistics, keyed by `(a, b)`.
pub fn exact_joint_distribution<A, B>(
    mut stat_a: A,
    mut stat_b: B,
    atoms: u32,
    sites: usize,
    cap: u64,
) -> Result<BTreeMap<(u32, u32), f64>>
where
    A: FnMut(&[u32]) -> u32,
    B: FnMut(&[u32]) -> u32,
{
    let mut bins: BTreeMap<(u32, u32), PairwiseAccumulator> = BTreeMap::new();
    enumerate_configurations_capped(atoms, sites, cap)?
        .for_each_weighted(|occ, w| bins.entry((stat_a(occ), stat_b(occ))).or_default().push(w));
    Ok(bins.into_iter().map(|(k, acc)| (k, acc.total())).collect())
}

/// Atom number on the sites selected by the bit mask.
pub fn masked_count(occ: &[u32], mask: u64) -> u32 {
    occ.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &q)| q)
        .sum()
}

/// Atom numbers on the odd- and even-numbered sites (1-based) among the first
/// `illuminated`.
pub fn odd_even_counts(occ: &[u32], illuminated: usize) -> (u32, u32) {
    occ[..illuminated]
        .iter()
        .enumerate()
        .fold((0, 0), |(odd, even), (i, &q)| {
            if i % 2 == 0 {
                (odd + q, even)
            } else {
                (odd, even + q)
            }
        })
}

/// Enumerated superfluid spectrum for one of the standard mappings with the
/// first `region.illuminated()` sites lit. The two-mode minimum uses the
/// odd/even site sums directly, without any reduction.
pub fn exact_spectrum(
    atoms: u32,
    region: &LatticeRegion,
    mapping: Mapping,
    params: &CavityParams,
    grid: &[f64],
    cap: u64,
) -> Result<Spectrum> {
    let k = region.illuminated();
    let values = exact_expectation_vec(
        |occ, out| {
            let (odd, even) = odd_even_counts(occ, k);
            let lit = (odd + even) as f64;
            for (v, &dp) in out.iter_mut().zip(grid) {
                *v = match mapping {
                    Mapping::SingleMode => single_mode_photons(lit, params, dp),
                    Mapping::TwoModeMax => two_mode_photons(lit, lit * lit, params, dp),
                    Mapping::TwoModeMin => {
                        let d = odd as f64 - even as f64;
                        two_mode_photons(lit, d * d, params, dp)
                    }
                };
            }
        },
        grid.len(),
        atoms,
        region.sites(),
        cap,
    )?;
    Spectrum::new(
        grid.to_vec(),
        values,
        SpectrumMeta::new("sf", mapping.name(), *params),
    )
}

/// Largest relative deviation `|a − b| / max(|a|, |b|)` over paired values.
pub fn max_relative_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            if x == y {
                0.0
            } else {
                math::abs(x - y) / math::abs(x).max(math::abs(y))
            }
        })
        .fold(
            if a.len() == b.len() {
                0.0
            } else {
                f64::INFINITY
            },
            f64::max,
        )
}

/// Outcome of one reduction check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub atoms: u32,
    pub sites: usize,
    /// Illuminated sites, or the number of subset pairs for the trinomial
    /// check.
    pub detail: usize,
    pub error: f64,
    pub passed: bool,
}

/// Settings for [`reduction_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub max_atoms: u32,
    pub max_sites: usize,
    pub params: CavityParams,
    pub grid: Vec<f64>,
    pub tolerance: f64,
    pub cap: u64,
}

impl SweepConfig {
    /// `κ = 0.1`, `δ₀ = δ₁ = 1`, 301 detunings on `[−1, 2·max_atoms + 1]`,
    /// relative tolerance `1e−12`.
    pub fn new(max_atoms: u32, max_sites: usize) -> Self {
        let hi = 2.0 * max_atoms as f64 + 1.0;
        let points = 301;
        let grid = (0..points)
            .map(|i| -1.0 + (hi + 1.0) * i as f64 / (points - 1) as f64)
            .collect();
        Self {
            max_atoms,
            max_sites,
            params: CavityParams::default(),
            grid,
            tolerance: 1e-12,
            cap: DEFAULT_CAP,
        }
    }
}

fn record(
    name: &str,
    atoms: u32,
    sites: usize,
    detail: usize,
    error: f64,
    tolerance: f64,
) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        atoms,
        sites,
        detail,
        error,
        passed: error <= tolerance,
    }
}

fn distribution_error(exact: &NumberDistribution, reduced: &NumberDistribution) -> f64 {
    let top = exact.max_q().max(reduced.max_q());
    (0..=top)
        .map(|q| math::abs(exact.prob(q) - reduced.prob(q)))
        .fold(0.0, f64::max)
}

/// Compares every reduction against enumeration for all `N ≤ max_atoms`,
/// `1 ≤ M ≤ max_sites` and `1 ≤ K ≤ M`. Spectra are compared by relative
/// error, probabilities by absolute error.
pub fn reduction_sweep(config: &SweepConfig) -> Result<Vec<CheckRecord>> {
    if config.max_sites > 63 {
        return Err(Error::InvalidParameter(format!(
            "at most 63 sites, got {}",
            config.max_sites
        )));
    }
    let tol = config.tolerance;
    let p = &config.params;
    let grid = &config.grid;
    let mut out = Vec::new();
    for m in 1..=config.max_sites {
        for n in 0..=config.max_atoms {
            check_cap(n, m, config.cap)?;
            let norm = exact_expectation_capped(|_| 1.0, n, m, config.cap)?;
            out.push(record(
                "weight normalization",
                n,
                m,
                m,
                math::abs(norm - 1.0),
                tol,
            ));

            for k in 1..=m {
                let region = LatticeRegion::new(m, k)?;
                let lit = |occ: &[u32]| occ[..k].iter().sum::<u32>();
                let exact = exact_distribution(lit, Statistic::SubsetCount, n, m, config.cap)?;
                let err = distribution_error(&exact, &sf_subset_distribution(n, m, k)?);
                out.push(record("subset binomial", n, m, k, err, tol));

                let mean = exact_expectation_capped(|occ| lit(occ) as f64, n, m, config.cap)?;
                let expected = n as f64 * k as f64 / m as f64;
                out.push(record(
                    "subset mean",
                    n,
                    m,
                    k,
                    math::abs(mean - expected) / expected.max(1.0),
                    tol,
                ));

                // relabelling: the last K sites behave like the first K
                let mirrored = exact_expectation_capped(
                    |occ| {
                        single_mode_photons(
                            occ[m - k..].iter().sum::<u32>() as f64,
                            p,
                            grid[grid.len() / 3],
                        )
                    },
                    n,
                    m,
                    config.cap,
                )?;
                let direct = exact_expectation_capped(
                    |occ| single_mode_photons(lit(occ) as f64, p, grid[grid.len() / 3]),
                    n,
                    m,
                    config.cap,
                )?;
                out.push(record(
                    "permutation symmetry",
                    n,
                    m,
                    k,
                    max_relative_error(&[mirrored], &[direct]),
                    tol,
                ));

                let state = AtomicState::superfluid(n, m)?;
                for (name, mapping) in [
                    ("single-mode spectrum", Mapping::SingleMode),
                    ("two-mode maximum spectrum", Mapping::TwoModeMax),
                    ("two-mode minimum spectrum", Mapping::TwoModeMin),
                ] {
                    let exact = exact_spectrum(n, &region, mapping, p, grid, config.cap)?;
                    let reduced = state_spectrum(&state, &region, mapping, p, grid)?;
                    out.push(record(
                        name,
                        n,
                        m,
                        k,
                        max_relative_error(exact.values(), reduced.values()),
                        tol,
                    ));
                }
            }

            if m % 2 == 0 {
                let exact = exact_distribution(
                    |occ| odd_even_counts(occ, m).0,
                    Statistic::OddSiteCount { region_atoms: n },
                    n,
                    m,
                    config.cap,
                )?;
                let err = distribution_error(&exact, &sf_imbalance_distribution(n, m)?);
                out.push(record("odd-site binomial", n, m, m, err, tol));
            }

            let (pairs, err) = trinomial_check(n, m, config.cap)?;
            out.push(record("trinomial", n, m, pairs, err, tol));
        }
    }
    Ok(out)
}

/// Worst absolute deviation between the enumerated joint distribution and the
/// trinomial over all ordered pairs of disjoint site subsets.
fn trinomial_check(atoms: u32, sites: usize, cap: u64) -> Result<(usize, f64)> {
    let full: u64 = (1u64 << sites) - 1;
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    for a in 0..=full {
        let rest = full & !a;
        // every submask of the complement
        let mut b = rest;
        loop {
            let exact = exact_joint_distribution(
                |o| masked_count(o, a),
                |o| masked_count(o, b),
                atoms,
                sites,
                cap,
            )?;
            let reduced = joint_subset_distribution(
                atoms,
                sites,
                a.count_ones() as usize,
                b.count_ones() as usize,
            )?;
            for qa in 0..=atoms {
                for qb in 0..=atoms - qa {
                    let e = exact.get(&(qa, qb)).copied().unwrap_or(0.0);
                    worst = worst.max(math::abs(e - reduced.prob(qa, qb)));
                }
            }
            pairs += 1;
            if b == 0 {
                break;
            }
            b = (b - 1) & rest;
        }
    }
    Ok((pairs, worst))
}

/// Enumerated photon numbers `(⟨a₀†a₀⟩, ⟨a₁†a₁⟩)` for an arbitrary mode
/// pair; `couplings` maps a configuration to `(D₀₀, D₁₁, D₁₀)`.
pub fn exact_general_expectation<F: FnMut(&[u32]) -> (f64, f64, Complex64)>(
    mut couplings: F,
    params: &CavityParams,
    grid: &[f64],
    atoms: u32,
    sites: usize,
    cap: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.len();
    let both = exact_expectation_vec(
        |occ, out| {
            let (d00, d11, d10) = couplings(occ);
            for (j, &dp) in grid.iter().enumerate() {
                let (n0, n1) = crate::spectra::steady_state_photons(d00, d11, d10, params, dp);
                out[j] = n0;
                out[n + j] = n1;
            }
        },
        2 * n,
        atoms,
        sites,
        cap,
    )?;
    let (a, b) = both.split_at(n);
    Ok((a.to_vec(), b.to_vec()))
}
