//! Atomic states as probability distributions of a single counting statistic.
//!
//! Every photon number this crate computes depends on the Fock configuration
//! only through one integer `q` (the atom number on a set of sites), or for a
//! diffraction minimum with `K < M` through the pair (odd-site count,
//! even-site count). The multinomial superfluid weights therefore collapse to
//! binomial or trinomial distributions, which are evaluated here in a form
//! that stays accurate up to about a million atoms.

use alloc::{format, vec, vec::Vec};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::geometry::{LatticeRegion, OccupationVector};
use crate::math::{self, binomial_pmf};
use crate::{Error, Result};

/// Allowed deviation of the total probability from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Probabilities below this fraction of the largest one are dropped from the
/// stored support of the reduced distributions.
pub const TAIL_CUTOFF: f64 = 1e-16;

/// Which counting variable a distribution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// Atom number on a set of sites, e.g. `N_K` on the illuminated region.
    SubsetCount,
    /// Atom number on the odd illuminated sites when the illuminated region
    /// holds exactly `region_atoms` atoms; the odd-even imbalance is
    /// `2q - region_atoms`.
    OddSiteCount { region_atoms: u32 },
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::SubsetCount => "subset-count",
            Statistic::OddSiteCount { .. } => "odd-site-count",
        }
    }
}

/// Probability mass function `p(q)` on a contiguous window `offset..offset+len`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberDistribution {
    offset: u32,
    probs: Vec<f64>,
    statistic: Statistic,
    truncated_mass: f64,
}

impl NumberDistribution {
    /// Distribution on `0..probs.len()`; must already be normalized.
    pub fn from_probabilities(probs: Vec<f64>, statistic: Statistic) -> Result<Self> {
        Self::from_support(0, probs, statistic)
    }

    /// Distribution on `offset..offset + probs.len()`; must already be normalized.
    pub fn from_support(offset: u32, probs: Vec<f64>, statistic: Statistic) -> Result<Self> {
        let dist = Self {
            offset,
            probs,
            statistic,
            truncated_mass: 0.0,
        };
        dist.validate()?;
        Ok(dist)
    }

    /// Like [`Self::from_support`] but rescales the weights to unit mass.
    pub fn normalized(offset: u32, mut probs: Vec<f64>, statistic: Statistic) -> Result<Self> {
        check_entries(offset, &probs)?;
        let total = math::pairwise_sum(&probs);
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::NotNormalized { total });
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Self::from_support(offset, probs, statistic)
    }

    pub fn delta(q: u32, statistic: Statistic) -> Self {
        Self {
            offset: q,
            probs: vec![1.0],
            statistic,
            truncated_mass: 0.0,
        }
    }

    /// Builds a distribution from a full pmf over `0..probs.len()`, dropping
    /// tails below [`TAIL_CUTOFF`] of the maximum and recording their mass.
    fn truncated(probs: Vec<f64>, statistic: Statistic) -> Self {
        let max = probs.iter().cloned().fold(0.0, f64::max);
        let keep = |p: &f64| *p >= TAIL_CUTOFF * max && *p > 0.0;
        let first = probs.iter().position(keep).unwrap_or(0);
        let last = probs.iter().rposition(keep).unwrap_or(0);
        let truncated_mass =
            math::pairwise_sum(&probs[..first]) + math::pairwise_sum(&probs[last + 1..]);
        Self {
            offset: first as u32,
            probs: probs[first..=last].to_vec(),
            statistic,
            truncated_mass,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_entries(self.offset, &self.probs)?;
        let total = self.total_mass() + self.truncated_mass;
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { total });
        }
        Ok(())
    }

    pub fn statistic(&self) -> Statistic {
        self.statistic
    }

    /// Smallest stored value of `q`.
    pub fn offset(&self) -> u32 {
        self.offset
    }

    /// Largest stored value of `q`.
    pub fn max_q(&self) -> u32 {
        self.offset + self.probs.len() as u32 - 1
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Mass dropped from the tails when the distribution was built.
    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Mass of the stored support.
    pub fn total_mass(&self) -> f64 {
        math::pairwise_sum(&self.probs)
    }

    pub fn prob(&self, q: u32) -> f64 {
        q.checked_sub(self.offset)
            .and_then(|i| self.probs.get(i as usize).copied())
            .unwrap_or(0.0)
    }

    /// `(q, p(q))` over the stored support, including zero entries.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.offset + i as u32, p))
    }

    pub fn mean(&self) -> f64 {
        let terms: Vec<f64> = self.iter().map(|(q, p)| q as f64 * p).collect();
        math::pairwise_sum(&terms) / self.total_mass()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let terms: Vec<f64> = self
            .iter()
            .map(|(q, p)| {
                let d = q as f64 - mean;
                d * d * p
            })
            .collect();
        math::pairwise_sum(&terms) / self.total_mass()
    }

    /// The single outcome of a delta distribution, if this is one.
    pub fn as_delta(&self) -> Option<u32> {
        let mut nonzero = self.iter().filter(|&(_, p)| p > 0.0);
        match (nonzero.next(), nonzero.next()) {
            (Some((q, _)), None) => Some(q),
            _ => None,
        }
    }

    /// Total-variation distance `½ Σ |p(q) - p'(q)|`.
    pub fn total_variation(&self, other: &NumberDistribution) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = self.max_q().max(other.max_q());
        let diffs: Vec<f64> = (lo..=hi)
            .map(|q| (self.prob(q) - other.prob(q)).abs())
            .collect();
        0.5 * math::pairwise_sum(&diffs)
    }

    /// `λ p + (1 - λ) p'` on the union of both supports.
    pub fn mixture(&self, other: &NumberDistribution, lambda: f64) -> Result<NumberDistribution> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight {lambda} outside [0, 1]"
            )));
        }
        if self.statistic != other.statistic {
            return Err(Error::InvalidParameter(
                "cannot mix distributions of different statistics".into(),
            ));
        }
        let lo = self.offset.min(other.offset);
        let hi = self.max_q().max(other.max_q());
        let probs = (lo..=hi)
            .map(|q| lambda * self.prob(q) + (1.0 - lambda) * other.prob(q))
            .collect();
        Ok(NumberDistribution {
            offset: lo,
            probs,
            statistic: self.statistic,
            truncated_mass: lambda * self.truncated_mass + (1.0 - lambda) * other.truncated_mass,
        })
    }
}

fn check_entries(offset: u32, probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::NotNormalized { total: 0.0 });
    }
    for (i, &p) in probs.iter().enumerate() {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::InvalidProbability {
                q: offset + i as u32,
                value: p,
            });
        }
    }
    Ok(())
}

/// Joint distribution of the atom numbers `(q_a, q_b)` on two disjoint site
/// subsets. Only entries above the tail cutoff are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    atoms: u32,
    entries: Vec<(u32, u32, f64)>,
    truncated_mass: f64,
}

impl JointDistribution {
    pub fn atoms(&self) -> u32 {
        self.atoms
    }

    /// `(q_a, q_b, p)` triples in row-major order of `(q_a, q_b)`.
    pub fn entries(&self) -> &[(u32, u32, f64)] {
        &self.entries
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    pub fn prob(&self, qa: u32, qb: u32) -> f64 {
        self.entries
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&(qa, qb)))
            .map(|i| self.entries[i].2)
            .unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        let ps: Vec<f64> = self.entries.iter().map(|e| e.2).collect();
        math::pairwise_sum(&ps)
    }

    /// Marginal distribution of `q_a`.
    pub fn marginal_a(&self) -> NumberDistribution {
        let mut probs = vec![0.0; self.atoms as usize + 1];
        for &(a, _, p) in &self.entries {
            probs[a as usize] += p;
        }
        NumberDistribution {
            offset: 0,
            probs,
            statistic: Statistic::SubsetCount,
            truncated_mass: self.truncated_mass,
        }
    }

    /// Distribution of `q_a + q_b`.
    pub fn sum_distribution(&self) -> NumberDistribution {
        let mut probs = vec![0.0; self.atoms as usize + 1];
        for &(a, b, p) in &self.entries {
            probs[(a + b) as usize] += p;
        }
        NumberDistribution {
            offset: 0,
            probs,
            statistic: Statistic::SubsetCount,
            truncated_mass: self.truncated_mass,
        }
    }
}

/// Gaussian approximation of a reduced distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianApprox {
    pub center: f64,
    pub width: f64,
}

impl GaussianApprox {
    /// Gaussian density sampled at `q = 0..=max_q` and renormalized; a zero
    /// width gives a delta at the nearest integer.
    pub fn discretize(&self, max_q: u32, statistic: Statistic) -> NumberDistribution {
        if self.width == 0.0 {
            let q = math::round(self.center).clamp(0.0, max_q as f64) as u32;
            return NumberDistribution::delta(q, statistic);
        }
        let probs: Vec<f64> = (0..=max_q)
            .map(|q| math::normal_pdf(q as f64, self.center, self.width))
            .collect();
        let total = math::pairwise_sum(&probs);
        NumberDistribution {
            offset: 0,
            probs: probs.into_iter().map(|p| p / total).collect(),
            statistic,
            truncated_mass: 0.0,
        }
    }
}

/// Mott insulator: the atom number on the illuminated sites is sharp.
pub fn mi_distribution(
    fillings: &OccupationVector,
    region: &LatticeRegion,
) -> Result<NumberDistribution> {
    check_sites(fillings, region)?;
    Ok(NumberDistribution::delta(
        fillings.illuminated_total(region),
        Statistic::SubsetCount,
    ))
}

/// Mott insulator seen through the odd-site count of the illuminated region.
pub fn mi_odd_site_distribution(
    fillings: &OccupationVector,
    region: &LatticeRegion,
) -> Result<NumberDistribution> {
    check_sites(fillings, region)?;
    let (odd, even) = fillings.odd_even_totals(region);
    Ok(NumberDistribution::delta(
        odd,
        Statistic::OddSiteCount {
            region_atoms: odd + even,
        },
    ))
}

/// Uniform Mott filling `n = N/M`; `M` must divide `N`.
pub fn uniform_filling(atoms: u32, sites: usize) -> Result<OccupationVector> {
    if sites == 0 || !(atoms as usize).is_multiple_of(sites) {
        return Err(Error::NonUniformFilling { atoms, sites });
    }
    Ok(OccupationVector::uniform(sites, atoms / sites as u32))
}

fn check_sites(fillings: &OccupationVector, region: &LatticeRegion) -> Result<()> {
    if fillings.sites() != region.sites() {
        return Err(Error::DimensionMismatch {
            expected: region.sites(),
            got: fillings.sites(),
        });
    }
    Ok(())
}

fn check_subset(sites: usize, subset: usize) -> Result<()> {
    if sites == 0 {
        return Err(Error::InvalidRegion {
            sites,
            illuminated: subset,
        });
    }
    if subset > sites {
        return Err(Error::SubsetTooLarge { subset, sites });
    }
    Ok(())
}

fn binomial(n: u32, subset: usize, sites: usize, statistic: Statistic) -> NumberDistribution {
    let p = subset as f64 / sites as f64;
    let q = (sites - subset) as f64 / sites as f64;
    let probs = (0..=n).map(|k| binomial_pmf(n, k, p, q)).collect();
    NumberDistribution::truncated(probs, statistic)
}

/// Superfluid atom number on `subset` of `sites` sites:
/// `Binomial(N, subset / sites)`.
pub fn sf_subset_distribution(
    atoms: u32,
    sites: usize,
    subset: usize,
) -> Result<NumberDistribution> {
    check_subset(sites, subset)?;
    Ok(binomial(atoms, subset, sites, Statistic::SubsetCount))
}

/// Superfluid odd-site count with the whole lattice illuminated:
/// `Binomial(N, 1/2)`. Odd `M` is rejected.
pub fn sf_imbalance_distribution(atoms: u32, sites: usize) -> Result<NumberDistribution> {
    if sites == 0 {
        return Err(Error::InvalidRegion {
            sites,
            illuminated: sites,
        });
    }
    if !sites.is_multiple_of(2) {
        return Err(Error::OddLattice(sites));
    }
    Ok(binomial(
        atoms,
        sites / 2,
        sites,
        Statistic::OddSiteCount {
            region_atoms: atoms,
        },
    ))
}

/// Superfluid atom numbers on two disjoint subsets of sizes `subset_a` and
/// `subset_b`: the trinomial
/// `N!/(q_a! q_b! r!) (Q_a/M)^q_a (Q_b/M)^q_b (1-(Q_a+Q_b)/M)^r`.
pub fn joint_subset_distribution(
    atoms: u32,
    sites: usize,
    subset_a: usize,
    subset_b: usize,
) -> Result<JointDistribution> {
    check_subset(sites, subset_a + subset_b)?;
    let pa = subset_a as f64 / sites as f64;
    let qa = (sites - subset_a) as f64 / sites as f64;
    let rest = sites - subset_a;
    let mut full = Vec::new();
    for a in 0..=atoms {
        let pa_k = binomial_pmf(atoms, a, pa, qa);
        let left = atoms - a;
        for b in 0..=left {
            // q_b given q_a is Binomial(N - q_a, Q_b / (M - Q_a))
            let pb_k = if rest == 0 {
                if b == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                binomial_pmf(
                    left,
                    b,
                    subset_b as f64 / rest as f64,
                    (rest - subset_b) as f64 / rest as f64,
                )
            };
            full.push((a, b, pa_k * pb_k));
        }
    }
    let max = full.iter().map(|e| e.2).fold(0.0, f64::max);
    let (kept, dropped): (Vec<_>, Vec<_>) = full
        .into_iter()
        .partition(|e| e.2 > 0.0 && e.2 >= TAIL_CUTOFF * max);
    let dropped: Vec<f64> = dropped.into_iter().map(|e| e.2).collect();
    Ok(JointDistribution {
        atoms,
        entries: kept,
        truncated_mass: math::pairwise_sum(&dropped),
    })
}

/// Centre `N Q / M` and width `sqrt(N (Q/M)(1 - Q/M))`.
pub fn gaussian_approx(atoms: u32, sites: usize, subset: usize) -> Result<GaussianApprox> {
    if atoms == 0 {
        return Err(Error::InvalidParameter(
            "Gaussian approximation needs at least one atom".into(),
        ));
    }
    check_subset(sites, subset)?;
    let f = subset as f64 / sites as f64;
    let n = atoms as f64;
    Ok(GaussianApprox {
        center: n * f,
        width: math::sqrt(n * f * (1.0 - f)),
    })
}

/// Poisson distribution with the given mean on `0..=max_q`, renormalized.
pub fn poisson_distribution(
    mean: f64,
    max_q: u32,
    statistic: Statistic,
) -> Result<NumberDistribution> {
    if !(mean >= 0.0 && mean.is_finite()) {
        return Err(Error::InvalidParameter(format!("Poisson mean {mean}")));
    }
    let probs = (0..=max_q).map(|k| math::poisson_pmf(k, mean)).collect();
    NumberDistribution::normalized(0, probs, statistic)
}

/// State after a measurement that found the statistic equal to `outcome`.
pub fn project_measurement(dist: &NumberDistribution, outcome: u32) -> Result<NumberDistribution> {
    if dist.prob(outcome) > 0.0 {
        Ok(NumberDistribution::delta(outcome, dist.statistic()))
    } else {
        Err(Error::ImpossibleOutcome(outcome))
    }
}

/// Draws `q` with probability `p(q)` by inverse-CDF lookup.
pub fn sample_outcome<R: RngCore + ?Sized>(dist: &NumberDistribution, rng: &mut R) -> u32 {
    let total = dist.total_mass();
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * total;
    let mut cumulative = 0.0;
    let mut last = dist.offset();
    for (q, p) in dist.iter() {
        if p <= 0.0 {
            continue;
        }
        cumulative += p;
        last = q;
        if u < cumulative {
            return q;
        }
    }
    last
}

/// [`sample_outcome`] with a ChaCha8 generator seeded from `seed`.
pub fn sample_outcome_seeded(dist: &NumberDistribution, seed: u64) -> u32 {
    sample_outcome(dist, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Prescribed atomic quantum state.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomicState {
    /// Product of Fock states with the given site fillings.
    MottInsulator(OccupationVector),
    /// Multinomial superposition of all configurations of `atoms` on `sites`.
    Superfluid { atoms: u32, sites: usize },
    /// Arbitrary distribution of the statistic the spectrum depends on.
    Custom(NumberDistribution),
}

impl AtomicState {
    pub fn mott_uniform(atoms: u32, sites: usize) -> Result<Self> {
        uniform_filling(atoms, sites).map(AtomicState::MottInsulator)
    }

    pub fn superfluid(atoms: u32, sites: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidRegion {
                sites,
                illuminated: 0,
            });
        }
        Ok(AtomicState::Superfluid { atoms, sites })
    }

    pub fn label(&self) -> &'static str {
        match self {
            AtomicState::MottInsulator(_) => "mi",
            AtomicState::Superfluid { .. } => "sf",
            AtomicState::Custom(_) => "custom",
        }
    }

    /// Number of lattice sites, when the state carries one.
    pub fn sites(&self) -> Option<usize> {
        match self {
            AtomicState::MottInsulator(f) => Some(f.sites()),
            AtomicState::Superfluid { sites, .. } => Some(*sites),
            AtomicState::Custom(_) => None,
        }
    }

    /// Distribution of the illuminated atom number `N_K`.
    pub fn subset_distribution(&self, region: &LatticeRegion) -> Result<NumberDistribution> {
        match self {
            AtomicState::MottInsulator(f) => mi_distribution(f, region),
            AtomicState::Superfluid { atoms, sites } => {
                check_state_sites(*sites, region)?;
                sf_subset_distribution(*atoms, *sites, region.illuminated())
            }
            AtomicState::Custom(d) => Ok(d.clone()),
        }
    }
}

fn check_state_sites(sites: usize, region: &LatticeRegion) -> Result<()> {
    if sites != region.sites() {
        return Err(Error::DimensionMismatch {
            expected: region.sites(),
            got: sites,
        });
    }
    Ok(())
}
