//! Cavity mode profiles on lattice sites and the dispersive coupling sums.
//!
//! Sites are numbered `1..=M` and the illuminated region is always the prefix
//! `1..=K`. A mode is described by the dimensionless phase advance per site
//! `kx_d = |k| d cos θ` and a spatial phase offset `φ`.

use alloc::{format, vec::Vec};
use core::ops::Add;

use num_complex::Complex64;

use crate::{math, Error, Result};

/// Per-site tolerance used by [`classify_pair`].
pub const CLASSIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    /// `u_j = exp(i (j kx_d + φ))`
    Traveling,
    /// `u_j = cos(j kx_d + φ)`
    Standing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGeometry {
    kind: ModeKind,
    kx_d: f64,
    phase: f64,
    label: u8,
}

impl ModeGeometry {
    pub fn new(kind: ModeKind, kx_d: f64, phase: f64) -> Result<Self> {
        if !kx_d.is_finite() || !phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mode phase advance and offset must be finite (kx_d = {kx_d}, phase = {phase})"
            )));
        }
        Ok(Self {
            kind,
            kx_d,
            phase,
            label: 0,
        })
    }

    /// Builds the geometry from the wavenumber-period product `|k| d` and the
    /// angle `theta` between the mode axis and the lattice axis.
    pub fn from_angle(kind: ModeKind, k_d: f64, theta: f64, phase: f64) -> Result<Self> {
        Self::new(kind, k_d * math::cos(theta), phase)
    }

    pub fn traveling(kx_d: f64, phase: f64) -> Result<Self> {
        Self::new(ModeKind::Traveling, kx_d, phase)
    }

    pub fn standing(kx_d: f64, phase: f64) -> Result<Self> {
        Self::new(ModeKind::Standing, kx_d, phase)
    }

    /// A mode with `u_j = 1` on every site (transverse traveling wave).
    pub fn uniform() -> Self {
        Self {
            kind: ModeKind::Traveling,
            kx_d: 0.0,
            phase: 0.0,
            label: 0,
        }
    }

    pub fn with_label(mut self, label: u8) -> Self {
        self.label = label;
        self
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn kx_d(&self) -> f64 {
        self.kx_d
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn label(&self) -> u8 {
        self.label
    }

    /// Mode amplitude at lattice site `site` (1-based).
    pub fn amplitude(&self, site: usize) -> Complex64 {
        mode_function(self, site)
    }
}

/// Mode function `u(site)` for a 1-based lattice site.
pub fn mode_function(geom: &ModeGeometry, site: usize) -> Complex64 {
    let arg = site as f64 * geom.kx_d + geom.phase;
    match geom.kind {
        ModeKind::Traveling => Complex64::new(math::cos(arg), math::sin(arg)),
        ModeKind::Standing => Complex64::new(math::cos(arg), 0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeRegion {
    sites: usize,
    illuminated: usize,
}

impl LatticeRegion {
    pub fn new(sites: usize, illuminated: usize) -> Result<Self> {
        if sites == 0 || illuminated == 0 || illuminated > sites {
            return Err(Error::InvalidRegion { sites, illuminated });
        }
        Ok(Self { sites, illuminated })
    }

    /// Every site illuminated.
    pub fn whole(sites: usize) -> Result<Self> {
        Self::new(sites, sites)
    }

    /// `M`
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// `K`
    pub fn illuminated(&self) -> usize {
        self.illuminated
    }

    /// Number of odd-numbered sites among the illuminated ones.
    pub fn odd_sites(&self) -> usize {
        self.illuminated.div_ceil(2)
    }

    pub fn even_sites(&self) -> usize {
        self.illuminated / 2
    }
}

/// One Fock configuration `(q_1, …, q_M)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    /// `filling` atoms on each of `sites` sites.
    pub fn uniform(sites: usize, filling: u32) -> Self {
        Self(alloc::vec![filling; sites])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn sites(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Atom number on the illuminated prefix, `N_K`.
    pub fn illuminated_total(&self, region: &LatticeRegion) -> u32 {
        self.0.iter().take(region.illuminated()).sum()
    }

    /// Atom numbers on odd and even illuminated sites.
    pub fn odd_even_totals(&self, region: &LatticeRegion) -> (u32, u32) {
        self.0
            .iter()
            .take(region.illuminated())
            .enumerate()
            .fold((0, 0), |(odd, even), (i, &q)| {
                // index 0 is site 1
                if i % 2 == 0 {
                    (odd + q, even)
                } else {
                    (odd, even + q)
                }
            })
    }
}

impl From<Vec<u32>> for OccupationVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl Add for &OccupationVector {
    type Output = OccupationVector;

    fn add(self, rhs: Self) -> OccupationVector {
        assert_eq!(
            self.0.len(),
            rhs.0.len(),
            "occupation vectors differ in length"
        );
        OccupationVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// Site weights `u_l*(r_i) u_m(r_i)` on the illuminated sites, so that
/// `D_lm = Σ_i w_i q_i` can be evaluated for many configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    sites: usize,
    weights: Vec<Complex64>,
}

impl CouplingProfile {
    pub fn new(geom_l: &ModeGeometry, geom_m: &ModeGeometry, region: &LatticeRegion) -> Self {
        let weights = (1..=region.illuminated())
            .map(|site| mode_function(geom_l, site).conj() * mode_function(geom_m, site))
            .collect();
        Self {
            sites: region.sites(),
            weights,
        }
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// `D_lm` for a configuration given as a raw slice; the slice must cover
    /// at least the illuminated sites.
    pub fn evaluate_raw(&self, occupations: &[u32]) -> Complex64 {
        self.weights
            .iter()
            .zip(occupations)
            .fold(Complex64::new(0.0, 0.0), |acc, (w, &q)| acc + w * q as f64)
    }

    pub fn evaluate(&self, occ: &OccupationVector) -> Result<Complex64> {
        if occ.sites() != self.sites {
            return Err(Error::DimensionMismatch {
                expected: self.sites,
                got: occ.sites(),
            });
        }
        Ok(self.evaluate_raw(occ.as_slice()))
    }
}

/// `D_lm = Σ_{i ≤ K} u_l*(r_i) u_m(r_i) q_i` for one Fock configuration.
pub fn coupling_coefficient(
    geom_l: &ModeGeometry,
    geom_m: &ModeGeometry,
    occ: &OccupationVector,
    region: &LatticeRegion,
) -> Result<Complex64> {
    CouplingProfile::new(geom_l, geom_m, region).evaluate(occ)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// `u_1* u_0 = 1` on every illuminated site.
    Maximum,
    /// `u_1* u_0 = (-1)^(i+1)` on every illuminated site.
    Minimum,
    General,
}

/// Classifies a mode pair as a diffraction maximum, minimum or neither.
pub fn classify_pair(
    geom_0: &ModeGeometry,
    geom_1: &ModeGeometry,
    region: &LatticeRegion,
) -> PairClass {
    let profile = CouplingProfile::new(geom_1, geom_0, region);
    let matches = |target: &dyn Fn(usize) -> f64| {
        profile
            .weights()
            .iter()
            .enumerate()
            .all(|(i, w)| (w - Complex64::new(target(i + 1), 0.0)).norm() <= CLASSIFY_TOLERANCE)
    };
    if matches(&|_| 1.0) {
        PairClass::Maximum
    } else if matches(&|site| if site % 2 == 1 { 1.0 } else { -1.0 }) {
        PairClass::Minimum
    } else {
        PairClass::General
    }
}
