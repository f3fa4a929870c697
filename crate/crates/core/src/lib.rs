//! Cavity transmission spectra of ultracold atoms in a one-dimensional optical
//! lattice.
//!
//! The dispersive shift of a cavity mode depends on how many atoms sit in the
//! illuminated part of the lattice. Every Fock configuration therefore shifts
//! the cavity resonance by a different amount, and the transmission spectrum
//! of a quantum state is a comb of Lorentzians weighted by the distribution of
//! that atom number. This crate provides:
//!
//! * [`geometry`]: mode functions on lattice sites and the coupling sums `D_lm`,
//! * [`states`]: Mott-insulator, superfluid and custom number distributions,
//! * [`spectra`]: steady-state photon numbers, exact combs, Gaussian envelopes
//!   and the bad-cavity convolution integrals,
//! * [`oracle`]: brute-force enumeration of all Fock configurations,
//! * [`inference`]: recovery of the number distribution from a spectrum.
//!
//! The crate is `no_std` and only needs `alloc`. Frequencies are expressed in
//! units of the single-atom dispersive shift `δ₀` unless stated otherwise.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

mod error;
pub mod geometry;
pub mod inference;
mod linalg;
pub mod math;
pub mod oracle;
pub mod quadrature;
pub mod spectra;
pub mod states;

pub use error::{Error, Result};
pub use geometry::{LatticeRegion, ModeGeometry, ModeKind, OccupationVector, PairClass};
pub use inference::{InferenceMethod, InferenceResult, Phase};
pub use spectra::{CavityParams, Mapping, Spectrum, SpectrumMeta};
pub use states::{AtomicState, GaussianApprox, JointDistribution, NumberDistribution, Statistic};
