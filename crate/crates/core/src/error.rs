use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("occupation vector has {got} sites but the lattice has {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid lattice region: {illuminated} illuminated of {sites} sites")]
    InvalidRegion { sites: usize, illuminated: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("site subset of size {subset} exceeds the {sites} lattice sites")]
    SubsetTooLarge { subset: usize, sites: usize },

    #[error("odd/even imbalance needs an even number of sites, got {0}")]
    OddLattice(usize),

    #[error("uniform filling needs the site count to divide the atom number ({atoms} atoms, {sites} sites)")]
    NonUniformFilling { atoms: u32, sites: usize },

    #[error("probabilities sum to {total}, expected 1")]
    NotNormalized { total: f64 },

    #[error("negative or non-finite probability {value} at q = {q}")]
    InvalidProbability { q: u32, value: f64 },

    #[error("outcome {0} has zero probability")]
    ImpossibleOutcome(u32),

    #[error("{mapping} mapping cannot use a {statistic} distribution")]
    MappingMismatch {
        mapping: &'static str,
        statistic: &'static str,
    },

    #[error("detuning grid is empty")]
    EmptyGrid,

    #[error("detuning grid must be finite and strictly increasing (index {0})")]
    UnsortedGrid(usize),

    #[error("quadrature did not converge at detuning {detuning}: error estimate {error:e} above tolerance {tolerance:e}")]
    QuadratureDiverged {
        detuning: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("{count} configurations exceed the enumeration cap of {cap}; use the reduced distributions instead")]
    EnumerationCap { count: u128, cap: u64 },

    #[error("phase is indeterminate for an empty lattice (mean atom number 0)")]
    IndeterminatePhase,

    #[error("spectrum has no resonance positions inside the detuning grid")]
    NoResonances,
}
