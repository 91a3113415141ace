use thiserror::Error;

/// Errors raised by the circuit, spectral and holonomy routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unitary: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("eigensolver did not converge: worst residual {residual:e}")]
    NoConvergence { residual: f64 },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{qubits} qubits exceeds the numeric cap of {cap}")]
    DimensionOverflow { qubits: usize, cap: usize },

    #[error("invalid circuit parameters: {0}")]
    InvalidParams(String),

    #[error("spectrum is degenerate: p_{index} = {value} is even")]
    DegenerateSpectrum { index: usize, value: i64 },

    #[error("all p_j must be odd: p_{index} = {value}")]
    OddParamsRequired { index: usize, value: i64 },

    #[error("parameters {params:?} are not in the {family} family")]
    FamilyMismatch { family: String, params: Vec<i64> },

    #[error("eigenangle degeneracy on the path near lambda in [{start}, {end}] (gap {gap:e})")]
    DegeneracyOnPath { start: f64, end: f64, gap: f64 },

    #[error("path under-resolved: worst step overlap {worst_overlap} (steps = {steps})")]
    UnderResolved { worst_overlap: f64, steps: usize },

    #[error("family is not 2pi-periodic: max endpoint deviation {deviation:e}")]
    NotPeriodic { deviation: f64 },

    #[error("tracked eigenvector did not return to its initial eigenspace within {cycles} cycles")]
    NotClosed { cycles: usize },

    #[error("winding quadrature gave {value}, not within 0.1 of an integer")]
    QuadratureNotConverged { value: f64 },

    #[error("matrix is not a permutation times a diagonal unitary: {0}")]
    NotMonomial(String),

    #[error("circuit parameters must be positive for the subset-sum reduction: p_{index} = {value}")]
    NonPositiveParams { index: usize, value: i64 },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
