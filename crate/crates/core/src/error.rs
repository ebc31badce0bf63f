use thiserror::Error;

/// Every failure mode of the library. Numerical payloads are reported in `f64`
/// regardless of the scalar type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NotConverged { sweeps: usize, residual: f64 },

    #[error("matrix is not positive semidefinite: lambda_min = {lambda_min:e} (allowed {allowed:e})")]
    NotPsd { lambda_min: f64, allowed: f64 },

    #[error("matrix is not Hermitian: max |M - M*| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: max |VV* - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not a symmetry: max |V - V*| = {deviation:e}")]
    NotSymmetry { deviation: f64 },

    #[error("matrix is not normal: |AA* - A*A| = {commutator:e}")]
    NotNormal { commutator: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix data is malformed: {0}")]
    Malformed(String),

    #[error("argument is not positive definite: lambda_min = {lambda_min:e}, lambda_max = {lambda_max:e}")]
    SingularInput { lambda_min: f64, lambda_max: f64 },

    #[error("spectrum has a negative entry {value:e} at position {index}")]
    InvalidSpectrum { index: usize, value: f64 },

    #[error("dominance {which} <= T violated by {amount:e}")]
    DominanceViolated { which: &'static str, amount: f64 },

    #[error("inputs are not contractions: sigma_max = {sigma_max:?} at positions {positions:?}")]
    NotContraction { positions: Vec<usize>, sigma_max: Vec<f64> },

    #[error("index constraint 2j = k + l violated by (j, k, l) = ({j}, {k}, {l})")]
    IndexConstraint { j: usize, k: usize, l: usize },

    #[error("angle {0} outside the open interval (0, pi)")]
    DegenerateAngle(f64),

    #[error("parameter must be positive, got {0}")]
    NonpositiveParam(f64),

    #[error("rank {rank} outside 1..={max}")]
    InvalidRank { rank: usize, max: usize },

    #[error("k = {0} is even; even summand counts are already known to be sharp")]
    EvenK(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty factor list")]
    EmptyFactorList,

    #[error("tolerances must be strictly positive (rel = {rel}, abs = {abs})")]
    InvalidTolerance { rel: f64, abs: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
