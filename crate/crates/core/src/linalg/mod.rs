//! Dense complex linear algebra over a generic real scalar.

mod eigen;
mod functions;
mod matrix;
mod order;
mod types;

pub use eigen::{eigh, svd, MAX_SWEEPS};
pub use functions::{
    geo_mean_unitary_link, geometric_mean, hermitian_abs, hermitian_sign_symmetry, matrix_abs,
    polar_unitary, sign_and_abs, spectral_apply, sqrt_psd, GEOMEAN_REGULARIZATION,
};
pub use matrix::{DirectSum, Matrix};
pub use order::{
    diag_entries_desc, direct_sum, kyfan_weak_majorization, kyfan_worst, loewner_leq,
    schur_product, weak_log_majorization, LoewnerVerdict,
};
pub use types::{Hermitian, Psd, Spectrum, Symmetry, ToleranceCfg, Unitary};
