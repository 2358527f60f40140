//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input outside domain: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} = {got:.3e} over limit {limit:.3e}")]
    Capacity {
        what: &'static str,
        got: f64,
        limit: f64,
    },

    #[error("pole of {what} at s = {re} + {im}i")]
    Pole { what: &'static str, re: f64, im: f64 },

    #[error("ill-conditioned: |zeta(s)| = {zeta_abs:.3e} below {min:.3e}")]
    Conditioning { zeta_abs: f64, min: f64 },

    #[error("t = {t} beyond zero-table horizon t_max = {t_max}")]
    Horizon { t: f64, t_max: f64 },

    #[error("zero table incomplete on [{lo}, {hi}]: expected {expected}, found {found}")]
    Incomplete {
        lo: f64,
        hi: f64,
        expected: f64,
        found: usize,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("ordinates not ascending at line {line}")]
    OrderViolation { line: usize },

    #[error("quadrature did not converge: {what}, achieved {achieved:.3e} vs wanted {wanted:.3e}")]
    Numerical {
        what: &'static str,
        achieved: f64,
        wanted: f64,
    },

    #[error("hypothesis fails: |sum| = {value:.6e} not above threshold {threshold:.6e}")]
    HypothesisFailure { value: f64, threshold: f64 },

    #[error(
        "neither AFE branch clears its threshold: |main| = {main_sum:.4e} (needed {need_main:.4e}), \
         |dual| = {dual_sum:.4e} (needed {need_dual:.4e})"
    )]
    BranchFailure {
        main_sum: f64,
        dual_sum: f64,
        need_main: f64,
        need_dual: f64,
    },

    #[error("witness below threshold at stage {stage}: {detail}")]
    StageShortfall { stage: &'static str, detail: String },

    #[error("profile has no value at sigma = {sigma}")]
    ProfileDomain { sigma: f64 },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
