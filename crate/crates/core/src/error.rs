use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock_pimsner::RelationReport;
use crate::toeplitz_index::IndexReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification of failures, used to pick process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Malformed input or a configuration outside an operation's domain.
    InvalidInput,
    /// The computation ran but its numerical quality guard tripped.
    Numerical,
    /// Two routes that must agree did not. Indicates a bug.
    TheoremViolation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid of {grid} points is below the anti-aliasing floor of {floor} points")]
    GridTooCoarse { grid: usize, floor: usize },

    #[error("symbol is not invertible on the circle: min |f| = {min_modulus:e} <= {zero_tol:e}")]
    NonInvertibleSymbol { min_modulus: f64, zero_tol: f64 },

    #[error(
        "phase increment {step:.6} at grid step {index} has magnitude >= pi/2; refine the grid"
    )]
    PhaseStepTooLarge { index: usize, step: f64 },

    #[error("numerical quality: {0}")]
    NumericalQuality(String),

    #[error("index unstable under doubling: N={n} gives {at_n}, N={n2} gives {at_2n}")]
    UnstableIndex {
        n: usize,
        n2: usize,
        at_n: i64,
        at_2n: i64,
    },

    #[error(
        "ambiguous singular-value gap {gap:e} (< {required:e}) at N={n}; use a larger truncation"
    )]
    AmbiguousGap { n: usize, gap: f64, required: f64 },

    #[error("system is gapless: spectral gap {gap:e}")]
    Gapless { mass: f64, gap: f64 },

    #[error("delta={delta} lies outside the usable gap (gap={gap}, margin={margin})")]
    DeltaOutsideGap { delta: f64, gap: f64, margin: f64 },

    #[error(
        "edge eigenvalue {eigenvalue:e} lies within {window:e} of +-delta={delta}; perturb delta"
    )]
    DeltaOnEigenvalue {
        delta: f64,
        eigenvalue: f64,
        window: f64,
    },

    #[error("point is not on the boundary: |rho| = {residual:e} > {tol:e}")]
    OffBoundary { residual: f64, tol: f64 },

    #[error("critical boundary point: |grad rho| = {norm:e}")]
    CriticalPoint { norm: f64 },

    #[error("rho does not change sign along the ray up to t = {t_max}")]
    UnboundedDirection { t_max: f64 },

    #[error("index theorem violated for {}: svd={} fedosov={} winding_ap={} winding_logd={}",
        .0.symbol, .0.index_svd, .0.index_fedosov, .0.winding_ap, .0.winding_logd)]
    IndexTheoremViolation(Box<IndexReport>),

    #[error("relation check failed: {}", .0.failures().join(", "))]
    RelationViolation(Box<RelationReport>),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidInput(_)
            | Error::GridTooCoarse { .. }
            | Error::NonInvertibleSymbol { .. }
            | Error::Gapless { .. }
            | Error::DeltaOutsideGap { .. }
            | Error::OffBoundary { .. }
            | Error::CriticalPoint { .. }
            | Error::UnboundedDirection { .. } => ErrorKind::InvalidInput,
            Error::PhaseStepTooLarge { .. }
            | Error::NumericalQuality(_)
            | Error::UnstableIndex { .. }
            | Error::AmbiguousGap { .. }
            | Error::DeltaOnEigenvalue { .. } => ErrorKind::Numerical,
            Error::IndexTheoremViolation(_) | Error::RelationViolation(_) => {
                ErrorKind::TheoremViolation
            }
        }
    }
}
