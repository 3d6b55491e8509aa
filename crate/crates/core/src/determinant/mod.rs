//! Trace sums over periodic points, the determinant power series, and the
//! closed-form objects it is compared against.

mod factor;
mod parabolic;
mod series;
mod slits;
mod traces;

use thiserror::Error;

use crate::model::SymbolId;
use crate::pinning::PinningError;

pub use factor::{closed_form_factor, FactorKind, FactorSpec};
pub use parabolic::{
    neutral_direction_multiplier, parabolic_spectrum_prediction, predicted_interval,
    ParabolicPrediction, ParabolicSpectrumPrediction,
};
pub use series::{determinant_coefficients, evaluate_determinant, DeterminantSeries};
pub use slits::{slit_distance, slit_membership, slit_set, SlitCase, SlitSet};
pub use traces::{trace_sequence, KahanSum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeterminantError {
    #[error("cycle {word:?}: {source}")]
    Cycle {
        word: Vec<SymbolId>,
        #[source]
        source: PinningError,
    },
    #[error(transparent)]
    Pinning(#[from] PinningError),
    #[error("series tail is not converging (ratio {ratio})")]
    TailNotConverging { ratio: f64 },
    #[error("multipliers ({lambda_e}, {lambda_f}) do not fit a {kind} factor")]
    KindMismatch {
        kind: &'static str,
        lambda_e: f64,
        lambda_f: f64,
    },
    #[error("no multiplier of ({lambda_e}, {lambda_f}) is ±1")]
    NotNeutral { lambda_e: f64, lambda_f: f64 },
    #[error("symbol {symbol}: neutral-direction multiplier {lambda} has modulus ≥ 1")]
    NeutralDirectionWrong { symbol: SymbolId, lambda: f64 },
    #[error("truncated series has no zero")]
    NoZero,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
}
