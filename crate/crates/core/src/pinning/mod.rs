//! Pinning coordinates: the half-inverse maps of each block, their
//! compositions along admissible words, and periodic points.

mod chain;
mod cycle;
mod pair;

use num_complex::Complex64;
use thiserror::Error;

use crate::analytic::SolveError;
use crate::model::SymbolId;

pub use chain::{iterate_pinning, IteratedPinning, PinnedChain};
pub use cycle::{periodic_point, periodic_point_in, CycleRecord};
pub use pair::{build_pinning_pair, PinningJet, PinningPair, PinningTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PinningError {
    #[error("solver failed on word {word:?} at {at:?}: {source}")]
    Solve {
        word: Vec<SymbolId>,
        at: (Complex64, Complex64),
        #[source]
        source: SolveError,
    },
    #[error("sign of the stable partial changes on edge {edge:?} near {at:?}")]
    SignInconsistency {
        edge: (SymbolId, SymbolId),
        at: (f64, f64),
    },
    #[error("inadmissible word: {0}")]
    Admissibility(String),
    #[error("periodic point of {word:?} has imaginary part {imag:e}")]
    NonRealPoint { word: Vec<SymbolId>, imag: f64 },
    #[error("cycle {word:?} is not hyperbolic (multipliers {lambda_e}, {lambda_f})")]
    NonHyperbolic {
        word: Vec<SymbolId>,
        lambda_e: f64,
        lambda_f: f64,
    },
    #[error("cycle {word:?} has non-real multipliers")]
    ComplexMultipliers { word: Vec<SymbolId> },
}

impl PinningError {
    /// Underlying solver error, if any.
    pub fn solve_error(&self) -> Option<&SolveError> {
        match self {
            PinningError::Solve { source, .. } => Some(source),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::SolveOptions;
    use crate::model::examples;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn linear_pair() {
        let m = examples::linear_saddle();
        let p = build_pinning_pair(&m, (0, 0), &SolveOptions::default()).unwrap();
        let (s, u) = p.eval(c(0.3), c(0.6)).unwrap();
        assert!((s - 0.3).norm() < 1e-15);
        assert!((u - 0.15).norm() < 1e-15);
        assert_eq!(p.sign_s, 1.0);
    }

    #[test]
    fn flipped_sign() {
        let m = examples::flipped_saddle();
        let p = build_pinning_pair(&m, (0, 0), &SolveOptions::default()).unwrap();
        assert_eq!(p.sign_s, -1.0);
        assert!((p.phi_s(c(0.1), c(0.4)).unwrap() + 0.2).norm() < 1e-15);
    }

    #[test]
    fn normal_form_pair() {
        let m = examples::parabolic_pa();
        let p = build_pinning_pair(&m, (0, 0), &SolveOptions::default()).unwrap();
        let z = Complex64::new(0.1, 0.05);
        let (s, u) = p.eval(c(0.4), z).unwrap();
        assert!((s - (z - z * z)).norm() < 1e-15);
        assert!((u - 0.2).norm() < 1e-15);
    }

    #[test]
    fn two_step_linear() {
        let m = examples::linear_saddle();
        let (s, u, ratio) =
            iterate_pinning(&m, &[0, 0, 0], c(0.4), c(0.8), &SolveOptions::default()).unwrap();
        assert!((s - 0.2).norm() < 1e-14);
        assert!((u - 0.1).norm() < 1e-14);
        assert!(ratio <= 0.999);
    }

    #[test]
    fn mixed_word_identity() {
        let m = examples::parabolic_pa();
        let opts = SolveOptions::default();
        let table = PinningTable::new(&m, &opts).unwrap();
        let it = IteratedPinning::new(&table, &[0, 0, 1]).unwrap();
        for k in 0..10 {
            let w1 = c(-0.8 + 0.16 * k as f64);
            let z2 = c(-0.7 + 0.15 * k as f64);
            assert!(it.identity_residual(w1, z2).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn parabolic_only_word_rejected() {
        let m = examples::parabolic_pa();
        let err =
            iterate_pinning(&m, &[0, 0], c(0.1), c(0.1), &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, PinningError::Admissibility(_)));
    }

    #[test]
    fn saddle_cycles() {
        let m = examples::linear_saddle();
        let opts = SolveOptions::default();
        let r = periodic_point(&m, &[0], &opts).unwrap();
        assert!(r.point.0.norm() < 1e-14 && r.point.1.norm() < 1e-14);
        assert!((r.multipliers.0 - 0.5).abs() < 1e-15 && (r.multipliers.1 - 2.0).abs() < 1e-15);
        assert!((r.det_factor - 0.5).abs() < 1e-15);
        assert!((r.trace_term - 2.0).abs() < 1e-14);
        let r2 = periodic_point(&m, &[0, 0], &opts).unwrap();
        assert!((r2.trace_term - 4.0 / 9.0).abs() < 1e-14);
    }
}
