use num_complex::Complex64;
use serde::Serialize;

use super::DeterminantError;
use crate::analytic::SolveOptions;
use crate::model::{BlockKind, SymbolId, SymbolicModel};

/// Predicted spectral interval contributed by one parabolic symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicPrediction {
    pub symbol: SymbolId,
    pub kind: &'static str,
    /// `∂₁φ_u(0,0)` for (P.a), `∂₂φ_s(0,0)` for (P.b).
    pub lambda: f64,
    pub predicted_interval: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolicSpectrumPrediction {
    pub entries: Vec<ParabolicPrediction>,
}

impl ParabolicSpectrumPrediction {
    /// Union of the predicted intervals as `[min, max]` hull pieces, sorted.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<_> = self.entries.iter().map(|e| e.predicted_interval).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }
}

/// Interval of the direct-product spectrum for a block of the given kind.
pub fn predicted_interval(kind: BlockKind, lambda: f64) -> (f64, f64) {
    match kind {
        BlockKind::ParabolicA if lambda >= 0.0 => (0.0, 1.0),
        BlockKind::ParabolicA => (lambda, 1.0),
        BlockKind::ParabolicB if lambda >= 0.0 => (0.0, lambda),
        BlockKind::ParabolicB => (-lambda * lambda, -lambda),
        BlockKind::Hyperbolic => unreachable!("hyperbolic blocks have no neutral direction"),
    }
}

/// Multiplier of the hyperbolic direction at the parabolic fixed point of
/// symbol `k`: `∂₁φ_u(0,0)` for (P.a), `∂₂φ_s(0,0)` for (P.b).
pub fn neutral_direction_multiplier(
    model: &SymbolicModel,
    k: usize,
) -> Result<(BlockKind, f64), DeterminantError> {
    let zero = Complex64::new(0.0, 0.0);
    let block = model
        .block(k, k)
        .filter(|_| model.is_parabolic(k))
        .ok_or_else(|| {
            DeterminantError::Invalid(format!("symbol {} is not parabolic", model.id(k)))
        })?;
    let w2 = block
        .stable_inverse(zero, zero, zero, &SolveOptions::default())
        .map_err(|e| DeterminantError::Invalid(format!("stable inverse at the origin: {e}")))?;
    let lambda = match block.kind() {
        BlockKind::ParabolicA => block.unstable_jet(zero, w2, zero).0.re,
        _ => block.stable_jet(zero, w2, zero).1.re,
    };
    Ok((block.kind(), lambda))
}

/// Predicted spectral intervals for every parabolic symbol of `model`.
pub fn parabolic_spectrum_prediction(
    model: &SymbolicModel,
) -> Result<ParabolicSpectrumPrediction, DeterminantError> {
    let mut entries = Vec::new();
    for (k, _) in model.parabolic_symbols() {
        let (kind, lambda) = neutral_direction_multiplier(model, k)?;
        if lambda.abs() >= 1.0 {
            return Err(DeterminantError::NeutralDirectionWrong {
                symbol: model.id(k),
                lambda,
            });
        }
        entries.push(ParabolicPrediction {
            symbol: model.id(k),
            kind: kind.tag(),
            lambda,
            predicted_interval: predicted_interval(kind, lambda),
        });
    }
    Ok(ParabolicSpectrumPrediction { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::examples;

    #[test]
    fn pa_model() {
        let p = parabolic_spectrum_prediction(&examples::parabolic_pa()).unwrap();
        assert_eq!(p.entries.len(), 1);
        assert!((p.entries[0].lambda - 0.5).abs() < 1e-15);
        assert_eq!(p.entries[0].predicted_interval, (0.0, 1.0));
    }

    #[test]
    fn interval_cases() {
        assert_eq!(predicted_interval(BlockKind::ParabolicA, -0.5), (-0.5, 1.0));
        let (a, b) = predicted_interval(BlockKind::ParabolicB, -0.4);
        assert!((a + 0.16).abs() < 1e-15 && (b - 0.4).abs() < 1e-15);
        assert_eq!(predicted_interval(BlockKind::ParabolicB, 0.5), (0.0, 0.5));
    }

    #[test]
    fn pb_model() {
        let p = parabolic_spectrum_prediction(&examples::parabolic_pb()).unwrap();
        assert!((p.entries[0].lambda - 0.5).abs() < 1e-15);
        assert_eq!(p.entries[0].predicted_interval, (0.0, 0.5));
    }
}
