use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DeterminantError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Sink,
    Saddle,
    Source,
}

impl FactorKind {
    pub fn name(&self) -> &'static str {
        match self {
            FactorKind::Sink => "sink",
            FactorKind::Saddle => "saddle",
            FactorKind::Source => "source",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sink" => Some(FactorKind::Sink),
            "saddle" => Some(FactorKind::Saddle),
            "source" => Some(FactorKind::Source),
            _ => None,
        }
    }
}

/// A hyperbolic periodic orbit of period `period` with multipliers
/// `λ_E`, `λ_F`, and the truncation `(J, K)` of its product factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub kind: FactorKind,
    pub lambda_e: f64,
    pub lambda_f: f64,
    pub period: u32,
    pub truncation: (usize, usize),
}

impl FactorSpec {
    pub fn check(&self) -> Result<(), DeterminantError> {
        let (e, f) = (self.lambda_e.abs(), self.lambda_f.abs());
        let ok = match self.kind {
            FactorKind::Sink => e < f && f < 1.0,
            FactorKind::Saddle => e < 1.0 && 1.0 < f,
            FactorKind::Source => 1.0 < e && e < f,
        };
        if !ok {
            return Err(DeterminantError::KindMismatch {
                kind: self.kind.name(),
                lambda_e: self.lambda_e,
                lambda_f: self.lambda_f,
            });
        }
        if self.period == 0 || self.truncation.0 == 0 || self.truncation.1 == 0 {
            return Err(DeterminantError::Invalid(
                "period and truncation must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Truncated double product contributed by one periodic orbit:
/// `Π (1 − z^P a^j b^k)` over `J × K` index pairs, where `(a, b)` is
/// `(λ_E, λ_F)` for a sink, `(λ_E, 1/λ_F)` for a saddle and
/// `(1/λ_E, 1/λ_F)` for a source.
pub fn closed_form_factor(spec: &FactorSpec, z: Complex64) -> Result<Complex64, DeterminantError> {
    spec.check()?;
    let (j0, k0, a, b) = match spec.kind {
        FactorKind::Sink => (0, 0, spec.lambda_e, spec.lambda_f),
        FactorKind::Saddle => (0, 1, spec.lambda_e, spec.lambda_f.recip()),
        FactorKind::Source => (1, 1, spec.lambda_e.recip(), spec.lambda_f.recip()),
    };
    let zp = z.powu(spec.period);
    let (nj, nk) = spec.truncation;
    let mut out = Complex64::new(1.0, 0.0);
    for j in j0..j0 + nj {
        let aj = a.powi(j as i32);
        for k in k0..k0 + nk {
            out *= 1.0 - zp * aj * b.powi(k as i32);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: FactorKind, e: f64, f: f64, p: u32) -> FactorSpec {
        FactorSpec {
            kind,
            lambda_e: e,
            lambda_f: f,
            period: p,
            truncation: (50, 50),
        }
    }

    #[test]
    fn sink_vanishes_at_roots_of_unity() {
        let s = spec(FactorKind::Sink, 0.25, 0.5, 2);
        for z in [1.0, -1.0] {
            assert_eq!(
                closed_form_factor(&s, Complex64::new(z, 0.0))
                    .unwrap()
                    .norm(),
                0.0
            );
        }
    }

    #[test]
    fn source_first_zero() {
        let s = spec(FactorKind::Source, 2.0, 4.0, 1);
        assert!(
            closed_form_factor(&s, Complex64::new(8.0, 0.0))
                .unwrap()
                .norm()
                < 1e-12
        );
    }

    #[test]
    fn kind_mismatch() {
        let s = spec(FactorKind::Saddle, 0.25, 0.5, 1);
        assert!(matches!(
            closed_form_factor(&s, Complex64::new(0.0, 0.0)),
            Err(DeterminantError::KindMismatch { .. })
        ));
    }
}
