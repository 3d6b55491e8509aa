use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::DeterminantError;

const NEUTRAL_TOL: f64 = 1e-12;

/// Which multiplier is neutral, and its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlitCase {
    /// `λ_F = −1`, `|λ_E| < 1`.
    #[serde(rename = "unstable-flip")]
    UnstableFlip,
    /// `λ_F = +1`, `|λ_E| < 1`.
    #[serde(rename = "unstable-neutral")]
    UnstableNeutral,
    /// `λ_E = −1`, `|λ_F| > 1`.
    #[serde(rename = "stable-flip")]
    StableFlip,
    /// `λ_E = +1`, `|λ_F| > 1`.
    #[serde(rename = "stable-neutral")]
    StableNeutral,
}

impl SlitCase {
    pub fn tag(&self) -> &'static str {
        match self {
            SlitCase::UnstableFlip => "unstable-flip",
            SlitCase::UnstableNeutral => "unstable-neutral",
            SlitCase::StableFlip => "stable-flip",
            SlitCase::StableNeutral => "stable-neutral",
        }
    }
}

/// `{z : z^P ∈ scale·[a, b]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlitSet {
    #[serde(rename = "P")]
    pub period: u32,
    #[serde(rename = "case")]
    pub case: SlitCase,
    #[serde(rename = "interval")]
    pub base_interval: (f64, f64),
    pub scale: f64,
}

impl SlitSet {
    /// `scale·[a, b]`.
    pub fn image_interval(&self) -> (f64, f64) {
        (
            self.scale * self.base_interval.0,
            self.scale * self.base_interval.1,
        )
    }

    /// Radial segments `(angle, r0, r1)` making up the set.
    pub fn segments(&self) -> Vec<(f64, f64, f64)> {
        let (lo, hi) = self.image_interval();
        let p = self.period as f64;
        let root = |x: f64| x.powf(p.recip());
        let mut out = Vec::new();
        if hi >= 0.0 {
            let (r0, r1) = (root(lo.max(0.0)), root(hi));
            out.extend((0..self.period).map(|k| (2.0 * PI * k as f64 / p, r0, r1)));
        }
        if lo < 0.0 {
            let (r0, r1) = (root((-hi).max(0.0)), root(-lo));
            out.extend((0..self.period).map(|k| ((2 * k + 1) as f64 * PI / p, r0, r1)));
        }
        out
    }
}

/// Slit set of a periodic point of period `period` with one neutral multiplier.
pub fn slit_set(lambda_e: f64, lambda_f: f64, period: u32) -> Result<SlitSet, DeterminantError> {
    if period == 0 {
        return Err(DeterminantError::Invalid("period must be positive".into()));
    }
    let near = |x: f64, t: f64| (x - t).abs() <= NEUTRAL_TOL;
    let (case, base_interval, scale) = if lambda_e.abs() < 1.0 && near(lambda_f, -1.0) {
        (SlitCase::UnstableFlip, (-1.0, 1.0), 1.0)
    } else if lambda_e.abs() < 1.0 && near(lambda_f, 1.0) {
        (SlitCase::UnstableNeutral, (lambda_e.min(0.0), 1.0), 1.0)
    } else if lambda_f.abs() > 1.0 && near(lambda_e, -1.0) {
        (SlitCase::StableFlip, (-1.0, 1.0), lambda_f.abs().recip())
    } else if lambda_f.abs() > 1.0 && near(lambda_e, 1.0) {
        (
            SlitCase::StableNeutral,
            (lambda_f.recip().min(0.0), 1.0),
            lambda_f.abs().recip(),
        )
    } else {
        return Err(DeterminantError::NotNeutral { lambda_e, lambda_f });
    };
    Ok(SlitSet {
        period,
        case,
        base_interval,
        scale,
    })
}

/// Whether `z^P` lies within `tol` of `scale·[a, b]`.
pub fn slit_membership(slit: &SlitSet, z: Complex64, tol: f64) -> bool {
    let w = z.powu(slit.period);
    let (lo, hi) = slit.image_interval();
    let x = w.re.clamp(lo, hi);
    (w - x).norm() <= tol
}

/// Euclidean distance from `z` to the slit set.
pub fn slit_distance(slit: &SlitSet, z: Complex64) -> f64 {
    slit.segments()
        .into_iter()
        .map(|(theta, r0, r1)| {
            let dir = Complex64::from_polar(1.0, theta);
            let t = (z * dir.conj()).re.clamp(r0, r1);
            (z - dir * t).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_cases() {
        let s = slit_set(0.5, 1.0, 1).unwrap();
        assert_eq!(s.image_interval(), (0.0, 1.0));
        assert!(slit_membership(&s, Complex64::new(0.5, 0.0), 0.0));
        assert!((slit_distance(&s, Complex64::new(0.5, 0.3)) - 0.3).abs() < 1e-15);
        assert_eq!(
            slit_set(-0.5, 1.0, 1).unwrap().image_interval(),
            (-0.5, 1.0)
        );
        assert_eq!(slit_set(1.0, 2.0, 1).unwrap().image_interval(), (0.0, 0.5));
        let four = slit_set(-1.0, 2.0, 2).unwrap();
        assert_eq!(four.image_interval(), (-0.5, 0.5));
        assert_eq!(four.segments().len(), 4);
        let r = 0.5f64.sqrt();
        for k in 0..4 {
            let z = Complex64::from_polar(r, k as f64 * PI / 2.0);
            assert!(slit_distance(&four, z) < 1e-15);
        }
    }

    #[test]
    fn even_power_membership() {
        let s = SlitSet {
            period: 2,
            case: SlitCase::UnstableNeutral,
            base_interval: (0.0, 1.0),
            scale: 1.0,
        };
        assert!(slit_membership(&s, Complex64::new(-0.7, 0.0), 0.0));
    }

    #[test]
    fn hyperbolic_point_rejected() {
        assert!(matches!(
            slit_set(0.5, 2.0, 1),
            Err(DeterminantError::NotNeutral { .. })
        ));
    }
}
