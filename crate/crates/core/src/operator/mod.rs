//! Contour-quadrature discretization of the elementary transfer operators,
//! the approximate Fatou coordinate and the model operators.

mod contour;
mod export;
mod fatou;
mod model_ops;
mod section;

use num_complex::Complex64;
use thiserror::Error;

use crate::analytic::SolveError;
use crate::model::SymbolId;
use crate::pinning::PinningError;

pub use contour::{check_contours, ContourReport, ContourSpec, SymbolContourMargins};
pub use export::{read_matrix_market, write_matrix_market};
pub use fatou::{fatou_conjugate, fatou_error_series, FatouData, FATOU_DEGREE};
pub use model_ops::{
    discretize_model_operator, model_operator_spectrum, model_operator_trace, parabolic_deviation,
    ModelOperator, ModelSpectrum,
};
pub use section::{
    assemble_transfer_matrix, build_section, compose_sections, section_fredholm_det,
    section_spectrum, section_trace, word_section, word_trace, OperatorSection,
};

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("contour violation on edge {edge:?} at {at:?}: denominator modulus {modulus:e}")]
    ContourViolation {
        edge: (SymbolId, SymbolId),
        at: (Complex64, Complex64),
        modulus: f64,
    },
    #[error("inverting the unstable map on edge {edge:?} failed at {at:?}: {source}")]
    InverseFailure {
        edge: (SymbolId, SymbolId),
        at: (Complex64, Complex64),
        #[source]
        source: SolveError,
    },
    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),
    #[error(transparent)]
    Pinning(#[from] PinningError),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("singularity is not removable (coefficient {coefficient:e})")]
    SingularityNotRemovable { coefficient: f64 },
    #[error("linear algebra failure: {0}")]
    Linalg(String),
    #[error("matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::BivariateSeries;
    use crate::model::{examples, Circle};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn linear_section_residue() {
        let m = examples::linear_saddle();
        let spec = ContourSpec::from_model(&m, 32);
        let s = build_section(&m, (0, 0), &spec).unwrap();
        let out = s.apply(|w1, _| w1.inv());
        let z1 = spec.contours[0].c1.nodes(32);
        let z2 = spec.contours[0].c2.nodes(32);
        // The trapezoid rule aliases the poles at w1 = 2·z1 and w2 = z2/2.
        for a in 0..32 {
            for b in 0..32 {
                let alias = (1.0 - (2.0 * z1[a]).powi(-32)) * (1.0 - (z2[b] / 2.0).powi(32));
                assert!((out[[a, b]] - 0.5 / z1[a] / alias).norm() < 1e-14);
                assert!((out[[a, b]] - 0.5 / z1[a]).norm() < 3e-10);
            }
        }
        let fine = build_section(&m, (0, 0), &spec.clone().with_nodes(40)).unwrap();
        let out = fine.apply(|w1, _| w1.inv());
        let z1 = spec.contours[0].c1.nodes(40);
        for a in 0..40 {
            for b in 0..40 {
                assert!((out[[a, b]] - 0.5 / z1[a]).norm() < 1e-10);
            }
        }
        assert!((section_trace(&s) - 2.0).norm() < 1e-10);
        let ev = section_spectrum(&s.matrix).unwrap();
        assert!((ev[0] - 0.5).norm() < 1e-8);
        assert!((section_fredholm_det(&s.matrix, c(0.0)).unwrap() - 1.0).norm() < 1e-14);
        let at_zero = section_fredholm_det(&s.matrix, ev[0].inv()).unwrap();
        assert!(at_zero.norm() < 1e-8);
    }

    #[test]
    fn composed_trace() {
        let m = examples::linear_saddle();
        let spec = ContourSpec::from_model(&m, 32);
        let s = build_section(&m, (0, 0), &spec).unwrap();
        let s2 = compose_sections(&s, &s).unwrap();
        assert!((section_trace(&s2) - 4.0 / 9.0).norm() < 1e-9);
        assert!((word_trace(&m, &[0, 0], &spec).unwrap() - 4.0 / 9.0).norm() < 1e-9);
    }

    #[test]
    fn mismatched_nodes() {
        let m = examples::linear_saddle();
        let a = build_section(&m, (0, 0), &ContourSpec::from_model(&m, 8)).unwrap();
        let b = build_section(&m, (0, 0), &ContourSpec::from_model(&m, 10)).unwrap();
        assert!(matches!(
            compose_sections(&a, &b),
            Err(OperatorError::GeometryMismatch(_))
        ));
    }

    #[test]
    fn two_symbol_naturality() {
        let m = examples::two_symbol_affine();
        let spec = ContourSpec::from_model(&m, 32);
        let p = crate::pinning::periodic_point(&m, &[0, 1], &Default::default()).unwrap();
        assert!((word_trace(&m, &[0, 1], &spec).unwrap() - p.trace_term).norm() < 1e-8);
    }

    #[test]
    fn touching_contour() {
        let m = examples::two_symbol_affine();
        let mut spec = ContourSpec::from_model(&m, 16);
        // φ_u = 0.3 + 0.3·w1 on edge (1, 2): the image of the source circle
        // is the target circle, node for node.
        spec.contours[1].c1 = Circle::new(c(0.3), 0.3 * spec.contours[0].c1.radius);
        assert!(matches!(
            build_section(&m, (0, 1), &spec),
            Err(OperatorError::ContourViolation { .. })
        ));
    }

    #[test]
    fn pa_self_edge() {
        let m = examples::parabolic_pa();
        let spec = ContourSpec::from_model(&m, 48);
        let s = build_section(&m, (0, 0), &spec).unwrap();
        let out = s.apply(|w1, w2| w2 * w2 / w1);
        let z1 = spec.contours[0].c1.nodes(48);
        let z2 = spec.contours[0].c2.nodes(48);
        for a in 0..48 {
            for b in 0..48 {
                let s = z2[b] - z2[b] * z2[b];
                let exact = (1.0 - 2.0 * z2[b]) * s * s / z1[a];
                assert!((out[[a, b]] - exact).norm() < 1e-10, "{a} {b}");
            }
        }
    }

    #[test]
    fn pb_self_edge() {
        let m = examples::parabolic_pb();
        let spec = ContourSpec::from_model(&m, 48);
        let s = build_section(&m, (0, 0), &spec).unwrap();
        let out = s.apply(|w1, _| w1);
        let z1 = spec.contours[0].c1.nodes(48);
        for a in 0..48 {
            let v = (1.0 - (1.0 - 4.0 * z1[a]).sqrt()) / 2.0;
            let exact = 0.5 * v / (1.0 - 2.0 * v);
            for b in 0..48 {
                assert!((out[[a, b]] - exact).norm() < 1e-10, "{a} {b}");
            }
        }
    }

    #[test]
    fn fatou_series_of_normal_form() {
        let phi = BivariateSeries::at_origin(&[vec![0.0, 1.0, -1.0]], (1.0, 0.5)).unwrap();
        let e = fatou_error_series(&phi, (0, 10)).unwrap();
        for b in 0..=10 {
            assert!((e.coeff(0, b) - 1.0).abs() < 1e-12);
        }
        let bad = BivariateSeries::at_origin(&[vec![0.0, 1.0, -2.0]], (1.0, 0.5)).unwrap();
        assert!(matches!(
            fatou_error_series(&bad, (0, 10)),
            Err(OperatorError::SingularityNotRemovable { .. })
        ));
    }

    #[test]
    fn fatou_residuals() {
        for m in [
            examples::parabolic_pa(),
            examples::parabolic_pb(),
            examples::quadratic_pa(),
        ] {
            let f = fatou_conjugate(&m, 0, FATOU_DEGREE).unwrap();
            let d = m.domains(0);
            let (xs, zs) = match f.kind {
                crate::model::BlockKind::ParabolicA => (d.d1.samples(4), d.d2.samples(6)),
                _ => (d.d2.samples(4), d.d1.samples(6)),
            };
            for &x in &xs {
                for &z in zs.iter().filter(|z| z.norm() > 0.0) {
                    assert!(f.residual(x, z) <= 1e-9, "{} {x} {z}", m.name());
                }
            }
        }
    }

    #[test]
    fn model_operators() {
        let t = ModelOperator::TPlus {
            grid: vec![0.1, 1.0, 10.0],
        };
        let ModelSpectrum::Interval { lo, hi, witnesses } = model_operator_spectrum(&t, 0).unwrap()
        else {
            panic!("interval expected")
        };
        assert_eq!((lo, hi), (0.0, 1.0));
        assert_eq!(
            witnesses,
            vec![(-0.1f64).exp(), (-1.0f64).exp(), (-10.0f64).exp()]
        );
        let mu = ModelOperator::Mu { lambda: 0.5 };
        let m = discretize_model_operator(&mu, 1.0, 64).unwrap();
        let mut p = m.clone();
        for l in 1..=10u32 {
            let tr = p.diag().sum();
            assert!((tr - model_operator_trace(&mu, l).unwrap()).norm() < 1e-12);
            p = p.dot(&m);
        }
        let small = section_spectrum(&discretize_model_operator(&mu, 0.1, 64).unwrap()).unwrap();
        let large = section_spectrum(&m).unwrap();
        for (a, b) in small.iter().zip(&large).take(10) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(matches!(
            model_operator_spectrum(&ModelOperator::Ms { lambda: 1.5 }, 3),
            Err(OperatorError::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn deviation() {
        let lin = examples::parabolic_pa();
        assert!(parabolic_deviation(&lin, 0, 0.5, 8).unwrap() < 1e-14);
        let q = examples::quadratic_pa();
        for eps in [0.4, 0.2, 0.1] {
            assert!((parabolic_deviation(&q, 0, eps, 8).unwrap() - 0.1 * eps).abs() < 1e-10);
        }
    }

    #[test]
    fn matrix_market_roundtrip() {
        let m = examples::linear_saddle();
        let s = build_section(&m, (0, 0), &ContourSpec::from_model(&m, 4)).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&s.matrix, &mut buf).unwrap();
        assert_eq!(read_matrix_market(&buf[..]).unwrap(), s.matrix);
    }
}
