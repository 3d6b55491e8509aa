use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use super::OperatorError;
use crate::analytic::SolveOptions;
use crate::determinant::neutral_direction_multiplier;
use crate::model::{BlockKind, Circle, Disc, Domain, SymbolicModel};
use crate::pinning::PinningTable;

/// Factors of the direct-product operators at a parabolic symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelOperator {
    /// Laplace-space multiplication by `e^{−t}` on the grid `t_i ≥ 0`.
    TPlus {
        grid: Vec<f64>,
    },
    TMinus {
        grid: Vec<f64>,
    },
    /// `ψ(z) ↦ ∮ ψ(w) / (z − λw) dw/2πi` on functions vanishing at infinity.
    Mu {
        lambda: f64,
    },
    /// `ψ(z) ↦ |λ| ψ(λz)`.
    Ms {
        lambda: f64,
    },
}

impl ModelOperator {
    /// `points` equispaced values in `[0, t_max]`.
    pub fn uniform_grid(points: usize, t_max: f64) -> Vec<f64> {
        if points < 2 {
            return vec![0.0; points];
        }
        (0..points)
            .map(|i| t_max * i as f64 / (points - 1) as f64)
            .collect()
    }

    fn check(&self) -> Result<(), OperatorError> {
        match self {
            ModelOperator::TPlus { grid } | ModelOperator::TMinus { grid } => {
                if grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
                    return Err(OperatorError::ParameterOutOfRange(
                        "grid values must be finite and ≥ 0".into(),
                    ));
                }
            }
            ModelOperator::Mu { lambda } | ModelOperator::Ms { lambda } => {
                if !(lambda.abs() < 1.0) {
                    return Err(OperatorError::ParameterOutOfRange(format!(
                        "|λ| = {} is not below 1",
                        lambda.abs()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ModelSpectrum {
    /// Continuous spectrum `[lo, hi]` with discrete witness points.
    Interval {
        lo: f64,
        hi: f64,
        witnesses: Vec<f64>,
    },
    /// Leading eigenvalues.
    Points(Vec<f64>),
}

/// Spectrum of a model operator; `count` eigenvalues are listed for the
/// nuclear factors.
pub fn model_operator_spectrum(
    op: &ModelOperator,
    count: usize,
) -> Result<ModelSpectrum, OperatorError> {
    op.check()?;
    Ok(match op {
        ModelOperator::TPlus { grid } | ModelOperator::TMinus { grid } => ModelSpectrum::Interval {
            lo: 0.0,
            hi: 1.0,
            witnesses: grid.iter().map(|t| (-t).exp()).collect(),
        },
        ModelOperator::Mu { lambda } => {
            ModelSpectrum::Points((0..count).map(|l| lambda.powi(l as i32)).collect())
        }
        ModelOperator::Ms { lambda } => ModelSpectrum::Points(
            (1..=count)
                .map(|l| lambda.signum() * lambda.powi(l as i32))
                .collect(),
        ),
    })
}

/// `tr(M^ℓ)` in closed form for the nuclear factors.
pub fn model_operator_trace(op: &ModelOperator, power: u32) -> Result<f64, OperatorError> {
    op.check()?;
    match op {
        ModelOperator::Mu { lambda } => Ok(1.0 / (1.0 - lambda.powi(power as i32))),
        ModelOperator::Ms { lambda } => {
            let l = lambda.powi(power as i32);
            Ok(l.abs() / (1.0 - l))
        }
        _ => Err(OperatorError::ParameterOutOfRange(
            "continuous spectrum has no trace".into(),
        )),
    }
}

/// Matrix of a model operator: diagonal for `T±`, Nyström on the circle of
/// the given radius about the origin for `M_u`, `M_s`.
pub fn discretize_model_operator(
    op: &ModelOperator,
    radius: f64,
    nodes: usize,
) -> Result<Array2<Complex64>, OperatorError> {
    op.check()?;
    if !(radius > 0.0) || nodes == 0 {
        return Err(OperatorError::ParameterOutOfRange(
            "radius and node count must be positive".into(),
        ));
    }
    let circle = Circle::new(Complex64::new(0.0, 0.0), radius);
    let w = circle.nodes(nodes);
    let om = circle.weights(nodes);
    Ok(match op {
        ModelOperator::TPlus { grid } | ModelOperator::TMinus { grid } => Array2::from_diag(
            &grid
                .iter()
                .map(|t| Complex64::new((-t).exp(), 0.0))
                .collect::<ndarray::Array1<_>>(),
        ),
        ModelOperator::Mu { lambda } => {
            Array2::from_shape_fn((nodes, nodes), |(a, c)| om[c] / (w[a] - *lambda * w[c]))
        }
        ModelOperator::Ms { lambda } => Array2::from_shape_fn((nodes, nodes), |(b, d)| {
            om[d] * lambda.signum() * *lambda / (w[d] - *lambda * w[b])
        }),
    })
}

fn nonzero(v: Vec<Complex64>) -> Vec<Complex64> {
    v.into_iter().filter(|z| z.norm() > 0.0).collect()
}

/// Sampled `Δ_k(ε)`: the deviation of the parabolic block from its linear
/// part over the domains scaled by `epsilon`.
pub fn parabolic_deviation(
    model: &SymbolicModel,
    k: usize,
    epsilon: f64,
    density: usize,
) -> Result<f64, OperatorError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(OperatorError::ParameterOutOfRange(format!(
            "ε = {epsilon} is not in (0, 1]"
        )));
    }
    let (kind, lambda) = neutral_direction_multiplier(model, k)
        .map_err(|e| OperatorError::ParameterOutOfRange(e.to_string()))?;
    let table = PinningTable::new(model, &SolveOptions::default())?;
    let pair = table.pair(k, k).expect("parabolic self edge");
    let d = model.domains(k);
    let scaled_disc = |dom: &Domain| {
        let disc = dom.as_disc().expect("disc opposite the petal");
        Disc::new(disc.center * epsilon, disc.radius * epsilon).expect("positive radius")
    };
    let mut worst: f64 = 0.0;
    match kind {
        BlockKind::ParabolicA => {
            let disc = scaled_disc(&d.d1);
            let w1s = nonzero(Circle::new(disc.center, disc.radius).nodes(4 * density));
            let petal = d.d2.as_petal().expect("(P.a) petal").scaled(epsilon);
            for &w1 in &w1s {
                for &z2 in &petal.samples(density) {
                    let u = pair.eval(w1, z2)?.1;
                    worst = worst.max((lambda - u / w1).norm());
                }
            }
        }
        _ => {
            let disc = scaled_disc(&d.d2);
            let z2s = nonzero(Domain::Disc(disc).samples(density));
            let petal = d.d1.as_petal().expect("(P.b) petal").scaled(epsilon);
            let w1s = nonzero(petal.samples(density).into_iter().map(|z| -z).collect());
            for &w1 in &w1s {
                for &z2 in &z2s {
                    let jet = pair.jet(w1, z2)?;
                    let a = (lambda - jet.phi_s / z2).norm();
                    let b = (lambda - jet.ds_dz2).norm();
                    worst = worst.max(a.max(b));
                }
            }
        }
    }
    Ok(worst)
}
