//! Parabolic symbols: predicted spectra, model operators, the approximate
//! Fatou coordinate and the deviation from the linear model.

use detzeta::determinant::parabolic_spectrum_prediction;
use detzeta::model::examples;
use detzeta::operator::{
    discretize_model_operator, fatou_conjugate, model_operator_spectrum, model_operator_trace,
    parabolic_deviation, section_spectrum, ModelOperator, ModelSpectrum, FATOU_DEGREE,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for model in [examples::parabolic_pa(), examples::parabolic_pb()] {
        println!("{}", model.name());
        for p in parabolic_spectrum_prediction(&model)?.entries {
            println!(
                "  symbol {} ({}), λ = {}, spectrum ⊇ {:?}",
                p.symbol, p.kind, p.lambda, p.predicted_interval
            );
        }
        let f = fatou_conjugate(&model, 0, FATOU_DEGREE)?;
        let (d1, d2) = f.error_series.degrees();
        println!(
            "  Fatou error series of degree ({d1}, {d2}), R = {}",
            f.half_plane_r
        );
        let petal = match f.kind {
            detzeta::model::BlockKind::ParabolicA => model.domains(0).d2.samples(4),
            _ => model.domains(0).d1.samples(4),
        };
        let worst = petal
            .iter()
            .filter(|z| z.norm() > 0.0)
            .map(|&z| f.residual(num_complex::Complex64::new(0.2, 0.0), z))
            .fold(0.0, f64::max);
        println!("  max Fatou residual on petal samples {worst:.2e}");
    }

    let grid = ModelOperator::uniform_grid(200, 8.0);
    if let ModelSpectrum::Interval { lo, hi, witnesses } =
        model_operator_spectrum(&ModelOperator::TPlus { grid }, 0)?
    {
        println!(
            "\nT+ spectrum [{lo}, {hi}], {} witnesses from {:.4} to {:.4}",
            witnesses.len(),
            witnesses[199],
            witnesses[0]
        );
    }
    let mu = ModelOperator::Mu { lambda: 0.5 };
    for radius in [1.0, 0.25] {
        let ev = section_spectrum(&discretize_model_operator(&mu, radius, 64)?)?;
        println!(
            "M_u on radius {radius}: {:.12?}",
            ev[..4].iter().map(|z| z.re).collect::<Vec<_>>()
        );
    }
    for l in 1..=4 {
        println!("  tr M_u^{l} = {:.12}", model_operator_trace(&mu, l)?);
    }

    let q = examples::quadratic_pa();
    for eps in [0.8, 0.4, 0.2, 0.1] {
        println!("Δ(ε = {eps}) = {:.12}", parabolic_deviation(&q, 0, eps, 8)?);
    }
    Ok(())
}
