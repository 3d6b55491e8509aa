//! Cycle expansion of the dynamical determinant and the closed-form product
//! of a single saddle.
//!
//! ```text
//! cargo run --release --example determinant -- two-symbol-affine 12
//! ```

use detzeta::analytic::SolveOptions;
use detzeta::determinant::{
    closed_form_factor, evaluate_determinant, trace_sequence, DeterminantSeries, FactorKind,
    FactorSpec,
};
use detzeta::model::examples;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "linear-saddle".into());
    let order: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);
    let model = examples::builtin(&id).ok_or("unknown example")?;

    let traces = trace_sequence(&model, order, &SolveOptions::default(), 0)?;
    let series = DeterminantSeries::from_traces(traces);
    println!("{:>3} {:>24} {:>24}", "n", "d_n", "c_n");
    for n in 1..=order {
        println!(
            "{n:>3} {:>24.16e} {:>24.16e}",
            series.traces[n - 1],
            series.coeffs[n]
        );
    }
    let z = series.smallest_zero()?;
    println!("smallest zero {z:.12}");
    match evaluate_determinant(&series, z) {
        Ok((_, tail)) => println!("tail bound there {tail:.2e}"),
        Err(e) => println!("tail: {e}"),
    }

    if id == "linear-saddle" {
        let spec = FactorSpec {
            kind: FactorKind::Saddle,
            lambda_e: 0.5,
            lambda_f: 2.0,
            period: 1,
            truncation: (60, 60),
        };
        for r in [0.3, 0.6, 0.9] {
            let z = Complex64::from_polar(r, 1.0);
            let diff = (series.eval(z) - closed_form_factor(&spec, z)?).norm();
            println!("|series − product| at {z:.3}: {diff:.2e}");
        }
    }
    Ok(())
}
