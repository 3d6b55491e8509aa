//! Pinning maps along words and the periodic points they locate.
//!
//! ```text
//! cargo run --example pinning
//! ```

use detzeta::analytic::SolveOptions;
use detzeta::model::{cyclic_words, examples};
use detzeta::pinning::{periodic_point_in, IteratedPinning, PinningTable};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = examples::parabolic_pa();
    let table = PinningTable::new(&model, &SolveOptions::default())?;

    let word = [0, 0, 1, 0];
    let it = IteratedPinning::new(&table, &word)?;
    let (w1, z2) = (Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.0));
    let chain = it.solve(w1, z2, None)?;
    println!(
        "word {:?} at (w1, z2) = ({w1}, {z2})",
        model.word_ids(&word)
    );
    println!("  phi_s = {:.12}", chain.phi_s);
    println!("  phi_u = {:.12}", chain.phi_u);
    println!("  sweeps {}, ratio {:.3e}", chain.sweeps, chain.ratio);
    println!("  identity residual {:.2e}", it.identity_residual(w1, z2)?);

    println!("\nperiodic points of {}", model.name());
    for m in 1..=3 {
        for w in cyclic_words(&model, m) {
            let r = periodic_point_in(&table, &w)?;
            println!(
                "  {:<10} x = ({:+.6}, {:+.6})  multipliers ({:+.6}, {:+.6})  trace term {:.8}",
                format!("{:?}", r.ids),
                r.point.0.re,
                r.point.1.re,
                r.multipliers.0,
                r.multipliers.1,
                r.trace_term
            );
        }
    }
    Ok(())
}
