//! Nyström sections of the transfer operator: traces against periodic
//! points, eigenvalues and the Fredholm determinant.

use detzeta::analytic::SolveOptions;
use detzeta::model::{cyclic_words, examples};
use detzeta::operator::{
    assemble_transfer_matrix, build_section, check_contours, section_fredholm_det,
    section_spectrum, word_trace, ContourSpec,
};
use detzeta::pinning::periodic_point;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = examples::two_symbol_affine();
    let spec = ContourSpec::from_model(&model, 24);
    let report = check_contours(&model, &spec, 8)?;
    for s in &report.symbols {
        println!(
            "symbol {}: enclosure margin {:.3}, avoidance margin {:.3}",
            s.symbol, s.enclosure_margin, s.avoidance_margin
        );
    }

    let section = build_section(&model, (0, 1), &spec)?;
    println!(
        "section {:?}: {} x {}, min denominator {:.3}",
        section.word,
        section.dim(),
        section.dim(),
        section.min_denominator
    );

    println!(
        "\n{:<10} {:>20} {:>20} {:>10}",
        "word", "section trace", "periodic point", "error"
    );
    for m in 1..=3 {
        for w in cyclic_words(&model, m) {
            let t = word_trace(&model, &w, &spec)?;
            let p = periodic_point(&model, &w, &SolveOptions::default())?.trace_term;
            println!(
                "{:<10} {:>20.14} {:>20.14} {:>10.2e}",
                format!("{w:?}"),
                t.re,
                p,
                (t - p).norm()
            );
        }
    }

    let matrix = assemble_transfer_matrix(&model, &spec)?;
    let ev = section_spectrum(&matrix)?;
    println!("\nleading eigenvalues");
    for e in ev.iter().take(6) {
        println!("  {e:.10}");
    }
    let z = ev[0].inv();
    println!(
        "det(I − z L) at z = 1/λ_0 = {z:.6}: {:.2e}",
        section_fredholm_det(&matrix, z)?.norm()
    );
    println!(
        "det(I − z L) at z = 0: {}",
        section_fredholm_det(&matrix, Complex64::new(0.0, 0.0))?
    );
    Ok(())
}
