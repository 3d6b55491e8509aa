//! Loading, validating and saving a model file.
//!
//! ```text
//! cargo run --example model_file -- crates/core/models/parabolic-pa.json
//! ```

use std::path::PathBuf;

use detzeta::model::{load_model, model_to_json, validate_model};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models/parabolic-pa.json")
        });
    let model = load_model(&path)?;
    println!(
        "{}: {} symbols, edges {:?}",
        model.name(),
        model.len(),
        model.edges()
    );
    for (k, kind) in model.parabolic_symbols() {
        println!("  symbol {} is parabolic ({})", model.id(k), kind.tag());
    }
    let report = validate_model(&model, 8)?;
    println!(
        "valid: {}, contraction margin {:.4}",
        report.ok, report.contraction_margin
    );
    for e in &report.edges {
        println!(
            "  edge {:?} {:<4} inclusion {:.4} solve {:.4} min |det| {:.4}",
            e.edge, e.kind, e.inclusion_margin, e.solve_margin, e.min_abs_det
        );
    }
    let text = model_to_json(&model);
    println!("re-serialized: {} bytes", text.len());
    Ok(())
}
