//! Slit sets of periodic orbits with one neutral multiplier.

use detzeta::determinant::{slit_distance, slit_membership, slit_set};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        (0.5, 1.0, 1),
        (-0.5, 1.0, 1),
        (1.0, 2.0, 1),
        (-1.0, 2.0, 2),
        (0.3, -1.0, 3),
    ];
    let probe = [
        Complex64::new(0.25, 0.0),
        Complex64::new(-0.4, 0.0),
        Complex64::new(0.0, 0.6),
    ];
    for (e, f, p) in cases {
        let s = slit_set(e, f, p)?;
        println!(
            "λ_E = {e:+}, λ_F = {f:+}, P = {p}: {} z^P ∈ {:?}",
            s.case.tag(),
            s.image_interval()
        );
        for (angle, r0, r1) in s.segments() {
            println!("    ray at {:.4} rad, radius {r0:.4} to {r1:.4}", angle);
        }
        for z in probe {
            println!(
                "    {z}: member {}, distance {:.6}",
                slit_membership(&s, z, 1e-12),
                slit_distance(&s, z)
            );
        }
    }
    Ok(())
}
