//! Sampled verification of the inclusion, solvability and invertibility
//! conditions on every edge.

use std::cell::Cell;

use num_complex::Complex64;
use serde::Serialize;

use super::{BlockKind, BlockMap, Domain, ModelError, SymbolDomains, SymbolicModel};
use crate::analytic::SolveOptions;

/// Per-edge outcome of [`validate_model`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeReport {
    pub edge: (u32, u32),
    pub kind: &'static str,
    /// Minimal distance of the first-coordinate image to the target boundary.
    pub inclusion_margin: f64,
    /// Same margin over the source domains enlarged by the extension margin.
    pub extended_inclusion_margin: f64,
    /// Minimal interior margin of the partial inverse (or of the parabolic
    /// image inside the outer petal).
    pub solve_margin: f64,
    /// Minimal `|det Df̂|` over the sampled real rectangle.
    pub min_abs_det: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub ok: bool,
    pub irreducible: bool,
    pub grid_density: usize,
    /// Smallest inclusion margin over all edges.
    pub contraction_margin: f64,
    pub edges: Vec<EdgeReport>,
}

const DET_FLOOR: f64 = 1e-12;

struct EdgeCheck<'a> {
    model: &'a SymbolicModel,
    edge: (usize, usize),
    map: &'a BlockMap,
    source: &'a SymbolDomains,
    target: &'a SymbolDomains,
    density: usize,
    opts: SolveOptions,
    samples: Cell<usize>,
}

impl EdgeCheck<'_> {
    fn ids(&self) -> (u32, u32) {
        (self.model.id(self.edge.0), self.model.id(self.edge.1))
    }

    fn geometry(
        &self,
        condition: &str,
        witness: (Complex64, Complex64),
        margin: f64,
    ) -> ModelError {
        ModelError::Geometry {
            edge: self.ids(),
            condition: condition.into(),
            witness,
            margin,
        }
    }

    /// Minimal signed margin of `image(w1, w2)` in `target` over `a × b`.
    fn inclusion(
        &self,
        condition: &str,
        a: &Domain,
        b: &Domain,
        target: impl Fn(Complex64) -> f64,
        image: impl Fn(Complex64, Complex64) -> Result<Complex64, ModelError>,
    ) -> Result<f64, ModelError> {
        let sa = a.samples(self.density);
        let sb = b.samples(self.density);
        let mut worst = f64::INFINITY;
        for &w1 in &sa {
            for &w2 in &sb {
                let z = image(w1, w2)?;
                let m = target(z);
                if !(m > 0.0) {
                    return Err(self.geometry(condition, (w1, w2), m));
                }
                worst = worst.min(m);
            }
        }
        self.samples.set(self.samples.get() + sa.len() * sb.len());
        Ok(worst)
    }

    fn solve(&self, w1: Complex64, z2: Complex64) -> Result<Complex64, ModelError> {
        self.map
            .stable_inverse(w1, z2, self.source.d2.seed_point(), &self.opts)
            .map_err(|e| ModelError::Solve {
                edge: self.ids(),
                witness: (w1, z2),
                source: e,
            })
    }

    fn first_image(&self, w1: Complex64, w2: Complex64) -> Result<Complex64, ModelError> {
        let f1 = self.map.f1().expect("blocks checked here store f1");
        Ok(f1.value.eval_unchecked(w1, w2))
    }

    fn min_det(&self) -> Result<f64, ModelError> {
        let xs = self.source.d1.real_samples(self.density, 0.98);
        let ys = self.target.d2.real_samples(self.density, 0.98);
        let mut worst = f64::INFINITY;
        for &x in &xs {
            for &y in &ys {
                let w1 = Complex64::new(x, 0.0);
                let z2 = Complex64::new(y, 0.0);
                let w2 = self.solve(w1, z2)?;
                let j = self.map.jacobian(w1, w2, z2);
                let det = (j[0][0] * j[1][1] - j[0][1] * j[1][0]).norm();
                if !(det > DET_FLOOR) {
                    return Err(self.geometry("invertibility", (w1, w2), det));
                }
                worst = worst.min(det);
            }
        }
        self.samples.set(self.samples.get() + xs.len() * ys.len());
        Ok(worst)
    }

    fn run(self) -> Result<EdgeReport, ModelError> {
        let margin = self.map.extension_margin();
        let src = *self.source;
        let tgt = *self.target;
        let ext1 = src.d1.enlarged(margin);
        let ext2 = src.d2.enlarged(margin);
        let kind = self.map.kind();

        let (inclusion, extended, solve_margin) = match kind {
            BlockKind::Hyperbolic | BlockKind::ParabolicA => {
                let tm = |z| tgt.d1.signed_margin(z);
                let inc = self.inclusion(
                    "first-coordinate inclusion",
                    &src.d1,
                    &src.d2,
                    tm,
                    |a, b| self.first_image(a, b),
                )?;
                let ext = self.inclusion(
                    "extended first-coordinate inclusion",
                    &ext1,
                    &ext2,
                    tm,
                    |a, b| self.first_image(a, b),
                )?;
                let sol = if kind == BlockKind::Hyperbolic {
                    let sm = |z| src.d2.signed_margin(z);
                    self.inclusion("partial inverse inclusion", &src.d1, &tgt.d2, sm, |a, b| {
                        self.solve(a, b)
                    })?
                } else {
                    let petal = *src.d2.as_petal().expect("(P.a) petal");
                    self.inclusion(
                        "petal invariance",
                        &src.d1,
                        &src.d2,
                        |z| outer_margin(&petal, z),
                        |a, b| self.solve(a, b),
                    )?
                };
                (inc, ext, sol)
            }
            BlockKind::ParabolicB => {
                let petal = *src.d1.as_petal().expect("(P.b) petal");
                let sm = |z| src.d2.signed_margin(z);
                let sol =
                    self.inclusion("partial inverse inclusion", &src.d1, &tgt.d2, sm, |a, b| {
                        self.solve(a, b)
                    })?;
                let om = |z| outer_margin(&petal, z);
                let inc = self.inclusion("petal invariance", &src.d1, &src.d2, om, |a, b| {
                    let w2 = self.solve(a, b)?;
                    Ok(self.map.unstable_value(a, w2, b))
                })?;
                (inc, inc, sol)
            }
        };
        let min_abs_det = self.min_det()?;
        let ids = self.ids();
        Ok(EdgeReport {
            edge: ids,
            kind: kind.tag(),
            inclusion_margin: inclusion,
            extended_inclusion_margin: extended,
            solve_margin,
            min_abs_det,
            samples: self.samples.get(),
        })
    }
}

/// Margin inside the outer petal `U(θ̃, r̃)`, with the corner counted as inside.
fn outer_margin(petal: &super::Petal, z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        petal.r_tilde
    } else {
        super::Petal::sector_margin(petal.theta_tilde, petal.r_tilde, z)
    }
}

/// Checks every edge on a sample grid and returns the report, or the first
/// violated condition with a witness point.
///
/// `grid_density` d gives 4d boundary points per disc and the d×d interior
/// grid (petals: two edge rays, the arc and a polar grid).
pub fn validate_model(
    model: &SymbolicModel,
    grid_density: usize,
) -> Result<ValidationReport, ModelError> {
    if !model.transitions().is_irreducible() {
        return Err(ModelError::Structural(
            "transition matrix is reducible".into(),
        ));
    }
    let opts = SolveOptions::default();
    let mut edges = Vec::new();
    for (i, j) in model.edges() {
        let check = EdgeCheck {
            model,
            edge: (i, j),
            map: model.block(i, j).expect("edge has a block"),
            source: model.domains(i),
            target: model.domains(j),
            density: grid_density,
            opts,
            samples: Cell::new(0),
        };
        edges.push(check.run()?);
    }
    let contraction_margin = edges
        .iter()
        .map(|e| e.inclusion_margin)
        .fold(f64::INFINITY, f64::min);
    Ok(ValidationReport {
        model: model.name().to_string(),
        ok: true,
        irreducible: true,
        grid_density,
        contraction_margin,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::super::examples;
    use super::*;

    #[test]
    fn linear_saddle_margin() {
        let r = validate_model(&examples::linear_saddle(), 16).unwrap();
        assert!(r.ok);
        assert!((r.contraction_margin - 0.5).abs() < 1e-12);
        assert!((r.edges[0].solve_margin - 0.5).abs() < 1e-12);
    }

    #[test]
    fn broken_inclusion_reports_witness() {
        match validate_model(&examples::broken_inclusion(), 16) {
            Err(ModelError::Geometry {
                witness, margin, ..
            }) => {
                assert!((witness.0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
                assert!(margin < 0.0);
            }
            other => panic!("expected a geometry error, got {other:?}"),
        }
    }

    #[test]
    fn shipped_models_validate() {
        for model in examples::shipped() {
            let r = validate_model(&model, 8).unwrap();
            assert!(r.ok, "{}", model.name());
            assert!(r.edges.iter().all(|e| e.min_abs_det > 0.0));
        }
    }
}
