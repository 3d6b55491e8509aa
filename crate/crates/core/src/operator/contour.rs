use num_complex::Complex64;
use serde::Serialize;

use super::OperatorError;
use crate::analytic::SolveOptions;
use crate::model::{BlockKind, Circle, SymbolContours, SymbolId, SymbolicModel};
use crate::pinning::PinningTable;

/// Integration contours per symbol and the number of nodes per contour.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub nodes: usize,
    pub contours: Vec<SymbolContours>,
}

impl ContourSpec {
    /// The model's own contours with `nodes` points each.
    pub fn from_model(model: &SymbolicModel, nodes: usize) -> Self {
        Self {
            nodes,
            contours: (0..model.len()).map(|k| *model.contours(k)).collect(),
        }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }
}

/// Sampled clearances of one symbol's contours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolContourMargins {
    pub symbol: SymbolId,
    /// `min (r − |φ_s − c|)` over stable images that the second contour must enclose.
    pub enclosure_margin: f64,
    /// `min ||φ_u − c| − r|` over unstable images that the first contour must avoid.
    pub avoidance_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourReport {
    pub symbols: Vec<SymbolContourMargins>,
}

fn enclosure(c: &Circle, z: Complex64) -> f64 {
    c.radius - (z - c.center).norm()
}

fn avoidance(c: &Circle, z: Complex64) -> f64 {
    ((z - c.center).norm() - c.radius).abs()
}

/// Checks that every second contour encloses the stable images entering it
/// and every first contour stays clear of the unstable images landing on it.
pub fn check_contours(
    model: &SymbolicModel,
    spec: &ContourSpec,
    density: usize,
) -> Result<ContourReport, OperatorError> {
    if spec.contours.len() != model.len() {
        return Err(OperatorError::GeometryMismatch(format!(
            "{} contour pairs for {} symbols",
            spec.contours.len(),
            model.len()
        )));
    }
    let table = PinningTable::new(model, &SolveOptions::default())?;
    let mut symbols = Vec::new();
    for k in 0..model.len() {
        let kind = model.block(k, k).map(|b| b.kind());
        let mut enclose = f64::INFINITY;
        let mut avoid = f64::INFINITY;
        for (a, b) in model.edges() {
            let self_parabolic = a == b && model.is_parabolic(a);
            if a == k && !(self_parabolic && kind == Some(BlockKind::ParabolicA)) {
                let pair = table.pair(a, b).expect("edge pair");
                for &w1 in &first_samples(model, spec, a, density) {
                    for &z2 in &second_samples(model, spec, b, density) {
                        let s = pair.phi_s(w1, z2)?;
                        let m = enclosure(&spec.contours[k].c2, s);
                        if !(m > 0.0) {
                            return Err(violation(model, (a, b), (w1, z2), m));
                        }
                        enclose = enclose.min(m);
                    }
                }
            }
            if b == k && !(self_parabolic && kind == Some(BlockKind::ParabolicB)) {
                let pair = table.pair(a, b).expect("edge pair");
                for &w1 in &first_samples(model, spec, a, density) {
                    for &z2 in &second_samples(model, spec, b, density) {
                        let u = pair.eval(w1, z2)?.1;
                        let m = avoidance(&spec.contours[k].c1, u);
                        if !(m > 0.0) {
                            return Err(violation(model, (a, b), (w1, z2), m));
                        }
                        avoid = avoid.min(m);
                    }
                }
            }
        }
        symbols.push(SymbolContourMargins {
            symbol: model.id(k),
            enclosure_margin: enclose,
            avoidance_margin: avoid,
        });
    }
    Ok(ContourReport { symbols })
}

/// Domain samples, plus the contour nodes when the contour leaves the domain.
fn first_samples(
    model: &SymbolicModel,
    spec: &ContourSpec,
    k: usize,
    density: usize,
) -> Vec<Complex64> {
    let d = &model.domains(k).d1;
    let mut v = d.samples(density);
    if d.as_petal().is_some() {
        v.extend(spec.contours[k].c1.nodes(4 * density));
    }
    v
}

fn second_samples(
    model: &SymbolicModel,
    spec: &ContourSpec,
    k: usize,
    density: usize,
) -> Vec<Complex64> {
    let d = &model.domains(k).d2;
    let mut v = d.samples(density);
    if d.as_petal().is_some() {
        v.extend(spec.contours[k].c2.nodes(4 * density));
    }
    v
}

fn violation(
    model: &SymbolicModel,
    edge: (usize, usize),
    at: (Complex64, Complex64),
    m: f64,
) -> OperatorError {
    OperatorError::ContourViolation {
        edge: (model.id(edge.0), model.id(edge.1)),
        at,
        modulus: m,
    }
}
