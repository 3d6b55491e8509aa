use ndarray::{Array2, Axis};
use ndarray_linalg::{Determinant, EigVals};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{ContourSpec, OperatorError};
use crate::analytic::{newton_solve_1d_within, SolveOptions};
use crate::model::{BlockKind, Circle, SymbolContours, SymbolicModel};
use crate::pinning::{PinningJet, PinningPair, PinningTable};

/// Denominator modulus below which a node pair counts as touching.
const DENOMINATOR_FLOOR: f64 = 1e-8;

/// Nyström matrix of one edge or of a composed word.
///
/// Rows index target nodes `(z1_a, z2_b)` as `a·N + b`, columns index
/// source nodes `(w1_c, w2_d)` as `c·N + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSection {
    /// Symbol indices, source first.
    pub word: Vec<usize>,
    pub nodes: usize,
    pub matrix: Array2<Complex64>,
    pub source: SymbolContours,
    pub target: SymbolContours,
    /// Smallest kernel denominator met during assembly.
    pub min_denominator: f64,
}

impl OperatorSection {
    pub fn dim(&self) -> usize {
        self.nodes * self.nodes
    }

    /// Applies the section to node values `ψ(w1_c, w2_d)`.
    pub fn apply(&self, psi: impl Fn(Complex64, Complex64) -> Complex64) -> Array2<Complex64> {
        let n = self.nodes;
        let w1 = self.source.c1.nodes(n);
        let w2 = self.source.c2.nodes(n);
        let v = ndarray::Array1::from_shape_fn(n * n, |i| psi(w1[i / n], w2[i % n]));
        self.matrix
            .dot(&v)
            .into_shape_with_order((n, n))
            .expect("square node grid")
    }
}

/// Polynomial interpolation weight of node `d` on an equispaced circle.
fn lagrange(circle: &Circle, node: Complex64, n: usize, v: Complex64) -> Complex64 {
    let t = (v - circle.center) / (node - circle.center);
    let one = Complex64::new(1.0, 0.0);
    if (one - t).norm() < 1e-14 {
        return one;
    }
    (one - t.powu(n as u32)) / ((one - t) * n as f64)
}

struct Geometry {
    n: usize,
    w1: Vec<Complex64>,
    w2: Vec<Complex64>,
    om1: Vec<Complex64>,
    om2: Vec<Complex64>,
    z1: Vec<Complex64>,
    z2: Vec<Complex64>,
}

impl Geometry {
    fn new(source: &SymbolContours, target: &SymbolContours, n: usize) -> Self {
        Self {
            n,
            w1: source.c1.nodes(n),
            w2: source.c2.nodes(n),
            om1: source.c1.weights(n),
            om2: source.c2.weights(n),
            z1: target.c1.nodes(n),
            z2: target.c2.nodes(n),
        }
    }
}

struct Assembly<'a> {
    model: &'a SymbolicModel,
    edge: (usize, usize),
    geo: Geometry,
    source: SymbolContours,
}

impl Assembly<'_> {
    fn violation(&self, at: (Complex64, Complex64), modulus: f64) -> OperatorError {
        OperatorError::ContourViolation {
            edge: (self.model.id(self.edge.0), self.model.id(self.edge.1)),
            at,
            modulus,
        }
    }

    /// Jets of the pinning pair at `(w1_c, z2_b)`, indexed `c·N + b`.
    fn jets(&self, pair: &PinningPair<'_>) -> Result<Vec<PinningJet>, OperatorError> {
        let n = self.geo.n;
        (0..n * n)
            .into_par_iter()
            .map(|i| Ok(pair.jet(self.geo.w1[i / n], self.geo.z2[i % n])?))
            .collect()
    }

    /// Fills rows in parallel; `row(a, b, out)` writes one row and returns
    /// the smallest denominator seen together with its witness.
    fn fill<F>(&self, row: F) -> Result<(Array2<Complex64>, f64), OperatorError>
    where
        F: Fn(usize, usize, &mut [Complex64]) -> (f64, (Complex64, Complex64)) + Sync,
    {
        let n = self.geo.n;
        let dim = n * n;
        let mut m = Array2::<Complex64>::zeros((dim, dim));
        let mins: Vec<(f64, (Complex64, Complex64))> = m
            .axis_iter_mut(Axis(0))
            .into_par_iter()
            .enumerate()
            .map(|(i, mut r)| {
                let out = r.as_slice_mut().expect("standard layout");
                row(i / n, i % n, out)
            })
            .collect();
        let (min, at) = mins
            .into_iter()
            .fold((f64::INFINITY, Default::default()), |acc, x| {
                if x.0 < acc.0 {
                    x
                } else {
                    acc
                }
            });
        if !(min >= DENOMINATOR_FLOOR) {
            return Err(self.violation(at, min));
        }
        Ok((m, min))
    }

    /// Double contour integral over `Γ¹_k × Γ²_k`.
    fn hyperbolic(
        &self,
        pair: &PinningPair<'_>,
    ) -> Result<(Array2<Complex64>, f64), OperatorError> {
        let g = &self.geo;
        let n = g.n;
        let jets = self.jets(pair)?;
        let s = pair.sign_s;
        self.fill(|a, b, out| {
            let mut min = f64::INFINITY;
            let mut at = (g.z1[a], g.z2[b]);
            for c in 0..n {
                let j = &jets[c * n + b];
                let du = g.z1[a] - j.phi_u;
                if du.norm() < min {
                    min = du.norm();
                    at = (g.w1[c], g.z2[b]);
                }
                let head = g.om1[c] * s * j.ds_dz2 / du;
                for d in 0..n {
                    let ds = g.w2[d] - j.phi_s;
                    if ds.norm() < min {
                        min = ds.norm();
                        at = (g.w1[c], g.w2[d]);
                    }
                    out[c * n + d] = head * g.om2[d] / ds;
                }
            }
            (min, at)
        })
    }

    /// Single integral over `Γ¹_k`, the second argument interpolated on `Γ²_k`.
    fn parabolic_a(
        &self,
        pair: &PinningPair<'_>,
    ) -> Result<(Array2<Complex64>, f64), OperatorError> {
        let g = &self.geo;
        let n = g.n;
        let jets = self.jets(pair)?;
        let s = pair.sign_s;
        let c2 = self.source.c2;
        self.fill(|a, b, out| {
            let mut min = f64::INFINITY;
            let mut at = (g.z1[a], g.z2[b]);
            for c in 0..n {
                let j = &jets[c * n + b];
                let du = g.z1[a] - j.phi_u;
                if du.norm() < min {
                    min = du.norm();
                    at = (g.w1[c], g.z2[b]);
                }
                let head = g.om1[c] * s * j.ds_dz2 / du;
                for d in 0..n {
                    out[c * n + d] = head * lagrange(&c2, g.w2[d], n, j.phi_s);
                }
            }
            (min, at)
        })
    }

    /// Pointwise form through `φ_u^{-1}`, the first argument interpolated on
    /// `Γ¹_k` and the second integrated over `Γ²_k`.
    fn parabolic_b(
        &self,
        pair: &PinningPair<'_>,
    ) -> Result<(Array2<Complex64>, f64), OperatorError> {
        let g = &self.geo;
        let n = g.n;
        let block = pair.block();
        let u = &block.normal_form().expect("(P.b) normal form").map;
        let opts = *pair.options();
        let pre: Vec<(Complex64, PinningJet)> = (0..n * n)
            .into_par_iter()
            .map(|i| {
                let (z1, z2) = (g.z1[i / n], g.z2[i % n]);
                let ups = invert_unstable(u, z1, z2, &opts).map_err(|source| {
                    OperatorError::InverseFailure {
                        edge: (self.model.id(self.edge.0), self.model.id(self.edge.1)),
                        at: (z1, z2),
                        source,
                    }
                })?;
                Ok((ups, pair.jet(ups, z2)?))
            })
            .collect::<Result<_, OperatorError>>()?;
        let s = pair.sign_s;
        let c1 = self.source.c1;
        self.fill(|a, b, out| {
            let (ups, j) = &pre[a * n + b];
            let mut min = j.du_dw1.norm();
            let mut at = (*ups, g.z2[b]);
            let head = s * j.ds_dz2 / j.du_dw1;
            for c in 0..n {
                let lc = head * lagrange(&c1, g.w1[c], n, *ups);
                for d in 0..n {
                    let ds = g.w2[d] - j.phi_s;
                    if ds.norm() < min {
                        min = ds.norm();
                        at = (*ups, g.w2[d]);
                    }
                    out[c * n + d] = lc * g.om2[d] / ds;
                }
            }
            (min, at)
        })
    }
}

/// Solves `φ_u(υ, z2) = z1` for `υ`, seeded at `z1`.
fn invert_unstable(
    u: &crate::analytic::SeriesJet,
    z1: Complex64,
    z2: Complex64,
    opts: &SolveOptions,
) -> Result<Complex64, crate::analytic::SolveError> {
    newton_solve_1d_within(
        |w| u.value.eval_unchecked(w, z2) - z1,
        |w| u.d1.eval_unchecked(w, z2),
        z1,
        opts,
        |w| u.contains(w, z2),
    )
}

/// Nyström section of the elementary operator of edge `(k, j)` (symbol
/// indices).
pub fn build_section(
    model: &SymbolicModel,
    edge: (usize, usize),
    spec: &ContourSpec,
) -> Result<OperatorSection, OperatorError> {
    let table = PinningTable::new(model, &SolveOptions::default())?;
    section_from_table(&table, edge, spec)
}

fn section_from_table(
    table: &PinningTable<'_>,
    edge: (usize, usize),
    spec: &ContourSpec,
) -> Result<OperatorSection, OperatorError> {
    let model = table.model();
    let (k, j) = edge;
    if spec.nodes < 2 {
        return Err(OperatorError::ParameterOutOfRange(
            "at least two nodes per contour".into(),
        ));
    }
    if spec.contours.len() != model.len() {
        return Err(OperatorError::GeometryMismatch(format!(
            "{} contour pairs for {} symbols",
            spec.contours.len(),
            model.len()
        )));
    }
    let pair = build_pair(table, edge)?;
    let source = spec.contours[k];
    let target = spec.contours[j];
    let asm = Assembly {
        model,
        edge,
        geo: Geometry::new(&source, &target, spec.nodes),
        source,
    };
    let kind = pair.block().kind();
    let (matrix, min_denominator) = match kind {
        BlockKind::ParabolicA if k == j => asm.parabolic_a(pair)?,
        BlockKind::ParabolicB if k == j => asm.parabolic_b(pair)?,
        _ => asm.hyperbolic(pair)?,
    };
    Ok(OperatorSection {
        word: vec![k, j],
        nodes: spec.nodes,
        matrix,
        source,
        target,
        min_denominator,
    })
}

fn build_pair<'a, 'm>(
    table: &'a PinningTable<'m>,
    edge: (usize, usize),
) -> Result<&'a PinningPair<'m>, OperatorError> {
    let model = table.model();
    if edge.0 >= model.len() || edge.1 >= model.len() {
        return Err(OperatorError::GeometryMismatch(format!(
            "edge {edge:?} out of range"
        )));
    }
    table.pair(edge.0, edge.1).ok_or_else(|| {
        OperatorError::GeometryMismatch(format!(
            "edge ({}, {}) is not allowed",
            model.id(edge.0),
            model.id(edge.1)
        ))
    })
}

/// Section of `first` followed by `second`: the matrix product
/// `second · first`.
pub fn compose_sections(
    first: &OperatorSection,
    second: &OperatorSection,
) -> Result<OperatorSection, OperatorError> {
    if first.nodes != second.nodes {
        return Err(OperatorError::GeometryMismatch(format!(
            "node counts {} and {}",
            first.nodes, second.nodes
        )));
    }
    if first.word.last() != second.word.first() || first.target != second.source {
        return Err(OperatorError::GeometryMismatch(
            "target contours of the first section differ from the source contours of the second"
                .into(),
        ));
    }
    let mut word = first.word.clone();
    word.extend_from_slice(&second.word[1..]);
    Ok(OperatorSection {
        word,
        nodes: first.nodes,
        matrix: second.matrix.dot(&first.matrix),
        source: first.source,
        target: second.target,
        min_denominator: first.min_denominator.min(second.min_denominator),
    })
}

/// Section of the word `i_1 … i_{n+1}` (symbol indices).
pub fn word_section(
    model: &SymbolicModel,
    word: &[usize],
    spec: &ContourSpec,
) -> Result<OperatorSection, OperatorError> {
    if word.len() < 2 {
        return Err(OperatorError::GeometryMismatch(
            "a word needs at least two symbols".into(),
        ));
    }
    let table = PinningTable::new(model, &SolveOptions::default())?;
    let mut acc = section_from_table(&table, (word[0], word[1]), spec)?;
    for e in word[1..].windows(2) {
        let next = section_from_table(&table, (e[0], e[1]), spec)?;
        acc = compose_sections(&acc, &next)?;
    }
    Ok(acc)
}

pub fn section_trace(section: &OperatorSection) -> Complex64 {
    section.matrix.diag().sum()
}

/// Trace of the section of the cyclic word `j_1 … j_m`, closing back to `j_1`.
/// The last product is never formed: only its diagonal is summed.
pub fn word_trace(
    model: &SymbolicModel,
    cycle: &[usize],
    spec: &ContourSpec,
) -> Result<Complex64, OperatorError> {
    if cycle.is_empty() {
        return Err(OperatorError::GeometryMismatch("empty cycle".into()));
    }
    let table = PinningTable::new(model, &SolveOptions::default())?;
    let m = cycle.len();
    let edge = |k: usize| (cycle[k], cycle[(k + 1) % m]);
    let last = section_from_table(&table, edge(m - 1), spec)?;
    if m == 1 {
        return Ok(section_trace(&last));
    }
    let mut head = section_from_table(&table, edge(0), spec)?;
    for k in 1..m - 1 {
        let next = section_from_table(&table, edge(k), spec)?;
        head = compose_sections(&head, &next)?;
    }
    if head.target != last.source || head.source != last.target {
        return Err(OperatorError::GeometryMismatch(
            "cycle does not close".into(),
        ));
    }
    // tr(L·H) = Σ_{i,j} L_ij H_ji
    Ok(last
        .matrix
        .outer_iter()
        .into_par_iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .zip(head.matrix.column(i))
                .map(|(a, b)| a * b)
                .sum::<Complex64>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum())
}

/// Block matrix of all edge sections of a purely hyperbolic model; block
/// `(j, k)` holds the section of edge `(k, j)`.
pub fn assemble_transfer_matrix(
    model: &SymbolicModel,
    spec: &ContourSpec,
) -> Result<Array2<Complex64>, OperatorError> {
    if !model.parabolic_symbols().is_empty() {
        return Err(OperatorError::ParameterOutOfRange(
            "parabolic blocks are compared through the model operators, not assembled".into(),
        ));
    }
    let table = PinningTable::new(model, &SolveOptions::default())?;
    let dim = spec.nodes * spec.nodes;
    let s = model.len();
    let mut out = Array2::<Complex64>::zeros((s * dim, s * dim));
    for (k, j) in model.edges() {
        let sec = section_from_table(&table, (k, j), spec)?;
        out.slice_mut(ndarray::s![j * dim..(j + 1) * dim, k * dim..(k + 1) * dim])
            .assign(&sec.matrix);
    }
    Ok(out)
}

/// Eigenvalues of a section matrix, sorted by decreasing modulus.
pub fn section_spectrum(matrix: &Array2<Complex64>) -> Result<Vec<Complex64>, OperatorError> {
    let mut ev = matrix
        .eigvals()
        .map_err(|e| OperatorError::Linalg(e.to_string()))?
        .to_vec();
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(ev)
}

/// `det(I − z·M)` by LU factorization.
pub fn section_fredholm_det(
    matrix: &Array2<Complex64>,
    z: Complex64,
) -> Result<Complex64, OperatorError> {
    let n = matrix.nrows();
    let mut a = matrix.mapv(|v| -z * v);
    for i in 0..n {
        a[[i, i]] += 1.0;
    }
    a.det().map_err(|e| OperatorError::Linalg(e.to_string()))
}
