//! Symbolic models: symbols, transitions, domains and block maps.

mod block;
mod domain;
pub mod examples;
mod io;
mod transitions;
mod validate;
mod words;

use std::collections::BTreeSet;

use num_complex::Complex64;
use thiserror::Error;

use crate::analytic::{SeriesError, SolveError};

pub use block::{BlockKind, BlockMap, Jacobian, NormalForm};
pub use domain::{Coordinate, Disc, Domain, Petal};
pub use io::{load_model, model_from_json, model_to_json, save_model};
pub use transitions::TransitionMatrix;
pub use validate::{validate_model, EdgeReport, ValidationReport};
pub use words::{admissible_words, all_cyclic_words, cyclic_words, AdmissibleWords};

/// External symbol identifier.
pub type SymbolId = u32;

/// Errors raised while building or validating a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("geometry error on edge {edge:?} ({condition}): margin {margin:e} at witness ({}, {})", witness.0, witness.1)]
    Geometry {
        edge: (SymbolId, SymbolId),
        condition: String,
        witness: (Complex64, Complex64),
        margin: f64,
    },
    #[error("solve error on edge {edge:?} at ({}, {}): {source}", witness.0, witness.1)]
    Solve {
        edge: (SymbolId, SymbolId),
        witness: (Complex64, Complex64),
        source: SolveError,
    },
    #[error("series error: {0}")]
    Series(#[from] SeriesError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Parabolic and hyperbolic symbol ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolSet {
    pub s0: Vec<SymbolId>,
    pub s1: Vec<SymbolId>,
}

/// The domain pair `(D¹_k, D²_k)` of one symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolDomains {
    pub d1: Domain,
    pub d2: Domain,
}

/// A circle used as an integration contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Self { center, radius }
    }

    /// Equispaced nodes, counter-clockwise from angle zero.
    pub fn nodes(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| {
                self.center
                    + Complex64::from_polar(
                        self.radius,
                        2.0 * std::f64::consts::PI * k as f64 / n as f64,
                    )
            })
            .collect()
    }

    /// Trapezoid weights for `∮ g(w) dw / 2πi` at `nodes(n)`.
    pub fn weights(&self, n: usize) -> Vec<Complex64> {
        self.nodes(n)
            .into_iter()
            .map(|w| (w - self.center) / n as f64)
            .collect()
    }
}

/// Integration contours `(Γ¹_k, Γ²_k)` of one symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolContours {
    pub c1: Circle,
    pub c2: Circle,
}

/// A validated-shape model (structural invariants hold; geometric
/// conditions are checked separately by [`validate_model`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicModel {
    name: String,
    ids: Vec<SymbolId>,
    parabolic: Vec<bool>,
    transitions: TransitionMatrix,
    domains: Vec<SymbolDomains>,
    blocks: Vec<Option<BlockMap>>,
    contours: Vec<SymbolContours>,
}

/// Raw model parts, keyed by symbol id.
#[derive(Debug, Clone)]
pub struct ModelParts {
    pub name: String,
    pub symbols: SymbolSet,
    /// Rows and columns ordered by ascending symbol id.
    pub transitions: Vec<Vec<bool>>,
    pub domains: Vec<(SymbolId, SymbolDomains)>,
    pub blocks: Vec<((SymbolId, SymbolId), BlockMap)>,
    pub contours: Vec<(SymbolId, SymbolContours)>,
}

fn structural(msg: impl Into<String>) -> ModelError {
    ModelError::Structural(msg.into())
}

impl SymbolicModel {
    pub fn new(parts: ModelParts) -> Result<Self, ModelError> {
        let ModelParts {
            name,
            symbols,
            transitions,
            domains,
            blocks,
            contours,
        } = parts;
        if symbols.s1.is_empty() {
            return Err(structural("the hyperbolic symbol set s1 must be nonempty"));
        }
        let mut all: BTreeSet<SymbolId> = BTreeSet::new();
        for &id in symbols.s0.iter().chain(&symbols.s1) {
            if !all.insert(id) {
                return Err(structural(format!("symbol id {id} appears more than once")));
            }
        }
        let ids: Vec<SymbolId> = all.into_iter().collect();
        let n = ids.len();
        let index = |id: SymbolId| ids.binary_search(&id).ok();
        let parabolic: Vec<bool> = ids.iter().map(|id| symbols.s0.contains(id)).collect();

        let transitions = TransitionMatrix::new(&transitions).map_err(structural)?;
        if transitions.size() != n {
            return Err(structural(format!(
                "transition matrix has size {}, expected {n}",
                transitions.size()
            )));
        }
        if !transitions.is_irreducible() {
            return Err(structural(
                "transition matrix is reducible or has wandering states",
            ));
        }
        for i in 0..n {
            for j in 0..n {
                if parabolic[i] && parabolic[j] && transitions.allowed(i, j) != (i == j) {
                    return Err(structural(format!(
                        "parabolic pair ({}, {}) must have t = {}",
                        ids[i],
                        ids[j],
                        (i == j) as u8
                    )));
                }
            }
        }

        let mut dom: Vec<Option<SymbolDomains>> = vec![None; n];
        for (id, d) in domains {
            let k = index(id)
                .ok_or_else(|| structural(format!("domains given for unknown symbol {id}")))?;
            if dom[k].replace(d).is_some() {
                return Err(structural(format!("domains for symbol {id} given twice")));
            }
        }
        let domains: Vec<SymbolDomains> = dom
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.ok_or_else(|| structural(format!("symbol {} has no domains", ids[k]))))
            .collect::<Result<_, _>>()?;
        for k in 0..n {
            check_domains(ids[k], parabolic[k], &domains[k])?;
        }

        let mut blk: Vec<Option<BlockMap>> = vec![None; n * n];
        for ((a, b), map) in blocks {
            let i = index(a).ok_or_else(|| structural(format!("block for unknown symbol {a}")))?;
            let j = index(b).ok_or_else(|| structural(format!("block for unknown symbol {b}")))?;
            if !transitions.allowed(i, j) {
                return Err(structural(format!(
                    "block given for forbidden transition ({a}, {b})"
                )));
            }
            if blk[i * n + j].replace(map).is_some() {
                return Err(structural(format!("block ({a}, {b}) given twice")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !transitions.allowed(i, j) {
                    continue;
                }
                let map = blk[i * n + j].as_ref().ok_or_else(|| {
                    structural(format!("missing block for edge ({}, {})", ids[i], ids[j]))
                })?;
                check_block(ids[i], ids[j], i == j && parabolic[i], &domains[i], map)?;
            }
        }

        let mut con: Vec<Option<SymbolContours>> = vec![None; n];
        for (id, c) in contours {
            let k =
                index(id).ok_or_else(|| structural(format!("contours for unknown symbol {id}")))?;
            if !(c.c1.radius > 0.0 && c.c2.radius > 0.0) {
                return Err(structural(format!(
                    "contour radii for symbol {id} must be positive"
                )));
            }
            con[k] = Some(c);
        }
        let contours = con
            .into_iter()
            .enumerate()
            .map(|(k, c)| c.unwrap_or_else(|| default_contours(&domains[k])))
            .collect();

        Ok(Self {
            name,
            ids,
            parabolic,
            transitions,
            domains,
            blocks: blk,
            contours,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, k: usize) -> SymbolId {
        self.ids[k]
    }

    pub fn ids(&self) -> &[SymbolId] {
        &self.ids
    }

    pub fn index_of(&self, id: SymbolId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Maps a word of ids to symbol indices.
    pub fn word_from_ids(&self, ids: &[SymbolId]) -> Option<Vec<usize>> {
        ids.iter().map(|&id| self.index_of(id)).collect()
    }

    pub fn word_ids(&self, word: &[usize]) -> Vec<SymbolId> {
        word.iter().map(|&k| self.ids[k]).collect()
    }

    pub fn is_parabolic(&self, k: usize) -> bool {
        self.parabolic[k]
    }

    pub fn symbol_set(&self) -> SymbolSet {
        let mut set = SymbolSet::default();
        for (k, &id) in self.ids.iter().enumerate() {
            if self.parabolic[k] {
                set.s0.push(id);
            } else {
                set.s1.push(id);
            }
        }
        set
    }

    pub fn transitions(&self) -> &TransitionMatrix {
        &self.transitions
    }

    pub fn domains(&self, k: usize) -> &SymbolDomains {
        &self.domains[k]
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&BlockMap> {
        self.blocks[i * self.len() + j].as_ref()
    }

    pub fn contours(&self, k: usize) -> &SymbolContours {
        &self.contours[k]
    }

    /// Edges `(i, j)` with `t_ij = 1`, row-major.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.transitions.allowed(i, j))
            .collect()
    }

    /// True if the word is admissible (consecutive transitions allowed).
    pub fn is_admissible(&self, word: &[usize]) -> bool {
        word.iter().all(|&k| k < self.len())
            && word
                .windows(2)
                .all(|w| self.transitions.allowed(w[0], w[1]))
    }

    /// Parabolic symbols with their block kind.
    pub fn parabolic_symbols(&self) -> Vec<(usize, BlockKind)> {
        (0..self.len())
            .filter(|&k| self.parabolic[k])
            .map(|k| {
                (
                    k,
                    self.block(k, k)
                        .map(BlockMap::kind)
                        .unwrap_or(BlockKind::Hyperbolic),
                )
            })
            .collect()
    }
}

fn check_domains(id: SymbolId, parabolic: bool, d: &SymbolDomains) -> Result<(), ModelError> {
    let origin = Complex64::new(0.0, 0.0);
    match (parabolic, d.d1, d.d2) {
        (false, Domain::Disc(_), Domain::Disc(_)) => Ok(()),
        (false, _, _) => Err(structural(format!(
            "hyperbolic symbol {id} must have disc domains in both coordinates"
        ))),
        (true, Domain::Disc(a), Domain::Petal(p)) => {
            if p.orientation != Coordinate::Second {
                return Err(structural(format!(
                    "petal of symbol {id} sits in the second coordinate but is tagged first"
                )));
            }
            if a.signed_margin(origin) <= 0.0 {
                return Err(structural(format!(
                    "first domain of symbol {id} must contain the parabolic point"
                )));
            }
            Ok(())
        }
        (true, Domain::Petal(p), Domain::Disc(b)) => {
            if p.orientation != Coordinate::First {
                return Err(structural(format!(
                    "petal of symbol {id} sits in the first coordinate but is tagged second"
                )));
            }
            if b.signed_margin(origin) <= 0.0 {
                return Err(structural(format!(
                    "second domain of symbol {id} must contain the parabolic point"
                )));
            }
            Ok(())
        }
        (true, _, _) => Err(structural(format!(
            "parabolic symbol {id} needs exactly one petal domain"
        ))),
    }
}

fn covers(
    series: &crate::analytic::BivariateSeries,
    d1: &Domain,
    d2: &Domain,
    margin: f64,
) -> bool {
    let (c1, c2) = series.center();
    let (r1, r2) = series.radius();
    let need1 = (d1.center() - c1).norm() + d1.extent() + margin;
    let need2 = (d2.center() - c2).norm() + d2.extent() + margin;
    need1 <= r1 * (1.0 + 1e-12) && need2 <= r2 * (1.0 + 1e-12)
}

fn check_block(
    a: SymbolId,
    b: SymbolId,
    parabolic_self: bool,
    source: &SymbolDomains,
    map: &BlockMap,
) -> Result<(), ModelError> {
    let kind = map.kind();
    let expected = if parabolic_self {
        match source.d2 {
            Domain::Petal(_) => BlockKind::ParabolicA,
            Domain::Disc(_) => BlockKind::ParabolicB,
        }
    } else {
        BlockKind::Hyperbolic
    };
    if kind != expected {
        return Err(structural(format!(
            "edge ({a}, {b}) has kind {} but the domains require {}",
            kind.tag(),
            expected.tag()
        )));
    }
    if let Some(nf) = map.normal_form() {
        let petal = source
            .d1
            .as_petal()
            .or(source.d2.as_petal())
            .expect("parabolic symbol has a petal");
        if nf.nu != petal.nu {
            return Err(structural(format!(
                "edge ({a}, {b}) normal form has nu = {} but the petal has nu = {}",
                nf.nu, petal.nu
            )));
        }
    }
    let margin = map.extension_margin();
    for (label, s) in map.series() {
        if !covers(s, &source.d1, &source.d2, margin) {
            return Err(structural(format!(
                "series {label} of edge ({a}, {b}) is not valid on the source domains enlarged by {margin}"
            )));
        }
    }
    Ok(())
}

/// Boundary circles for disc domains; circles inside the petal (or its
/// mirror, for a petal in the first coordinate) otherwise.
pub fn default_contours(d: &SymbolDomains) -> SymbolContours {
    let circle_of = |dom: &Domain, mirror: bool| match dom {
        Domain::Disc(disc) => Circle::new(disc.center, disc.radius),
        Domain::Petal(p) => {
            let c = if mirror { -0.5 * p.r } else { 0.5 * p.r };
            Circle::new(Complex64::new(c, 0.0), 0.4 * p.r)
        }
    };
    SymbolContours {
        c1: circle_of(&d.d1, true),
        c2: circle_of(&d.d2, false),
    }
}
