//! Builtin example models.
//!
//! | id | description |
//! |----|-------------|
//! | `linear-saddle` | one hyperbolic symbol, `f(w1, w2) = (w1/2, 2 w2)` on unit discs |
//! | `two-symbol-affine` | full 2-shift of affine saddles with distinct fixed points |
//! | `parabolic-Pa` | one (P.a) symbol with `φ_s = z2 − z2²` and one hyperbolic symbol |
//! | `parabolic-Pb` | mirror image with `φ_u = w1 − w1²` |
//! | `bipartite` | two hyperbolic symbols alternating, no odd cycles |
//! | `flipped-saddle` | `f(w1, w2) = (w1/2, −2 w2)` |
//! | `quadratic-Pa` | `parabolic-Pa` with `f̂¹ = w1/2 + 0.1 w1²` on the parabolic block |
//! | `broken-inclusion` | `f̂¹ = 1.5 w1`, fails validation |

use num_complex::Complex64;

use super::{
    BlockMap, Coordinate, Disc, Domain, ModelParts, Petal, SymbolDomains, SymbolId, SymbolSet,
    SymbolicModel,
};
use crate::analytic::BivariateSeries;

/// Ids accepted by [`builtin`].
pub const BUILTIN_IDS: &[&str] = &[
    "linear-saddle",
    "two-symbol-affine",
    "parabolic-Pa",
    "parabolic-Pb",
    "bipartite",
    "flipped-saddle",
    "quadratic-Pa",
    "broken-inclusion",
];

/// Affine coefficients of the `two-symbol-affine` model.
pub const AFFINE_LAMBDA: f64 = 0.3;
pub const AFFINE_MU: f64 = 3.0;

fn poly(table: &[Vec<f64>], radius: (f64, f64)) -> BivariateSeries {
    BivariateSeries::at_origin(table, radius).expect("valid builtin series")
}

fn unit_discs() -> SymbolDomains {
    let d = Domain::Disc(Disc::new(Complex64::new(0.0, 0.0), 1.0).expect("unit disc"));
    SymbolDomains { d1: d, d2: d }
}

fn hyperbolic(f1: &[Vec<f64>], f2: &[Vec<f64>]) -> BlockMap {
    BlockMap::hyperbolic(poly(f1, (2.0, 2.0)), poly(f2, (2.0, 2.0)), 0.05).expect("valid block")
}

fn linear_parts(name: &str, a: f64, b: f64) -> ModelParts {
    ModelParts {
        name: name.into(),
        symbols: SymbolSet {
            s0: vec![],
            s1: vec![1],
        },
        transitions: vec![vec![true]],
        domains: vec![(1, unit_discs())],
        blocks: vec![((1, 1), hyperbolic(&[vec![0.0], vec![a]], &[vec![0.0, b]]))],
        contours: vec![],
    }
}

fn build(parts: ModelParts) -> SymbolicModel {
    SymbolicModel::new(parts).expect("builtin model is well formed")
}

pub fn linear_saddle_parts() -> ModelParts {
    linear_parts("linear-saddle", 0.5, 2.0)
}

pub fn linear_saddle() -> SymbolicModel {
    build(linear_saddle_parts())
}

pub fn flipped_saddle() -> SymbolicModel {
    build(linear_parts("flipped-saddle", 0.5, -2.0))
}

pub fn broken_inclusion() -> SymbolicModel {
    build(linear_parts("broken-inclusion", 1.5, 2.0))
}

pub fn two_symbol_affine_parts() -> ModelParts {
    let alpha = [-0.3, 0.3];
    let beta = [-0.5, 0.5];
    let ids: [SymbolId; 2] = [1, 2];
    let mut blocks = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            blocks.push((
                (ids[i], ids[j]),
                hyperbolic(
                    &[vec![alpha[j]], vec![AFFINE_LAMBDA]],
                    &[vec![beta[i], AFFINE_MU]],
                ),
            ));
        }
    }
    ModelParts {
        name: "two-symbol-affine".into(),
        symbols: SymbolSet {
            s0: vec![],
            s1: ids.to_vec(),
        },
        transitions: vec![vec![true, true], vec![true, true]],
        domains: vec![(1, unit_discs()), (2, unit_discs())],
        blocks,
        contours: vec![],
    }
}

pub fn two_symbol_affine() -> SymbolicModel {
    build(two_symbol_affine_parts())
}

pub fn bipartite() -> SymbolicModel {
    build(ModelParts {
        name: "bipartite".into(),
        symbols: SymbolSet {
            s0: vec![],
            s1: vec![1, 2],
        },
        transitions: vec![vec![false, true], vec![true, false]],
        domains: vec![(1, unit_discs()), (2, unit_discs())],
        blocks: vec![
            (
                (1, 2),
                hyperbolic(&[vec![0.3], vec![0.3]], &[vec![-0.5, 3.0]]),
            ),
            (
                (2, 1),
                hyperbolic(&[vec![-0.3], vec![0.4]], &[vec![0.4, 2.5]]),
            ),
        ],
        contours: vec![],
    })
}

/// Hyperbolic self-block shared by the parabolic examples.
fn mixing_block() -> BlockMap {
    hyperbolic(
        &[vec![0.3, 0.05], vec![0.3]],
        &[vec![0.5, 3.0, 0.2], vec![0.1]],
    )
}

fn pa_parts(name: &str, f1_pp: &[Vec<f64>]) -> ModelParts {
    let petal = Petal::new(1, 1.7, 2.0, 0.3, 0.35, Coordinate::Second).expect("valid petal");
    let p = SymbolDomains {
        d1: Domain::Disc(Disc::new(Complex64::new(0.0, 0.0), 1.0).expect("disc")),
        d2: Domain::Petal(petal),
    };
    let pp = BlockMap::parabolic_a(
        poly(f1_pp, (2.0, 1.0)),
        1,
        poly(&[vec![0.0]], (2.0, 1.0)),
        0.05,
    )
    .expect("valid block");
    ModelParts {
        name: name.into(),
        symbols: SymbolSet {
            s0: vec![0],
            s1: vec![1],
        },
        transitions: vec![vec![true, true], vec![true, true]],
        domains: vec![(0, p), (1, unit_discs())],
        blocks: vec![
            ((0, 0), pp),
            (
                (0, 1),
                hyperbolic(&[vec![0.3, 0.1], vec![0.3]], &[vec![-1.5, 10.0]]),
            ),
            (
                (1, 0),
                hyperbolic(&[vec![-0.3], vec![0.3]], &[vec![-0.5, 3.0], vec![0.1]]),
            ),
            ((1, 1), mixing_block()),
        ],
        contours: vec![],
    }
}

pub fn parabolic_pa_parts() -> ModelParts {
    pa_parts("parabolic-Pa", &[vec![0.0], vec![0.5]])
}

pub fn parabolic_pa() -> SymbolicModel {
    build(parabolic_pa_parts())
}

pub fn quadratic_pa() -> SymbolicModel {
    build(pa_parts("quadratic-Pa", &[vec![0.0], vec![0.5], vec![0.1]]))
}

pub fn parabolic_pb_parts() -> ModelParts {
    let petal = Petal::new(1, 1.7, 2.0, 0.15, 0.18, Coordinate::First).expect("valid petal");
    let p = SymbolDomains {
        d1: Domain::Petal(petal),
        d2: Domain::Disc(Disc::new(Complex64::new(0.0, 0.0), 1.0).expect("disc")),
    };
    let pp = BlockMap::parabolic_b(
        poly(&[vec![0.0, 2.0]], (1.0, 2.0)),
        1,
        poly(&[vec![0.0]], (1.0, 2.0)),
        0.03,
    )
    .expect("valid block");
    ModelParts {
        name: "parabolic-Pb".into(),
        symbols: SymbolSet {
            s0: vec![0],
            s1: vec![1],
        },
        transitions: vec![vec![true, true], vec![true, true]],
        domains: vec![(0, p), (1, unit_discs())],
        blocks: vec![
            ((0, 0), pp),
            (
                (0, 1),
                hyperbolic(&[vec![0.3, 0.1], vec![0.5]], &[vec![-0.5, 3.0]]),
            ),
            (
                (1, 0),
                hyperbolic(
                    &[vec![0.08, 0.01], vec![0.03]],
                    &[vec![0.5, 3.0], vec![0.1]],
                ),
            ),
            ((1, 1), mixing_block()),
        ],
        contours: vec![],
    }
}

pub fn parabolic_pb() -> SymbolicModel {
    build(parabolic_pb_parts())
}

/// Looks up a builtin model by id.
pub fn builtin(id: &str) -> Option<SymbolicModel> {
    Some(match id {
        "linear-saddle" => linear_saddle(),
        "two-symbol-affine" => two_symbol_affine(),
        "parabolic-Pa" => parabolic_pa(),
        "parabolic-Pb" => parabolic_pb(),
        "bipartite" => bipartite(),
        "flipped-saddle" => flipped_saddle(),
        "quadratic-Pa" => quadratic_pa(),
        "broken-inclusion" => broken_inclusion(),
        _ => return None,
    })
}

/// The four canonical models that pass validation.
pub fn shipped() -> Vec<SymbolicModel> {
    vec![
        linear_saddle(),
        two_symbol_affine(),
        parabolic_pa(),
        parabolic_pb(),
    ]
}
