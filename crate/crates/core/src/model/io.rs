//! JSON model documents.
//!
//! ```json
//! {
//!   "name": "example",
//!   "symbols": { "s0": [0], "s1": [1] },
//!   "transitions": [[1, 1], [1, 1]],
//!   "domains": {
//!     "0": { "d1": { "center": [0, 0], "radius": 1 },
//!            "d2": { "nu": 1, "theta": 1.7, "r": 0.3, "theta_tilde": 2.0,
//!                    "r_tilde": 0.35, "orientation": "second" } },
//!     "1": { "d1": { "center": [0, 0], "radius": 1 },
//!            "d2": { "center": [0, 0], "radius": 1 } }
//!   },
//!   "blocks": [
//!     { "edge": [0, 0], "kind": "P.a", "f1": [[0], [0.5]], "nu": 1,
//!       "phi_tilde": [[0]], "validity_radius": [2, 1], "extension_margin": 0.05 }
//!   ]
//! }
//! ```
//!
//! Transition rows and columns follow ascending symbol id. Series tables are
//! indexed `[deg_w1][deg_w2]` and expanded at the source domain centers
//! unless a block gives `"center": [c1, c2]`; `phi_tilde` is always expanded
//! at the parabolic point. An optional `"contours"` map overrides the
//! integration circles per symbol.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    BlockKind, BlockMap, Circle, Coordinate, Disc, Domain, ModelError, ModelParts, Petal,
    SymbolContours, SymbolDomains, SymbolId, SymbolSet, SymbolicModel,
};
use crate::analytic::BivariateSeries;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    name: String,
    symbols: SymbolsDoc,
    transitions: Vec<Vec<u8>>,
    domains: BTreeMap<String, DomainPairDoc>,
    blocks: Vec<BlockDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    contours: BTreeMap<String, ContourPairDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolsDoc {
    #[serde(default)]
    s0: Vec<SymbolId>,
    s1: Vec<SymbolId>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainPairDoc {
    d1: DomainDoc,
    d2: DomainDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum DomainDoc {
    Disc {
        center: [f64; 2],
        radius: f64,
    },
    Petal {
        nu: u32,
        theta: f64,
        r: f64,
        theta_tilde: f64,
        r_tilde: f64,
        orientation: String,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RadiusDoc {
    Scalar(f64),
    Pair([f64; 2]),
}

impl RadiusDoc {
    fn pair(&self) -> (f64, f64) {
        match *self {
            RadiusDoc::Scalar(r) => (r, r),
            RadiusDoc::Pair([a, b]) => (a, b),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    edge: [SymbolId; 2],
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f1: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f2: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi_tilde: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 2]>,
    validity_radius: RadiusDoc,
    extension_margin: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleDoc {
    center: [f64; 2],
    radius: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContourPairDoc {
    c1: CircleDoc,
    c2: CircleDoc,
}

fn parse_err(msg: impl Into<String>) -> ModelError {
    ModelError::Parse(msg.into())
}

fn parse_id(key: &str) -> Result<SymbolId, ModelError> {
    key.trim()
        .parse()
        .map_err(|_| parse_err(format!("symbol key {key:?} is not an integer id")))
}

fn domain_from_doc(doc: &DomainDoc) -> Result<Domain, ModelError> {
    match doc {
        DomainDoc::Disc { center, radius } => {
            Disc::new(Complex64::new(center[0], center[1]), *radius)
                .map(Domain::Disc)
                .map_err(ModelError::Structural)
        }
        DomainDoc::Petal {
            nu,
            theta,
            r,
            theta_tilde,
            r_tilde,
            orientation,
        } => {
            let orientation = match orientation.as_str() {
                "first" | "1" => Coordinate::First,
                "second" | "2" => Coordinate::Second,
                other => return Err(parse_err(format!("unknown petal orientation {other:?}"))),
            };
            Petal::new(*nu, *theta, *theta_tilde, *r, *r_tilde, orientation)
                .map(Domain::Petal)
                .map_err(ModelError::Structural)
        }
    }
}

fn domain_to_doc(d: &Domain) -> DomainDoc {
    match d {
        Domain::Disc(d) => DomainDoc::Disc {
            center: [d.center.re, d.center.im],
            radius: d.radius,
        },
        Domain::Petal(p) => DomainDoc::Petal {
            nu: p.nu,
            theta: p.theta,
            r: p.r,
            theta_tilde: p.theta_tilde,
            r_tilde: p.r_tilde,
            orientation: match p.orientation {
                Coordinate::First => "first".into(),
                Coordinate::Second => "second".into(),
            },
        },
    }
}

fn block_from_doc(doc: &BlockDoc, source: &SymbolDomains) -> Result<BlockMap, ModelError> {
    let kind = BlockKind::from_tag(&doc.kind)
        .ok_or_else(|| parse_err(format!("unknown block kind {:?}", doc.kind)))?;
    let radius = doc.validity_radius.pair();
    let center = match doc.center {
        Some([a, b]) => (Complex64::new(a, 0.0), Complex64::new(b, 0.0)),
        None => (source.d1.center(), source.d2.center()),
    };
    let edge = doc.edge;
    fn table<'a>(
        t: &'a Option<Vec<Vec<f64>>>,
        edge: [SymbolId; 2],
        kind: BlockKind,
        label: &str,
    ) -> Result<&'a Vec<Vec<f64>>, ModelError> {
        t.as_ref().ok_or_else(|| {
            parse_err(format!(
                "block {edge:?} of kind {} needs {label}",
                kind.tag()
            ))
        })
    }
    let series =
        |t: &Vec<Vec<f64>>, c| BivariateSeries::new(t, c, radius).map_err(ModelError::from);
    let origin = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let structural = ModelError::Structural;
    match kind {
        BlockKind::Hyperbolic => BlockMap::hyperbolic(
            series(table(&doc.f1, edge, kind, "f1")?, center)?,
            series(table(&doc.f2, edge, kind, "f2")?, center)?,
            doc.extension_margin,
        )
        .map_err(structural),
        BlockKind::ParabolicA => BlockMap::parabolic_a(
            series(table(&doc.f1, edge, kind, "f1")?, center)?,
            doc.nu
                .ok_or_else(|| parse_err(format!("block {edge:?} needs nu")))?,
            series(table(&doc.phi_tilde, edge, kind, "phi_tilde")?, origin)?,
            doc.extension_margin,
        )
        .map_err(structural),
        BlockKind::ParabolicB => BlockMap::parabolic_b(
            series(table(&doc.f2, edge, kind, "f2")?, center)?,
            doc.nu
                .ok_or_else(|| parse_err(format!("block {edge:?} needs nu")))?,
            series(table(&doc.phi_tilde, edge, kind, "phi_tilde")?, origin)?,
            doc.extension_margin,
        )
        .map_err(structural),
    }
}

fn block_to_doc(edge: [SymbolId; 2], map: &BlockMap) -> BlockDoc {
    let main = map.series()[0].1;
    let (c1, c2) = main.center();
    let (r1, r2) = main.radius();
    BlockDoc {
        edge,
        kind: map.kind().tag().into(),
        f1: map.f1().map(|f| f.value.table()),
        f2: map.f2().map(|f| f.value.table()),
        nu: map.normal_form().map(|n| n.nu),
        phi_tilde: map.normal_form().map(|n| n.phi_tilde.table()),
        center: Some([c1.re, c2.re]),
        validity_radius: RadiusDoc::Pair([r1, r2]),
        extension_margin: map.extension_margin(),
    }
}

/// Parses a JSON model document.
pub fn model_from_json(text: &str) -> Result<SymbolicModel, ModelError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let mut domains = Vec::new();
    let mut by_id = BTreeMap::new();
    for (key, pair) in &doc.domains {
        let id = parse_id(key)?;
        let d = SymbolDomains {
            d1: domain_from_doc(&pair.d1)?,
            d2: domain_from_doc(&pair.d2)?,
        };
        by_id.insert(id, d);
        domains.push((id, d));
    }
    let mut blocks = Vec::new();
    for b in &doc.blocks {
        let source = by_id.get(&b.edge[0]).ok_or_else(|| {
            parse_err(format!(
                "block {:?} starts at a symbol without domains",
                b.edge
            ))
        })?;
        blocks.push(((b.edge[0], b.edge[1]), block_from_doc(b, source)?));
    }
    let mut contours = Vec::new();
    for (key, c) in &doc.contours {
        contours.push((
            parse_id(key)?,
            SymbolContours {
                c1: Circle::new(Complex64::new(c.c1.center[0], c.c1.center[1]), c.c1.radius),
                c2: Circle::new(Complex64::new(c.c2.center[0], c.c2.center[1]), c.c2.radius),
            },
        ));
    }
    let transitions = doc
        .transitions
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| match v {
                    0 => Ok(false),
                    1 => Ok(true),
                    other => Err(parse_err(format!(
                        "transition entries must be 0 or 1, got {other}"
                    ))),
                })
                .collect::<Result<Vec<bool>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SymbolicModel::new(ModelParts {
        name: doc.name,
        symbols: SymbolSet {
            s0: doc.symbols.s0,
            s1: doc.symbols.s1,
        },
        transitions,
        domains,
        blocks,
        contours,
    })
}

/// Serializes a model to a JSON document that [`model_from_json`] reads back.
pub fn model_to_json(model: &SymbolicModel) -> String {
    let set = model.symbol_set();
    let n = model.len();
    let mut domains = BTreeMap::new();
    let mut contours = BTreeMap::new();
    let mut blocks = Vec::new();
    for k in 0..n {
        let d = model.domains(k);
        domains.insert(
            model.id(k).to_string(),
            DomainPairDoc {
                d1: domain_to_doc(&d.d1),
                d2: domain_to_doc(&d.d2),
            },
        );
        let c = model.contours(k);
        let circle = |c: &Circle| CircleDoc {
            center: [c.center.re, c.center.im],
            radius: c.radius,
        };
        contours.insert(
            model.id(k).to_string(),
            ContourPairDoc {
                c1: circle(&c.c1),
                c2: circle(&c.c2),
            },
        );
    }
    for (i, j) in model.edges() {
        let map = model.block(i, j).expect("edge has a block");
        blocks.push(block_to_doc([model.id(i), model.id(j)], map));
    }
    let doc = Document {
        name: model.name().to_string(),
        symbols: SymbolsDoc {
            s0: set.s0,
            s1: set.s1,
        },
        transitions: model
            .transitions()
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(u8::from).collect())
            .collect(),
        domains,
        blocks,
        contours,
    };
    serde_json::to_string_pretty(&doc).expect("model document serializes")
}

pub fn load_model(path: &Path) -> Result<SymbolicModel, ModelError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ModelError::Io(format!("{}: {e}", path.display())))?;
    model_from_json(&text)
}

pub fn save_model(model: &SymbolicModel, path: &Path) -> Result<(), ModelError> {
    std::fs::write(path, model_to_json(model))
        .map_err(|e| ModelError::Io(format!("{}: {e}", path.display())))
}
