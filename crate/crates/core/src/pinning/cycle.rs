use num_complex::Complex64;
use serde::Serialize;

use super::chain::check_word;
use super::{IteratedPinning, PinnedChain, PinningError, PinningTable};
use crate::analytic::{contraction_fixed_point_vec, SolveError, SolveOptions};
use crate::model::{Jacobian, SymbolId, SymbolicModel};

/// A periodic point of the model together with its multipliers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleRecord {
    pub word: Vec<usize>,
    pub ids: Vec<SymbolId>,
    #[serde(serialize_with = "ser_point")]
    pub point: (Complex64, Complex64),
    #[serde(skip)]
    pub orbit: Vec<(Complex64, Complex64)>,
    /// `(λ_E, λ_F)` with `|λ_E| < |λ_F|`.
    pub multipliers: (f64, f64),
    /// The m-step Jacobian at `point`.
    pub jacobian: [[f64; 2]; 2],
    pub det_factor: f64,
    pub trace_term: f64,
    /// Observed contraction ratio of the outer iteration.
    pub ratio: f64,
}

fn ser_point<S: serde::Serializer>(p: &(Complex64, Complex64), s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for v in [p.0.re, p.0.im, p.1.re, p.1.im] {
        seq.serialize_element(&v)?;
    }
    seq.end()
}

const REAL_TOL: f64 = 1e-8;
const NEUTRAL_TOL: f64 = 1e-12;
const POLISH_STEPS: usize = 3;

fn mat_mul(a: &Jacobian, b: &Jacobian) -> Jacobian {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

const IDENTITY: Jacobian = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];

struct Cycle<'a> {
    table: &'a PinningTable<'a>,
    word: &'a [usize],
    ids: Vec<SymbolId>,
}

impl Cycle<'_> {
    fn block(&self, k: usize) -> &crate::model::BlockMap {
        let m = self.word.len();
        self.table
            .model()
            .block(self.word[k], self.word[(k + 1) % m])
            .expect("admissible edge has a block")
    }

    /// Forward image of `x` under the m-step map and its Jacobian.
    fn forward(
        &self,
        x: (Complex64, Complex64),
        opts: &SolveOptions,
    ) -> Result<((Complex64, Complex64), Jacobian), SolveError> {
        let mut p = x;
        let mut jac = IDENTITY;
        for k in 0..self.word.len() {
            let b = self.block(k);
            let next = b.forward(p.0, p.1, opts)?;
            jac = mat_mul(&b.jacobian(p.0, p.1, next.1), &jac);
            p = next;
        }
        Ok((p, jac))
    }

    /// Newton steps on `F(x) = x` using forward evaluation. Corrections that
    /// are not small, or that fail to evaluate, are discarded.
    fn polish(&self, mut x: (Complex64, Complex64)) -> (Complex64, Complex64) {
        let opts = self.table.options();
        for _ in 0..POLISH_STEPS {
            let Ok((fx, j)) = self.forward(x, opts) else {
                break;
            };
            let r = (fx.0 - x.0, fx.1 - x.1);
            let a = j[0][0] - 1.0;
            let d = j[1][1] - 1.0;
            let det = a * d - j[0][1] * j[1][0];
            if det.norm() == 0.0 {
                break;
            }
            let dx = (
                (d * r.0 - j[0][1] * r.1) / det,
                (a * r.1 - j[1][0] * r.0) / det,
            );
            let size = dx.0.norm().max(dx.1.norm());
            if !(size <= 1e-8 * (1.0 + x.0.norm().max(x.1.norm()))) {
                break;
            }
            x = (x.0 - dx.0, x.1 - dx.1);
            if size <= f64::EPSILON * (1.0 + x.0.norm().max(x.1.norm())) {
                break;
            }
        }
        x
    }

    fn record(&self, chain: &PinnedChain, ratio: f64) -> Result<CycleRecord, PinningError> {
        let m = self.word.len();
        let orbit: Vec<_> = (0..m).map(|k| (chain.first[k], chain.second[k])).collect();
        let point = orbit[0];
        let imag = point.0.im.abs().max(point.1.im.abs());
        if imag > REAL_TOL {
            return Err(PinningError::NonRealPoint {
                word: self.ids.clone(),
                imag,
            });
        }
        let mut jac = IDENTITY;
        for k in 0..m {
            let d = self
                .block(k)
                .jacobian(chain.first[k], chain.second[k], chain.second[k + 1]);
            jac = mat_mul(&d, &jac);
        }
        let scale = jac.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        if jac
            .iter()
            .flatten()
            .any(|v| v.im.abs() > REAL_TOL * (1.0 + scale))
        {
            return Err(PinningError::NonRealPoint {
                word: self.ids.clone(),
                imag,
            });
        }
        let j = [[jac[0][0].re, jac[0][1].re], [jac[1][0].re, jac[1][1].re]];
        let tr = j[0][0] + j[1][1];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let disc = tr * tr - 4.0 * det;
        if disc < 0.0 {
            return Err(PinningError::ComplexMultipliers {
                word: self.ids.clone(),
            });
        }
        let big = 0.5 * (tr + tr.signum() * disc.sqrt());
        let small = if big == 0.0 { 0.0 } else { det / big };
        let (lambda_e, lambda_f) = if small.abs() <= big.abs() {
            (small, big)
        } else {
            (big, small)
        };
        if lambda_f.abs() - 1.0 < NEUTRAL_TOL || 1.0 - lambda_e.abs() < NEUTRAL_TOL {
            return Err(PinningError::NonHyperbolic {
                word: self.ids.clone(),
                lambda_e,
                lambda_f,
            });
        }
        let det_factor = (det - tr + 1.0).abs();
        Ok(CycleRecord {
            word: self.word.to_vec(),
            ids: self.ids.clone(),
            point,
            orbit,
            multipliers: (lambda_e, lambda_f),
            jacobian: j,
            det_factor,
            trace_term: 1.0 / det_factor,
            ratio,
        })
    }
}

/// Locates the periodic point of a cyclic word using a pinning table built
/// once for the model.
pub fn periodic_point_in(
    table: &PinningTable<'_>,
    word: &[usize],
) -> Result<CycleRecord, PinningError> {
    let model = table.model();
    check_word(model, word, 1)?;
    let mut closed = word.to_vec();
    closed.push(word[0]);
    let chain = IteratedPinning::new(table, &closed)?;
    let cycle = Cycle {
        table,
        word,
        ids: model.word_ids(word),
    };
    let d = model.domains(word[0]);
    let mut warm: Option<PinnedChain> = None;
    let mut failure = None;
    let outer = contraction_fixed_point_vec(
        |x| match chain.solve(x[0], x[1], warm.as_ref()) {
            Ok(c) => {
                let next = vec![c.phi_u, c.phi_s];
                warm = Some(c);
                Ok(next)
            }
            Err(e) => {
                let inner = e
                    .solve_error()
                    .cloned()
                    .unwrap_or(SolveError::NoConvergence {
                        iterations: 0,
                        residual: f64::NAN,
                    });
                failure = Some(e);
                Err(inner)
            }
        },
        &[d.d1.seed_point(), d.d2.seed_point()],
        table.options(),
    );
    let outer = match outer {
        Ok(fp) => fp,
        Err(source) => {
            return Err(failure.unwrap_or(PinningError::Solve {
                word: cycle.ids.clone(),
                at: (d.d1.seed_point(), d.d2.seed_point()),
                source,
            }))
        }
    };
    let x = cycle.polish((outer.point[0], outer.point[1]));
    let final_chain = chain.solve(x.0, x.1, warm.as_ref())?;
    cycle.record(&final_chain, outer.ratio)
}

/// Locates the periodic point of the cyclic word `word` (symbol indices)
/// and returns its multipliers and trace term.
pub fn periodic_point(
    model: &SymbolicModel,
    word: &[usize],
    opts: &SolveOptions,
) -> Result<CycleRecord, PinningError> {
    check_word(model, word, 1)?;
    let table = PinningTable::new(model, opts)?;
    periodic_point_in(&table, word)
}
