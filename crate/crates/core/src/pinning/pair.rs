use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PinningError;
use crate::analytic::SolveOptions;
use crate::model::{BlockMap, Domain, SymbolId, SymbolicModel};

/// Values and first partials of a pinning pair at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinningJet {
    pub phi_s: Complex64,
    pub phi_u: Complex64,
    pub ds_dw1: Complex64,
    pub ds_dz2: Complex64,
    pub du_dw1: Complex64,
    pub du_dz2: Complex64,
}

/// The half-inverse maps `φ_s`, `φ_u` of one edge.
#[derive(Debug, Clone)]
pub struct PinningPair<'m> {
    pub edge: (usize, usize),
    ids: (SymbolId, SymbolId),
    block: &'m BlockMap,
    seed: Complex64,
    /// Sign of `∂₂φ_s` on the real rectangle.
    pub sign_s: f64,
    opts: SolveOptions,
}

const SIGN_SAMPLES: usize = 20;

fn real_point(d: &Domain, t: f64) -> f64 {
    let (lo, hi) = d.real_interval();
    let pad = 0.01 * (hi - lo);
    lo + pad + t * (hi - lo - 2.0 * pad)
}

impl<'m> PinningPair<'m> {
    /// `φ_s(w1, z2)`: the solution `w2` of `f̂²(w1, w2) = z2`.
    pub fn phi_s(&self, w1: Complex64, z2: Complex64) -> Result<Complex64, PinningError> {
        self.block
            .stable_inverse(w1, z2, self.seed, &self.opts)
            .map_err(|source| PinningError::Solve {
                word: vec![self.ids.0, self.ids.1],
                at: (w1, z2),
                source,
            })
    }

    /// `(φ_s, φ_u)` at `(w1, z2)`.
    pub fn eval(
        &self,
        w1: Complex64,
        z2: Complex64,
    ) -> Result<(Complex64, Complex64), PinningError> {
        let s = self.phi_s(w1, z2)?;
        Ok((s, self.block.unstable_value(w1, s, z2)))
    }

    pub fn jet(&self, w1: Complex64, z2: Complex64) -> Result<PinningJet, PinningError> {
        let (s, u) = self.eval(w1, z2)?;
        let (ds_dw1, ds_dz2) = self.block.stable_jet(w1, s, z2);
        let (du_dw1, du_dz2) = self.block.unstable_jet(w1, s, z2);
        Ok(PinningJet {
            phi_s: s,
            phi_u: u,
            ds_dw1,
            ds_dz2,
            du_dw1,
            du_dz2,
        })
    }

    pub fn block(&self) -> &'m BlockMap {
        self.block
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }
}

/// Builds the pinning pair of edge `(i, j)` and fixes the sign of `∂₂φ_s`
/// from the rectangle center, confirmed at random real samples.
pub fn build_pinning_pair<'m>(
    model: &'m SymbolicModel,
    edge: (usize, usize),
    opts: &SolveOptions,
) -> Result<PinningPair<'m>, PinningError> {
    let (i, j) = edge;
    if i >= model.len() || j >= model.len() || !model.transitions().allowed(i, j) {
        return Err(PinningError::Admissibility(format!(
            "edge ({i}, {j}) is not allowed"
        )));
    }
    let block = model.block(i, j).expect("allowed edge has a block");
    let mut pair = PinningPair {
        edge,
        ids: (model.id(i), model.id(j)),
        block,
        seed: model.domains(i).d2.seed_point(),
        sign_s: 1.0,
        opts: *opts,
    };
    let d1 = &model.domains(i).d1;
    let d2 = &model.domains(j).d2;
    let sign_at = |x: f64, y: f64| -> Result<f64, PinningError> {
        let jet = pair.jet(Complex64::new(x, 0.0), Complex64::new(y, 0.0))?;
        Ok(jet.ds_dz2.re.signum())
    };
    let reference = sign_at(real_point(d1, 0.5), real_point(d2, 0.5))?;
    let mut rng = ChaCha8Rng::seed_from_u64(((i as u64) << 32) ^ j as u64);
    for _ in 0..SIGN_SAMPLES {
        let x = real_point(d1, rng.random::<f64>());
        let y = real_point(d2, rng.random::<f64>());
        if sign_at(x, y)? != reference {
            return Err(PinningError::SignInconsistency {
                edge: pair.ids,
                at: (x, y),
            });
        }
    }
    pair.sign_s = reference;
    Ok(pair)
}

/// Pinning pairs of every edge of a model, built once and shared.
#[derive(Debug, Clone)]
pub struct PinningTable<'m> {
    model: &'m SymbolicModel,
    pairs: Vec<Option<PinningPair<'m>>>,
    opts: SolveOptions,
}

impl<'m> PinningTable<'m> {
    pub fn new(model: &'m SymbolicModel, opts: &SolveOptions) -> Result<Self, PinningError> {
        let n = model.len();
        let mut pairs = vec![None; n * n];
        for (i, j) in model.edges() {
            pairs[i * n + j] = Some(build_pinning_pair(model, (i, j), opts)?);
        }
        Ok(Self {
            model,
            pairs,
            opts: *opts,
        })
    }

    pub fn model(&self) -> &'m SymbolicModel {
        self.model
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PinningPair<'m>> {
        self.pairs[i * self.model.len() + j].as_ref()
    }
}
