use num_complex::Complex64;

use super::{PinningError, PinningPair, PinningTable};
use crate::analytic::{contraction_fixed_point_vec, SolveError, SolveOptions};
use crate::model::{SymbolId, SymbolicModel};

/// Solution of the pinning problem along a word `i_1 … i_{n+1}`.
///
/// `first[k]`, `second[k]` are the coordinates of the k-th orbit point;
/// `first[0] = w1` and `second[n] = z2` are the pinned ends.
#[derive(Debug, Clone, PartialEq)]
pub struct PinnedChain {
    pub phi_s: Complex64,
    pub phi_u: Complex64,
    pub ratio: f64,
    pub sweeps: usize,
    pub first: Vec<Complex64>,
    pub second: Vec<Complex64>,
}

/// Iterated pinning maps `φ_s^{(n)}`, `φ_u^{(n)}` of one admissible word.
#[derive(Debug, Clone)]
pub struct IteratedPinning<'a> {
    table: &'a PinningTable<'a>,
    word: Vec<usize>,
    ids: Vec<SymbolId>,
    pairs: Vec<&'a PinningPair<'a>>,
}

pub(crate) fn check_word(
    model: &SymbolicModel,
    word: &[usize],
    min_len: usize,
) -> Result<(), PinningError> {
    if word.len() < min_len {
        return Err(PinningError::Admissibility(format!(
            "word needs at least {min_len} symbols, got {}",
            word.len()
        )));
    }
    if let Some(&k) = word.iter().find(|&&k| k >= model.len()) {
        return Err(PinningError::Admissibility(format!(
            "unknown symbol index {k}"
        )));
    }
    let ids = model.word_ids(word);
    if !model.is_admissible(word) {
        return Err(PinningError::Admissibility(format!(
            "{ids:?} has a forbidden transition"
        )));
    }
    if word.iter().all(|&k| model.is_parabolic(k)) {
        return Err(PinningError::Admissibility(format!(
            "{ids:?} uses only parabolic symbols"
        )));
    }
    Ok(())
}

impl<'a> IteratedPinning<'a> {
    pub fn new(table: &'a PinningTable<'a>, word: &[usize]) -> Result<Self, PinningError> {
        let model = table.model();
        check_word(model, word, 2)?;
        let pairs = word
            .windows(2)
            .map(|e| table.pair(e[0], e[1]).expect("admissible edge has a pair"))
            .collect();
        Ok(Self {
            table,
            word: word.to_vec(),
            ids: model.word_ids(word),
            pairs,
        })
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Number of edges `n`.
    pub fn steps(&self) -> usize {
        self.pairs.len()
    }

    fn seed(&self, warm: Option<&PinnedChain>) -> Vec<Complex64> {
        let n = self.steps();
        if let Some(w) = warm.filter(|w| w.first.len() == n + 1) {
            return w.first[1..].iter().chain(&w.second[..n]).copied().collect();
        }
        let model = self.table.model();
        let a = self.word[1..]
            .iter()
            .map(|&k| model.domains(k).d1.seed_point());
        let b = self.word[..n]
            .iter()
            .map(|&k| model.domains(k).d2.seed_point());
        a.chain(b).collect()
    }

    /// One forward pass over the first coordinates followed by one backward
    /// pass over the second coordinates.
    fn sweep(
        &self,
        w1: Complex64,
        z2: Complex64,
        x: &[Complex64],
    ) -> Result<Vec<Complex64>, PinningError> {
        let n = self.steps();
        let mut a = Vec::with_capacity(n + 1);
        a.push(w1);
        a.extend_from_slice(&x[..n]);
        let mut b = x[n..].to_vec();
        b.push(z2);
        for (k, pair) in self.pairs.iter().enumerate() {
            a[k + 1] = pair.eval(a[k], b[k + 1])?.1;
        }
        for (k, pair) in self.pairs.iter().enumerate().rev() {
            b[k] = pair.phi_s(a[k], b[k + 1])?;
        }
        a.remove(0);
        b.pop();
        a.extend(b);
        Ok(a)
    }

    fn wrap(&self, at: (Complex64, Complex64), source: SolveError) -> PinningError {
        PinningError::Solve {
            word: self.ids.clone(),
            at,
            source,
        }
    }

    /// Solves the chain, optionally warm-started from a previous solution.
    pub fn solve(
        &self,
        w1: Complex64,
        z2: Complex64,
        warm: Option<&PinnedChain>,
    ) -> Result<PinnedChain, PinningError> {
        let n = self.steps();
        let opts = self.table.options();
        let mut failure = None;
        let fp = contraction_fixed_point_vec(
            |x| {
                self.sweep(w1, z2, x).map_err(|e| {
                    let inner = e
                        .solve_error()
                        .cloned()
                        .unwrap_or(SolveError::NoConvergence {
                            iterations: 0,
                            residual: f64::NAN,
                        });
                    failure = Some(e);
                    inner
                })
            },
            &self.seed(warm),
            opts,
        );
        let fp = match fp {
            Ok(fp) => fp,
            Err(e) => return Err(failure.unwrap_or_else(|| self.wrap((w1, z2), e))),
        };
        let mut first = Vec::with_capacity(n + 1);
        first.push(w1);
        first.extend_from_slice(&fp.point[..n]);
        let mut second = fp.point[n..].to_vec();
        second.push(z2);
        Ok(PinnedChain {
            phi_s: second[0],
            phi_u: first[n],
            ratio: fp.ratio,
            sweeps: fp.iterations,
            first,
            second,
        })
    }

    /// `(φ_s^{(n)}, φ_u^{(n)}, observed ratio)` at `(w1, z2)`.
    pub fn eval(
        &self,
        w1: Complex64,
        z2: Complex64,
    ) -> Result<(Complex64, Complex64, f64), PinningError> {
        let c = self.solve(w1, z2, None)?;
        Ok((c.phi_s, c.phi_u, c.ratio))
    }

    /// Residual of the defining identity: the block composition applied to
    /// `(w1, φ_s^{(n)})` is compared with `(φ_u^{(n)}, z2)`.
    pub fn identity_residual(&self, w1: Complex64, z2: Complex64) -> Result<f64, PinningError> {
        let c = self.solve(w1, z2, None)?;
        let opts = self.table.options();
        let (mut x, mut y) = (w1, c.phi_s);
        for pair in &self.pairs {
            (x, y) = pair
                .block()
                .forward(x, y, opts)
                .map_err(|e| self.wrap((x, y), e))?;
        }
        Ok((x - c.phi_u).norm().max((y - z2).norm()))
    }
}

/// Evaluates the iterated pinning maps of `word` (symbol indices) at
/// `(w1, z2)` and returns `(φ_s^{(n)}, φ_u^{(n)}, observed ratio)`.
pub fn iterate_pinning(
    model: &SymbolicModel,
    word: &[usize],
    w1: Complex64,
    z2: Complex64,
    opts: &SolveOptions,
) -> Result<(Complex64, Complex64, f64), PinningError> {
    check_word(model, word, 2)?;
    let table = PinningTable::new(model, opts)?;
    IteratedPinning::new(&table, word)?.eval(w1, z2)
}
