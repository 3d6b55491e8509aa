use rayon::prelude::*;

use super::DeterminantError;
use crate::analytic::SolveOptions;
use crate::model::{cyclic_words, SymbolicModel};
use crate::pinning::{periodic_point_in, PinningTable};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `d_1 … d_order`: sums of trace terms over cyclic words of each length.
///
/// Words are solved on `jobs` threads (0 = rayon default) and summed in
/// word order, so the result does not depend on `jobs`.
pub fn trace_sequence(
    model: &SymbolicModel,
    order: usize,
    opts: &SolveOptions,
    jobs: usize,
) -> Result<Vec<f64>, DeterminantError> {
    if order == 0 {
        return Err(DeterminantError::Invalid("order must be at least 1".into()));
    }
    let table = PinningTable::new(model, opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| DeterminantError::Invalid(e.to_string()))?;
    let mut traces = Vec::with_capacity(order);
    for m in 1..=order {
        let words: Vec<Vec<usize>> = cyclic_words(model, m).collect();
        let terms: Vec<_> = pool.install(|| {
            words
                .par_iter()
                .map(|w| periodic_point_in(&table, w).map(|r| r.trace_term))
                .collect()
        });
        let mut sum = KahanSum::default();
        for (w, t) in words.iter().zip(terms) {
            match t {
                Ok(t) => sum.add(t),
                Err(source) => {
                    return Err(DeterminantError::Cycle {
                        word: model.word_ids(w),
                        source,
                    })
                }
            }
        }
        traces.push(sum.value());
    }
    Ok(traces)
}
