//! Enumeration of admissible and cyclic words.

use super::SymbolicModel;

/// Depth-first enumeration of admissible words in lexicographic order.
pub struct AdmissibleWords<'m> {
    model: &'m SymbolicModel,
    n: usize,
    exclude_all_s0: bool,
    cyclic: bool,
    stack: Vec<usize>,
    started: bool,
    done: bool,
}

impl<'m> AdmissibleWords<'m> {
    fn new(model: &'m SymbolicModel, n: usize, exclude_all_s0: bool, cyclic: bool) -> Self {
        Self {
            model,
            n,
            exclude_all_s0,
            cyclic,
            stack: Vec::with_capacity(n),
            started: false,
            done: n == 0,
        }
    }

    fn fits(&self, next: usize) -> bool {
        match self.stack.last() {
            Some(&prev) => self.model.transitions().allowed(prev, next),
            None => true,
        }
    }

    /// Extends the stack to full length with the smallest allowed symbols,
    /// backtracking as needed. Returns false when the enumeration is over.
    fn fill_from(&mut self, mut candidate: usize) -> bool {
        let size = self.model.len();
        loop {
            if self.stack.len() == self.n {
                return true;
            }
            while candidate < size && !self.fits(candidate) {
                candidate += 1;
            }
            if candidate < size {
                self.stack.push(candidate);
                candidate = 0;
            } else {
                match self.stack.pop() {
                    Some(last) => candidate = last + 1,
                    None => return false,
                }
            }
        }
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return self.fill_from(0);
        }
        match self.stack.pop() {
            Some(last) => self.fill_from(last + 1),
            None => false,
        }
    }

    fn accept(&self) -> bool {
        let m = self.model;
        if self.cyclic {
            let first = self.stack[0];
            let last = self.stack[self.n - 1];
            if !m.transitions().allowed(last, first) {
                return false;
            }
        }
        !(self.exclude_all_s0 && self.stack.iter().all(|&s| m.is_parabolic(s)))
    }
}

impl Iterator for AdmissibleWords<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                break;
            }
            if self.accept() {
                return Some(self.stack.clone());
            }
        }
        None
    }
}

/// All admissible words of length `n` (symbol indices), optionally skipping
/// words made only of parabolic symbols.
pub fn admissible_words(
    model: &SymbolicModel,
    n: usize,
    exclude_all_s0: bool,
) -> AdmissibleWords<'_> {
    AdmissibleWords::new(model, n, exclude_all_s0, false)
}

/// Raw cyclic words of length `m` (one per rotation), excluding all-parabolic words.
pub fn cyclic_words(model: &SymbolicModel, m: usize) -> AdmissibleWords<'_> {
    AdmissibleWords::new(model, m, true, true)
}

/// Raw cyclic words of length `m` with no parabolic exclusion.
pub fn all_cyclic_words(model: &SymbolicModel, m: usize) -> AdmissibleWords<'_> {
    AdmissibleWords::new(model, m, false, true)
}
