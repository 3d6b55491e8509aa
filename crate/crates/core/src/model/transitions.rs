//! 0/1 transition matrices.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    n: usize,
    t: Vec<bool>,
}

impl TransitionMatrix {
    pub fn new(rows: &[Vec<bool>]) -> Result<Self, String> {
        let n = rows.len();
        if n == 0 {
            return Err("transition matrix is empty".into());
        }
        let mut t = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(format!(
                    "transition row {i} has {} entries, expected {n}",
                    row.len()
                ));
            }
            t.extend_from_slice(row);
        }
        Ok(Self { n, t })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn allowed(&self, i: usize, j: usize) -> bool {
        self.t[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.t.chunks(self.n).map(<[bool]>::to_vec).collect()
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for (j, s) in seen.iter_mut().enumerate() {
                if self.t[i * self.n + j] && !*s {
                    *s = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Every symbol reaches every symbol (itself included) by a nonempty path.
    pub fn is_irreducible(&self) -> bool {
        (0..self.n).all(|i| self.reachable_from(i).iter().all(|&b| b))
    }

    /// `tr(T^m)` in exact integer arithmetic.
    pub fn trace_of_power(&self, m: usize) -> u128 {
        let n = self.n;
        let base: Vec<u128> = self.t.iter().map(|&b| b as u128).collect();
        let mut acc: Vec<u128> = (0..n * n).map(|k| (k / n == k % n) as u128).collect();
        for _ in 0..m {
            let mut next = vec![0u128; n * n];
            for i in 0..n {
                for k in 0..n {
                    let a = acc[i * n + k];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        next[i * n + j] += a * base[k * n + j];
                    }
                }
            }
            acc = next;
        }
        (0..n).map(|i| acc[i * n + i]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility() {
        let full = TransitionMatrix::new(&[vec![true, true], vec![true, true]]).unwrap();
        assert!(full.is_irreducible());
        let cyclic = TransitionMatrix::new(&[vec![false, true], vec![true, false]]).unwrap();
        assert!(cyclic.is_irreducible());
        let wandering = TransitionMatrix::new(&[vec![true, true], vec![false, true]]).unwrap();
        assert!(!wandering.is_irreducible());
    }

    #[test]
    fn trace_of_power_counts_fixed_words() {
        let full = TransitionMatrix::new(&[vec![true, true], vec![true, true]]).unwrap();
        assert_eq!(full.trace_of_power(5), 32);
        let cyclic = TransitionMatrix::new(&[vec![false, true], vec![true, false]]).unwrap();
        assert_eq!(cyclic.trace_of_power(3), 0);
        assert_eq!(cyclic.trace_of_power(4), 2);
    }
}
