use ndarray::Array2;
use ndarray_linalg::EigVals;
use num_complex::Complex64;

use super::DeterminantError;

/// Traces `d_1 … d_M` and the Taylor coefficients `c_0 … c_M` of the
/// determinant they define.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantSeries {
    pub traces: Vec<f64>,
    pub coeffs: Vec<f64>,
}

/// `c_0 = 1`, `c_n = −(1/n) Σ_{m=1..n} d_m c_{n−m}`: the coefficients of
/// `exp(−Σ d_m z^m / m)`.
pub fn determinant_coefficients(traces: &[f64]) -> Vec<f64> {
    let mut c = Vec::with_capacity(traces.len() + 1);
    c.push(1.0);
    for n in 1..=traces.len() {
        let s: f64 = (1..=n).map(|m| traces[m - 1] * c[n - m]).sum();
        c.push(-s / n as f64);
    }
    c
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

fn polish(c: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..30 {
        let (v, d) = horner(c, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm() {
            break;
        }
    }
    z
}

impl DeterminantSeries {
    pub fn from_traces(traces: Vec<f64>) -> Self {
        let coeffs = determinant_coefficients(&traces);
        Self { traces, coeffs }
    }

    /// Truncation order M.
    pub fn order(&self) -> usize {
        self.traces.len()
    }

    /// Value of the truncated series.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z).0
    }

    /// Zeros of the truncated series ordered by modulus.
    ///
    /// The reversed polynomial is monic, so its companion matrix is well
    /// scaled; each root found there is refined by Newton on the series.
    pub fn zeros(&self) -> Result<Vec<Complex64>, DeterminantError> {
        let degree = self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
        if degree == 0 {
            return Err(DeterminantError::NoZero);
        }
        let mut comp = Array2::<f64>::zeros((degree, degree));
        for k in 0..degree {
            comp[[0, k]] = -self.coeffs[k + 1];
            if k + 1 < degree {
                comp[[k + 1, k]] = 1.0;
            }
        }
        let eig = comp
            .eigvals()
            .map_err(|e| DeterminantError::Linalg(e.to_string()))?;
        let mut zeros: Vec<Complex64> = eig
            .iter()
            .filter(|w| w.norm() > 0.0)
            .map(|w| polish(&self.coeffs[..=degree], w.inv()))
            .collect();
        zeros.sort_by(|a, b| {
            a.norm()
                .total_cmp(&b.norm())
                .then(a.arg().total_cmp(&b.arg()))
        });
        Ok(zeros)
    }

    /// Zero of the truncated series closest to the origin.
    pub fn smallest_zero(&self) -> Result<Complex64, DeterminantError> {
        self.zeros()?
            .first()
            .copied()
            .ok_or(DeterminantError::NoZero)
    }
}

/// Value of the series at `z` with the tail bound `|c_M z^M| / (1 − ρ)`,
/// `ρ = |c_M z / c_{M−1}|`.
pub fn evaluate_determinant(
    series: &DeterminantSeries,
    z: Complex64,
) -> Result<(Complex64, f64), DeterminantError> {
    let value = series.eval(z);
    let c = &series.coeffs;
    let m = c.len() - 1;
    if m == 0 {
        return Ok((value, 0.0));
    }
    let last = (c[m] * z.powu(m as u32)).norm();
    if last == 0.0 {
        return Ok((value, 0.0));
    }
    let prev = (c[m - 1] * z.powu(m as u32 - 1)).norm();
    let ratio = if prev == 0.0 {
        f64::INFINITY
    } else {
        last / prev
    };
    if !(ratio < 1.0) {
        return Err(DeterminantError::TailNotConverging { ratio });
    }
    Ok((value, last / (1.0 - ratio)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        assert_eq!(determinant_coefficients(&[2.0]), vec![1.0, -2.0]);
        let c = determinant_coefficients(&[2.0, 4.0 / 9.0]);
        assert!((c[2] - 16.0 / 9.0).abs() < 1e-15);
        assert_eq!(
            determinant_coefficients(&[0.0; 4]),
            vec![1.0, 0.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn origin_value_and_tail() {
        let s = DeterminantSeries::from_traces(vec![2.0, 4.0 / 9.0]);
        let (v, tail) = evaluate_determinant(&s, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
        assert_eq!(tail, 0.0);
    }

    #[test]
    fn divergent_tail_reported() {
        let s = DeterminantSeries::from_traces(vec![0.5; 6]);
        let err = evaluate_determinant(&s, Complex64::new(3.0, 0.0)).unwrap_err();
        assert!(matches!(err, DeterminantError::TailNotConverging { .. }));
    }

    #[test]
    fn linear_zero() {
        // exp(−Σ 2^m z^m / m) = 1 − 2z
        let traces: Vec<f64> = (1..=8).map(|m| 2f64.powi(m)).collect();
        let s = DeterminantSeries::from_traces(traces);
        assert!(s.coeffs[2..].iter().all(|c| c.abs() < 1e-12));
        let z = s.smallest_zero().unwrap();
        assert!((z - 0.5).norm() < 1e-12);
    }
}
