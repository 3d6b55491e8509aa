//! Truncated bivariate power series with real coefficients.

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by series construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("point ({w1}, {w2}) lies outside the validity polydisc of radii ({r1}, {r2})")]
    Domain {
        w1: Complex64,
        w2: Complex64,
        r1: f64,
        r2: f64,
    },
    #[error("invalid series data: {0}")]
    Invalid(String),
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
}

/// Which variable of a bivariate series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    First,
    Second,
}

/// A finite series `Σ c[a][b] (w1 - c1)^a (w2 - c2)^b`.
///
/// Coefficients are real, centers may be complex but are real in every
/// shipped model. Evaluation outside the validity polydisc is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSeries {
    coeffs: Vec<f64>,
    rows: usize,
    cols: usize,
    center: (Complex64, Complex64),
    radius: (f64, f64),
}

const RADIUS_SLACK: f64 = 1e-12;

impl BivariateSeries {
    /// Builds a series from a (possibly ragged) table indexed `[deg_w1][deg_w2]`.
    pub fn new(
        table: &[Vec<f64>],
        center: (Complex64, Complex64),
        radius: (f64, f64),
    ) -> Result<Self, SeriesError> {
        if !(radius.0 > 0.0 && radius.1 > 0.0) {
            return Err(SeriesError::Invalid(format!(
                "validity radii must be positive, got ({}, {})",
                radius.0, radius.1
            )));
        }
        let rows = table.len().max(1);
        let cols = table.iter().map(Vec::len).max().unwrap_or(0).max(1);
        let mut coeffs = vec![0.0; rows * cols];
        for (a, row) in table.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if !c.is_finite() {
                    return Err(SeriesError::Invalid(format!(
                        "coefficient [{a}][{b}] is not finite"
                    )));
                }
                coeffs[a * cols + b] = c;
            }
        }
        Ok(Self {
            coeffs,
            rows,
            cols,
            center,
            radius,
        })
    }

    /// Series centered at the origin.
    pub fn at_origin(table: &[Vec<f64>], radius: (f64, f64)) -> Result<Self, SeriesError> {
        Self::new(
            table,
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            radius,
        )
    }

    /// Zero series with a coefficient box of the given degrees.
    pub fn zeros(
        degrees: (usize, usize),
        center: (Complex64, Complex64),
        radius: (f64, f64),
    ) -> Self {
        let rows = degrees.0 + 1;
        let cols = degrees.1 + 1;
        Self {
            coeffs: vec![0.0; rows * cols],
            rows,
            cols,
            center,
            radius,
        }
    }

    /// Maximal degrees `(deg_w1, deg_w2)` of the coefficient box.
    pub fn degrees(&self) -> (usize, usize) {
        (self.rows - 1, self.cols - 1)
    }

    pub fn center(&self) -> (Complex64, Complex64) {
        self.center
    }

    pub fn radius(&self) -> (f64, f64) {
        self.radius
    }

    /// Coefficient of `(w1-c1)^a (w2-c2)^b`, zero outside the box.
    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        if a < self.rows && b < self.cols {
            self.coeffs[a * self.cols + b]
        } else {
            0.0
        }
    }

    pub fn set_coeff(&mut self, a: usize, b: usize, value: f64) {
        assert!(
            a < self.rows && b < self.cols,
            "coefficient index out of box"
        );
        self.coeffs[a * self.cols + b] = value;
    }

    /// Coefficient table as nested rows, for serialization.
    pub fn table(&self) -> Vec<Vec<f64>> {
        self.coeffs.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    /// True if `(w1, w2)` is inside the closed validity polydisc.
    pub fn contains(&self, w1: Complex64, w2: Complex64) -> bool {
        (w1 - self.center.0).norm() <= self.radius.0 * (1.0 + RADIUS_SLACK)
            && (w2 - self.center.1).norm() <= self.radius.1 * (1.0 + RADIUS_SLACK)
    }

    /// Evaluates the series, refusing points outside the validity polydisc.
    pub fn eval(&self, w1: Complex64, w2: Complex64) -> Result<Complex64, SeriesError> {
        if !self.contains(w1, w2) {
            return Err(SeriesError::Domain {
                w1,
                w2,
                r1: self.radius.0,
                r2: self.radius.1,
            });
        }
        Ok(self.eval_unchecked(w1, w2))
    }

    /// Nested Horner evaluation without the domain check.
    pub fn eval_unchecked(&self, w1: Complex64, w2: Complex64) -> Complex64 {
        let x = w1 - self.center.0;
        let y = w2 - self.center.1;
        let mut acc = Complex64::new(0.0, 0.0);
        for row in self.coeffs.chunks(self.cols).rev() {
            let mut inner = Complex64::new(0.0, 0.0);
            for &c in row.iter().rev() {
                inner = inner * y + c;
            }
            acc = acc * x + inner;
        }
        acc
    }

    /// Term-by-term derivative in one variable; centers and radii are kept.
    pub fn partial(&self, which: Var) -> Self {
        match which {
            Var::First => {
                let rows = (self.rows - 1).max(1);
                let mut out = Self::zeros((rows - 1, self.cols - 1), self.center, self.radius);
                for a in 1..self.rows {
                    for b in 0..self.cols {
                        out.coeffs[(a - 1) * self.cols + b] = a as f64 * self.coeff(a, b);
                    }
                }
                out
            }
            Var::Second => {
                let cols = (self.cols - 1).max(1);
                let mut out = Self::zeros((self.rows - 1, cols - 1), self.center, self.radius);
                for a in 0..self.rows {
                    for b in 1..self.cols {
                        out.coeffs[a * cols + b - 1] = b as f64 * self.coeff(a, b);
                    }
                }
                out
            }
        }
    }

    /// Copy of the series restricted (or zero-padded) to the given degree box.
    pub fn truncated(&self, degrees: (usize, usize)) -> Self {
        let mut out = Self::zeros(degrees, self.center, self.radius);
        for a in 0..=degrees.0 {
            for b in 0..=degrees.1 {
                out.coeffs[a * out.cols + b] = self.coeff(a, b);
            }
        }
        out
    }

    /// Coefficientwise sum, result box is the union of both boxes.
    pub fn add(&self, other: &Self) -> Self {
        let (d1, d2) = self.degrees();
        let (e1, e2) = other.degrees();
        let mut out = Self::zeros((d1.max(e1), d2.max(e2)), self.center, self.radius);
        for a in 0..out.rows {
            for b in 0..out.cols {
                out.coeffs[a * out.cols + b] = self.coeff(a, b) + other.coeff(a, b);
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// Product truncated to the degree box `degrees`.
    pub fn mul_truncated(&self, other: &Self, degrees: (usize, usize)) -> Self {
        let mut out = Self::zeros(degrees, self.center, self.radius);
        for a in 0..self.rows.min(degrees.0 + 1) {
            for b in 0..self.cols.min(degrees.1 + 1) {
                let c = self.coeff(a, b);
                if c == 0.0 {
                    continue;
                }
                for i in 0..other.rows.min(degrees.0 + 1 - a) {
                    for j in 0..other.cols.min(degrees.1 + 1 - b) {
                        out.coeffs[(a + i) * out.cols + b + j] += c * other.coeff(i, j);
                    }
                }
            }
        }
        out
    }

    /// Multiplicative inverse truncated to `degrees`; needs a nonzero constant term.
    pub fn reciprocal_truncated(&self, degrees: (usize, usize)) -> Result<Self, SeriesError> {
        let c00 = self.coeff(0, 0);
        if c00 == 0.0 {
            return Err(SeriesError::NotInvertible);
        }
        let mut out = Self::zeros(degrees, self.center, self.radius);
        for a in 0..=degrees.0 {
            for b in 0..=degrees.1 {
                let mut acc = if a == 0 && b == 0 { 1.0 } else { 0.0 };
                for i in 0..=a.min(self.rows - 1) {
                    for j in 0..=b.min(self.cols - 1) {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        acc -= self.coeff(i, j) * out.coeffs[(a - i) * out.cols + b - j];
                    }
                }
                out.coeffs[a * out.cols + b] = acc / c00;
            }
        }
        Ok(out)
    }

    /// Divides by `var^k`, returning the quotient and the largest dropped
    /// coefficient in modulus (the part not divisible by `var^k`).
    pub fn shift_down(&self, var: Var, k: usize) -> (Self, f64) {
        let (d1, d2) = self.degrees();
        let mut dropped: f64 = 0.0;
        match var {
            Var::First => {
                let mut out = Self::zeros((d1.saturating_sub(k), d2), self.center, self.radius);
                for a in 0..self.rows {
                    for b in 0..self.cols {
                        let c = self.coeff(a, b);
                        if a < k {
                            dropped = dropped.max(c.abs());
                        } else {
                            out.coeffs[(a - k) * out.cols + b] = c;
                        }
                    }
                }
                (out, dropped)
            }
            Var::Second => {
                let mut out = Self::zeros((d1, d2.saturating_sub(k)), self.center, self.radius);
                for a in 0..self.rows {
                    for b in 0..self.cols {
                        let c = self.coeff(a, b);
                        if b < k {
                            dropped = dropped.max(c.abs());
                        } else {
                            out.coeffs[a * out.cols + b - k] = c;
                        }
                    }
                }
                (out, dropped)
            }
        }
    }

    /// Substitutes a series for the first variable: `Σ_a inner^a · s_a(w2)`,
    /// truncated to `degrees`. Centers are ignored (local coordinates).
    pub fn compose_first(&self, inner: &Self, degrees: (usize, usize)) -> Self {
        let mut acc = Self::zeros(degrees, self.center, self.radius);
        for a in (0..self.rows).rev() {
            acc = acc.mul_truncated(inner, degrees);
            for b in 0..self.cols.min(degrees.1 + 1) {
                acc.coeffs[b] += self.coeff(a, b);
            }
        }
        acc
    }

    pub fn with_radius(mut self, radius: (f64, f64)) -> Self {
        self.radius = radius;
        self
    }
}

/// A series bundled with both first partials, evaluated together.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesJet {
    pub value: BivariateSeries,
    pub d1: BivariateSeries,
    pub d2: BivariateSeries,
}

impl SeriesJet {
    pub fn new(value: BivariateSeries) -> Self {
        let d1 = value.partial(Var::First);
        let d2 = value.partial(Var::Second);
        Self { value, d1, d2 }
    }

    /// Value and gradient at a point, without a domain check.
    pub fn eval(&self, w1: Complex64, w2: Complex64) -> (Complex64, Complex64, Complex64) {
        (
            self.value.eval_unchecked(w1, w2),
            self.d1.eval_unchecked(w1, w2),
            self.d2.eval_unchecked(w1, w2),
        )
    }

    pub fn contains(&self, w1: Complex64, w2: Complex64) -> bool {
        self.value.contains(w1, w2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_and_quadratic_values() {
        let s = BivariateSeries::at_origin(&[vec![0.0, 2.0]], (1.0, 1.0)).unwrap();
        let v = s.eval(c(0.3, 0.0), c(0.0, 0.5)).unwrap();
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);

        let q = BivariateSeries::at_origin(&[vec![0.0, 1.0, -1.0]], (1.0, 1.0)).unwrap();
        let v = q.eval(c(0.7, -0.2), c(0.5, 0.0)).unwrap();
        assert!((v - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn outside_validity_is_an_error() {
        let s = BivariateSeries::at_origin(&[vec![0.0], vec![0.0, 1.0]], (1.0, 1.0)).unwrap();
        assert!(matches!(
            s.eval(c(2.0, 0.0), c(3.0, 0.0)),
            Err(SeriesError::Domain { .. })
        ));
    }

    #[test]
    fn partials_of_polynomials() {
        let s = BivariateSeries::at_origin(&[vec![0.0, 2.0]], (1.0, 1.0)).unwrap();
        let d = s.partial(Var::Second);
        assert_eq!(d.degrees(), (0, 0));
        assert_eq!(d.coeff(0, 0), 2.0);

        let q = BivariateSeries::at_origin(&[vec![0.0, 1.0, -1.0]], (1.0, 1.0)).unwrap();
        let d = q
            .partial(Var::Second)
            .eval(c(0.1, 0.0), c(0.0, 0.0))
            .unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn centered_series_shifts_argument() {
        let s = BivariateSeries::new(
            &[vec![1.0], vec![3.0]],
            (c(0.5, 0.0), c(0.0, 0.0)),
            (1.0, 1.0),
        )
        .unwrap();
        let v = s.eval(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v - c(2.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reciprocal_of_one_minus_z() {
        let s = BivariateSeries::at_origin(&[vec![1.0, -1.0]], (1.0, 1.0)).unwrap();
        let r = s.reciprocal_truncated((0, 12)).unwrap();
        for b in 0..=12 {
            assert_eq!(r.coeff(0, b), 1.0);
        }
    }

    #[test]
    fn compose_first_with_square() {
        // s(w1) = 1 + w1, inner = w1^2 gives 1 + w1^2.
        let s = BivariateSeries::at_origin(&[vec![1.0], vec![1.0]], (1.0, 1.0)).unwrap();
        let inner =
            BivariateSeries::at_origin(&[vec![0.0], vec![0.0], vec![1.0]], (1.0, 1.0)).unwrap();
        let r = s.compose_first(&inner, (4, 0));
        assert_eq!(r.coeff(0, 0), 1.0);
        assert_eq!(r.coeff(1, 0), 0.0);
        assert_eq!(r.coeff(2, 0), 1.0);
    }

    #[test]
    fn shift_down_reports_dropped_terms() {
        let s = BivariateSeries::at_origin(&[vec![0.0, 0.5, 2.0]], (1.0, 1.0)).unwrap();
        let (q, dropped) = s.shift_down(Var::Second, 1);
        assert_eq!(dropped, 0.0);
        assert_eq!(q.coeff(0, 0), 0.5);
        assert_eq!(q.coeff(0, 1), 2.0);
        let (_, dropped) = s.shift_down(Var::Second, 2);
        assert_eq!(dropped, 0.5);
    }
}
