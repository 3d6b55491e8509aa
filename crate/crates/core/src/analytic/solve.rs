//! Newton root finding and contraction fixed points.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("derivative vanished at {at}")]
    DerivativeVanished { at: Complex64 },
    #[error("observed contraction ratio {ratio} stayed at or above 1")]
    RatioAboveOne { ratio: f64 },
    #[error("iterate left the admissible region near {at}")]
    LeftDomain { at: Complex64 },
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
}

/// Derivative modulus below which Newton refuses to step.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

const RATIO_WINDOW: usize = 5;
const RATIO_STRIKES: usize = 10;
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 60,
            damping: 1.0,
        }
    }
}

impl SolveOptions {
    pub fn new(tol: f64, max_iter: usize, damping: f64) -> Result<Self, SolveError> {
        let opts = Self {
            tol,
            max_iter,
            damping,
        };
        opts.check()?;
        Ok(opts)
    }

    pub fn check(&self) -> Result<(), SolveError> {
        if !(self.tol > 0.0) {
            return Err(SolveError::InvalidOptions(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(SolveError::InvalidOptions(
                "max_iter must be at least 1".into(),
            ));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(SolveError::InvalidOptions(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

/// Newton iteration for `g(z) = 0` starting at `seed`.
///
/// Converges when `|g(z)| <= tol` and the Newton step is at most `tol·|z|`,
/// or when `g(z)` is exactly zero.
pub fn newton_solve_1d<G, D>(
    g: G,
    g_prime: D,
    seed: Complex64,
    opts: &SolveOptions,
) -> Result<Complex64, SolveError>
where
    G: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    newton_solve_1d_within(g, g_prime, seed, opts, |_| true)
}

/// Newton iteration that halves any step landing outside `inside`.
pub fn newton_solve_1d_within<G, D, I>(
    g: G,
    g_prime: D,
    seed: Complex64,
    opts: &SolveOptions,
    inside: I,
) -> Result<Complex64, SolveError>
where
    G: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
    I: Fn(Complex64) -> bool,
{
    opts.check()?;
    let mut z = seed;
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let gz = g(z);
        residual = gz.norm();
        if !residual.is_finite() {
            break;
        }
        if gz == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let dz = g_prime(z);
        if dz.norm() < DERIVATIVE_FLOOR {
            return Err(SolveError::DerivativeVanished { at: z });
        }
        let full = gz / dz;
        if residual <= opts.tol && full.norm() <= opts.tol * z.norm() {
            return Ok(z);
        }
        let mut step = full * opts.damping;
        let mut next = z - step;
        let mut halvings = 0;
        while !inside(next) {
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(SolveError::LeftDomain { at: next });
            }
            step *= 0.5;
            next = z - step;
        }
        z = next;
    }
    Err(SolveError::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// Result of a fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub point: Vec<Complex64>,
    /// Sup of successive step-norm ratios over the last few iterations.
    pub ratio: f64,
    pub iterations: usize,
}

fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn sup_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Iterates `phi` from `seed` until successive iterates differ by at most `tol`
/// in the sup norm. Step ratios dominated by rounding are ignored.
pub fn contraction_fixed_point_vec<F>(
    mut phi: F,
    seed: &[Complex64],
    opts: &SolveOptions,
) -> Result<FixedPoint, SolveError>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>, SolveError>,
{
    opts.check()?;
    let mut x = seed.to_vec();
    let mut prev_step: Option<f64> = None;
    let mut ratios: Vec<f64> = Vec::new();
    let mut strikes = 0;
    let mut step = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let mut next = phi(&x)?;
        if opts.damping < 1.0 {
            for (n, o) in next.iter_mut().zip(&x) {
                *n = o + (*n - o) * opts.damping;
            }
        }
        step = sup_distance(&next, &x);
        if !step.is_finite() {
            break;
        }
        let noise = 64.0 * f64::EPSILON * (1.0 + sup_norm(&next));
        if let Some(p) = prev_step {
            if p > noise {
                let r = step / p;
                ratios.push(r);
                if r >= 1.0 {
                    strikes += 1;
                    if strikes >= RATIO_STRIKES {
                        return Err(SolveError::RatioAboveOne { ratio: r });
                    }
                } else {
                    strikes = 0;
                }
            }
        }
        prev_step = Some(step);
        x = next;
        if step <= opts.tol {
            let tail = &ratios[ratios.len().saturating_sub(RATIO_WINDOW)..];
            let ratio = tail.iter().copied().fold(0.0, f64::max);
            return Ok(FixedPoint {
                point: x,
                ratio,
                iterations: it,
            });
        }
    }
    Err(SolveError::NoConvergence {
        iterations: opts.max_iter,
        residual: step,
    })
}

/// Two-dimensional form returning the fixed point and the observed ratio.
pub fn contraction_fixed_point<F>(
    phi: F,
    seed: (Complex64, Complex64),
    opts: &SolveOptions,
) -> Result<((Complex64, Complex64), f64), SolveError>
where
    F: Fn((Complex64, Complex64)) -> (Complex64, Complex64),
{
    let fp = contraction_fixed_point_vec(
        |x| {
            let (a, b) = phi((x[0], x[1]));
            Ok(vec![a, b])
        },
        &[seed.0, seed.1],
        opts,
    )?;
    Ok(((fp.point[0], fp.point[1]), fp.ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn linear_root() {
        let z = newton_solve_1d(
            |z| 2.0 * z - 1.0,
            |_| c(2.0),
            c(0.0),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!((z - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn quadratic_root_matches_formula() {
        let root = (1.0 - (1.0f64 - 4.0 * 0.21).sqrt()) / 2.0;
        let z = newton_solve_1d(
            |z| z - z * z - 0.21,
            |z| 1.0 - 2.0 * z,
            c(0.2),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!((z - c(root)).norm() < 1e-14);
        assert!((z - c(0.3)).norm() < 1e-14);
    }

    #[test]
    fn double_root_is_refused() {
        let opts = SolveOptions::new(1e-14, 60, 1.0).unwrap();
        let r = newton_solve_1d(|z| z * z, |z| 2.0 * z, c(1e-8), &opts);
        assert!(matches!(
            r,
            Err(SolveError::DerivativeVanished { .. }) | Err(SolveError::NoConvergence { .. })
        ));
    }

    #[test]
    fn halving_keeps_iterates_inside() {
        // Root at 0.9; the first full step from 0 overshoots the unit-ish disc.
        let z = newton_solve_1d_within(
            |z| z * z * z - 0.729,
            |z| 3.0 * z * z,
            c(0.05),
            &SolveOptions::default(),
            |z| z.norm() <= 1.0,
        )
        .unwrap();
        assert!((z - c(0.9)).norm() < 1e-12);
    }

    #[test]
    fn linear_contraction() {
        let ((a, b), ratio) = contraction_fixed_point(
            |(x, y)| (x / 2.0, y / 2.0 + 0.5),
            (c(1.0), c(0.0)),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(a.norm() < 1e-11);
        assert!((b - c(1.0)).norm() < 1e-11);
        assert!((ratio - 0.5).abs() < 1e-6);
    }

    #[test]
    fn expanding_map_is_rejected() {
        let r = contraction_fixed_point(
            |(x, y)| (2.0 * x, 2.0 * y),
            (c(1.0), c(1.0)),
            &SolveOptions::default(),
        );
        assert!(matches!(r, Err(SolveError::RatioAboveOne { .. })));
    }

    #[test]
    fn options_are_checked() {
        assert!(SolveOptions::new(0.0, 10, 1.0).is_err());
        assert!(SolveOptions::new(1e-12, 0, 1.0).is_err());
        assert!(SolveOptions::new(1e-12, 10, 1.5).is_err());
    }
}
