//! Block maps between symbol domains.

use num_complex::Complex64;

use crate::analytic::{
    newton_solve_1d_within, BivariateSeries, SeriesJet, SolveError, SolveOptions, DERIVATIVE_FLOOR,
};

/// Kind of a block map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// Contracting in the first coordinate, expanding in the second.
    Hyperbolic,
    /// Parabolic self-transition with the petal in the second coordinate.
    ParabolicA,
    /// Parabolic self-transition with the petal in the first coordinate.
    ParabolicB,
}

impl BlockKind {
    pub fn tag(&self) -> &'static str {
        match self {
            BlockKind::Hyperbolic => "H",
            BlockKind::ParabolicA => "P.a",
            BlockKind::ParabolicB => "P.b",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "H" | "hyperbolic" => Some(BlockKind::Hyperbolic),
            "P.a" | "Pa" | "parabolic_a" => Some(BlockKind::ParabolicA),
            "P.b" | "Pb" | "parabolic_b" => Some(BlockKind::ParabolicB),
            _ => None,
        }
    }
}

/// Normal form `ν, φ̃` of a parabolic self-block together with the full
/// partial inverse it defines.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub nu: u32,
    pub phi_tilde: BivariateSeries,
    /// `z − z^{1+ν} + z^{2+ν} φ̃` in the petal variable.
    pub map: SeriesJet,
}

impl NormalForm {
    fn build(nu: u32, phi_tilde: BivariateSeries, petal_var_first: bool) -> Result<Self, String> {
        let zero = Complex64::new(0.0, 0.0);
        if phi_tilde.center() != (zero, zero) {
            return Err("phi_tilde must be expanded at the parabolic point (0, 0)".into());
        }
        if nu == 0 {
            return Err("nu must be at least 1".into());
        }
        let nu = nu as usize;
        let (d1, d2) = phi_tilde.degrees();
        let degrees = if petal_var_first {
            (d1 + 2 + nu, d2)
        } else {
            (d1, d2 + 2 + nu)
        };
        let mut s = BivariateSeries::zeros(degrees, (zero, zero), phi_tilde.radius());
        let put = |s: &mut BivariateSeries, p: usize, q: usize, v: f64| {
            let (a, b) = if petal_var_first { (p, q) } else { (q, p) };
            let old = s.coeff(a, b);
            s.set_coeff(a, b, old + v);
        };
        put(&mut s, 1, 0, 1.0);
        put(&mut s, 1 + nu, 0, -1.0);
        for a in 0..=d1 {
            for b in 0..=d2 {
                let c = phi_tilde.coeff(a, b);
                if c != 0.0 {
                    if petal_var_first {
                        put(&mut s, a + 2 + nu, b, c);
                    } else {
                        put(&mut s, b + 2 + nu, a, c);
                    }
                }
            }
        }
        Ok(Self {
            nu: nu as u32,
            phi_tilde,
            map: SeriesJet::new(s),
        })
    }
}

/// A block map `f̂_{ij}` in one of three representations.
///
/// Hyperbolic blocks carry both components. A (P.a) block carries `f̂¹` and
/// the normal form of `φ_s`, its second component being the inverse of
/// `φ_s(w1, ·)`. A (P.b) block carries `f̂²` and the normal form of `φ_u`.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockMap {
    Hyperbolic {
        f1: SeriesJet,
        f2: SeriesJet,
        extension_margin: f64,
    },
    ParabolicA {
        f1: SeriesJet,
        normal_form: NormalForm,
        extension_margin: f64,
    },
    ParabolicB {
        f2: SeriesJet,
        normal_form: NormalForm,
        extension_margin: f64,
    },
}

fn check_margin(m: f64) -> Result<(), String> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(format!("extension_margin must be positive, got {m}"))
    }
}

impl BlockMap {
    pub fn hyperbolic(
        f1: BivariateSeries,
        f2: BivariateSeries,
        extension_margin: f64,
    ) -> Result<Self, String> {
        check_margin(extension_margin)?;
        Ok(BlockMap::Hyperbolic {
            f1: SeriesJet::new(f1),
            f2: SeriesJet::new(f2),
            extension_margin,
        })
    }

    pub fn parabolic_a(
        f1: BivariateSeries,
        nu: u32,
        phi_tilde: BivariateSeries,
        extension_margin: f64,
    ) -> Result<Self, String> {
        check_margin(extension_margin)?;
        Ok(BlockMap::ParabolicA {
            f1: SeriesJet::new(f1),
            normal_form: NormalForm::build(nu, phi_tilde, false)?,
            extension_margin,
        })
    }

    pub fn parabolic_b(
        f2: BivariateSeries,
        nu: u32,
        phi_tilde: BivariateSeries,
        extension_margin: f64,
    ) -> Result<Self, String> {
        check_margin(extension_margin)?;
        Ok(BlockMap::ParabolicB {
            f2: SeriesJet::new(f2),
            normal_form: NormalForm::build(nu, phi_tilde, true)?,
            extension_margin,
        })
    }

    pub fn kind(&self) -> BlockKind {
        match self {
            BlockMap::Hyperbolic { .. } => BlockKind::Hyperbolic,
            BlockMap::ParabolicA { .. } => BlockKind::ParabolicA,
            BlockMap::ParabolicB { .. } => BlockKind::ParabolicB,
        }
    }

    pub fn extension_margin(&self) -> f64 {
        match self {
            BlockMap::Hyperbolic {
                extension_margin, ..
            }
            | BlockMap::ParabolicA {
                extension_margin, ..
            }
            | BlockMap::ParabolicB {
                extension_margin, ..
            } => *extension_margin,
        }
    }

    /// Explicit first component, if stored.
    pub fn f1(&self) -> Option<&SeriesJet> {
        match self {
            BlockMap::Hyperbolic { f1, .. } | BlockMap::ParabolicA { f1, .. } => Some(f1),
            BlockMap::ParabolicB { .. } => None,
        }
    }

    /// Explicit second component, if stored.
    pub fn f2(&self) -> Option<&SeriesJet> {
        match self {
            BlockMap::Hyperbolic { f2, .. } | BlockMap::ParabolicB { f2, .. } => Some(f2),
            BlockMap::ParabolicA { .. } => None,
        }
    }

    pub fn normal_form(&self) -> Option<&NormalForm> {
        match self {
            BlockMap::ParabolicA { normal_form, .. } | BlockMap::ParabolicB { normal_form, .. } => {
                Some(normal_form)
            }
            BlockMap::Hyperbolic { .. } => None,
        }
    }

    /// All stored series, for validity-radius checks.
    pub fn series(&self) -> Vec<(&'static str, &BivariateSeries)> {
        match self {
            BlockMap::Hyperbolic { f1, f2, .. } => vec![("f1", &f1.value), ("f2", &f2.value)],
            BlockMap::ParabolicA {
                f1, normal_form, ..
            } => vec![("f1", &f1.value), ("phi_tilde", &normal_form.map.value)],
            BlockMap::ParabolicB {
                f2, normal_form, ..
            } => vec![("f2", &f2.value), ("phi_tilde", &normal_form.map.value)],
        }
    }
}

/// 2×2 complex Jacobian, row-major.
pub type Jacobian = [[Complex64; 2]; 2];

impl BlockMap {
    /// Solves for `w2` with `f̂²(w1, w2) = z2` (the partial inverse `φ_s`).
    ///
    /// Newton is seeded at the linearisation about `seed`; for (P.a) blocks
    /// the normal form is evaluated directly.
    pub fn stable_inverse(
        &self,
        w1: Complex64,
        z2: Complex64,
        seed: Complex64,
        opts: &SolveOptions,
    ) -> Result<Complex64, SolveError> {
        match self {
            BlockMap::Hyperbolic { f2, .. } | BlockMap::ParabolicB { f2, .. } => {
                let (v0, _, d0) = f2.eval(w1, seed);
                let start = if d0.norm() >= DERIVATIVE_FLOOR {
                    let lin = seed + (z2 - v0) / d0;
                    if f2.contains(w1, lin) {
                        lin
                    } else {
                        seed
                    }
                } else {
                    seed
                };
                newton_solve_1d_within(
                    |w| f2.value.eval_unchecked(w1, w) - z2,
                    |w| f2.d2.eval_unchecked(w1, w),
                    start,
                    opts,
                    |w| f2.contains(w1, w),
                )
            }
            BlockMap::ParabolicA { normal_form, .. } => {
                Ok(normal_form.map.value.eval_unchecked(w1, z2))
            }
        }
    }

    /// Value and partials of `φ_s` at `(w1, z2)` given `w2 = φ_s(w1, z2)`.
    pub fn stable_jet(
        &self,
        w1: Complex64,
        w2: Complex64,
        z2: Complex64,
    ) -> (Complex64, Complex64) {
        match self {
            BlockMap::Hyperbolic { f2, .. } | BlockMap::ParabolicB { f2, .. } => {
                let (_, a, b) = f2.eval(w1, w2);
                (-a / b, b.inv())
            }
            BlockMap::ParabolicA { normal_form, .. } => {
                let (_, a, b) = normal_form.map.eval(w1, z2);
                (a, b)
            }
        }
    }

    /// `φ_u(w1, z2)` given `w2 = φ_s(w1, z2)`.
    pub fn unstable_value(&self, w1: Complex64, w2: Complex64, z2: Complex64) -> Complex64 {
        match self {
            BlockMap::Hyperbolic { f1, .. } | BlockMap::ParabolicA { f1, .. } => {
                f1.value.eval_unchecked(w1, w2)
            }
            BlockMap::ParabolicB { normal_form, .. } => {
                normal_form.map.value.eval_unchecked(w1, z2)
            }
        }
    }

    /// Partials `(∂₁φ_u, ∂₂φ_u)` at `(w1, z2)` given `w2 = φ_s(w1, z2)`.
    pub fn unstable_jet(
        &self,
        w1: Complex64,
        w2: Complex64,
        z2: Complex64,
    ) -> (Complex64, Complex64) {
        match self {
            BlockMap::Hyperbolic { f1, .. } | BlockMap::ParabolicA { f1, .. } => {
                let (s1, s2) = self.stable_jet(w1, w2, z2);
                let (_, a, b) = f1.eval(w1, w2);
                (a + b * s1, b * s2)
            }
            BlockMap::ParabolicB { normal_form, .. } => {
                let (_, a, b) = normal_form.map.eval(w1, z2);
                (a, b)
            }
        }
    }

    /// Second component of the forward map. For (P.a) this inverts the
    /// normal form by Newton, seeded at `w2`.
    pub fn forward_second(
        &self,
        w1: Complex64,
        w2: Complex64,
        opts: &SolveOptions,
    ) -> Result<Complex64, SolveError> {
        match self {
            BlockMap::Hyperbolic { f2, .. } | BlockMap::ParabolicB { f2, .. } => {
                Ok(f2.value.eval_unchecked(w1, w2))
            }
            BlockMap::ParabolicA { normal_form, .. } => {
                let s = &normal_form.map;
                newton_solve_1d_within(
                    |z| s.value.eval_unchecked(w1, z) - w2,
                    |z| s.d2.eval_unchecked(w1, z),
                    w2,
                    opts,
                    |z| s.contains(w1, z),
                )
            }
        }
    }

    /// Forward image `f̂(w1, w2)`.
    pub fn forward(
        &self,
        w1: Complex64,
        w2: Complex64,
        opts: &SolveOptions,
    ) -> Result<(Complex64, Complex64), SolveError> {
        let z2 = self.forward_second(w1, w2, opts)?;
        Ok((self.unstable_value(w1, w2, z2), z2))
    }

    /// Jacobian `Df̂(w1, w2)` given the image second coordinate `z2`.
    pub fn jacobian(&self, w1: Complex64, w2: Complex64, z2: Complex64) -> Jacobian {
        match self {
            BlockMap::Hyperbolic { f1, f2, .. } => {
                let (_, a, b) = f1.eval(w1, w2);
                let (_, c, d) = f2.eval(w1, w2);
                [[a, b], [c, d]]
            }
            BlockMap::ParabolicA {
                f1, normal_form, ..
            } => {
                let (_, a, b) = f1.eval(w1, w2);
                let (_, s1, s2) = normal_form.map.eval(w1, z2);
                [[a, b], [-s1 / s2, s2.inv()]]
            }
            BlockMap::ParabolicB {
                f2, normal_form, ..
            } => {
                let (_, c, d) = f2.eval(w1, w2);
                let (_, u1, u2) = normal_form.map.eval(w1, z2);
                [[u1 + u2 * c, u2 * d], [c, d]]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_tilde() -> BivariateSeries {
        BivariateSeries::at_origin(&[vec![0.0]], (1.0, 1.0)).unwrap()
    }

    #[test]
    fn normal_form_a_is_z_minus_z_squared() {
        let f1 = BivariateSeries::at_origin(&[vec![0.0], vec![0.5]], (2.0, 1.0)).unwrap();
        let b = BlockMap::parabolic_a(f1, 1, zero_tilde(), 0.05).unwrap();
        let s = &b.normal_form().unwrap().map.value;
        let z = Complex64::new(0.2, 0.1);
        let v = s.eval(Complex64::new(0.3, 0.0), z).unwrap();
        assert!((v - (z - z * z)).norm() < 1e-15);
    }

    #[test]
    fn normal_form_b_with_tilde_term() {
        let f2 = BivariateSeries::at_origin(&[vec![0.0, 2.0]], (1.0, 2.0)).unwrap();
        let tilde = BivariateSeries::at_origin(&[vec![0.0, 1.0]], (1.0, 1.0)).unwrap();
        let b = BlockMap::parabolic_b(f2, 1, tilde, 0.05).unwrap();
        let u = &b.normal_form().unwrap().map.value;
        let w = Complex64::new(0.1, 0.05);
        let z = Complex64::new(0.3, 0.0);
        let v = u.eval(w, z).unwrap();
        let expect = w - w * w + w * w * w * z;
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn margin_must_be_positive() {
        let f = BivariateSeries::at_origin(&[vec![0.0]], (1.0, 1.0)).unwrap();
        assert!(BlockMap::hyperbolic(f.clone(), f, 0.0).is_err());
    }
}
