use num_complex::Complex64;

use super::OperatorError;
use crate::analytic::{BivariateSeries, Var};
use crate::model::{BlockKind, Coordinate, SymbolId, SymbolicModel};

/// Size above which a coefficient that should vanish is reported.
const REMOVABLE_TOL: f64 = 1e-10;

/// Default truncation degree for [`fatou_conjugate`].
pub const FATOU_DEGREE: usize = 48;

/// Error term of the approximate Fatou coordinate `F(z) = 1/z` for one
/// parabolic symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct FatouData {
    pub symbol: SymbolId,
    pub kind: BlockKind,
    /// `E_{k,2}(w1, z2)` for (P.a), `E_{k,1}(z1, z2)` for (P.b).
    pub error_series: BivariateSeries,
    /// Abscissa of the half plane contained in the image of the petal
    /// (negative for the attracting side).
    pub half_plane_r: f64,
    /// The map whose Fatou relation `error_series` completes: `φ_s` for
    /// (P.a), `φ_u^{-1}` for (P.b), both as truncated series.
    pub map: BivariateSeries,
}

impl FatouData {
    /// `|F(g(x, z)) − F(z) ∓ 1 − z·E(x, z)|` where `g` is [`FatouData::map`]
    /// and the sign is `+` for (P.a) and `−` for (P.b); `z` is the
    /// neutral coordinate.
    pub fn residual(&self, x: Complex64, z: Complex64) -> f64 {
        let (g, shift) = match self.kind {
            BlockKind::ParabolicB => (self.map.eval_unchecked(z, x), -1.0),
            _ => (self.map.eval_unchecked(x, z), 1.0),
        };
        let e = match self.kind {
            BlockKind::ParabolicB => self.error_series.eval_unchecked(z, x),
            _ => self.error_series.eval_unchecked(x, z),
        };
        (g.inv() - z.inv() - shift - z * e).norm()
    }
}

/// Error series `E` with `1/φ(w1,z2) = 1/z2 + 1 + z2·E(w1,z2)` for a map
/// `φ` tangent to the identity in `z2` (`φ = z2 − z2² + O(z2³)`), truncated
/// to `degrees`.
pub fn fatou_error_series(
    phi: &BivariateSeries,
    degrees: (usize, usize),
) -> Result<BivariateSeries, OperatorError> {
    let work = (degrees.0, degrees.1 + 2);
    let (h, dropped) = phi
        .truncated((work.0, work.1 + 1))
        .shift_down(Var::Second, 1);
    if dropped > REMOVABLE_TOL {
        return Err(OperatorError::SingularityNotRemovable {
            coefficient: dropped,
        });
    }
    let recip = h
        .reciprocal_truncated(work)
        .map_err(|_| OperatorError::SingularityNotRemovable { coefficient: 0.0 })?;
    let mut numerator = recip;
    numerator.set_coeff(0, 0, numerator.coeff(0, 0) - 1.0);
    numerator.set_coeff(0, 1, numerator.coeff(0, 1) - 1.0);
    let (e, dropped) = numerator.shift_down(Var::Second, 2);
    if dropped > REMOVABLE_TOL {
        return Err(OperatorError::SingularityNotRemovable {
            coefficient: dropped,
        });
    }
    Ok(e.truncated(degrees))
}

/// Swaps the two variables of a series.
fn transpose(s: &BivariateSeries) -> BivariateSeries {
    let (d1, d2) = s.degrees();
    let (c1, c2) = s.center();
    let (r1, r2) = s.radius();
    let mut out = BivariateSeries::zeros((d2, d1), (c2, c1), (r2, r1));
    for a in 0..=d1 {
        for b in 0..=d2 {
            out.set_coeff(b, a, s.coeff(a, b));
        }
    }
    out
}

/// Inverse of `w1 ↦ u(w1, z2)` as a series in `(z1, z2)`, for `u` tangent
/// to the identity in `w1`.
fn revert_first(u: &BivariateSeries, degrees: (usize, usize)) -> BivariateSeries {
    let (c, r) = (u.center(), u.radius());
    let mut z1 = BivariateSeries::zeros(degrees, c, r);
    z1.set_coeff(1, 0, 1.0);
    let u = u.truncated(degrees);
    let mut v = z1.clone();
    for _ in 0..=degrees.0 {
        // v ← z1 + v − u(v, z2)
        let image = u.compose_first(&v, degrees);
        v = z1.add(&v).add(&image.scale(-1.0));
    }
    v
}

/// Fatou data of the parabolic symbol `k` (index), with series truncated
/// at total degree `degree` in each variable.
pub fn fatou_conjugate(
    model: &SymbolicModel,
    k: usize,
    degree: usize,
) -> Result<FatouData, OperatorError> {
    let block = model
        .block(k, k)
        .filter(|_| model.is_parabolic(k))
        .ok_or_else(|| {
            OperatorError::ParameterOutOfRange(format!("symbol {} is not parabolic", model.id(k)))
        })?;
    let nf = block
        .normal_form()
        .expect("parabolic block has a normal form");
    if nf.nu != 1 {
        return Err(OperatorError::ParameterOutOfRange(format!(
            "the coordinate 1/z needs ν = 1, got ν = {}",
            nf.nu
        )));
    }
    let petal = match block.kind() {
        BlockKind::ParabolicA => model.domains(k).d2.as_petal(),
        _ => model.domains(k).d1.as_petal(),
    }
    .copied()
    .expect("parabolic symbol has a petal");
    let degrees = (degree, degree);
    match block.kind() {
        BlockKind::ParabolicA => {
            let phi = nf.map.value.truncated((degree, degree + 3));
            let e = fatou_error_series(&phi, degrees)?;
            Ok(FatouData {
                symbol: model.id(k),
                kind: BlockKind::ParabolicA,
                error_series: e,
                half_plane_r: petal.r.recip(),
                map: phi,
            })
        }
        _ => {
            debug_assert_eq!(petal.orientation, Coordinate::First);
            let big = (degree + 3, degree);
            let inverse = revert_first(&nf.map.value, big);
            // 1/υ = 1/z1 − 1 + z1·E: the relation for −υ(−z1) has the
            // (P.a) shape in the transposed variables.
            let mut flipped = transpose(&inverse);
            let (d1, d2) = flipped.degrees();
            for a in 0..=d1 {
                for b in 0..=d2 {
                    if b % 2 == 0 {
                        flipped.set_coeff(a, b, -flipped.coeff(a, b));
                    }
                }
            }
            let e = fatou_error_series(&flipped, degrees)?;
            let mut e_t = transpose(&e);
            let (d1, d2) = e_t.degrees();
            for a in 0..=d1 {
                for b in 0..=d2 {
                    if a % 2 == 1 {
                        e_t.set_coeff(a, b, -e_t.coeff(a, b));
                    }
                }
            }
            Ok(FatouData {
                symbol: model.id(k),
                kind: BlockKind::ParabolicB,
                error_series: e_t,
                half_plane_r: -petal.r.recip(),
                map: inverse.truncated((degree + 3, degree)),
            })
        }
    }
}
