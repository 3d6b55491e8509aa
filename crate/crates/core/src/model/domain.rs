//! Discs and circular-sector petals.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Coordinate slot of a domain in the product `D¹ × D²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coordinate {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

/// Open sector `{ρe^{iφ} : 0 < ρ < r, |φ| < θ}` at a parabolic point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Petal {
    pub nu: u32,
    pub theta: f64,
    pub theta_tilde: f64,
    pub r: f64,
    pub r_tilde: f64,
    pub orientation: Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Disc(Disc),
    Petal(Petal),
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Result<Self, String> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(format!("disc radius must be positive, got {radius}"));
        }
        if !center.re.is_finite() || !center.im.is_finite() {
            return Err("disc center must be finite".into());
        }
        Ok(Self { center, radius })
    }

    pub fn signed_margin(&self, z: Complex64) -> f64 {
        self.radius - (z - self.center).norm()
    }
}

impl Petal {
    pub fn new(
        nu: u32,
        theta: f64,
        theta_tilde: f64,
        r: f64,
        r_tilde: f64,
        orientation: Coordinate,
    ) -> Result<Self, String> {
        if nu == 0 {
            return Err("petal multiplicity nu must be at least 1".into());
        }
        let lo = PI / (2.0 * nu as f64);
        let hi = PI / nu as f64;
        if !(lo < theta && theta < theta_tilde && theta_tilde < hi) {
            return Err(format!(
                "petal angles must satisfy {lo} < theta < theta_tilde < {hi}, got theta={theta}, theta_tilde={theta_tilde}"
            ));
        }
        if !(0.0 < r && r < r_tilde && r_tilde.is_finite()) {
            return Err(format!(
                "petal radii must satisfy 0 < r < r_tilde, got r={r}, r_tilde={r_tilde}"
            ));
        }
        Ok(Self {
            nu,
            theta,
            theta_tilde,
            r,
            r_tilde,
            orientation,
        })
    }

    /// Signed margin of `z` inside the sector of angle `theta` and radius `r`.
    /// Positive exactly on the open sector.
    pub fn sector_margin(theta: f64, r: f64, z: Complex64) -> f64 {
        let rho = z.norm();
        if rho == 0.0 {
            return 0.0;
        }
        let slack = theta - z.arg().abs();
        let angular = if slack >= PI / 2.0 {
            rho
        } else {
            rho * slack.sin()
        };
        (r - rho).min(angular)
    }

    pub fn signed_margin(&self, z: Complex64) -> f64 {
        Self::sector_margin(self.theta, self.r, z)
    }

    /// Membership in the outer sector `U(θ̃, r̃)` or the corner point.
    pub fn outer_contains(&self, z: Complex64) -> bool {
        z.norm() == 0.0 || Self::sector_margin(self.theta_tilde, self.r_tilde, z) > 0.0
    }

    /// Margin inside the mirrored (attracting) petal `-U(θ, r)`.
    pub fn attracting_margin(&self, z: Complex64) -> f64 {
        self.signed_margin(-z)
    }

    /// Same petal with its radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            r: self.r * factor,
            r_tilde: self.r_tilde * factor,
            ..*self
        }
    }

    /// Sample of the closed sector minus the corner: two edge rays, the arc,
    /// then a polar interior grid.
    pub fn samples(&self, density: usize) -> Vec<Complex64> {
        let density = density.max(2);
        let mut pts = Vec::new();
        let n_edge = density;
        for side in [1.0, -1.0] {
            for i in 1..=n_edge {
                let rho = self.r * i as f64 / n_edge as f64;
                pts.push(Complex64::from_polar(rho, side * self.theta));
            }
        }
        let n_arc = 2 * density;
        for i in 0..=n_arc {
            let phi = -self.theta + 2.0 * self.theta * i as f64 / n_arc as f64;
            pts.push(Complex64::from_polar(self.r, phi));
        }
        for i in 1..density {
            let rho = self.r * i as f64 / density as f64;
            for j in 1..density {
                let phi = -self.theta + 2.0 * self.theta * j as f64 / density as f64;
                pts.push(Complex64::from_polar(rho, phi));
            }
        }
        pts
    }
}

impl Domain {
    pub fn contains(&self, z: Complex64) -> bool {
        self.signed_margin(z) > 0.0
    }

    /// Positive inside, negative outside, roughly the distance to the boundary.
    pub fn signed_margin(&self, z: Complex64) -> f64 {
        match self {
            Domain::Disc(d) => d.signed_margin(z),
            Domain::Petal(p) => p.signed_margin(z),
        }
    }

    /// The real trace `ℝ ∩ D` as an interval.
    pub fn real_interval(&self) -> (f64, f64) {
        match self {
            Domain::Disc(d) => (d.center.re - d.radius, d.center.re + d.radius),
            Domain::Petal(p) => (0.0, p.r),
        }
    }

    /// Expansion point of the block series living on this domain.
    pub fn center(&self) -> Complex64 {
        match self {
            Domain::Disc(d) => d.center,
            Domain::Petal(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// An interior point used to seed solvers.
    pub fn seed_point(&self) -> Complex64 {
        match self {
            Domain::Disc(d) => d.center,
            Domain::Petal(p) => Complex64::new(0.5 * p.r, 0.0),
        }
    }

    /// Radius of the smallest disc about `center()` containing the domain.
    pub fn extent(&self) -> f64 {
        match self {
            Domain::Disc(d) => d.radius,
            Domain::Petal(p) => p.r,
        }
    }

    pub fn as_petal(&self) -> Option<&Petal> {
        match self {
            Domain::Petal(p) => Some(p),
            Domain::Disc(_) => None,
        }
    }

    pub fn as_disc(&self) -> Option<&Disc> {
        match self {
            Domain::Disc(d) => Some(d),
            Domain::Petal(_) => None,
        }
    }

    /// The domain enlarged by `margin` (petals keep their angle).
    pub fn enlarged(&self, margin: f64) -> Domain {
        match self {
            Domain::Disc(d) => Domain::Disc(Disc {
                center: d.center,
                radius: d.radius + margin,
            }),
            Domain::Petal(p) => Domain::Petal(Petal {
                r: p.r + margin,
                ..*p
            }),
        }
    }

    /// Sample points: boundary first (starting at angle zero), then interior.
    ///
    /// Discs use `4·density` boundary points and the `density × density`
    /// grid points of the bounding square that fall inside.
    pub fn samples(&self, density: usize) -> Vec<Complex64> {
        match self {
            Domain::Disc(d) => {
                let density = density.max(2);
                let n_boundary = 4 * density;
                let mut pts: Vec<Complex64> = (0..n_boundary)
                    .map(|k| {
                        d.center
                            + Complex64::from_polar(
                                d.radius,
                                2.0 * PI * k as f64 / n_boundary as f64,
                            )
                    })
                    .collect();
                for i in 0..density {
                    for j in 0..density {
                        let x = -1.0 + (2 * i + 1) as f64 / density as f64;
                        let y = -1.0 + (2 * j + 1) as f64 / density as f64;
                        let z = Complex64::new(x, y);
                        if z.norm() < 1.0 {
                            pts.push(d.center + z * d.radius);
                        }
                    }
                }
                pts
            }
            Domain::Petal(p) => p.samples(density),
        }
    }

    /// Points of the real interval, shrunk towards its middle by `shrink`.
    pub fn real_samples(&self, count: usize, shrink: f64) -> Vec<f64> {
        let (lo, hi) = self.real_interval();
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo) * shrink;
        (0..count)
            .map(|i| {
                if count == 1 {
                    mid
                } else {
                    mid - half + 2.0 * half * i as f64 / (count - 1) as f64
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petal() -> Petal {
        Petal::new(1, 1.7, 2.0, 0.3, 0.35, Coordinate::Second).unwrap()
    }

    #[test]
    fn petal_membership() {
        let p = Domain::Petal(petal());
        assert!(p.contains(Complex64::new(0.1, 0.0)));
        assert!(p.contains(Complex64::from_polar(0.2, 1.6)));
        assert!(!p.contains(Complex64::from_polar(0.2, 1.8)));
        assert!(!p.contains(Complex64::new(0.0, 0.0)));
        assert!(!p.contains(Complex64::new(0.31, 0.0)));
    }

    #[test]
    fn petal_angle_bounds_are_enforced() {
        assert!(Petal::new(1, 1.5, 2.0, 0.3, 0.35, Coordinate::Second).is_err());
        assert!(Petal::new(1, 1.7, 3.2, 0.3, 0.35, Coordinate::Second).is_err());
        assert!(Petal::new(1, 1.7, 2.0, 0.3, 0.2, Coordinate::Second).is_err());
        assert!(Petal::new(2, 0.9, 1.2, 0.3, 0.35, Coordinate::Second).is_ok());
    }

    #[test]
    fn intervals() {
        let d = Domain::Disc(Disc::new(Complex64::new(0.5, 0.0), 2.0).unwrap());
        assert_eq!(d.real_interval(), (-1.5, 2.5));
        assert_eq!(Domain::Petal(petal()).real_interval(), (0.0, 0.3));
    }

    #[test]
    fn disc_samples_start_on_the_boundary_at_angle_zero() {
        let d = Domain::Disc(Disc::new(Complex64::new(0.0, 0.0), 1.0).unwrap());
        let s = d.samples(16);
        assert!((s[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(s.iter().all(|z| z.norm() <= 1.0 + 1e-15));
        assert!(s.len() > 64 + 150);
    }
}
