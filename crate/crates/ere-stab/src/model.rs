//! Masses and limit geometry to the essential parameters (α, β, e).

use crate::common::{Error, Result};
use nalgebra::Complex;
use serde::{Deserialize, Serialize};

type C64 = Complex<f64>;

const MASS_SUM_TOL: f64 = 1e-12;
pub const COLLISION_TOL: f64 = 1e-9;

/// Normalized masses of the three primaries.
///
/// Zero masses are accepted as limit configurations and flagged by `boundary`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassConfig {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub alpha0: f64,
    pub mu0: f64,
    pub beta_l: f64,
    pub boundary: bool,
}

impl MassConfig {
    /// `m3 = 1 - m1 - m2`.
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        Self::from_three(m1, m2, 1.0 - m1 - m2)
    }

    pub fn from_three(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        let m3 = if m3.abs() < 1e-15 { 0.0 } else { m3 };
        if !(m1 >= 0.0 && m2 >= 0.0 && m3 >= 0.0) {
            return Err(Error::Domain(format!("masses must be nonnegative: ({m1}, {m2}, {m3})")));
        }
        if (m1 + m2 + m3 - 1.0).abs() > MASS_SUM_TOL {
            return Err(Error::Domain(format!("masses must sum to 1, got {}", m1 + m2 + m3)));
        }
        let s = m1 + m2 - (m1 * m1 + m1 * m2 + m2 * m2);
        let alpha0 = if s > 0.0 { s.powf(-0.5) } else { f64::INFINITY };
        Ok(MassConfig {
            m1,
            m2,
            m3,
            alpha0,
            mu0: alpha0.powi(-3),
            beta_l: 27.0 * (m1 * m2 + m2 * m3 + m3 * m1) / (m1 + m2 + m3).powi(2),
            boundary: m1 == 0.0 || m2 == 0.0 || m3 == 0.0,
        })
    }

    pub fn equal() -> Self {
        Self::from_three(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).expect("valid")
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }
}

/// Unit-side triangle of primaries and the limit position of the massless body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitGeometry {
    pub q: [C64; 3],
    pub zstar: C64,
}

impl LimitGeometry {
    /// Primaries at 0, 1 and ½ + i√3/2.
    pub fn lagrangian(zstar: C64) -> Result<Self> {
        let q = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.5, 3f64.sqrt() / 2.0)];
        let g = LimitGeometry { q, zstar };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let d = (self.q[i] - self.q[j]).norm();
            if (d - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!("primaries {i},{j} at distance {d}, expected 1")));
            }
        }
        for (i, qi) in self.q.iter().enumerate() {
            let d = (qi - self.zstar).norm();
            if d < COLLISION_TOL {
                return Err(Error::Collision { index: i + 1, distance: d });
            }
        }
        Ok(())
    }

    pub fn center_of_mass(&self, masses: &MassConfig) -> C64 {
        let m = masses.as_array();
        (0..3).map(|i| self.q[i] * m[i]).sum::<C64>() / (m[0] + m[1] + m[2])
    }
}

/// Limit coefficients of the reduced linearized system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionCoefficients {
    pub k0: f64,
    pub l0: C64,
    pub beta20: f64,
    pub beta110: C64,
    pub beta120: C64,
    pub beta220: C64,
}

impl ReductionCoefficients {
    /// `(3 + β₂,₀)/2 + |β₂₂,₀|`, which equals `1 + α + 3β`.
    pub fn lambda3(&self) -> f64 {
        0.5 * (3.0 + self.beta20) + self.beta220.norm()
    }

    pub fn lambda4(&self) -> f64 {
        0.5 * (3.0 + self.beta20) - self.beta220.norm()
    }
}

/// Parameters of the essential system, together with λ₃, λ₄ and the tilde coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssentialParams {
    pub alpha: f64,
    pub beta: f64,
    pub e: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
    /// `beta == 0`: the positive definite boundary.
    pub boundary: bool,
}

impl EssentialParams {
    /// No validation. Used for operator experiments (α = β = 0, α < β, negative e).
    pub fn unchecked(alpha: f64, beta: f64, e: f64) -> Self {
        let (alpha_tilde, beta_tilde) = to_tilde(alpha, beta);
        EssentialParams {
            alpha,
            beta,
            e,
            lambda3: 1.0 + alpha + 3.0 * beta,
            lambda4: 1.0 + alpha - 3.0 * beta,
            alpha_tilde,
            beta_tilde,
            boundary: beta == 0.0,
        }
    }

    pub fn from_tilde(alpha_tilde: f64, beta_tilde: f64, e: f64) -> Result<Self> {
        let (a, b) = from_tilde(alpha_tilde, beta_tilde);
        make_params(a, b, e)
    }

    pub fn with_e(&self, e: f64) -> Self {
        Self::unchecked(self.alpha, self.beta, e)
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        Self::unchecked(self.alpha, beta, self.e)
    }
}

/// The affine map T: (α, β) ↦ (α − β, −α + 3β − 1).
pub fn to_tilde(alpha: f64, beta: f64) -> (f64, f64) {
    (alpha - beta, -alpha + 3.0 * beta - 1.0)
}

/// Inverse of [`to_tilde`].
pub fn from_tilde(alpha_tilde: f64, beta_tilde: f64) -> (f64, f64) {
    let beta = 0.5 * (alpha_tilde + beta_tilde + 1.0);
    (alpha_tilde + beta, beta)
}

pub fn make_params(alpha: f64, beta: f64, e: f64) -> Result<EssentialParams> {
    if !(alpha.is_finite() && beta.is_finite() && e.is_finite()) {
        return Err(Error::Domain("parameters must be finite".into()));
    }
    if beta < 0.0 {
        return Err(Error::Domain(format!("beta must be nonnegative, got {beta}")));
    }
    if alpha < beta {
        return Err(Error::Domain(format!("alpha >= beta required, got alpha={alpha}, beta={beta}")));
    }
    if !(0.0..1.0).contains(&e) {
        return Err(Error::Domain(format!("eccentricity must lie in [0,1), got {e}")));
    }
    Ok(EssentialParams::unchecked(alpha, beta, e))
}

/// α = ½ Σ mᵢ/|qᵢ − z*|³, β = ½ |Σ mᵢ (qᵢ − z*)²/|qᵢ − z*|⁵|.
pub fn alpha_beta_from_geometry(geom: &LimitGeometry, masses: &MassConfig) -> Result<(f64, f64)> {
    geom.validate()?;
    let m = masses.as_array();
    let mut a = 0.0;
    let mut b = C64::new(0.0, 0.0);
    for i in 0..3 {
        let d = geom.q[i] - geom.zstar;
        let r = d.norm();
        a += m[i] / r.powi(3);
        b += d * d * (m[i] / r.powi(5));
    }
    Ok((0.5 * a, 0.5 * b.norm()))
}

pub fn reduction_coefficients(masses: &MassConfig, geom: &LimitGeometry) -> Result<ReductionCoefficients> {
    geom.validate()?;
    if masses.boundary {
        return Err(Error::Domain("reduction coefficients need m1, m2, m3 > 0".into()));
    }
    let (m1, m2, m3) = (masses.m1, masses.m2, masses.m3);
    let s3 = 3f64.sqrt();
    let alpha0 = masses.alpha0;
    let mu0 = masses.mu0;
    let k0 = alpha0 * alpha0 / (3.0 * m1 * m2 * (1.0 - m1 - m2)).sqrt();
    let l0 = -C64::new(m1 * m2 - 0.5 * (m1 + m2) * m3, 0.5 * s3 * (m2 - m1) * m3) / (3.0 * m1 * m2 * m3).sqrt();
    let beta110 = C64::new(3.0 * (m1 + m2) - 2.0, s3 * (m2 - m1)) * 0.75;

    let qc = geom.center_of_mass(masses);
    let a4 = (geom.zstar - qc) * alpha0;
    let mut sum3 = 0.0;
    let mut sum5 = C64::new(0.0, 0.0);
    for (i, mi) in masses.as_array().iter().enumerate() {
        let d = (geom.q[i] - qc) * alpha0 - a4;
        let r = d.norm();
        sum3 += mi / r.powi(3);
        sum5 += d * d * (mi / r.powi(5));
    }
    Ok(ReductionCoefficients {
        k0,
        l0,
        beta20: sum3 / mu0 - 1.0,
        beta110,
        beta120: C64::new(0.0, 0.0),
        beta220: sum5 * (1.5 / mu0),
    })
}

/// β_L = 27 (m₁m₂ + m₂m₃ + m₃m₁)/(m₁ + m₂ + m₃)².
pub fn lagrangian_beta(masses: &MassConfig) -> f64 {
    masses.beta_l
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s3() -> f64 {
        3f64.sqrt()
    }

    #[test]
    fn centroid_equal_masses() {
        let g = LimitGeometry::lagrangian(C64::new(0.5, s3() / 6.0)).unwrap();
        let (a, b) = alpha_beta_from_geometry(&g, &MassConfig::equal()).unwrap();
        assert!((a - 1.5 * s3()).abs() < 1e-12);
        assert!(b.abs() < 1e-12);
    }

    #[test]
    fn single_heavy_primary_limit() {
        let g = LimitGeometry::lagrangian(C64::new(0.5, 1.0 + s3() / 2.0)).unwrap();
        let m = MassConfig::from_three(0.0, 0.0, 1.0).unwrap();
        let (a, b) = alpha_beta_from_geometry(&g, &m).unwrap();
        assert!((a - 0.5).abs() < 1e-12 && (b - 0.5).abs() < 1e-12);
    }

    #[test]
    fn collision_is_rejected() {
        assert!(matches!(LimitGeometry::lagrangian(C64::new(1.0, 0.0)), Err(Error::Collision { index: 2, .. })));
    }

    #[test]
    fn beta110_examples() {
        let g = LimitGeometry::lagrangian(C64::new(0.5, -0.3)).unwrap();
        let r = reduction_coefficients(&MassConfig::equal(), &g).unwrap();
        assert!(r.beta110.norm() < 1e-15);
        let r = reduction_coefficients(&MassConfig::new(0.2, 0.2).unwrap(), &g).unwrap();
        assert!((r.beta110.re + 0.6).abs() < 1e-15 && r.beta110.im == 0.0);
        assert_eq!(r.beta120, C64::new(0.0, 0.0));
    }

    #[test]
    fn lambda3_two_paths() {
        for (m1, m2, z) in
            [(0.2, 0.3, C64::new(0.4, -0.7)), (0.1, 0.6, C64::new(1.3, 0.2)), (0.3, 0.3, C64::new(0.5, 0.3))]
        {
            let masses = MassConfig::new(m1, m2).unwrap();
            let g = LimitGeometry::lagrangian(z).unwrap();
            let (a, b) = alpha_beta_from_geometry(&g, &masses).unwrap();
            let p = EssentialParams::unchecked(a, b, 0.0);
            let r = reduction_coefficients(&masses, &g).unwrap();
            assert!((r.lambda3() - p.lambda3).abs() < 1e-10);
            assert!((r.lambda4() - p.lambda4).abs() < 1e-10);
        }
    }

    #[test]
    fn make_params_examples() {
        let p = make_params(0.5, 0.5, 0.0).unwrap();
        assert_eq!((p.lambda3, p.lambda4), (3.0, 0.0));
        assert_eq!((p.alpha_tilde, p.beta_tilde), (0.0, 0.0));
        let p = make_params(1.0, 2.0 / 3.0, 0.0).unwrap();
        assert!(p.lambda4.abs() < 1e-15);
        let p = make_params(1.2, 0.4, 0.0).unwrap();
        assert!((p.beta_tilde + 1.0).abs() < 1e-15);
        assert!(make_params(0.3, 0.4, 0.0).is_err());
        assert!(make_params(0.5, 0.4, 1.0).is_err());
        assert!(make_params(0.5, 0.0, 0.1).unwrap().boundary);
    }

    #[test]
    fn lagrangian_beta_examples() {
        assert!((lagrangian_beta(&MassConfig::equal()) - 9.0).abs() < 1e-12);
        assert!((lagrangian_beta(&MassConfig::from_three(0.5, 0.5, 0.0).unwrap()) - 6.75).abs() < 1e-12);
        assert_eq!(lagrangian_beta(&MassConfig::from_three(1.0, 0.0, 0.0).unwrap()), 0.0);
    }

    #[test]
    fn tilde_roundtrip_grid() {
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                let (a, b) = (0.1 + i as f64, 0.05 + 0.9 * j as f64);
                let (at, bt) = to_tilde(a, b);
                let (a2, b2) = from_tilde(at, bt);
                worst = worst.max((a2 - a).abs()).max((b2 - b).abs());
            }
        }
        assert!(worst < 1e-14);
    }

    proptest! {
        #[test]
        fn beta_l_matches_alpha0(m1 in 0.01f64..0.98, frac in 0.01f64..0.99) {
            let m2 = (1.0 - m1) * frac;
            let m = MassConfig::new(m1, m2).unwrap();
            prop_assert!((27.0 / (m.alpha0 * m.alpha0) - m.beta_l).abs() < 1e-12);
            prop_assert!(m.beta_l >= 0.0 && m.beta_l <= 9.0 + 1e-12);
            prop_assert!((m.mu0 - m.alpha0.powi(-3)).abs() < 1e-12);
        }

        #[test]
        fn beta120_vanishes(m1 in 0.01f64..0.9, frac in 0.05f64..0.95, x in -1.0f64..2.0, y in -1.5f64..2.0) {
            let m2 = (1.0 - m1) * frac;
            let masses = MassConfig::new(m1, m2).unwrap();
            if let Ok(g) = LimitGeometry::lagrangian(C64::new(x, y)) {
                let r = reduction_coefficients(&masses, &g).unwrap();
                prop_assert_eq!(r.beta120, C64::new(0.0, 0.0));
            }
        }

        #[test]
        fn relabeling_symmetry_on_axis(m in 0.01f64..0.39, y in -0.8f64..1.6) {
            // Swapping m1 <-> m2 with the reflection x -> 1 - x fixes z* = 1/2 + iy.
            let z = C64::new(0.5, y);
            if let Ok(g) = LimitGeometry::lagrangian(z) {
                let a = MassConfig::from_three(m, 1.5 * m, 1.0 - 2.5 * m).unwrap();
                let b = MassConfig::from_three(1.5 * m, m, 1.0 - 2.5 * m).unwrap();
                let (a1, b1) = alpha_beta_from_geometry(&g, &a).unwrap();
                let (a2, b2) = alpha_beta_from_geometry(&g, &b).unwrap();
                prop_assert!((a1 - a2).abs() <= 1e-12 * a1.abs().max(1.0));
                prop_assert!((b1 - b2).abs() <= 1e-12 * b1.abs().max(1.0));
            }
        }
    }
}
