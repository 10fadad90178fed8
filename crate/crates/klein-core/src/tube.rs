//! Tubes around planar directrices.
//!
//! The cross-section at `t` is the circle of radius `r(t)` in the normal
//! plane spanned by `J(T)` (the in-plane normal) and `k = (0, 0, 1)`.

use crate::curve::{check_closure_conditions, PlanarCurve, RadiusFunction, ToleranceConfig};
use crate::domain::Interval;
use crate::error::{Error, Result};
use crate::math::{cos, sin, wrap_angle, Vec2, Vec3, PI};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Which end of the tube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Start,
    End,
}

/// Affine angle map `θ ↦ σθ + τ (mod 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AngleMap {
    pub sigma: i8,
    pub tau: f64,
}

impl AngleMap {
    pub fn apply(&self, theta: f64) -> f64 {
        wrap_angle(self.sigma as f64 * theta + self.tau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TubeSurface {
    pub directrix: PlanarCurve,
    pub radius: RadiusFunction,
    pub domain_t: Interval,
    pub domain_theta: Interval,
    pub speed_tolerance: f64,
}

impl TubeSurface {
    pub fn new(directrix: PlanarCurve, radius: RadiusFunction) -> Result<Self> {
        Self::with_speed_tolerance(directrix, radius, ToleranceConfig::default().speed_tolerance)
    }

    pub fn with_speed_tolerance(directrix: PlanarCurve, radius: RadiusFunction, speed_tolerance: f64) -> Result<Self> {
        if !directrix.domain.same_as(&radius.domain) {
            return Err(Error::DomainMismatch);
        }
        if let Some(t) = directrix.first_interior_stall(speed_tolerance) {
            return Err(Error::DegenerateDirectrix(t));
        }
        Ok(Self {
            directrix,
            radius,
            domain_t: directrix.domain,
            domain_theta: Interval::closed(0.0, 2.0 * PI),
            speed_tolerance,
        })
    }

    /// `(J(T), 0)` at `t`, failing at a stationary point of the directrix.
    pub fn in_plane_normal(&self, t: f64) -> Result<Vec3> {
        Ok(self.directrix.unit_tangent(t, self.speed_tolerance)?.rotate90().lift())
    }

    /// `α(t) + r(t) (cos θ J(T) + sin θ k)`.
    pub fn point(&self, t: f64, theta: f64) -> Result<Vec3> {
        self.domain_t.check(t)?;
        self.point_unchecked(t, theta)
    }

    pub(crate) fn point_unchecked(&self, t: f64, theta: f64) -> Result<Vec3> {
        let jet = self.directrix.jet_unchecked(t);
        let speed = jet.velocity.norm();
        if speed <= self.speed_tolerance {
            return Err(Error::DegenerateVelocity { t, speed });
        }
        let n = (jet.velocity / speed).rotate90().lift();
        let r = self.radius.value_unchecked(t);
        let theta = wrap_angle(theta);
        Ok(jet.position.lift() + (n * cos(theta) + Vec3::K * sin(theta)) * r)
    }

    /// Analytic `(∂/∂t, ∂/∂θ)`.
    pub(crate) fn partials_unchecked(&self, t: f64, theta: f64) -> Result<(Vec3, Vec3)> {
        let jet = self.directrix.jet_unchecked(t);
        let speed = jet.velocity.norm();
        if speed <= self.speed_tolerance {
            return Err(Error::DegenerateVelocity { t, speed });
        }
        let tan = jet.velocity / speed;
        let dtan: Vec2 = (jet.acceleration - tan * jet.acceleration.dot(tan)) / speed;
        let n = tan.rotate90().lift();
        let dn = dtan.rotate90().lift();
        let r = self.radius.value_unchecked(t);
        let dr = self.radius.derivative_unchecked(t);
        let theta = wrap_angle(theta);
        let (s, c) = (sin(theta), cos(theta));
        let dt = jet.velocity.lift() + (n * c + Vec3::K * s) * dr + dn * (r * c);
        let dtheta = (n * (-s) + Vec3::K * c) * r;
        Ok((dt, dtheta))
    }

    /// Boundary circle sample at `t_min + eps` or `t_max − eps`.
    pub fn end_circle(&self, end: End, eps: f64, theta: f64) -> Result<Vec3> {
        if !(eps >= 0.0 && eps < self.domain_t.len() / 2.0) {
            return Err(Error::OutOfDomain { t: eps, min: 0.0, max: self.domain_t.len() / 2.0 });
        }
        let t = match end {
            End::Start => self.domain_t.min + eps,
            End::End => self.domain_t.max - eps,
        };
        self.point(t, theta)
    }

    /// How the end circles match up when the tube is glued shut.
    ///
    /// With antipodal end tangents `J(T)` flips while `k` stays, so the
    /// cosine must change sign and the sine must not: `θ ↦ π − θ`.
    pub fn end_correspondence(&self, cfg: &ToleranceConfig) -> Result<AngleMap> {
        let rep = check_closure_conditions(&self.directrix, &self.radius, cfg)?;
        if rep.cond_ii_tangent_residual > cfg.tangent_tolerance {
            return Err(Error::NotAntipodalTangents(rep.cond_ii_tangent_residual));
        }
        Ok(AngleMap { sigma: -1, tau: PI })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{sqrt, TAU};
    use proptest::prelude::*;

    fn torus(big: f64, small: f64) -> TubeSurface {
        let c = PlanarCurve::circle(big).unwrap();
        TubeSurface::new(c, RadiusFunction::constant(small, c.domain).unwrap()).unwrap()
    }

    fn piriform_tube() -> TubeSurface {
        TubeSurface::new(PlanarCurve::cusp_piriform(20.0, 8.0).unwrap(), RadiusFunction::sqrt_cusp(5.5, 0.4).unwrap())
            .unwrap()
    }

    fn dumbbell_tube() -> TubeSurface {
        TubeSurface::new(
            PlanarCurve::dumbbell(5.0, 2.0).unwrap(),
            RadiusFunction::sqrt_cusp_half(0.5, 1.0 / 30.0).unwrap(),
        )
        .unwrap()
    }

    fn near(a: Vec3, b: Vec3, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn torus_points() {
        let t = torus(1.0, 0.5);
        assert!(near(t.point(0.0, 0.0).unwrap(), Vec3::new(0.5, 0.0, 0.0), 1e-15));
        assert!(near(t.point(0.0, PI / 2.0).unwrap(), Vec3::new(1.0, 0.0, 0.5), 1e-15));
        // mpmath: (−0.5, 0, 0)
        assert!(near(t.point(PI, 0.0).unwrap(), Vec3::new(-0.5, 0.0, 0.0), 1e-15));
    }

    #[test]
    fn piriform_tube_point_at_half_turn() {
        // mpmath: (45.5, 0, 0)
        let p = piriform_tube().point(PI, 0.0).unwrap();
        assert!(near(p, Vec3::new(45.5, 0.0, 0.0), 1e-12));
        assert!(matches!(piriform_tube().point(0.0, 1.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn construction_errors() {
        let c = PlanarCurve::dumbbell(5.0, 2.0).unwrap();
        let r = RadiusFunction::sqrt_cusp(5.5, 0.4).unwrap();
        assert_eq!(TubeSurface::new(c, r), Err(Error::DomainMismatch));
        // the Dickson directrix stalls at t = 3π/2
        let c = PlanarCurve::dickson_piriform();
        let r = RadiusFunction::constant(1.0, c.domain).unwrap();
        assert!(matches!(TubeSurface::new(c, r), Err(Error::DegenerateDirectrix(_))));
    }

    #[test]
    fn z_is_radius_times_sine() {
        let tube = dumbbell_tube();
        for (t, th) in [(0.3, 1.0), (1.7, 4.0), (2.9, 5.5)] {
            let r = tube.radius.eval(t).unwrap();
            assert!((tube.point(t, th).unwrap().z - r * sin(th)).abs() < 1e-15);
        }
    }

    #[test]
    fn end_circles() {
        let tube = piriform_tube();
        let mut prev = f64::MAX;
        for k in 0..12 {
            let eps = libm::pow(2.0, -(k as f64));
            let mut worst: f64 = 0.0;
            for j in 0..16 {
                let th = TAU * j as f64 / 16.0;
                let p = tube.end_circle(End::Start, eps, th).unwrap();
                let target = Vec3::new(0.0, 5.5 * cos(th), 5.5 * sin(th));
                worst = worst.max(p.distance(target));
            }
            assert!(worst < prev);
            prev = worst;
        }
        assert!(prev < 0.1);

        let tube = dumbbell_tube();
        for j in 0..16 {
            let th = TAU * j as f64 / 16.0;
            let p = tube.end_circle(End::Start, 0.0, th).unwrap();
            assert!(p.x.abs() < 1e-15);
            assert!((sqrt(p.y * p.y + p.z * p.z) - 0.5).abs() < 1e-15);
        }

        let t = torus(2.0, 0.5);
        for j in 0..16 {
            let th = TAU * j as f64 / 16.0;
            let a = t.end_circle(End::Start, 0.0, th).unwrap();
            let b = t.end_circle(End::End, 0.0, th).unwrap();
            assert!(near(a, b, 1e-14));
        }
        assert!(t.end_circle(End::Start, 4.0, 0.0).is_err());
    }

    #[test]
    fn dumbbell_end_correspondence() {
        let tube = dumbbell_tube();
        let map = tube.end_correspondence(&ToleranceConfig::default()).unwrap();
        assert_eq!(map.apply(PI / 2.0), PI / 2.0);
        assert_eq!(map.apply(0.0), PI);
        for j in 0..64 {
            let th = TAU * j as f64 / 64.0;
            let a = tube.point(0.0, th).unwrap();
            let b = tube.point(PI, map.apply(th)).unwrap();
            assert!(a.distance(b) < 1e-12, "θ = {th}: {}", a.distance(b));
        }
        let t = torus(2.0, 0.5);
        assert!(matches!(t.end_correspondence(&ToleranceConfig::default()), Err(Error::NotAntipodalTangents(_))));
    }

    #[test]
    fn torus_matches_standard_parametrization() {
        let (big, small) = (2.0, 0.5);
        let tube = torus(big, small);
        for i in 0..32 {
            for j in 0..32 {
                let t = TAU * i as f64 / 32.0;
                let th = TAU * j as f64 / 32.0;
                // ψ = t, φ = π − θ
                let (psi, phi) = (t, PI - th);
                let std = Vec3::new(
                    (big + small * cos(phi)) * cos(psi),
                    (big + small * cos(phi)) * sin(psi),
                    small * sin(phi),
                );
                assert!(near(tube.point(t, th).unwrap(), std, 1e-14));
            }
        }
    }

    proptest! {
        #[test]
        fn frame_is_orthonormal(t in 0.01f64..3.13, th in 0.0f64..TAU) {
            let tube = dumbbell_tube();
            let p = tube.point(t, th).unwrap();
            let jet = tube.directrix.eval_jet(t).unwrap();
            let r = tube.radius.eval(t).unwrap();
            let off = p - jet.position.lift();
            prop_assert!((off.norm() - r).abs() <= 1e-12 * r);
            prop_assert!(off.dot(jet.velocity.lift()).abs() <= 1e-12 * r * jet.velocity.norm());
        }

        #[test]
        fn theta_periodic(t in 0.01f64..6.27, th in -10.0f64..10.0) {
            let tube = piriform_tube();
            let a = tube.point(t, th).unwrap();
            let b = tube.point(t, th + TAU).unwrap();
            prop_assert!(a.distance(b) <= 1e-13 * (1.0 + a.norm()));
        }
    }
}
