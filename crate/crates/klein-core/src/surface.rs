//! The catalog of Klein bottle immersions behind one evaluation interface.
//!
//! Every surface carries its parameter domain and the seam identification
//! `(u, v) ~ (u + U, σv + τ)` under which it descends to the Klein bottle.

use alloc::vec::Vec;

use crate::curve::{PlanarCurve, RadiusFunction, TROTT_TRUNCATION};
use crate::domain::Interval;
use crate::error::{Error, Result};
use crate::math::{cos, sin, wrap_angle, Vec3, FRAC_1_SQRT_2, PI, TAU};
use crate::tube::TubeSurface;

#[cfg(feature = "serde")]
use serde::Serialize;

/// Default finite-difference step for partials.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Seam gluing `f(u + u_period, v_sigma · v + v_tau) = f(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct IdentificationMap {
    pub u_period: f64,
    pub v_sigma: i8,
    pub v_tau: f64,
    pub description: &'static str,
}

impl IdentificationMap {
    pub fn map_v(&self, v: f64) -> f64 {
        wrap_angle(self.v_sigma as f64 * v + self.v_tau)
    }

    pub fn reverses_orientation(&self) -> bool {
        self.v_sigma < 0
    }
}

/// How the gluing seam is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SeamClosure {
    /// Both seam edges belong to the domain; gluing is an identity.
    Exact,
    /// The seam edges are open (cusp); gluing holds only as a limit.
    Limit,
    /// The seam edges are a finite truncation of an infinite domain; the
    /// ends do not meet and the residual is informational.
    Truncated,
}

#[derive(Debug, Clone, Copy)]
pub enum SurfaceKind {
    /// Figure-eight (lemniscate) sweep.
    Kb1 { a: f64 },
    /// Stereographic image of a circle family on S³.
    Kb2,
    /// Dickson's piecewise pair of tubes.
    Kb3Dickson,
    /// Tube over a planar directrix.
    TubeBased(TubeSurface),
    /// Arbitrary map, used for controls and tests. No analytic partials.
    Custom(fn(f64, f64) -> Vec3),
}

/// Position and first partials at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub position: Vec3,
    pub du: Vec3,
    pub dv: Vec3,
    pub analytic_partials: bool,
    /// Central-difference step, when the partials are estimates.
    pub step: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ParametricSurface {
    pub name: &'static str,
    pub kind: SurfaceKind,
    pub params: Vec<(&'static str, f64)>,
    pub domain_u: Interval,
    pub domain_v: Interval,
    pub identification: Option<IdentificationMap>,
    pub seam: SeamClosure,
    /// Parameter lines where a piecewise definition switches branch.
    pub interior_seams: Vec<f64>,
    pub known_non_immersion: bool,
    pub source: &'static str,
}

fn full_turn() -> Interval {
    Interval::closed(0.0, TAU)
}

/// Figure-eight immersion. `a > 2` keeps the swept lemniscate off the axis.
pub fn kb1(a: f64) -> Result<ParametricSurface> {
    if !(a > 2.0 && a.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "a", value: a });
    }
    Ok(ParametricSurface {
        name: "kb1",
        kind: SurfaceKind::Kb1 { a },
        params: alloc::vec![("a", a)],
        domain_u: full_turn(),
        domain_v: full_turn(),
        identification: Some(IdentificationMap {
            u_period: TAU,
            v_sigma: -1,
            v_tau: 0.0,
            description: "f(u + 2π, 2π − v) = f(u, v)",
        }),
        seam: SeamClosure::Exact,
        interior_seams: Vec::new(),
        known_non_immersion: false,
        source: "figure-eight sweep of a rotating lemniscate",
    })
}

pub fn kb2() -> ParametricSurface {
    ParametricSurface {
        name: "kb2",
        kind: SurfaceKind::Kb2,
        params: Vec::new(),
        domain_u: Interval::closed(0.0, PI),
        domain_v: full_turn(),
        identification: Some(IdentificationMap {
            u_period: PI,
            v_sigma: -1,
            v_tau: PI,
            description: "f(u + π, π − v) = f(u, v)",
        }),
        seam: SeamClosure::Exact,
        interior_seams: Vec::new(),
        known_non_immersion: false,
        source: "one-parameter family of circles (stereographic projection from S³)",
    }
}

pub fn kb3_dickson() -> ParametricSurface {
    ParametricSurface {
        name: "kb3",
        kind: SurfaceKind::Kb3Dickson,
        params: Vec::new(),
        domain_u: full_turn(),
        domain_v: full_turn(),
        identification: Some(IdentificationMap {
            u_period: TAU,
            v_sigma: -1,
            v_tau: PI,
            description: "f(u + 2π, π − v) = f(u, v)",
        }),
        seam: SeamClosure::Exact,
        interior_seams: alloc::vec![PI],
        known_non_immersion: true,
        source: "Dickson's piecewise two-tube bottle (known non-immersion)",
    }
}

fn tube_surface(
    name: &'static str,
    tube: TubeSurface,
    params: Vec<(&'static str, f64)>,
    seam: SeamClosure,
    source: &'static str,
) -> ParametricSurface {
    ParametricSurface {
        name,
        kind: SurfaceKind::TubeBased(tube),
        params,
        domain_u: tube.domain_t,
        domain_v: tube.domain_theta,
        identification: Some(IdentificationMap {
            u_period: tube.domain_t.len(),
            v_sigma: -1,
            v_tau: PI,
            description: "tube ends glued with θ ↦ π − θ",
        }),
        seam,
        interior_seams: Vec::new(),
        known_non_immersion: false,
        source,
    }
}

/// Tube over the cusp-parametrized piriform with square-root radius.
pub fn piriform_tube(a: f64, b: f64, c: f64, d: f64) -> Result<ParametricSurface> {
    let tube = TubeSurface::new(PlanarCurve::cusp_piriform(a, b)?, RadiusFunction::sqrt_cusp(c, d)?)?;
    Ok(tube_surface(
        "piriform-tube",
        tube,
        alloc::vec![("a", a), ("b", b), ("c", c), ("d", d)],
        SeamClosure::Limit,
        "tube over the cusp-parametrized piriform, square-root radius",
    ))
}

/// Tube over half a stretched dumbbell curve; closed parameter rectangle.
pub fn dumbbell_tube(sx: f64, sy: f64, c: f64, d: f64) -> Result<ParametricSurface> {
    let tube = TubeSurface::new(PlanarCurve::dumbbell(sx, sy)?, RadiusFunction::sqrt_cusp_half(c, d)?)?;
    Ok(tube_surface(
        "dumbbell-tube",
        tube,
        alloc::vec![("sx", sx), ("sy", sy), ("c", c), ("d", d)],
        SeamClosure::Exact,
        "tube over half a stretched dumbbell curve, square-root radius",
    ))
}

pub fn trott_tube() -> ParametricSurface {
    trott_tube_truncated(TROTT_TRUNCATION).expect("default truncation is valid")
}

pub fn trott_tube_truncated(truncation: f64) -> Result<ParametricSurface> {
    let tube =
        TubeSurface::new(PlanarCurve::trott_truncated(truncation)?, RadiusFunction::trott_truncated(truncation)?)?;
    Ok(tube_surface(
        "trott-tube",
        tube,
        alloc::vec![("truncation", truncation)],
        SeamClosure::Truncated,
        "Trott's tube over a rational directrix, truncated to [-T, T]",
    ))
}

/// Control surface: torus of revolution as a tube around a circle.
pub fn torus(major: f64, minor: f64) -> Result<ParametricSurface> {
    if !(minor > 0.0 && minor < major) {
        return Err(Error::ParameterOutOfRange { name: "minor", value: minor });
    }
    let c = PlanarCurve::circle(major)?;
    let tube = TubeSurface::new(c, RadiusFunction::constant(minor, c.domain)?)?;
    let mut s = tube_surface(
        "torus",
        tube,
        alloc::vec![("major", major), ("minor", minor)],
        SeamClosure::Exact,
        "torus of revolution (orientable control)",
    );
    s.identification =
        Some(IdentificationMap { u_period: TAU, v_sigma: 1, v_tau: 0.0, description: "f(u + 2π, v) = f(u, v)" });
    Ok(s)
}

/// Wraps an arbitrary map; used for control surfaces.
pub fn custom(
    name: &'static str,
    f: fn(f64, f64) -> Vec3,
    domain_u: Interval,
    domain_v: Interval,
) -> ParametricSurface {
    ParametricSurface {
        name,
        kind: SurfaceKind::Custom(f),
        params: Vec::new(),
        domain_u,
        domain_v,
        identification: None,
        seam: SeamClosure::Exact,
        interior_seams: Vec::new(),
        known_non_immersion: false,
        source: "user-supplied map",
    }
}

fn kb1_eval(a: f64, u: f64, v: f64) -> Vec3 {
    let (su2, cu2) = (sin(u / 2.0), cos(u / 2.0));
    let (sv, s2v) = (sin(v), sin(2.0 * v));
    let bracket = a + cu2 * sv - su2 * s2v;
    Vec3::new(bracket * cos(u), bracket * sin(u), su2 * sv + cu2 * s2v)
}

fn kb1_partials(a: f64, u: f64, v: f64) -> (Vec3, Vec3) {
    let (su2, cu2) = (sin(u / 2.0), cos(u / 2.0));
    let (sv, cv, s2v, c2v) = (sin(v), cos(v), sin(2.0 * v), cos(2.0 * v));
    let (su, cu) = (sin(u), cos(u));
    let b = a + cu2 * sv - su2 * s2v;
    let bu = -0.5 * su2 * sv - 0.5 * cu2 * s2v;
    let bv = cu2 * cv - 2.0 * su2 * c2v;
    let du = Vec3::new(bu * cu - b * su, bu * su + b * cu, 0.5 * cu2 * sv - 0.5 * su2 * s2v);
    let dv = Vec3::new(bv * cu, bv * su, su2 * cv + 2.0 * cu2 * c2v);
    (du, dv)
}

fn kb2_eval(u: f64, v: f64) -> Vec3 {
    let (su, cu, s2u, c2u) = (sin(u), cos(u), sin(2.0 * u), cos(2.0 * u));
    let (sv, cv) = (sin(v), cos(v));
    let den = 1.0 - (s2u * sv + su * cv) * FRAC_1_SQRT_2;
    Vec3::new(c2u * sv / den, (s2u * sv - su * cv) * FRAC_1_SQRT_2 / den, cu * cv / den)
}

fn kb2_partials(u: f64, v: f64) -> (Vec3, Vec3) {
    let (su, cu, s2u, c2u) = (sin(u), cos(u), sin(2.0 * u), cos(2.0 * u));
    let (sv, cv) = (sin(v), cos(v));
    let k = FRAC_1_SQRT_2;
    let den = 1.0 - (s2u * sv + su * cv) * k;
    let den_u = -(2.0 * c2u * sv + cu * cv) * k;
    let den_v = -(s2u * cv - su * sv) * k;
    let x = Vec3::new(c2u * sv, (s2u * sv - su * cv) * k, cu * cv);
    let x_u = Vec3::new(-2.0 * s2u * sv, (2.0 * c2u * sv - cu * cv) * k, -su * cv);
    let x_v = Vec3::new(c2u * cv, (s2u * cv + su * sv) * k, -cu * sv);
    let d2 = den * den;
    (x_u / den - x * (den_u / d2), x_v / den - x * (den_v / d2))
}

fn kb3_branch_one(u: f64) -> bool {
    u <= PI
}

fn kb3_eval(u: f64, v: f64) -> Vec3 {
    let (su, cu) = (sin(u), cos(u));
    let k = 4.0 * (1.0 - 0.5 * cu);
    let p = 6.0 * cu * (1.0 + su);
    if kb3_branch_one(u) {
        Vec3::new(p + k * cu * cos(v), 16.0 * su + k * su * cos(v), k * sin(v))
    } else {
        Vec3::new(p + k * cos(v + PI), 16.0 * su, k * sin(v))
    }
}

fn kb3_partials(u: f64, v: f64) -> (Vec3, Vec3) {
    let (su, cu) = (sin(u), cos(u));
    let (sv, cv) = (sin(v), cos(v));
    let k = 4.0 * (1.0 - 0.5 * cu);
    let k_u = 2.0 * su;
    let p_u = 6.0 * (cos(2.0 * u) - su);
    if kb3_branch_one(u) {
        (
            Vec3::new(p_u + (k_u * cu - k * su) * cv, 16.0 * cu + (k_u * su + k * cu) * cv, k_u * sv),
            Vec3::new(-k * cu * sv, -k * su * sv, k * cv),
        )
    } else {
        (Vec3::new(p_u + k_u * cos(v + PI), 16.0 * cu, k_u * sv), Vec3::new(-k * sin(v + PI), 0.0, k * cv))
    }
}

impl ParametricSurface {
    /// Evaluates at `(u, v)`. `u` must lie in the domain (open ends
    /// excluded); catalog surfaces are 2π-periodic in `v`, so any `v` is
    /// accepted for them.
    pub fn eval(&self, u: f64, v: f64) -> Result<Vec3> {
        self.domain_u.check(u)?;
        if let SurfaceKind::Custom(_) = self.kind {
            self.domain_v.check(v)?;
        }
        self.eval_raw(u, v)
    }

    /// Evaluates the defining formula without any domain check. The
    /// closed-form surfaces are defined for every real `(u, v)`.
    pub fn eval_raw(&self, u: f64, v: f64) -> Result<Vec3> {
        Ok(match self.kind {
            SurfaceKind::Kb1 { a } => kb1_eval(a, u, v),
            SurfaceKind::Kb2 => kb2_eval(u, v),
            SurfaceKind::Kb3Dickson => kb3_eval(wrap_angle_u(u), v),
            SurfaceKind::TubeBased(ref tube) => tube.point_unchecked(u, v)?,
            SurfaceKind::Custom(f) => f(u, v),
        })
    }

    pub fn has_analytic_partials(&self) -> bool {
        !matches!(self.kind, SurfaceKind::Custom(_))
    }

    /// Position and partials: analytic where the surface provides them,
    /// central differences with step `h` otherwise.
    pub fn partials(&self, u: f64, v: f64, h: f64) -> Result<SurfaceSample> {
        if !self.has_analytic_partials() {
            return self.partials_fd(u, v, h);
        }
        let position = self.eval(u, v)?;
        let (du, dv) = match self.kind {
            SurfaceKind::Kb1 { a } => kb1_partials(a, u, v),
            SurfaceKind::Kb2 => kb2_partials(u, v),
            SurfaceKind::Kb3Dickson => kb3_partials(u, v),
            SurfaceKind::TubeBased(ref tube) => tube.partials_unchecked(u, v)?,
            SurfaceKind::Custom(_) => unreachable!(),
        };
        Ok(SurfaceSample { position, du, dv, analytic_partials: true, step: None })
    }

    /// Central-difference partials with step `h` in both directions.
    pub fn partials_fd(&self, u: f64, v: f64, h: f64) -> Result<SurfaceSample> {
        if h.is_nan() || h <= 0.0 || h >= self.domain_u.len() / 4.0 {
            return Err(Error::StepTooLarge(h));
        }
        let position = self.eval(u, v)?;
        let du = (self.eval(u + h, v)? - self.eval(u - h, v)?) / (2.0 * h);
        let dv = (self.eval(u, v + h)? - self.eval(u, v - h)?) / (2.0 * h);
        Ok(SurfaceSample { position, du, dv, analytic_partials: false, step: Some(h) })
    }

    /// `‖f(u + U, σv + τ) − f(u, v)‖` using the raw formula.
    pub fn identification_residual(&self, u: f64, v: f64) -> Result<f64> {
        let id = self.identification.ok_or(Error::NoIdentification)?;
        let a = self.eval_raw(u, v)?;
        let b = self.eval_raw(u + id.u_period, id.map_v(v))?;
        Ok(a.distance(b))
    }

    pub fn tube(&self) -> Option<&TubeSurface> {
        match self.kind {
            SurfaceKind::TubeBased(ref t) => Some(t),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> SurfaceDescriptor {
        SurfaceDescriptor {
            name: self.name,
            source: self.source,
            defaults: self.params.clone(),
            domain_u: self.domain_u,
            domain_v: self.domain_v,
            identification: self.identification,
            seam: self.seam,
            known_non_immersion: self.known_non_immersion,
        }
    }
}

/// Kb3 is piecewise on `[0, 2π]`; fold other `u` back into that range
/// while keeping `2π` itself on the second branch.
fn wrap_angle_u(u: f64) -> f64 {
    if (0.0..=TAU).contains(&u) {
        u
    } else {
        wrap_angle(u)
    }
}

/// Catalog entry: everything needed to reproduce a surface.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct SurfaceDescriptor {
    pub name: &'static str,
    pub source: &'static str,
    pub defaults: Vec<(&'static str, f64)>,
    pub domain_u: Interval,
    pub domain_v: Interval,
    pub identification: Option<IdentificationMap>,
    pub seam: SeamClosure,
    pub known_non_immersion: bool,
}

/// Names accepted by [`build`], catalog order.
pub const CATALOG: [&str; 6] = ["kb1", "kb2", "kb3", "trott-tube", "piriform-tube", "dumbbell-tube"];

/// Default parameters for a catalog surface (or the torus control).
pub fn default_params(name: &str) -> Option<Vec<(&'static str, f64)>> {
    Some(match name {
        "kb1" => alloc::vec![("a", 3.0)],
        "kb2" | "kb3" => Vec::new(),
        "trott-tube" => alloc::vec![("truncation", TROTT_TRUNCATION)],
        "piriform-tube" => alloc::vec![("a", 20.0), ("b", 8.0), ("c", 5.5), ("d", 0.4)],
        "dumbbell-tube" => alloc::vec![("sx", 5.0), ("sy", 2.0), ("c", 0.5), ("d", 1.0 / 30.0)],
        "torus" => alloc::vec![("major", 2.0), ("minor", 0.5)],
        _ => return None,
    })
}

/// Builds a catalog surface (or `torus`) from its name and a full
/// parameter list in [`default_params`] order.
pub fn build(name: &str, params: &[f64]) -> Option<Result<ParametricSurface>> {
    let p = |i: usize| params[i];
    let expected = default_params(name)?.len();
    if params.len() != expected {
        return None;
    }
    Some(match name {
        "kb1" => kb1(p(0)),
        "kb2" => Ok(kb2()),
        "kb3" => Ok(kb3_dickson()),
        "trott-tube" => trott_tube_truncated(p(0)),
        "piriform-tube" => piriform_tube(p(0), p(1), p(2), p(3)),
        "dumbbell-tube" => dumbbell_tube(p(0), p(1), p(2), p(3)),
        "torus" => torus(p(0), p(1)),
        _ => return None,
    })
}

/// The six catalog surfaces at their default parameters.
pub fn catalog_list() -> Vec<SurfaceDescriptor> {
    CATALOG
        .iter()
        .map(|n| {
            let defaults: Vec<f64> = default_params(n).unwrap().iter().map(|p| p.1).collect();
            build(n, &defaults).unwrap().unwrap().descriptor()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(a: Vec3, b: Vec3, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn kb1_examples() {
        let s = kb1(3.0).unwrap();
        assert!(near(s.eval(0.0, 0.0).unwrap(), Vec3::new(3.0, 0.0, 0.0), 1e-15));
        assert!(near(s.eval(0.0, PI).unwrap(), Vec3::new(3.0, 0.0, 0.0), 1e-15));
        // mpmath
        let p = s.eval(1.0, 2.0).unwrap();
        assert!(near(p, Vec3::new(2.248097403504611942, 3.501204261994711312, -0.2282162640700401393), 1e-14));
        assert!(matches!(kb1(2.0), Err(Error::ParameterOutOfRange { .. })));
        let dv = s.partials(0.0, 0.0, DEFAULT_FD_STEP).unwrap().dv;
        assert!((dv.z - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kb2_examples() {
        let s = kb2();
        assert!(near(s.eval(0.0, 0.0).unwrap(), Vec3::new(0.0, 0.0, 1.0), 1e-15));
        assert!(near(s.eval(0.0, PI).unwrap(), Vec3::new(0.0, 0.0, -1.0), 1e-15));
        let p = s.eval(1.0, 2.0).unwrap();
        assert!(near(p, Vec3::new(-0.5707752504995469061, 1.255373746217920936, -0.3391532570964713400), 1e-14));
        let p = s.eval(0.3, 4.5).unwrap();
        assert!(near(p, Vec3::new(-0.5624820135998320741, -0.2413948907473343035, -0.1403997145700012457), 1e-14));
    }

    #[test]
    fn kb2_denominator_is_bounded_away_from_zero() {
        let mut min = f64::MAX;
        for i in 0..512 {
            let u = PI * i as f64 / 511.0;
            for j in 0..512 {
                let v = TAU * j as f64 / 511.0;
                let den = 1.0 - (sin(2.0 * u) * sin(v) + sin(u) * cos(v)) * FRAC_1_SQRT_2;
                min = min.min(den);
            }
        }
        // mpmath on the same grid: 0.1161217974752958067
        assert!(min > 0.05);
        assert!((min - 0.1161217974752958).abs() < 1e-12);
    }

    #[test]
    fn kb3_examples() {
        let s = kb3_dickson();
        assert!(near(s.eval(0.0, 0.0).unwrap(), Vec3::new(8.0, 0.0, 0.0), 1e-15));
        assert!(near(s.eval(1.5 * PI, 0.0).unwrap(), Vec3::new(-4.0, -16.0, 0.0), 1e-13));
        let p = s.eval(4.0, 1.0).unwrap();
        assert!(near(p, Vec3::new(-3.821326519921304217, -12.10883992492685202, 4.465928221954591718), 1e-13));
        for k in 0..64 {
            let u = TAU * k as f64 / 64.0;
            assert!(s.eval(u, PI).unwrap().z.abs() < 1e-14);
        }
    }

    #[test]
    fn kb3_branches_meet_at_half_turn() {
        let s = kb3_dickson();
        for k in 0..256 {
            let v = TAU * k as f64 / 256.0;
            let left = kb3_eval(PI, v);
            let right = Vec3::new(6.0 * cos(PI) * (1.0 + sin(PI)) + 6.0 * cos(v + PI), 16.0 * sin(PI), 6.0 * sin(v));
            assert!(left.distance(right) < 1e-9);
            let just_after = s.eval(PI + 1e-12, v).unwrap();
            assert!(left.distance(just_after) < 1e-9);
        }
    }

    #[test]
    fn tube_examples() {
        let s = piriform_tube(20.0, 8.0, 5.5, 0.4).unwrap();
        assert!(near(s.eval(PI, 0.0).unwrap(), Vec3::new(45.5, 0.0, 0.0), 1e-12));
        assert!(near(
            s.eval(1.3, 0.7).unwrap(),
            Vec3::new(12.26426828112332708, 10.75771775208408608, 4.751042831885954888),
            1e-12
        ));
        assert!(matches!(s.eval(0.0, 0.0), Err(Error::OutOfDomain { .. })));

        let s = dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap();
        assert!(near(s.eval(0.0, 0.0).unwrap(), Vec3::new(0.0, 0.5, 0.0), 1e-15));
        assert!(near(
            s.eval(1.1, 4.0).unwrap(),
            Vec3::new(4.344181719221401770, 0.3486867411607472535, -0.4495939121592984480),
            1e-14
        ));
        for k in 0..64 {
            let th = TAU * k as f64 / 64.0;
            let a = s.eval(0.0, th).unwrap();
            let b = s.eval(PI, PI - th).unwrap();
            assert!(a.distance(b) < 1e-12);
        }

        let s = trott_tube();
        assert!(near(s.eval(0.0, PI / 2.0).unwrap(), Vec3::new(1.0, 1.0, 1.0 / 28.0), 1e-15));
        assert!(near(
            s.eval(0.4, 2.1).unwrap(),
            Vec3::new(1.004968964265223179, 1.526357009247262626, 0.05197067387887204788),
            1e-14
        ));
        let r = s.tube().unwrap().radius;
        let mut prev = f64::MAX;
        for t in [5.0, 10.0, 20.0, 40.0] {
            let r = RadiusFunction::trott_truncated(t).unwrap();
            let gap = (r.eval(t).unwrap() - r.eval(-t).unwrap()).abs();
            assert!(gap < prev);
            prev = gap;
        }
        // end circles at ±T stay apart at finite truncation
        let gap = s.eval_raw(-20.0, 0.3).unwrap().distance(s.eval_raw(20.0, PI - 0.3).unwrap());
        assert!(gap > 1e-5, "gap {gap}");
        assert!(r.eval(20.0).is_ok());
    }

    #[test]
    fn piriform_tube_z_range_is_bounded_by_max_radius() {
        // mpmath: max r = 7.473920880217871724 at t = 0.9201511845106101
        let s = piriform_tube(20.0, 8.0, 5.5, 0.4).unwrap();
        let tube = s.tube().unwrap();
        assert!((tube.radius.eval(0.9201511845106101).unwrap() - 7.473920880217871724).abs() < 1e-14);
        let mut max_z: f64 = 0.0;
        for i in 1..512 {
            let t = TAU * i as f64 / 512.0;
            for j in 0..64 {
                let th = TAU * j as f64 / 64.0;
                max_z = max_z.max(s.eval(t, th).unwrap().z.abs());
            }
        }
        assert!(max_z <= 7.473920880217872);
        assert!(max_z > 7.47);
    }

    #[test]
    fn piriform_tube_mirror_relation() {
        let s = piriform_tube(20.0, 8.0, 5.5, 0.4).unwrap();
        let flipped = piriform_tube(20.0, 8.0, 5.5, -0.4).unwrap();
        for i in 1..64 {
            let t = TAU * i as f64 / 64.0;
            for j in 0..16 {
                let th = TAU * j as f64 / 16.0;
                let a = s.eval(TAU - t, th).unwrap();
                let b = flipped.eval(t, th).unwrap();
                assert!(near(a, Vec3::new(b.x, -b.y, b.z), 1e-12));
            }
        }
        // the directrix alone is mirror symmetric
        let c = PlanarCurve::cusp_piriform(20.0, 8.0).unwrap();
        for i in 1..64 {
            let t = TAU * i as f64 / 64.0;
            let (p, q) = (c.position(t).unwrap(), c.position(TAU - t).unwrap());
            assert!((p.x - q.x).abs() < 1e-12 && (p.y + q.y).abs() < 1e-12);
        }
    }

    #[test]
    fn v_periodicity() {
        for name in CATALOG {
            let d: Vec<f64> = default_params(name).unwrap().iter().map(|p| p.1).collect();
            let s = build(name, &d).unwrap().unwrap();
            let dom = s.domain_u.clipped(1e-3);
            for i in 0..=16 {
                let u = dom.grid(16, i);
                for v in [0.0, 0.7, 2.0, 5.9] {
                    let a = s.eval(u, v).unwrap();
                    let b = s.eval(u, v + TAU).unwrap();
                    assert!(a.distance(b) <= 1e-12 * (1.0 + a.norm()), "{name}");
                }
            }
        }
    }

    #[test]
    fn catalog_contents() {
        let list = catalog_list();
        assert_eq!(list.len(), 6);
        let pir = list.iter().find(|d| d.name == "piriform-tube").unwrap();
        assert_eq!(pir.defaults, alloc::vec![("a", 20.0), ("b", 8.0), ("c", 5.5), ("d", 0.4)]);
        let kb3 = list.iter().find(|d| d.name == "kb3").unwrap();
        assert!(kb3.known_non_immersion);
        assert_eq!(list.iter().filter(|d| d.known_non_immersion).count(), 1);
        assert!(build("nope", &[]).is_none());
        assert!(build("kb1", &[]).is_none());
    }

    #[test]
    fn fd_partials_errors() {
        let s = dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap();
        assert!(matches!(s.partials_fd(1e-7, 0.0, 1e-5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(s.partials_fd(1.0, 0.0, 2.0), Err(Error::StepTooLarge(_))));
        let sample = s.partials_fd(1.0, 0.0, 1e-5).unwrap();
        assert!(!sample.analytic_partials);
        assert_eq!(sample.step, Some(1e-5));
    }
}
