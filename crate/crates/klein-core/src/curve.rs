//! Planar directrices, tube radius profiles, and the end-closure test a
//! directrix/radius pair has to pass before its tube glues into a closed
//! surface.

use alloc::vec::Vec;

use crate::domain::Interval;
use crate::error::{Error, Result};
use crate::math::{cos, fit_slope, ln, sin, sqrt, Vec2, PI, TAU};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Default truncation of the rational directrix, which really lives on ℝ.
pub const TROTT_TRUNCATION: f64 = 20.0;

/// Samples used to validate positivity/regularity at construction time.
pub(crate) const DENSE_SAMPLES: usize = 4096;

/// The closed-form families a [`PlanarCurve`] can take.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum CurveFamily {
    /// `(a(1 + sin t), b cos t (1 + sin t))` on `[0, 2π]`.
    Piriform { a: f64, b: f64 },
    /// `(p cos t (1 + sin t), q sin t)`, the central curve of the
    /// piecewise Dickson bottle (`p = 6`, `q = 16`).
    DicksonPiriform { p: f64, q: f64 },
    /// `(a(1 − cos t), b sin t (1 − cos t))` on `(0, 2π)`; the cusp sits
    /// at both ends.
    CuspPiriform { a: f64, b: f64 },
    /// `(sx sin t, sy sin²t cos t)` on `[0, π]`.
    Dumbbell { sx: f64, sy: f64 },
    /// `(1, t² + t + 1) / (t⁴ + 1)` truncated to `[−T, T]`.
    TrottRational { truncation: f64 },
    /// `(R cos t, R sin t)` on `[0, 2π]`.
    Circle { radius: f64 },
}

/// Position and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CurveJet {
    pub position: Vec2,
    pub velocity: Vec2,
    pub acceleration: Vec2,
}

/// A parametrized plane curve with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PlanarCurve {
    pub family: CurveFamily,
    pub domain: Interval,
}

fn nonzero(name: &'static str, v: f64) -> Result<()> {
    if v == 0.0 || !v.is_finite() {
        Err(Error::ZeroParameter(name))
    } else {
        Ok(())
    }
}

impl PlanarCurve {
    pub fn piriform(a: f64, b: f64) -> Result<Self> {
        nonzero("a", a)?;
        nonzero("b", b)?;
        Ok(Self { family: CurveFamily::Piriform { a, b }, domain: Interval::closed(0.0, TAU) })
    }

    /// The `(6 cos t (1 + sin t), 16 sin t)` directrix of the Dickson bottle.
    pub fn dickson_piriform() -> Self {
        Self { family: CurveFamily::DicksonPiriform { p: 6.0, q: 16.0 }, domain: Interval::closed(0.0, TAU) }
    }

    pub fn cusp_piriform(a: f64, b: f64) -> Result<Self> {
        nonzero("a", a)?;
        nonzero("b", b)?;
        Ok(Self { family: CurveFamily::CuspPiriform { a, b }, domain: Interval::open(0.0, TAU) })
    }

    pub fn dumbbell(sx: f64, sy: f64) -> Result<Self> {
        nonzero("sx", sx)?;
        nonzero("sy", sy)?;
        Ok(Self { family: CurveFamily::Dumbbell { sx, sy }, domain: Interval::closed(0.0, PI) })
    }

    pub fn trott_directrix() -> Self {
        Self::trott_truncated(TROTT_TRUNCATION).expect("default truncation is valid")
    }

    /// The rational directrix on `[−T, T]`. Both ends are flagged open:
    /// the true ends sit at infinity.
    pub fn trott_truncated(truncation: f64) -> Result<Self> {
        if !(truncation > 0.0 && truncation.is_finite()) {
            return Err(Error::ParameterOutOfRange { name: "truncation", value: truncation });
        }
        Ok(Self { family: CurveFamily::TrottRational { truncation }, domain: Interval::open(-truncation, truncation) })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::ParameterOutOfRange { name: "radius", value: radius });
        }
        Ok(Self { family: CurveFamily::Circle { radius }, domain: Interval::closed(0.0, TAU) })
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            CurveFamily::Piriform { .. } => "piriform",
            CurveFamily::DicksonPiriform { .. } => "dickson-piriform",
            CurveFamily::CuspPiriform { .. } => "cusp-piriform",
            CurveFamily::Dumbbell { .. } => "dumbbell",
            CurveFamily::TrottRational { .. } => "trott-rational",
            CurveFamily::Circle { .. } => "circle",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self.family {
            CurveFamily::Piriform { a, b } | CurveFamily::CuspPiriform { a, b } => {
                alloc::vec![("a", a), ("b", b)]
            }
            CurveFamily::DicksonPiriform { p, q } => alloc::vec![("p", p), ("q", q)],
            CurveFamily::Dumbbell { sx, sy } => alloc::vec![("sx", sx), ("sy", sy)],
            CurveFamily::TrottRational { truncation } => alloc::vec![("truncation", truncation)],
            CurveFamily::Circle { radius } => alloc::vec![("radius", radius)],
        }
    }

    pub fn position(&self, t: f64) -> Result<Vec2> {
        Ok(self.eval_jet(t)?.position)
    }

    /// Analytic position, velocity and acceleration.
    ///
    /// Every family extends continuously to the ends of its domain, so
    /// jets are available on the closed interval; only parameters outside
    /// it are rejected.
    pub fn eval_jet(&self, t: f64) -> Result<CurveJet> {
        self.domain.check_closure(t)?;
        Ok(self.jet_unchecked(t))
    }

    pub(crate) fn jet_unchecked(&self, t: f64) -> CurveJet {
        let (s, c) = (sin(t), cos(t));
        let (position, velocity, acceleration) = match self.family {
            CurveFamily::Piriform { a, b } => (
                Vec2::new(a * (1.0 + s), b * c * (1.0 + s)),
                Vec2::new(a * c, b * (cos(2.0 * t) - s)),
                Vec2::new(-a * s, b * (-2.0 * sin(2.0 * t) - c)),
            ),
            CurveFamily::DicksonPiriform { p, q } => (
                Vec2::new(p * c * (1.0 + s), q * s),
                Vec2::new(p * (cos(2.0 * t) - s), q * c),
                Vec2::new(p * (-2.0 * sin(2.0 * t) - c), -q * s),
            ),
            CurveFamily::CuspPiriform { a, b } => (
                Vec2::new(a * (1.0 - c), b * s * (1.0 - c)),
                Vec2::new(a * s, b * (c - cos(2.0 * t))),
                Vec2::new(a * c, b * (2.0 * sin(2.0 * t) - s)),
            ),
            CurveFamily::Dumbbell { sx, sy } => (
                Vec2::new(sx * s, sy * s * s * c),
                Vec2::new(sx * c, sy * (2.0 * s * c * c - s * s * s)),
                Vec2::new(-sx * s, sy * (2.0 * c * c * c - 7.0 * s * s * c)),
            ),
            CurveFamily::TrottRational { .. } => {
                let t2 = t * t;
                let d = t2 * t2 + 1.0;
                let dd = 4.0 * t2 * t;
                let ddd = 12.0 * t2;
                let n = t2 + t + 1.0;
                let dn = 2.0 * t + 1.0;
                let x = 1.0 / d;
                let dx = -dd / (d * d);
                let ddx = (2.0 * dd * dd - ddd * d) / (d * d * d);
                let y = n / d;
                let dy = (dn * d - n * dd) / (d * d);
                let ddy = 2.0 / d - 2.0 * dn * dd / (d * d) - n * ddd / (d * d) + 2.0 * n * dd * dd / (d * d * d);
                (Vec2::new(x, y), Vec2::new(dx, dy), Vec2::new(ddx, ddy))
            }
            CurveFamily::Circle { radius } => (
                Vec2::new(radius * c, radius * s),
                Vec2::new(-radius * s, radius * c),
                Vec2::new(-radius * c, -radius * s),
            ),
        };
        CurveJet { position, velocity, acceleration }
    }

    /// `T = α′/‖α′‖`, failing where the speed is at or below `speed_tolerance`.
    pub fn unit_tangent(&self, t: f64, speed_tolerance: f64) -> Result<Vec2> {
        let v = self.eval_jet(t)?.velocity;
        let speed = v.norm();
        if speed <= speed_tolerance {
            return Err(Error::DegenerateVelocity { t, speed });
        }
        Ok(v / speed)
    }

    /// Looks for a vanishing velocity strictly inside the domain.
    pub(crate) fn first_interior_stall(&self, speed_tolerance: f64) -> Option<f64> {
        let d = self.domain;
        (1..DENSE_SAMPLES)
            .map(|i| d.grid(DENSE_SAMPLES, i))
            .find(|&t| self.jet_unchecked(t).velocity.norm() <= speed_tolerance)
    }

    /// Diagonal of the bounding box of a coarse sample, used to scale
    /// absolute tolerances.
    pub(crate) fn extent(&self) -> f64 {
        let (mut lo, mut hi) = (Vec2::new(f64::MAX, f64::MAX), Vec2::new(f64::MIN, f64::MIN));
        for i in 0..=256 {
            let p = self.jet_unchecked(self.domain.grid(256, i)).position;
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (hi - lo).norm()
    }
}

/// How the radius derivative behaves as the parameter approaches an end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EndBehavior {
    FiniteDerivative,
    DerivativePlusInfinity,
    DerivativeMinusInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum RadiusFamily {
    /// `c − d (t − π) √(t (2π − t))` on `(0, 2π)`.
    SqrtCusp {
        c: f64,
        d: f64,
    },
    /// `c − d (2t − π) √(2t (2π − 2t))` on `[0, π]`.
    SqrtCuspHalf {
        c: f64,
        d: f64,
    },
    /// `(84t⁴ + 56t³ + 21t² + 21t + 24) / (672 (1 + t⁴))`.
    TrottRational,
    Constant {
        rho: f64,
    },
}

/// Tube radius profile `r(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RadiusFunction {
    pub family: RadiusFamily,
    pub domain: Interval,
    pub end_behavior: [EndBehavior; 2],
}

fn sqrt_ends(d: f64) -> [EndBehavior; 2] {
    // r ≈ c ± d·π·√(2π ε) at both ends, and r rises into the end on both
    // sides when d > 0.
    let b = if d > 0.0 {
        EndBehavior::DerivativePlusInfinity
    } else if d < 0.0 {
        EndBehavior::DerivativeMinusInfinity
    } else {
        EndBehavior::FiniteDerivative
    };
    [b, b]
}

/// Value and derivative of `c − d (s − π) √(s (2π − s))` in `s`.
fn sqrt_cusp(c: f64, d: f64, s: f64) -> (f64, f64) {
    let q = sqrt((s * (TAU - s)).max(0.0));
    let value = c - d * (s - PI) * q;
    let deriv = -d * (q - (s - PI) * (s - PI) / q);
    (value, deriv)
}

impl RadiusFunction {
    pub fn sqrt_cusp(c: f64, d: f64) -> Result<Self> {
        Self::checked(RadiusFamily::SqrtCusp { c, d }, Interval::open(0.0, TAU), sqrt_ends(d), c)
    }

    pub fn sqrt_cusp_half(c: f64, d: f64) -> Result<Self> {
        Self::checked(RadiusFamily::SqrtCuspHalf { c, d }, Interval::closed(0.0, PI), sqrt_ends(d), c)
    }

    pub fn trott() -> Self {
        Self::trott_truncated(TROTT_TRUNCATION).expect("default truncation is valid")
    }

    pub fn trott_truncated(truncation: f64) -> Result<Self> {
        if !(truncation > 0.0 && truncation.is_finite()) {
            return Err(Error::ParameterOutOfRange { name: "truncation", value: truncation });
        }
        Self::checked(
            RadiusFamily::TrottRational,
            Interval::open(-truncation, truncation),
            [EndBehavior::FiniteDerivative; 2],
            1.0,
        )
    }

    pub fn constant(rho: f64, domain: Interval) -> Result<Self> {
        Self::checked(RadiusFamily::Constant { rho }, domain, [EndBehavior::FiniteDerivative; 2], rho)
    }

    fn checked(family: RadiusFamily, domain: Interval, ends: [EndBehavior; 2], base: f64) -> Result<Self> {
        if !(base > 0.0 && base.is_finite()) {
            return Err(Error::NonpositiveRadiusBase(base));
        }
        if let RadiusFamily::SqrtCusp { d, .. } | RadiusFamily::SqrtCuspHalf { d, .. } = family {
            if !d.is_finite() {
                return Err(Error::ParameterOutOfRange { name: "d", value: d });
            }
        }
        let r = Self { family, domain, end_behavior: ends };
        for i in 1..DENSE_SAMPLES {
            let t = domain.grid(DENSE_SAMPLES, i);
            let v = r.value_unchecked(t);
            if v.is_nan() || v <= 0.0 {
                return Err(Error::RadiusNotPositive { t, r: v });
            }
        }
        Ok(r)
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            RadiusFamily::SqrtCusp { .. } => "sqrt-cusp",
            RadiusFamily::SqrtCuspHalf { .. } => "sqrt-cusp-half",
            RadiusFamily::TrottRational => "trott-rational",
            RadiusFamily::Constant { .. } => "constant",
        }
    }

    /// `r(t)` on the closed domain (the square-root families are
    /// continuous up to their ends).
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.domain.check_closure(t)?;
        Ok(self.value_unchecked(t))
    }

    /// `r′(t)`; unbounded at the ends of the square-root families.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.domain.check_closure(t)?;
        let at_end = t == self.domain.min || t == self.domain.max;
        match self.family {
            RadiusFamily::SqrtCusp { d, .. } | RadiusFamily::SqrtCuspHalf { d, .. } if at_end && d != 0.0 => {
                Err(Error::DerivativeUnbounded(t))
            }
            _ => Ok(self.derivative_unchecked(t)),
        }
    }

    pub(crate) fn value_unchecked(&self, t: f64) -> f64 {
        match self.family {
            RadiusFamily::SqrtCusp { c, d } => sqrt_cusp(c, d, t).0,
            RadiusFamily::SqrtCuspHalf { c, d } => sqrt_cusp(c, d, 2.0 * t).0,
            RadiusFamily::TrottRational => {
                let t2 = t * t;
                (84.0 * t2 * t2 + 56.0 * t2 * t + 21.0 * t2 + 21.0 * t + 24.0) / (672.0 * (1.0 + t2 * t2))
            }
            RadiusFamily::Constant { rho } => rho,
        }
    }

    pub(crate) fn derivative_unchecked(&self, t: f64) -> f64 {
        match self.family {
            RadiusFamily::SqrtCusp { c, d } => {
                if d == 0.0 {
                    0.0
                } else {
                    sqrt_cusp(c, d, t).1
                }
            }
            RadiusFamily::SqrtCuspHalf { c, d } => {
                if d == 0.0 {
                    0.0
                } else {
                    2.0 * sqrt_cusp(c, d, 2.0 * t).1
                }
            }
            RadiusFamily::TrottRational => {
                let t2 = t * t;
                let n = 84.0 * t2 * t2 + 56.0 * t2 * t + 21.0 * t2 + 21.0 * t + 24.0;
                let dn = 336.0 * t2 * t + 168.0 * t2 + 42.0 * t + 21.0;
                let d = 672.0 * (1.0 + t2 * t2);
                let dd = 672.0 * 4.0 * t2 * t;
                (dn * d - n * dd) / (d * d)
            }
            RadiusFamily::Constant { .. } => 0.0,
        }
    }

    pub(crate) fn max_sampled(&self) -> f64 {
        (0..=DENSE_SAMPLES).map(|i| self.value_unchecked(self.domain.grid(DENSE_SAMPLES, i))).fold(0.0, f64::max)
    }
}

/// Tolerances and sampling for the closure test.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ToleranceConfig {
    pub speed_tolerance: f64,
    /// Relative to the curve extent (conditions i and ii) or the largest
    /// radius (condition iii).
    pub closure_tolerance: f64,
    /// Absolute tolerance on `‖T(a⁺) + T(b⁻)‖`.
    pub tangent_tolerance: f64,
    pub eps_base: f64,
    pub eps_count: usize,
    pub exponent_band: (f64, f64),
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            speed_tolerance: 1e-9,
            closure_tolerance: 1e-9,
            tangent_tolerance: 1e-6,
            eps_base: 0.1,
            eps_count: 11,
            exponent_band: (0.4, 0.6),
        }
    }
}

impl ToleranceConfig {
    /// `ε_k = 2⁻ᵏ · eps_base`, `k = 0..eps_count`.
    pub fn eps_sequence(&self) -> Vec<f64> {
        let mut e = self.eps_base;
        let mut out = Vec::with_capacity(self.eps_count);
        for _ in 0..self.eps_count {
            out.push(e);
            e *= 0.5;
        }
        out
    }
}

/// Residuals of the four end conditions a tube needs to close up
/// tangentially.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClosureReport {
    /// `‖α(a) − α(b)‖`.
    pub cond_i_residual: f64,
    pub cond_i_pass: bool,
    /// `‖α′(a) + α′(b)‖` on limit samples.
    pub cond_ii_residual: f64,
    /// `‖T(a⁺) + T(b⁻)‖`; meaningful even when the speed vanishes at a cusp.
    pub cond_ii_tangent_residual: f64,
    pub cond_ii_pass: bool,
    /// `|r(a) − r(b)|`.
    pub cond_iii_residual: f64,
    pub cond_iii_pass: bool,
    /// Fitted `p` in `|r(end ± ε) − r(end)| ≈ K εᵖ`; `None` when the
    /// increments vanish identically (a flat radius has no blow-up to fit).
    pub cond_iv_exponent_start: Option<f64>,
    pub cond_iv_exponent_end: Option<f64>,
    /// Sign of the radius slope approaching each end (+1 rising, −1 falling, 0 flat).
    pub cond_iv_slope_sign_start: i8,
    pub cond_iv_slope_sign_end: i8,
    pub cond_iv_pass: bool,
}

impl ClosureReport {
    pub fn all_pass(&self) -> bool {
        self.cond_i_pass && self.cond_ii_pass && self.cond_iii_pass && self.cond_iv_pass
    }

    /// Worse (farther from ½) of the two fitted exponents.
    pub fn cond_iv_exponent(&self) -> Option<f64> {
        match (self.cond_iv_exponent_start, self.cond_iv_exponent_end) {
            (Some(a), Some(b)) => Some(if (a - 0.5).abs() >= (b - 0.5).abs() { a } else { b }),
            _ => None,
        }
    }
}

/// Vector-valued end quantity as a limit: exact when both ends are
/// regular and closed, otherwise second-order Richardson extrapolation of
/// the samples at `a + ε` and `b − ε` for the three smallest ε.
fn end_limit(closed_and_regular: bool, d: &Interval, eps: &[f64], f: impl Fn(f64, f64) -> Vec2) -> Vec2 {
    if closed_and_regular {
        return f(d.min, d.max);
    }
    let n = eps.len();
    let at = |e: f64| f(d.min + e, d.max - e);
    // ε, 2ε, 4ε: the weights cancel the linear and quadratic terms
    (at(eps[n - 1]) * 8.0 - at(eps[n - 2]) * 6.0 + at(eps[n - 3])) / 3.0
}

fn exponent_fit(r: &RadiusFunction, at: f64, dir: f64, eps: &[f64]) -> (Option<f64>, i8) {
    let r0 = r.value_unchecked(at);
    let incs: Vec<f64> = eps.iter().map(|&e| r.value_unchecked(at + dir * e) - r0).collect();
    let sign = {
        let last = incs[incs.len() - 1] * dir;
        if last > 0.0 {
            1
        } else if last < 0.0 {
            -1
        } else {
            0
        }
    };
    if incs.iter().any(|v| *v == 0.0 || !v.is_finite()) {
        return (None, sign);
    }
    let xs: Vec<f64> = eps.iter().map(|&e| ln(e)).collect();
    let ys: Vec<f64> = incs.iter().map(|v| ln(v.abs())).collect();
    (Some(fit_slope(&xs, &ys)), sign)
}

/// Checks that the tube over `curve` with radius `r` closes up at its ends:
/// coincident ends, antipodal tangents, equal radii, and an infinite
/// radius slope (of the same sign) at both ends.
pub fn check_closure_conditions(
    curve: &PlanarCurve,
    r: &RadiusFunction,
    cfg: &ToleranceConfig,
) -> Result<ClosureReport> {
    if !curve.domain.same_as(&r.domain) {
        return Err(Error::DomainMismatch);
    }
    let d = curve.domain;
    let eps = cfg.eps_sequence();
    let scale = curve.extent().max(f64::MIN_POSITIVE);

    let pos = |t: f64| curve.jet_unchecked(t).position;
    let cond_i_residual = (pos(d.min) - pos(d.max)).norm();

    let speed = |t: f64| curve.jet_unchecked(t).velocity.norm();
    let regular_ends = d.is_closed() && speed(d.min) > cfg.speed_tolerance && speed(d.max) > cfg.speed_tolerance;
    let vel = |t: f64| curve.jet_unchecked(t).velocity;
    let tangent = |t: f64| {
        let v = vel(t);
        v / v.norm()
    };
    let cond_ii_residual = end_limit(regular_ends, &d, &eps, |a, b| vel(a) + vel(b)).norm();
    let cond_ii_tangent_residual = end_limit(regular_ends, &d, &eps, |a, b| tangent(a) + tangent(b)).norm();
    let max_speed = (0..=256).map(|i| speed(d.grid(256, i))).fold(0.0, f64::max);

    let cond_iii_residual = (r.value_unchecked(d.min) - r.value_unchecked(d.max)).abs();

    let (p_start, s_start) = exponent_fit(r, d.min, 1.0, &eps);
    let (p_end, s_end) = exponent_fit(r, d.max, -1.0, &eps);
    let (lo, hi) = cfg.exponent_band;
    let in_band = |p: Option<f64>| p.is_some_and(|p| p >= lo && p <= hi);

    Ok(ClosureReport {
        cond_i_residual,
        cond_i_pass: cond_i_residual <= cfg.closure_tolerance * scale,
        cond_ii_residual,
        cond_ii_tangent_residual,
        cond_ii_pass: cond_ii_residual <= cfg.closure_tolerance * max_speed
            && cond_ii_tangent_residual <= cfg.tangent_tolerance,
        cond_iii_residual,
        cond_iii_pass: cond_iii_residual <= cfg.closure_tolerance * r.max_sampled(),
        cond_iv_exponent_start: p_start,
        cond_iv_exponent_end: p_end,
        cond_iv_slope_sign_start: s_start,
        cond_iv_slope_sign_end: s_end,
        cond_iv_pass: in_band(p_start) && in_band(p_end) && s_start == s_end && s_start != 0,
    })
}
