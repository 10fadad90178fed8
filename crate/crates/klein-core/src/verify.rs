//! Numerical checks on catalog surfaces: regularity of the first
//! fundamental form, seam gluing, tube end closure and tangency across
//! seams.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::curve::{check_closure_conditions, ClosureReport, ToleranceConfig};
use crate::error::{Error, Result};
use crate::math::{angle_between, cos, fit_slope, ln, sin, sqrt, Vec3, PI, TAU};
use crate::surface::{ParametricSurface, SeamClosure, DEFAULT_FD_STEP};
use crate::tube::TubeSurface;

#[cfg(feature = "serde")]
use serde::Serialize;

/// `E`, `F`, `G` and `EG − F²` at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct FundamentalFormSample {
    pub u: f64,
    pub v: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub det: f64,
}

impl FundamentalFormSample {
    pub fn from_partials(u: f64, v: f64, du: Vec3, dv: Vec3) -> Self {
        let (e, f, g) = (du.dot(du), du.dot(dv), dv.dot(dv));
        Self { u, v, e, f, g, det: e * g - f * f }
    }
}

/// First fundamental form from central-difference partials with step `h`.
pub fn first_fundamental_form(s: &ParametricSurface, u: f64, v: f64, h: f64) -> Result<FundamentalFormSample> {
    let p = s.partials_fd(u, v, h)?;
    Ok(FundamentalFormSample::from_partials(u, v, p.du, p.dv))
}

/// First fundamental form from the surface's analytic partials.
pub fn first_fundamental_form_analytic(s: &ParametricSurface, u: f64, v: f64) -> Result<FundamentalFormSample> {
    let p = s.partials(u, v, DEFAULT_FD_STEP)?;
    Ok(FundamentalFormSample::from_partials(u, v, p.du, p.dv))
}

/// Observed order of central differences against the analytic partials:
/// `log₂(e(h) / e(h/2))` with `e` the larger of the `u` and `v` errors.
pub fn fd_convergence_order(s: &ParametricSurface, u: f64, v: f64, h: f64) -> Result<f64> {
    let exact = s.partials(u, v, h)?;
    if !exact.analytic_partials {
        return Err(Error::NoAnalyticPartials);
    }
    let err = |h: f64| -> Result<f64> {
        let fd = s.partials_fd(u, v, h)?;
        Ok((fd.du - exact.du).norm().max((fd.dv - exact.dv).norm()))
    };
    Ok(ln(err(h)? / err(h / 2.0)?) / ln(2.0))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct RegularityScan {
    pub min_det: f64,
    pub argmin: (f64, f64),
    pub median_det: f64,
    pub samples: usize,
}

/// Minimum of `EG − F²` over an `nu × nv` grid of the domain with both
/// `u`-ends pulled in by `margin · len`.
///
/// Points where the partials cannot be formed count as `det = 0`.
pub fn regularity_scan(s: &ParametricSurface, nu: usize, nv: usize, margin: f64) -> Result<RegularityScan> {
    if nu < 8 || nv < 8 {
        return Err(Error::GridTooCoarse { nu, nv, min: 8 });
    }
    let du = s.domain_u;
    let (lo, hi) = (du.min + margin * du.len(), du.max - margin * du.len());
    let mut dets = Vec::with_capacity((nu + 1) * nv);
    let mut min_det = f64::INFINITY;
    let mut argmin = (lo, 0.0);
    for i in 0..=nu {
        let u = if i == nu { hi } else { lo + (hi - lo) * (i as f64 / nu as f64) };
        for j in 0..nv {
            let v = s.domain_v.min + s.domain_v.len() * (j as f64 / nv as f64);
            let det = match s.partials(u, v, DEFAULT_FD_STEP) {
                Ok(p) => {
                    let d = FundamentalFormSample::from_partials(u, v, p.du, p.dv).det;
                    if d.is_finite() {
                        d
                    } else {
                        0.0
                    }
                }
                Err(_) => 0.0,
            };
            if det < min_det {
                min_det = det;
                argmin = (u, v);
            }
            dets.push(det);
        }
    }
    dets.sort_unstable_by(f64::total_cmp);
    let median_det = dets[dets.len() / 2];
    Ok(RegularityScan { min_det, argmin, median_det, samples: dets.len() })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct LimitSample {
    pub eps: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct GluingReport {
    pub mode: SeamClosure,
    pub max_residual: f64,
    /// Residual sequence for open seams, coarse to fine.
    pub limit: Vec<LimitSample>,
    /// Fitted rate `p` in `residual ≈ K εᵖ` for open seams.
    pub limit_rate: Option<f64>,
    pub pass: bool,
    /// `false` when the residual is informational (truncated seams).
    pub enforced: bool,
}

fn seam_residual_at(s: &ParametricSurface, u0: f64, u1: f64, n: usize) -> Result<f64> {
    let id = s.identification.ok_or(Error::NoIdentification)?;
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let v = TAU * j as f64 / n as f64;
        let a = s.eval_raw(u0, v)?;
        let b = s.eval_raw(u1, id.map_v(v))?;
        worst = worst.max(a.distance(b));
    }
    Ok(worst)
}

/// Gluing residual `max_v ‖f(u₀ + U, σv + τ) − f(u₀, v)‖` at the domain
/// seam, as a limit over `ε` when the seam edges are open.
pub fn gluing_residual(s: &ParametricSurface, n_samples: usize, cfg: &VerifyConfig) -> Result<GluingReport> {
    if s.identification.is_none() {
        return Err(Error::NoIdentification);
    }
    let d = s.domain_u;
    match s.seam {
        SeamClosure::Exact | SeamClosure::Truncated => {
            let max_residual = seam_residual_at(s, d.min, d.max, n_samples)?;
            let enforced = s.seam == SeamClosure::Exact;
            Ok(GluingReport {
                mode: s.seam,
                max_residual,
                limit: Vec::new(),
                limit_rate: None,
                pass: max_residual < cfg.gluing_tolerance,
                enforced,
            })
        }
        SeamClosure::Limit => {
            let mut limit = Vec::new();
            for eps in cfg.closure.eps_sequence() {
                let residual = seam_residual_at(s, d.min + eps, d.max - eps, n_samples)?;
                limit.push(LimitSample { eps, residual });
            }
            let tail = &limit[limit.len() / 2..];
            let monotone = tail.windows(2).all(|w| w[1].residual < w[0].residual);
            let rate = if limit.iter().all(|l| l.residual > 0.0) {
                let xs: Vec<f64> = limit.iter().map(|l| ln(l.eps)).collect();
                let ys: Vec<f64> = limit.iter().map(|l| ln(l.residual)).collect();
                Some(fit_slope(&xs, &ys))
            } else {
                None
            };
            let converged = limit.iter().all(|l| l.residual == 0.0);
            let pass = converged || (monotone && rate.is_some_and(|p| p >= cfg.limit_rate_min));
            Ok(GluingReport {
                mode: s.seam,
                max_residual: limit[limit.len() - 1].residual,
                limit,
                limit_rate: rate,
                pass,
                enforced: true,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct SeamTangency {
    pub seam_u: f64,
    pub max_angle: f64,
    /// `(u, v)` on the seam where the worst angle occurs.
    pub location: (f64, f64),
}

fn side_normal(s: &ParametricSurface, u_seam: f64, dir: f64, v: f64, h: f64) -> Result<Vec3> {
    let u = u_seam + dir * h;
    let (du, dv) = if s.has_analytic_partials() {
        let p = s.partials(u, v, DEFAULT_FD_STEP)?;
        (p.du, p.dv)
    } else {
        // one-sided difference towards the seam, central in v
        let a = s.eval(u_seam, v)?;
        let b = s.eval(u, v)?;
        let du = (b - a) * (dir / h);
        let dv =
            (s.eval(u_seam, v + DEFAULT_FD_STEP)? - s.eval(u_seam, v - DEFAULT_FD_STEP)?) / (2.0 * DEFAULT_FD_STEP);
        (du, dv)
    };
    let n = du.cross(dv);
    if n.norm() <= 1e-12 * du.norm() * dv.norm() || !n.is_finite() {
        return Err(Error::DegenerateNormal { u, v });
    }
    Ok(n / n.norm())
}

/// Largest angle between the unit normals on either side of the line
/// `u = seam_u`.
///
/// An interior seam compares `u − h` against `u + h`. A domain-boundary
/// seam compares the inner side of each end after mapping `v` through
/// the identification; normals are compared up to sign when that map
/// reverses orientation. `h` is the one-sided offset from the seam.
pub fn seam_tangency(s: &ParametricSurface, seam_u: f64, n_samples: usize, h: f64) -> Result<SeamTangency> {
    let d = s.domain_u;
    let at_min = seam_u == d.min;
    let at_max = seam_u == d.max;
    if !(h > 0.0 && h < d.len() / 4.0) {
        return Err(Error::StepTooLarge(h));
    }
    let id = if at_min || at_max {
        Some(s.identification.ok_or(Error::NoIdentification)?)
    } else {
        d.check(seam_u)?;
        None
    };
    let mut worst = SeamTangency { seam_u, max_angle: 0.0, location: (seam_u, 0.0) };
    for j in 0..n_samples {
        let v = TAU * j as f64 / n_samples as f64;
        let (na, nb) = match id {
            None => (side_normal(s, seam_u, -1.0, v, h)?, side_normal(s, seam_u, 1.0, v, h)?),
            Some(id) => {
                let (here, there, dir) = if at_min { (d.min, d.max, 1.0) } else { (d.max, d.min, -1.0) };
                (side_normal(s, here, dir, v, h)?, side_normal(s, there, -dir, id.map_v(v), h)?)
            }
        };
        let mut angle = angle_between(na, nb);
        if id.is_some_and(|id| id.reverses_orientation()) {
            angle = angle.min(PI - angle);
        }
        if angle > worst.max_angle {
            worst.max_angle = angle;
            worst.location = (seam_u, v);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct ClosureCheck {
    pub report: ClosureReport,
    /// Distance from each start circle to the matching end circle.
    pub end_circles: Vec<LimitSample>,
    pub pass: bool,
    pub enforced: bool,
}

/// Distance from `p` to the cross-section circle of `tube` at `t`.
fn distance_to_section(tube: &TubeSurface, t: f64, p: Vec3) -> Result<f64> {
    let center = tube.directrix.position(t)?.lift();
    let axis = tube.directrix.unit_tangent(t, tube.speed_tolerance)?.lift();
    let r = tube.radius.eval(t)?;
    let w = p - center;
    let along = w.dot(axis);
    let perp = (w - axis * along).norm();
    Ok(sqrt(along * along + (perp - r) * (perp - r)))
}

/// End-closure conditions of a tube surface plus end-circle distances
/// `max_θ min_θ′ ‖start(θ) − end(θ′)‖` for each `ε` (`ε = 0` is only
/// sampled at closed ends).
pub fn closure_limit_check(s: &ParametricSurface, eps_sequence: &[f64], cfg: &ToleranceConfig) -> Result<ClosureCheck> {
    let tube = s.tube().ok_or(Error::NoIdentification)?;
    let report = check_closure_conditions(&tube.directrix, &tube.radius, cfg)?;
    let d = tube.domain_t;
    let mut end_circles = Vec::new();
    for &eps in eps_sequence {
        let (a, b) = (d.min + eps, d.max - eps);
        if !(d.contains(a) && d.contains(b)) {
            continue;
        }
        let mut worst: f64 = 0.0;
        for j in 0..64 {
            let th = TAU * j as f64 / 64.0;
            let p = tube.point(a, th)?;
            worst = worst.max(distance_to_section(tube, b, p)?);
        }
        end_circles.push(LimitSample { eps, residual: worst });
    }
    let pass = report.all_pass();
    Ok(ClosureCheck { report, end_circles, pass, enforced: s.seam != SeamClosure::Truncated })
}

/// Tolerances and sampling for [`full_verify`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct VerifyConfig {
    pub nu: usize,
    pub nv: usize,
    pub margin: f64,
    /// Regularity passes when `min det > regularity_relative · median det`.
    pub regularity_relative: f64,
    pub gluing_samples: usize,
    pub gluing_tolerance: f64,
    pub limit_rate_min: f64,
    pub seam_samples: usize,
    pub seam_tolerance: f64,
    /// One-sided seam offset as a fraction of the `u`-domain length.
    pub seam_offset: f64,
    pub closure: ToleranceConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            nu: 256,
            nv: 64,
            margin: 1e-3,
            regularity_relative: 1e-6,
            gluing_samples: 64,
            gluing_tolerance: 1e-9,
            limit_rate_min: 0.25,
            seam_samples: 64,
            seam_tolerance: 1e-3,
            seam_offset: 1e-12,
            closure: ToleranceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct RegularityReport {
    pub min_det: f64,
    pub argmin: (f64, f64),
    pub median_det: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct SeamTangencyReport {
    pub max_angle_radians: f64,
    pub location: (f64, f64),
    pub seams: Vec<SeamTangency>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct VerificationReport {
    pub surface_name: String,
    pub regularity: Option<RegularityReport>,
    pub gluing: Option<GluingReport>,
    pub closure: Option<ClosureCheck>,
    pub seam_tangency: Option<SeamTangencyReport>,
    pub self_intersection_expected: bool,
    pub errors: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    fn overall(&self) -> bool {
        self.errors.is_empty()
            && self.regularity.as_ref().is_some_and(|r| r.pass)
            && self.gluing.as_ref().is_none_or(|g| g.pass || !g.enforced)
            && self.closure.as_ref().is_none_or(|c| c.pass || !c.enforced)
            && self.seam_tangency.as_ref().is_none_or(|t| t.pass)
    }
}

/// Runs every check that applies to `s`.
pub fn full_verify(s: &ParametricSurface, cfg: &VerifyConfig) -> VerificationReport {
    let mut errors = Vec::new();

    let regularity = match regularity_scan(s, cfg.nu, cfg.nv, cfg.margin) {
        Ok(scan) => {
            let threshold = cfg.regularity_relative * scan.median_det;
            Some(RegularityReport {
                min_det: scan.min_det,
                argmin: scan.argmin,
                median_det: scan.median_det,
                threshold,
                pass: scan.min_det > threshold && scan.min_det > 0.0,
            })
        }
        Err(e) => {
            errors.push(format!("regularity: {e}"));
            None
        }
    };

    let gluing = s.identification.and_then(|_| match gluing_residual(s, cfg.gluing_samples, cfg) {
        Ok(g) => Some(g),
        Err(e) => {
            errors.push(format!("gluing: {e}"));
            None
        }
    });

    let closure = s.tube().and_then(|_| match closure_limit_check(s, &cfg.closure.eps_sequence(), &cfg.closure) {
        Ok(c) => Some(c),
        Err(e) => {
            errors.push(format!("closure: {e}"));
            None
        }
    });

    let mut seams: Vec<f64> = s.interior_seams.clone();
    if s.identification.is_some() && s.seam == SeamClosure::Exact {
        seams.push(s.domain_u.min);
    }
    let h = cfg.seam_offset * s.domain_u.len();
    let mut measured = Vec::new();
    for u in seams {
        match seam_tangency(s, u, cfg.seam_samples, h) {
            Ok(t) => measured.push(t),
            Err(e) => errors.push(format!("seam tangency at u = {u}: {e}")),
        }
    }
    let seam_tangency = if measured.is_empty() {
        None
    } else {
        let worst = measured.iter().fold(&measured[0], |w, m| if m.max_angle > w.max_angle { m } else { w });
        Some(SeamTangencyReport {
            max_angle_radians: worst.max_angle,
            location: worst.location,
            pass: measured.iter().all(|m| m.max_angle < cfg.seam_tolerance),
            seams: measured.clone(),
        })
    };

    let mut report = VerificationReport {
        surface_name: String::from(s.name),
        regularity,
        gluing,
        closure,
        seam_tangency,
        // no closed surface realizing the Klein bottle embeds in ℝ³
        self_intersection_expected: s.identification.is_some_and(|id| id.reverses_orientation()),
        errors,
        pass: false,
    };
    report.pass = report.overall();
    report
}

/// A rank-one control map, singular everywhere.
pub fn singular_test_map(u: f64, _v: f64) -> Vec3 {
    Vec3::new(u, u, 0.0)
}

/// Unit sphere, used as a smooth control in tests and examples.
pub fn unit_sphere(u: f64, v: f64) -> Vec3 {
    Vec3::new(sin(u) * cos(v), sin(u) * sin(v), cos(u))
}
