use crate::error::{Error, Result};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// A parameter interval whose ends may be open.
///
/// Open ends are points where a formula has a continuous extension but
/// the construction breaks down (a cusp, or a point at infinity reached
/// only by truncation).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Interval {
    pub min: f64,
    pub max: f64,
    pub min_open: bool,
    pub max_open: bool,
}

impl Interval {
    pub const fn closed(min: f64, max: f64) -> Self {
        Self { min, max, min_open: false, max_open: false }
    }

    pub const fn open(min: f64, max: f64) -> Self {
        Self { min, max, min_open: true, max_open: true }
    }

    pub fn len(&self) -> f64 {
        self.max - self.min
    }

    pub fn is_closed(&self) -> bool {
        !self.min_open && !self.max_open
    }

    pub fn contains(&self, t: f64) -> bool {
        let lo = if self.min_open { t > self.min } else { t >= self.min };
        let hi = if self.max_open { t < self.max } else { t <= self.max };
        lo && hi
    }

    pub fn contains_closure(&self, t: f64) -> bool {
        t >= self.min && t <= self.max
    }

    pub(crate) fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(self.out_of_domain(t))
        }
    }

    pub(crate) fn check_closure(&self, t: f64) -> Result<()> {
        if self.contains_closure(t) {
            Ok(())
        } else {
            Err(self.out_of_domain(t))
        }
    }

    pub(crate) fn out_of_domain(&self, t: f64) -> Error {
        Error::OutOfDomain { t, min: self.min, max: self.max }
    }

    /// Pulls open ends inward by `margin · len`; closed ends stay put.
    pub fn clipped(&self, margin: f64) -> Interval {
        let m = margin * self.len();
        Interval {
            min: if self.min_open { self.min + m } else { self.min },
            max: if self.max_open { self.max - m } else { self.max },
            min_open: false,
            max_open: false,
        }
    }

    /// `n + 1` evenly spaced samples from `min` to `max`, endpoints exact.
    pub fn grid(&self, n: usize, i: usize) -> f64 {
        if i == n {
            self.max
        } else {
            self.min + self.len() * (i as f64 / n as f64)
        }
    }

    pub(crate) fn same_as(&self, o: &Interval) -> bool {
        let tol = 1e-12 * (1.0 + self.len().abs());
        (self.min - o.min).abs() <= tol
            && (self.max - o.max).abs() <= tol
            && self.min_open == o.min_open
            && self.max_open == o.max_open
    }
}
