//! Kernel for tube-shaped and closed-form immersions of the Klein bottle.
#![no_std]
// oracle values in tests keep every digit the oracle printed
#![cfg_attr(test, allow(clippy::excessive_precision, clippy::approx_constant))]

extern crate alloc;

pub mod curve;
pub mod domain;
pub mod error;
pub mod math;
pub mod mesh;
pub mod surface;
pub mod tube;
pub mod verify;
