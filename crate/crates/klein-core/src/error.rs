use thiserror::Error;

/// Everything that can go wrong while building or evaluating a surface.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("curve parameter `{0}` must be nonzero")]
    ZeroParameter(&'static str),
    #[error("radius base must be positive, got {0}")]
    NonpositiveRadiusBase(f64),
    #[error("radius is not positive at t = {t} (r = {r})")]
    RadiusNotPositive { t: f64, r: f64 },
    #[error("parameter `{name}` = {value} is out of range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("parameter {t} lies outside the domain [{min}, {max}]")]
    OutOfDomain { t: f64, min: f64, max: f64 },
    #[error("radius derivative is unbounded at t = {0}")]
    DerivativeUnbounded(f64),
    #[error("velocity vanishes at t = {t} (speed {speed})")]
    DegenerateVelocity { t: f64, speed: f64 },
    #[error("curve and radius domains differ")]
    DomainMismatch,
    #[error("directrix velocity vanishes inside the domain near t = {0}")]
    DegenerateDirectrix(f64),
    #[error("end tangents are not antipodal (residual {0})")]
    NotAntipodalTangents(f64),
    #[error("finite-difference step {0} is too large for the domain")]
    StepTooLarge(f64),
    #[error("surface has no identification map")]
    NoIdentification,
    #[error("surface normal is degenerate at ({u}, {v})")]
    DegenerateNormal { u: f64, v: f64 },
    #[error("seam vertices {a} and {b} are {distance} apart")]
    InconsistentSeam { a: usize, b: usize, distance: f64 },
    #[error("mesh is not watertight")]
    NotWatertight,
    #[error("grid resolution {nu}x{nv} is below the minimum {min}")]
    GridTooCoarse { nu: usize, nv: usize, min: usize },
    #[error("surface has no analytic partials")]
    NoAnalyticPartials,
    #[error("triangle index out of bounds")]
    IndexOutOfBounds,
    #[error("mesh is not an unwelded grid of this surface, or the seam map misses grid nodes")]
    NotAGrid,
}

pub type Result<T> = core::result::Result<T, Error>;
