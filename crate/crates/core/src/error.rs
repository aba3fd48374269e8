use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("bodies {first} and {second} coincide (distance {distance:e})")]
    Collision {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("kernel denominator vanishes at vertex {vertex}")]
    Singular { vertex: usize },

    #[error("twist angle {theta} is neither 0 nor pi/{n}")]
    InadmissibleTwist { theta: f64, n: usize },

    #[error("reduced conditions need a spatial configuration (h > 0), got h = {h}")]
    NotSpatial { h: f64 },

    #[error("imaginary part of {what} is {im:e}, expected zero")]
    NonReal { what: &'static str, im: f64 },

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("step rejected at t = {t}: energy drift {drift:e} with dt = {dt:e} below floor")]
    StepRejected { t: f64, dt: f64, drift: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
