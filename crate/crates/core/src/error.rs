use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid mode {0}")]
    InvalidMode(String),

    #[error("transverse point ({x}, {y}) lies outside the {a} x {b} cross-section")]
    PointOutside { x: f64, y: f64, a: f64, b: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not reach tolerance {requested:e}: estimate {estimate:e} with error {achieved:e}")]
    Quadrature {
        estimate: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("series did not converge within index {max_index}: partial sum {partial:e}, tail bound {bound:e}")]
    SeriesNotConverged { partial: f64, bound: f64, max_index: usize },

    #[error(
        "mode count {needed} exceeds the cap of {cap} modes; use the small-separation \
         closed forms (asymptotic module) for z/a below ~3e-3"
    )]
    ModeCapExceeded { needed: usize, cap: usize },

    #[error("tight-confinement ratio min(lambda/a, lambda/b) = {ratio:.3} is below the hard limit {limit}")]
    NotTightlyConfined { ratio: f64, limit: f64 },

    #[error("species file line {line}: {message}")]
    SpeciesParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
