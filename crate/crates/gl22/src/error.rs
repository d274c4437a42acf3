use thiserror::Error;

/// Everything that can go wrong when building or checking objects.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("operator is not homogeneous in the grading")]
    Inhomogeneous,

    #[error("leg indices ({i}, {j}) invalid for {n} legs")]
    LegIndex { i: usize, j: usize, n: usize },

    #[error("parameter too close to special point {point} (distance {distance:.3e})")]
    Pole { point: String, distance: f64 },

    #[error("spectral parameters collide: {0}")]
    Collision(String),

    #[error("degenerate global parameter: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("generator {0} has no evaluation-representation image")]
    NotRepresented(String),

    #[error("contour radius {radius} conflicts with a pole at modulus {pole}")]
    Contour { radius: f64, pole: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
