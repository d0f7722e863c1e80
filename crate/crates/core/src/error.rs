use thiserror::Error;

/// Failures shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("polynomial degree {degree} exceeds the supported maximum {max_degree}")]
    Degree { degree: usize, max_degree: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature did not reach tolerance {tolerance:e} within {max_refinements} refinements on [{lo}, {hi}]")]
    Quadrature {
        tolerance: f64,
        max_refinements: usize,
        lo: f64,
        hi: f64,
    },

    #[error("value {value} lies outside the mapping range ({lo}, {hi})")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("strict-mode constraint violated: {relation}")]
    Constraint { relation: String },

    #[error("mass vanishes at z = {z}")]
    Singular { z: f64 },

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParameters(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
