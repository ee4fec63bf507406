use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid metric parameters (alpha={alpha}, beta={beta}, gamma={gamma}, mu={mu}, nu={nu}): {reason}")]
    InvalidParams {
        alpha: f64,
        beta: f64,
        gamma: f64,
        mu: f64,
        nu: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("structure constants are not unimodular (max |tr ad| = {0:e})")]
    NotUnimodular(f64),

    #[error("tau = mu^2 + nu^2 is zero; the eigenvalues of the cross block coincide with beta and gamma")]
    DegenerateTau,

    #[error("isotropy and complement indices do not partition 0..{0}")]
    BadSplit(usize),

    #[error("invalid integrator options: {0}")]
    InvalidOptions(String),

    #[error("unknown case '{0}' (expected so3r3 or sl2c)")]
    UnknownCase(String),
}
