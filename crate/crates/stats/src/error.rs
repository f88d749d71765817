use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge on [{lower}, {upper}]: error estimate {estimate:e} after {subdivisions} subdivisions")]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
        subdivisions: usize,
    },
}
