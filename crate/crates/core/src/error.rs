use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the supported range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("argument {name} = {value} violates {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("integrand returned a non-finite value at t = {abscissa}")]
    NonFinite { abscissa: f64 },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("exp-decay truncation needs a tail bound on the integrand")]
    MissingTailBound,

    #[error("tolerance {tol:e} needs {needed} terms, budget is {budget}")]
    TermBudget {
        tol: f64,
        needed: u64,
        budget: u64,
        partial: Box<crate::series::SeriesResult>,
    },
}
