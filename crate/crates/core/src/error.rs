use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },
    #[error("{what}: target {target} outside attained range [{lo}, {hi}]")]
    Range {
        what: &'static str,
        target: f64,
        lo: f64,
        hi: f64,
    },
    #[error("{what}: inconclusive ({detail})")]
    Inconclusive { what: &'static str, detail: String },
    #[error("mode {n} has infinite L2 weight on a cusp")]
    InfiniteWeight { n: i32 },
    #[error("no admissible modes")]
    EmptyModeSet,
    #[error("cusp domain has no core geodesic")]
    NoCoreGeodesic,
    #[error("invalid curvature query: {0}")]
    InvalidQuery(String),
    #[error("{what} is only stated for systole <= 2*eps2 (got {systole})")]
    OutOfHypothesis { what: &'static str, systole: f64 },
    #[error("zero norm")]
    ZeroNorm,
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, domain: impl Into<String>) -> Error {
    Error::Domain {
        what,
        value,
        domain: domain.into(),
    }
}
