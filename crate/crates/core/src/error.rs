use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("threshold {p} lies outside the sampled window (p_max = {p_max})")]
    OutOfCoupling { p: f64, p_max: f64 },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is acyclic, its core is empty")]
    EmptyCore,
    #[error("point is not safe to cut: {0}")]
    UnsafePoint(String),
    #[error("graph does not have integer lengths: {0}")]
    NonIntegerStructure(String),
    #[error("input too large: {0}")]
    SizeCap(String),
    #[error("kernel multigraph is not 3-regular")]
    NotThreeRegular,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
