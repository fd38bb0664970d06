use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The operation needs a crawling (evanescent) mode, got a running one.
    #[error("kx = {kx} is not evanescent (threshold {threshold})")]
    NotEvanescent { kx: f64, threshold: f64 },

    /// K0 = 0: the absorbed mode is undetermined at fixed input frequency.
    #[error("degenerate kinematics: {0}")]
    Degenerate(String),

    #[error(
        "quadrature did not converge: achieved error {achieved:e}, requested {requested:e} after {evaluations} evaluations"
    )]
    Quadrature {
        achieved: f64,
        requested: f64,
        evaluations: usize,
    },

    #[error("unknown quantity kind `{0}`")]
    UnknownKind(String),

    #[error("invalid aperture profile: {0}")]
    Profile(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
