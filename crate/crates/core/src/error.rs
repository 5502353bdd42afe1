use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input to a Hermitian-only routine deviates from its adjoint.
    #[error("matrix is not Hermitian (max |M - M^†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    /// A parameter lies outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested estimator is undefined at this entanglement parameter.
    #[error("singular configuration: {0}")]
    Singular(String),

    /// An eigenstate condition was evaluated on a mixed state.
    #[error("state is mixed (purity {purity}); a pure state is required")]
    MixedState { purity: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
