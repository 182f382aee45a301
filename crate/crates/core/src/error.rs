//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the numerical routines.
///
/// Variants are grouped by cause so that the command-line front end can map
/// them onto exit codes: [`Error::is_config`] errors are caller mistakes
/// (bad parameters, violated preconditions), everything else is a numerical
/// failure.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An argument lies outside the domain of a special function.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested quantity is only defined in an asymptotic regime.
    #[error("regime error: {0}")]
    Regime(String),
    /// The grid is too coarse for the requested discretisation.
    #[error("resolution error: {0}")]
    Resolution(String),
    /// A time step could not be taken (non-finite state).
    #[error("time stepping failed: {0}")]
    Cfl(String),
    /// The maximiser of the primitive is not unique on the grid.
    #[error("tie in argmax: {0}")]
    Tie(String),
    /// A quadrature could not be carried out.
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    /// An eigen-solver or inverse iteration did not converge.
    #[error("eigen-solver failure: {0}")]
    Eigen(String),
    /// Too many grid samples are numerically zero to count sign changes.
    #[error("plateau ambiguity: {0}")]
    Plateau(String),
    /// An adjoint eigenfunction could not be normalised against its partner.
    #[error("normalisation failure: {0}")]
    Normalization(String),
    /// The Newton iteration left its basin or hit the iteration cap.
    #[error("Newton iteration diverged: {0}")]
    Divergence(String),
    /// The Jacobian of the projection conditions is numerically singular.
    #[error("singular Jacobian: {0}")]
    SingularJacobian(String),
    /// The data are too far from the family for the projection fit.
    #[error("outside fitting neighbourhood: {0}")]
    OutsideNeighbourhood(String),
    /// A decay fit was requested on too few or non-positive samples.
    #[error("degenerate decay window: {0}")]
    DegenerateWindow(String),
}

impl Error {
    /// `true` when the error reflects invalid input rather than a numerical
    /// breakdown.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Domain(_) | Error::Regime(_)
        )
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
