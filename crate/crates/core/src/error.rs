use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ambient space: {0}")]
    InvalidSpace(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("screw motion group has no geodesic orbit for this pitch")]
    NoGeodesicOrbit,
    #[error("not defined for this ambient space (requires kappa > 0)")]
    NotDefined,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("pitch does not close the fibers: {0}")]
    NotClosing(String),
    #[error("point lies outside the supercritical moduli region")]
    OutOfRegion,
    #[error("energy J > 0 lies in the unduloid/cylinder region, out of scope")]
    OutOfScope,
    #[error("no tube found: {0}")]
    NoTube(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("ODE integration failed: {0}")]
    Integration(String),
    #[error("geometry assumption violated: {0}")]
    Geometry(String),
    #[error("i/o error on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Numeric failures (as opposed to domain/precondition violations).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Quadrature(_) | Error::Integration(_) | Error::Geometry(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
