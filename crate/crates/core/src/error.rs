use thiserror::Error;

/// Errors raised by the state, channel and correlation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter fell outside its admissible range.
    #[error("{name} = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A 4x4 matrix failed one of the density-matrix checks.
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(crate::qstate::DensityReport),

    /// A Pauli expectation came back with a non-negligible imaginary part.
    #[error("tr(rho sigma_{i} x sigma_{j}) has imaginary residual {residual:e}")]
    ImaginaryResidual { i: usize, j: usize, residual: f64 },

    /// A sweep row disagreed with the analytic form of the damped correlation matrix.
    #[error("consistency check failed at p = {p}: {detail}")]
    Consistency { p: f64, detail: String },

    #[error("invalid sweep: {0}")]
    InvalidSweep(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            range: "[0, 1]",
        })
    }
}
