use thiserror::Error;

/// Failures raised by the spectrum and cycle layers.
///
/// Variants carry the parameter value at which the failure was detected so
/// sweep drivers can report it without re-running the point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(&'static str),

    #[error("boson cutoff {0} exceeds platform limits")]
    Sizing(usize),

    #[error("spectrum not converged below hard cap {hard_cap} (last change {last_change:e})")]
    NotConverged { hard_cap: usize, last_change: f64 },

    #[error("levels degenerate at {at} (gap {gap:e})")]
    Degenerate { at: f64, gap: f64 },

    #[error("level derivative undefined at a degeneracy (gap {gap:e}, partner slopes {slopes:?})")]
    DerivativeUndefined { gap: f64, slopes: (f64, f64) },

    #[error("no root bracketed from {from}: {reason}")]
    Range { from: f64, reason: &'static str },

    #[error("root not resolved: residual {residual:e} at {at}")]
    RootResidual { at: f64, residual: f64 },

    #[error("integration did not converge: estimate {estimate}, error bound {error_bound:e}")]
    Integration { estimate: f64, error_bound: f64 },

    #[error("integrand near-singular at {at} (gap {gap:e})")]
    Singular { at: f64, gap: f64 },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("invalid cycle specification: {0}")]
    InvalidSpec(&'static str),
}

impl Error {
    /// Short stable tag used in tabular outputs.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::InvalidPolicy(_) => "invalid-policy",
            Error::Sizing(_) => "sizing",
            Error::NotConverged { .. } => "not-converged",
            Error::Degenerate { .. } => "degenerate",
            Error::DerivativeUndefined { .. } => "derivative-undefined",
            Error::Range { .. } => "range",
            Error::RootResidual { .. } => "root-residual",
            Error::Integration { .. } => "integration",
            Error::Singular { .. } => "singular",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidSpec(_) => "invalid-spec",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
