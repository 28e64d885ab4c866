use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// A single violated invariant, addressed by its dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration:\n{}", format_diagnostics(.0))]
    InvalidConfig(Vec<Diagnostic>),

    #[error("ODE step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("ODE integration did not reach t = {target} within {steps} steps")]
    TooManySteps { target: f64, steps: usize },

    #[error("quadrature tolerance {tol:e} not achieved: worst panel [{lo}, {hi}] error {err:e}")]
    Quadrature { tol: f64, lo: f64, hi: f64, err: f64 },

    #[error("grid too fine for history quadrature: {points} points (limit {limit})")]
    GridTooFine { points: usize, limit: usize },

    #[error("trajectories do not share a time grid: {0}")]
    GridMismatch(String),

    #[error("alpha bracket [{alpha_lo}, {alpha_hi}] is empty; need 0 <= lo < hi")]
    DegenerateBracket { alpha_lo: f64, alpha_hi: f64 },

    #[error(
        "no sign change of t_c(driven) - t_c(undriven) on [{alpha_lo}, {alpha_hi}]: h(lo) = {h_lo}, h(hi) = {h_hi}"
    )]
    Bracket {
        alpha_lo: f64,
        alpha_hi: f64,
        h_lo: f64,
        h_hi: f64,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("coherence time absent for both branches at alpha = {alpha}; increase t_max (currently {t_max})")]
    GridExtension { alpha: f64, t_max: f64 },
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::InvalidConfig(_) | Error::Io { .. } => 2,
            Error::Bracket { .. } | Error::DegenerateBracket { .. } => 4,
            Error::StepUnderflow { .. }
            | Error::TooManySteps { .. }
            | Error::Quadrature { .. }
            | Error::GridTooFine { .. }
            | Error::GridMismatch(_)
            | Error::GridExtension { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
