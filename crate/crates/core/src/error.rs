use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested computation is larger than the configured limit.
    #[error("budget exceeded: {what} is {requested}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// A mathematical identity that must hold did not.
    #[error("identity `{identity}` failed: {detail}")]
    IdentityViolation {
        identity: &'static str,
        detail: String,
    },

    #[error("odd part {0} of the tiling count is not a perfect square")]
    NotPerfectSquare(String),

    #[error("value has negative 2-adic valuation {0}")]
    NegativeValuation(i64),

    #[error("{0} is not a square of an odd 2-adic unit (needs residue 1 mod 8)")]
    NotASquareMod8(String),

    #[error("precision {got} is too small, need at least {need}")]
    InsufficientPrecision { got: u32, need: u32 },

    #[error("power series has zero constant term")]
    ZeroConstantTerm,

    #[error("samples are inconsistent with degree bound {0}")]
    InconsistentSamples(usize),

    #[error("need {need} samples of parity {parity} for degree bound {degree}, got {got}")]
    Underdetermined {
        parity: &'static str,
        degree: usize,
        need: usize,
        got: usize,
    },

    #[error("no quasi-polynomial fit for U_{k} up to degree {max_degree}")]
    DegreeRunaway { k: usize, max_degree: usize },
}

impl Error {
    pub(crate) fn identity(identity: &'static str, detail: impl Into<String>) -> Self {
        Error::IdentityViolation {
            identity,
            detail: detail.into(),
        }
    }
}
