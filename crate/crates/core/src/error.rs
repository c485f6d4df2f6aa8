use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("context mismatch: {0}")]
    Context(String),

    #[error("invalid: {0}")]
    Validation(#[from] ValidationError),

    #[error("{what} requires {required} items but the cap is {cap}")]
    Resource {
        what: &'static str,
        required: u128,
        cap: u64,
    },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

/// The block identities that characterise membership of `[[A, C], [D, B]]` in
/// the similitude set `N^t Δ N = l Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockIdentity {
    /// `A^t B - D^t C = l Id`
    ScalarDiagonal,
    /// `A^t D` symmetric
    AtdSymmetric,
    /// `C^t B` symmetric
    CtbSymmetric,
}

impl std::fmt::Display for BlockIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BlockIdentity::ScalarDiagonal => "A^tB-D^tC=l*Id",
            BlockIdentity::AtdSymmetric => "A^tD symmetric",
            BlockIdentity::CtbSymmetric => "C^tB symmetric",
        })
    }
}

/// Why a parameter set does not describe an endomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("parameter shape: {0}")]
    Shape(String),

    #[error("not in symp^scalar (failing: {})", join(.failing))]
    NotSympScalar { failing: Vec<BlockIdentity> },

    #[error("first-row constraint a_{{1j}}=0 violated")]
    FirstRowA,

    #[error("first-row constraint c_{{1j}}=0 violated")]
    FirstRowC,

    #[error("scalar mismatch: sigma^t Delta sigma = {found} Delta but a_11 = {a11}")]
    ScalarNotA11 { found: u32, a11: u32 },

    #[error("lift a={a} is not congruent to a_11={a11} mod p")]
    LiftMismatch { a: u64, a11: u32 },
}

fn join(items: &[BlockIdentity]) -> String {
    items
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
