use alloc::string::String;

/// Errors raised by the symbolic kernel and the analyses built on it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// A sample point hit a pole of some expression; the caller should draw another point.
    #[error("sample rejected: pole at the evaluation point")]
    Pole,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("missing assignment for coordinate `{0}`")]
    MissingAssignment(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("pivot `{0}` has no invertible coefficient")]
    NonInvertiblePivot(String),
    #[error("2-form is not decomposable")]
    NotDecomposable,
    #[error("cannot factor the zero form")]
    ZeroForm,
    #[error("singular coframe")]
    SingularCoframe,
    #[error("dependent generators")]
    DependentGenerators,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("system is integrable; Proposition applies")]
    Integrable,
    #[error("system is not integrable")]
    NotIntegrable,
    #[error("not a Monge-Ampere system: {0}")]
    NotMongeAmpere(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("root not in rational function field")]
    RootNotInField,
    #[error("dF is not in the system: residual {0}")]
    NotInSystem(String),
    #[error("dF vanishes identically")]
    VanishingDifferential,
    #[error("not a contact transformation: residual {0}")]
    NotContact(String),
    #[error("identity failed: {0}")]
    IdentityFailed(String),
    #[error("surface is not immersed: Jacobian has generic rank {0}")]
    NotImmersed(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
