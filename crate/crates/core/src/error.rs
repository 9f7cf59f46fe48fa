use std::fmt;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A minimum was requested over an empty list of values.
    EmptyList,
    /// `Infinity` was passed where a group element is required.
    NotAnElement,
    /// Two operands belong to different fields.
    MixedFields,
    DivisionByZero,
    /// A rational function was evaluated at a zero of its denominator.
    PoleAtPoint,
    /// An element with negative valuation appeared where an integral one is required.
    NotIntegral,
    /// A field spec needs a residue branch for the adjoined square root but none was given.
    BranchRequired,
    /// Parameters do not describe a supported field.
    BadFieldSpec(String),
    /// The gap sequence on the inspected window is neither strictly monotone nor constant.
    NotMonotoneOnWindow { index: usize },
    /// The operation applies to a different sequence kind.
    WrongKind,
    /// The element is not a verified pseudo-limit of the family.
    NoKnownLimit,
    /// Declared family metadata failed window validation.
    UnvalidatedFamily(String),
    /// Window too small to classify the family.
    WindowTooSmall,
    /// A sequence family cannot report the required valuation profile.
    UnsupportedFamily(String),
    /// The atom kind is not supported by this operation.
    UnsupportedAtom(String),
    /// The subset is not contained in the valuation ring.
    NotInsideV,
    /// The radius lies outside the supported (rational) range for this operation.
    UnsupportedRadius(String),
    /// The ball/closure equivalence fails over a DVR with finite residue field.
    EquivalenceUnavailable,
    /// Literal could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyList => write!(f, "minimum of an empty list"),
            Self::NotAnElement => write!(f, "infinity is not a value-group element"),
            Self::MixedFields => write!(f, "operands belong to different fields"),
            Self::DivisionByZero => write!(f, "division by zero"),
            Self::PoleAtPoint => write!(f, "rational function has a pole at the evaluation point"),
            Self::NotIntegral => write!(f, "element has negative valuation"),
            Self::BranchRequired => {
                write!(f, "a residue branch r0 is required for this quadratic extension")
            }
            Self::BadFieldSpec(s) => write!(f, "invalid field spec: {s}"),
            Self::NotMonotoneOnWindow { index } => {
                write!(f, "gap sequence is not monotone at window index {index}")
            }
            Self::WrongKind => write!(f, "operation does not apply to this sequence kind"),
            Self::NoKnownLimit => write!(f, "element is not a verified pseudo-limit"),
            Self::UnvalidatedFamily(s) => write!(f, "family failed window validation: {s}"),
            Self::WindowTooSmall => write!(f, "window too small to classify the family"),
            Self::UnsupportedFamily(s) => write!(f, "unsupported family: {s}"),
            Self::UnsupportedAtom(s) => write!(f, "unsupported atom: {s}"),
            Self::NotInsideV => write!(f, "subset is not contained in the valuation ring"),
            Self::UnsupportedRadius(s) => write!(f, "unsupported radius: {s}"),
            Self::EquivalenceUnavailable => write!(
                f,
                "ball criterion unavailable: the base is a DVR with finite residue field"
            ),
            Self::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
