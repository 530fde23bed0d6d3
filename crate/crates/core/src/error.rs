use thiserror::Error;

/// Everything that can go wrong in the geometry layer.
///
/// Variants map one-to-one onto stable machine-readable codes via
/// [`Error::code`], which the command-line front end emits verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("ambient dimension {dim} exceeds the representation-conversion cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("quotient kernel is not contained in the lineality space")]
    KernelNotInLineality,
    #[error("recession cone does not match the supplied cone")]
    ConeMismatch,
    #[error("direction lies in the recession cone of the body")]
    RayInsideCone,
    #[error("start point does not belong to the body")]
    PointNotInBody,
    #[error("offset {index} is negative")]
    NegativeOffset { index: usize },
    #[error("point {index} lies inside the body")]
    PointInsideBody { index: usize },
    #[error("segment between points {i} and {j} misses the body")]
    SegmentMissesBody { i: usize, j: usize },
    #[error("degenerate decomposition: {0}")]
    DegenerateDecomposition(String),
    #[error("points {i} and {j} are not hidden behind the cone")]
    NotHidden { i: usize, j: usize },
    #[error("no admissible lift for point {index}")]
    LiftInfeasible { index: usize },
    #[error("recession cone is a line, half-plane or plane")]
    BadConeShape,
    #[error("precondition unsatisfied: {0}")]
    PreconditionUnsatisfied(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("biorthogonal induction exhausted the space at step {step}")]
    DimensionExhausted { step: usize },
    #[error("body has a non-trivial recession cone")]
    UnboundedBody,
    #[error("grid step too coarse to certify the net")]
    GridTooCoarse,
    #[error("unsupported body: {0}")]
    UnsupportedBody(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable snake-case identifier for structured error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EmptyPolyhedron => "empty_polyhedron",
            Error::DimensionCapExceeded { .. } => "dimension_cap_exceeded",
            Error::KernelNotInLineality => "kernel_not_in_lineality",
            Error::ConeMismatch => "cone_mismatch",
            Error::RayInsideCone => "ray_inside_cone",
            Error::PointNotInBody => "point_not_in_body",
            Error::NegativeOffset { .. } => "negative_offset",
            Error::PointInsideBody { .. } => "point_inside_body",
            Error::SegmentMissesBody { .. } => "segment_misses_body",
            Error::DegenerateDecomposition(_) => "degenerate_decomposition",
            Error::NotHidden { .. } => "not_hidden",
            Error::LiftInfeasible { .. } => "lift_infeasible",
            Error::BadConeShape => "bad_cone_shape",
            Error::PreconditionUnsatisfied(_) => "precondition_unsatisfied",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::DimensionExhausted { .. } => "dimension_exhausted",
            Error::UnboundedBody => "unbounded_body",
            Error::GridTooCoarse => "grid_too_coarse",
            Error::UnsupportedBody(_) => "unsupported_body",
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
