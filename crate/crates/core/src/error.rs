use crate::isotree::Witness;
use crate::scalars::ArithError;
use crate::spaces::SpaceError;
use crate::value::NormValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("point is not on the sphere of radius {radius}")]
    NotOnSphere { radius: NormValue },
    #[error("radius {0} is not an attainable norm value")]
    NotInValueSet(NormValue),
    #[error("the sphere of radius {0} is empty")]
    EmptySphere(NormValue),
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("domain needs {needed} significant digits, the field carries {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("domain needs valuations in [{needed_min}, {needed_max}], window is [{min}, {max}]")]
    WindowTooNarrow { needed_min: i64, needed_max: i64, min: i32, max: i32 },
    #[error("domain would hold {0} points, above the supported limit")]
    DomainTooLarge(u128),
    #[error("point lies outside the enumerated domain")]
    OutsideDomain,
    #[error("operation needs a space over a finite field")]
    NotFinite,
    #[error("operation needs a space over a p-adic field")]
    NotPadic,
    #[error("sigma is not a permutation of {0} classes")]
    NotBijective(usize),
    #[error("expected {expected} entries (one per class), got {got}")]
    ClassCountMismatch { expected: usize, got: usize },
    #[error("radius {0} is listed twice")]
    DuplicateRadius(NormValue),
    #[error("radius {radius} is not below the outer radius {outer}")]
    RadiusNotBelow { radius: NormValue, outer: NormValue },
    #[error("offset of norm {norm} does not lie in the open ball of radius {radius}")]
    OffsetTooLarge { norm: NormValue, radius: NormValue },
    #[error("tree nesting exceeds its declared depth {0}")]
    DepthExhausted(u32),
    #[error("matrix leaf does not preserve norms")]
    NormNotPreserved,
    #[error("matrix has the wrong shape for this space")]
    MatrixShape,
    #[error("map is not centred: 0 is sent to a nonzero point")]
    NotCentred,
    #[error("map is not an isometry: {0}")]
    NotIsometric(Box<Witness>),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("points have different norms {0} and {1}")]
    NormsDiffer(NormValue, NormValue),
    #[error("point must be nonzero")]
    ZeroVector,
    #[error("the spaces differ")]
    SpaceMismatch,
    #[error("candidate count {bound} exceeds the cap {cap}")]
    CapExceeded { bound: u128, cap: u128 },
    #[error("dilation factor must satisfy |alpha| > 1")]
    DilationTooSmall,
    #[error("sphere map table is not fine enough: depth {have} given, {needed} needed")]
    TableTooCoarse { needed: u32, have: u32 },
    #[error("sphere map has no entry for a required point")]
    MissingTableEntry,
    #[error("{0}")]
    Invalid(String),
}
