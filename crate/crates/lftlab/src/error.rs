use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LftError {
    #[error("samples are not discretely convex: second difference at index {index} is negative")]
    NonConvexInput { index: usize },
    #[error("slice along axis {axis} at flat offset {offset} is not discretely convex")]
    NonConvexSlice { axis: usize, offset: usize },
    #[error("grid needs at least {min} points, got {n}")]
    DegenerateGrid { n: usize, min: usize },
    #[error("grid spacing must be positive")]
    NonPositiveSpacing,
    #[error("sample count {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("sentinel epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("dual grid needs k >= 2, got {0}")]
    InvalidK(usize),
    #[error("dual range is reversed")]
    ReversedRange,
    #[error("dual points must be sorted")]
    UnsortedDual,
    #[error("dual point {index} lies outside the sentinel-extended nontrivial range")]
    OutOfRangeDual { index: usize },
    #[error("dual spacing is zero")]
    ZeroSpacing,
    #[error("index ({i}, {m}) out of range")]
    IndexOutOfRange { i: usize, m: usize },
    #[error("axes have different primal spacings")]
    NonUniformSpacing,
    #[error("axis {axis} out of range for dimension {d}")]
    AxisOutOfRange { axis: usize, d: usize },
    #[error("axis {0} is not a primal axis")]
    NotPrimalAxis(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("size {n} exceeds the cap {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is missing register `{0}` or holds the wrong word type")]
    MalformedState(String),
    #[error("post-selection accepted no basis label")]
    EmptyAcceptance,
    #[error("all register values are zero")]
    AllZeroValues,
    #[error("f is affine (xi = 0); rescaling undefined")]
    ZeroXi,
    #[error("hidden string must be binary and of length d")]
    BadHiddenString,
}

pub type Result<T> = std::result::Result<T, LftError>;
