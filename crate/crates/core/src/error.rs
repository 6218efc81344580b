use thiserror::Error;

/// Every failure mode of the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("invalid body specification: {0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("the origin is not an interior point of the body")]
    OriginNotInterior,
    #[error("ray origin is not interior to the body with the required margin")]
    NotInterior,
    #[error("point is not on the boundary (defining function {0:e})")]
    NotOnBoundary(f64),
    #[error("boundary is not smooth at this point")]
    NonSmoothPoint,
    #[error("normal is not attained by the Gauss map of the body")]
    InadmissibleNormal,
    #[error("sections orthogonal to this direction are unbounded")]
    UnboundedSection,
    #[error("level {t} lies outside the admissible interval ({lo}, {hi})")]
    LevelOutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("section has (numerically) zero measure")]
    DegenerateSection,
    #[error("point set is degenerate for line fitting")]
    DegeneratePointSet,
    #[error("sections of the recession cone are unbounded or have zero measure")]
    ConeSectionUnbounded,
    #[error("cut volume is zero or infinite")]
    DegenerateCut,
    #[error("the origin lies in the body; translate it first")]
    OriginInsideBody,
    #[error("body is not the epigraph of a function over a hyperplane")]
    NotGraphLike,
    #[error("homothety about the body's apex is not available")]
    NotApexCentered,
    #[error("sphere of the requested radius does not meet the boundary")]
    EmptyShellIntersection,
    #[error("{0}")]
    InvalidArgument(String),
}
