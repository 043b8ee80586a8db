use thiserror::Error;

/// Errors raised by the geometry kernel and the dynamical maps.
///
/// Vertex, edge and strip indices carried by the variants are 0-based; the
/// `Display` output renders them 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("region is unbounded")]
    UnboundedRegion,
    #[error("region has no interior points")]
    EmptyRegion,
    #[error("polygon is not convex at edge {}", .edge + 1)]
    NotConvex { edge: usize },
    #[error("edges {} and {} are parallel", .first + 1, .second + 1)]
    ParallelEdges { first: usize, second: usize },
    #[error("degenerate vertices at {}", display_indices(.indices))]
    DegenerateVertices { indices: Vec<usize> },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric field mismatch: {0}")]
    FieldMismatch(String),
    #[error("point lies on the boundary of strip {}", .strip + 1)]
    OnStripBoundary { strip: usize },
    #[error("point lies on a primary wall")]
    OnPrimaryWall,
    #[error("point lies inside the polygon")]
    InsidePolygon,
    #[error("map undefined on a wall (stage {stage})")]
    UndefinedOnWall { stage: usize },
    #[error("step budget of {budget} exhausted")]
    BudgetExceeded { budget: usize },
    #[error("({}, {}) is not an admissible vertex pair", .v + 1, .w + 1)]
    NotAdmissiblePair { v: usize, w: usize },
    #[error("index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("polygon is not quasirational")]
    NotQuasirational,
    #[error("no invariant necklace annulus contains the point for m = {m}")]
    AnnulusNotFound { m: u64 },
    #[error("random polygon generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("scene has no items")]
    EmptyScene,
}

fn display_indices(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    parts.join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
