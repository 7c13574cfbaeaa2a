use thiserror::Error;

/// A single problem found while validating an input document, with a path
/// into the document so that several problems can be reported at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed continuum `{id}`: {reason}")]
    MalformedContinuum { id: String, reason: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("no arc from `{from}` to `{to}` inside the search box")]
    NoArc { from: String, to: String },

    #[error("degenerate arc: {0}")]
    DegenerateArc(String),

    #[error("not a triad: `{separator}` separates the other two elements")]
    NotATriad { separator: String },

    #[error("universe has {0} elements; a circular order needs at least 3")]
    UniverseTooSmall(usize),

    #[error("the circle does not cross `{0}`")]
    NoCrossing(String),

    #[error("map does not preserve the decomposition (image of `{0}` is not an element)")]
    NotDecompositionPreserving(String),

    #[error("end permutation does not preserve the circular order")]
    OrderViolation,

    #[error("not enough ends: {0}")]
    InsufficientEnds(String),

    #[error("curve is not a spanning arc: {0}")]
    NotSpanning(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed:\n{}", format_issues(.0))]
    Validation(Vec<ValidationIssue>),

    #[error("geometry invariant violated: {0}")]
    Geometry(String),
}

fn format_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}
