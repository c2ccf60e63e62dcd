use thiserror::Error;

/// Errors produced by graph construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("loop at vertex {0}: both ends of an edge must be distinct")]
    Loop(usize),
    #[error("edge {0}-{1} joins two pinned vertices")]
    PinPinEdge(usize, usize),
    #[error("edge {0}-{1} is already present (pinned graphs are simple)")]
    ParallelEdge(usize, usize),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("graph has {actual} vertices, exceeding the limit of {limit}")]
    SizeLimit { actual: usize, limit: usize },
    #[error("at least two pins are required, found {0}")]
    TooFewPins(usize),
    #[error("pin label {0} receives no edges")]
    EmptyPin(usize),
    #[error("assignment has {actual} entries but {expected} edges need a pin")]
    AssignmentLength { expected: usize, actual: usize },
    #[error("pin {0} of the composed graph is not mapped")]
    UnmappedPin(usize),
    #[error("composition map is not injective: target {0} used twice")]
    NonInjective(usize),
    #[error("vertex {0} is not a pin")]
    NotAPin(usize),
    #[error("invalid joint {0}: a joint must connect at least two links")]
    DegenerateJoint(usize),
    #[error("unknown link {0:?}")]
    UnknownLink(String),
    #[error("driver {link:?} is incident to {joints} joints; exactly two are supported")]
    DriverValence { link: String, joints: usize },
    #[error("edge {0} was not rejected by the pebble game")]
    NotRejected(usize),
    #[error("configuration covers {actual} vertices, graph has {expected}")]
    ConfigurationSize { expected: usize, actual: usize },
    #[error("adjacent vertices {0} and {1} sit at the same point")]
    CoincidentPoints(usize, usize),
    #[error("graph is not pinned isostatic")]
    NotPinnedIsostatic,
    #[error("graph is not an Assur graph")]
    NotAssur,
    #[error("invalid operation: {0}")]
    InvalidOperation(String),
    #[error("scheme references unknown vertex {0:?}")]
    DanglingPin(String),
    #[error("certificate search exhausted without a reduction")]
    SearchExhausted,
}

pub type Result<T> = std::result::Result<T, Error>;
