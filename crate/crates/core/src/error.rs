use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate drawing: {0}")]
    DegenerateDrawing(String),
    #[error("coordinate arithmetic overflowed the exact range")]
    CoordinateOverflow,
    #[error("k_max = {0} exceeds the supported maximum of 4")]
    KMaxTooLarge(usize),
    #[error("planarization search aborted after {tests} planarity tests (budget {budget})")]
    SearchBudgetExceeded { tests: u64, budget: u64 },
    #[error("graph on {n} vertices exceeds the exhaustive cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("bisection undefined for graphs with fewer than 2 vertices (n = {0})")]
    Undefined(usize),
    #[error("heuristic bisection only bounds b(G) from above and cannot be used here")]
    HeuristicBisectionRejected,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("component on {n} vertices exceeds the exact bisection cap of {cap}")]
    BisectorCapExceeded { n: usize, cap: usize },
    #[error("unknown graph name: {0}")]
    UnknownGraph(String),
}
