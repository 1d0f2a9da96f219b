use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian (max |H - H^*| = {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has no edges")]
    NoEdges,
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: usize, vertex: usize },
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: usize, vertex: String },
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("incomplete weight data: {0}")]
    IncompleteData(String),
    #[error("invalid weight data: {0}")]
    InvalidWeight(String),
    #[error("matrix does not match graph structure: {0}")]
    Structure(String),
    #[error("edge ({0}, {1}) has zero weight; omit the edge instead")]
    ZeroWeight(usize, usize),
    #[error("pole at vertex {vertex}: |H_uu - λ - iΓ_u| = {modulus:e}")]
    Pole { vertex: usize, modulus: f64 },

    #[error("invalid group: {0}")]
    Group(String),
    #[error("invalid representation: {0}")]
    Representation(String),
    #[error("invalid voltage assignment: {0}")]
    Voltage(String),
    #[error("derived graph is not connected; covering identities require a connected covering")]
    DisconnectedCovering,

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("instance error: {0}")]
    Instance(String),
}
