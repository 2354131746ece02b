//! Mod-2 Khovanov homology and the geometric spectral sequence built from
//! decorated cubes of resolutions.

pub mod configuration;
pub mod corpus;
pub mod cube;
pub mod diagram;
pub mod differential;
pub mod homology;
pub mod jones;
pub mod planar;
pub mod random;
pub mod verify;

pub use configuration::{classify, ConfigClass, Configuration, TypeTable};
pub use cube::{Decoration, Generator, Gradings, Resolution};
pub use diagram::{parse_braid, parse_pd, LinkDiagram, Sign};
pub use planar::PlanarMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("empty diagram")]
    Empty,
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("edge label {label} occurs {count} times")]
    EdgeMultiplicity { label: u32, count: usize },
    #[error("diagram is not planar: {faces} faces where {expected} are needed")]
    NonPlanar { faces: usize, expected: usize },
    #[error("no edge labelled {0}")]
    UnknownBasepoint(u32),
    #[error("bad braid: {0}")]
    BadBraid(String),
    #[error("generator {generator} out of range for {strands} strands")]
    GeneratorOutOfRange { generator: i32, strands: usize },
    #[error("strand orientations disagree at crossing {0}")]
    Inconsistent(usize),
    #[error("diagram is not a braid closure")]
    NotBraid,
    #[error("no basepoint set")]
    NoBasepoint,
    #[error("bad decoration `{0}`")]
    BadDecoration(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("port count {0} is not a multiple of 4")]
    PortCount(usize),
    #[error("link is not a fixed-point free involution at port {0}")]
    NotAnInvolution(usize),
    #[error("configuration is not planar: {faces} faces where {expected} are needed")]
    NotPlanar { faces: usize, expected: usize },
    #[error("syntax error near `{0}`")]
    Syntax(String),
    #[error("not an active connected 2-dimensional configuration")]
    NotTwoDimensional,
    #[error("types {0} and {1} have isomorphic references")]
    DuplicateReference(u8, u8),
    #[error("configuration matches no reference type")]
    UnknownType,
}
