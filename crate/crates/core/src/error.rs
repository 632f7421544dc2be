use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mesh kind `{kind}` is not available on domain `{domain}`")]
    UnsupportedMesh {
        domain: &'static str,
        kind: &'static str,
    },

    #[error("degenerate mesh: {0}")]
    DegenerateMesh(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("local operator failure: {0}")]
    Local(String),

    #[error("cell {cell}: {source}")]
    Cell { cell: usize, source: Box<Error> },

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("level {level}: {source}")]
    Level { level: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn in_cell(self, cell: usize) -> Self {
        Error::Cell {
            cell,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_level(self, level: usize) -> Self {
        Error::Level {
            level,
            source: Box::new(self),
        }
    }

    /// True for failures of the numerical pipeline (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::InvalidParameter(_) | Error::UnsupportedMesh { .. } => false,
            Error::Cell { source, .. } | Error::Level { source, .. } => source.is_numerical(),
            _ => true,
        }
    }
}
