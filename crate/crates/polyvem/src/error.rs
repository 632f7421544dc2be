use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] polyvem_core::Error),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for numerical failures, 1 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyvem_core::Error;

    #[test]
    fn exit_codes_split_input_from_numerics() {
        assert_eq!(AppError::Usage("x".into()).exit_code(), 1);
        assert_eq!(
            AppError::Core(Error::InvalidParameter("nu".into())).exit_code(),
            1
        );
        assert_eq!(
            AppError::Core(Error::Solver("stalled".into())).exit_code(),
            2
        );
        let nested = Error::Level {
            level: 8,
            source: Box::new(Error::Cell {
                cell: 3,
                source: Box::new(Error::Local("singular".into())),
            }),
        };
        assert_eq!(AppError::Core(nested).exit_code(), 2);
    }
}
