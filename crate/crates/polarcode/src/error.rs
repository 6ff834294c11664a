use std::path::PathBuf;

use polar_grassmann::Error;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Exit {
    Ok = 0,
    Mismatch = 1,
    Invalid = 2,
    Io = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit(&self) -> Exit {
        match self {
            Self::Core(Error::CounterexampleFound { .. }) => Exit::Mismatch,
            Self::Io { .. } => Exit::Io,
            _ => Exit::Invalid,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use polar_grassmann::Matrix;

    #[test]
    fn exit_statuses() {
        let witness = Error::CounterexampleFound {
            weight: 1,
            claimed: 18,
            form: Matrix::zeros(5, 5),
        };
        assert_eq!(CliError::from(witness).exit(), Exit::Mismatch);
        assert_eq!(
            CliError::from(Error::EvenCharacteristic { p: 2 }).exit(),
            Exit::Invalid
        );
        assert_eq!(
            CliError::from(Error::InadmissibleParams("r".into())).exit(),
            Exit::Invalid
        );
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        assert_eq!(CliError::io("x", io).exit(), Exit::Io);
    }
}
