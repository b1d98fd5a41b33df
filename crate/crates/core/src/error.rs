use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown environment `{0}` (valid presets: E1, E2, E3, E4, E5, or a path ending in .env.csv)")]
    UnknownEnvironment(String),

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("action {action} out of range for an environment with {actions} actions")]
    ActionOutOfRange { action: usize, actions: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no feasible parameters: every grid cell failed the consecutive-correct constraint")]
    NoFeasibleParameters,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// True for errors caused by bad user input rather than the filesystem.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnknownEnvironment(_)
                | Error::InvalidEnvironment(_)
                | Error::ActionOutOfRange { .. }
                | Error::InvalidConfig(_)
        )
    }
}
