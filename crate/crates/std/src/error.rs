use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// `line` is 0 when the offending value is a default or an override.
    #[error("{}{msg}", if *line > 0 { format!("line {line}: ") } else { String::new() })]
    Config { line: usize, msg: String },
    #[error("duplicate key `{key}` on lines {first} and {second}")]
    DuplicateKey {
        key: String,
        first: usize,
        second: usize,
    },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("experiment {experiment}: {source}")]
    Experiment {
        experiment: &'static str,
        #[source]
        source: gcalc_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("G_CALC_THREADS: {0}")]
    Threads(String),
}

pub type Result<T> = std::result::Result<T, Error>;
