use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown scenario `{0}` (try `epilab list`)")]
    UnknownScenario(String),

    #[error("scenario `{scenario}` does not accept --{flag}")]
    BadFlag { scenario: String, flag: String },

    #[error("{0}")]
    Core(#[from] epilab::Error),

    #[error("cannot read {path}: {message}")]
    Input { path: String, message: String },

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}
