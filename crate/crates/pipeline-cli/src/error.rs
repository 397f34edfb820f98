use bio_clients::ClientError;
use candidate_pool::PoolError;
use pharmacokinetics::FlagError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("stage {stage} is missing input: {artifact}")]
    MissingInput {
        stage: &'static str,
        artifact: String,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("config: {0}")]
    Config(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("adapter {command} exited with status {status}: {detail}")]
    Adapter {
        command: String,
        status: i32,
        detail: String,
    },
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error(transparent)]
    Pool(#[from] PoolError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PipelineError {
    /// CLI contract: 0 success, 2 precondition, 3 adapter failure, 4 transport.
    /// A missing fixture counts as transport: it is the replay analogue of an
    /// unreachable endpoint.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Adapter { .. } => 3,
            PipelineError::Client(
                ClientError::Network(_)
                | ClientError::RateLimited { .. }
                | ClientError::FixtureMissing { .. },
            ) => 4,
            _ => 2,
        }
    }
}
