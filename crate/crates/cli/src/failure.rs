//! Errors carried to the process exit code.

use std::fmt;

use deceptext::config::ConfigError;
use deceptext::corpus::CorpusError;
use deceptext::cues::LexiconError;
use deceptext::eval::EvalError;
use deceptext::features::FeatureError;
use deceptext::model::ModelError;
use deceptext::setup::SetupError;
use deceptext::stats::StatsError;
use deceptext::textproc::TextError;

/// Bad input, missing files, invalid config values.
pub const INPUT: i32 = 2;
/// An input was produced under another schema or config.
pub const MISMATCH: i32 = 3;
/// Non-convergence and other numerical failures.
pub const NUMERIC: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: i32, error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code,
            error: error.into(),
        }
    }

    pub fn input(message: impl fmt::Display) -> Failure {
        Failure::new(INPUT, anyhow::anyhow!("{message}"))
    }

    pub fn mismatch(message: impl fmt::Display) -> Failure {
        Failure::new(MISMATCH, anyhow::anyhow!("{message}"))
    }

    pub fn context(self, what: impl fmt::Display) -> Failure {
        Failure {
            code: self.code,
            error: self.error.context(what.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

fn feature_code(e: &FeatureError) -> i32 {
    match e {
        FeatureError::SchemaMismatch { .. } => MISMATCH,
        _ => INPUT,
    }
}

fn model_code(e: &ModelError) -> i32 {
    match e {
        ModelError::SchemaMismatch { .. } => MISMATCH,
        ModelError::Numeric(_) | ModelError::NonFinite => NUMERIC,
        _ => INPUT,
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        let code = match &e {
            EvalError::Features(f) => feature_code(f),
            EvalError::Train(m) => model_code(m),
            EvalError::NotConverged { .. } => NUMERIC,
            _ => INPUT,
        };
        Failure::new(code, e)
    }
}

impl From<FeatureError> for Failure {
    fn from(e: FeatureError) -> Failure {
        Failure::new(feature_code(&e), e)
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Failure {
        Failure::new(model_code(&e), e)
    }
}

impl From<StatsError> for Failure {
    fn from(e: StatsError) -> Failure {
        let code = match e {
            StatsError::Shape(_) | StatsError::EmptySample => INPUT,
            _ => NUMERIC,
        };
        Failure::new(code, e)
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Failure {
                Failure::new(INPUT, e)
            }
        })*
    };
}

input_errors!(ConfigError, CorpusError, LexiconError, SetupError, TextError, std::io::Error);

impl fmt::Display for Failure {
    /// The error chain joined by `: `, skipping causes the previous message
    /// already spells out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut last = String::new();
        for (i, cause) in self.error.chain().enumerate() {
            let text = cause.to_string();
            if i > 0 && last.contains(&text) {
                continue;
            }
            if i > 0 {
                f.write_str(": ")?;
            }
            f.write_str(&text)?;
            last = text;
        }
        Ok(())
    }
}
