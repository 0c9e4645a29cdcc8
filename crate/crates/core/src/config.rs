//! Run configuration. Every field must be given; there are no defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::SplitRatios;
use crate::hashing::sha256_hex;
use crate::model::TrainOptions;
use crate::ngrams::PhonemeUnit;
use crate::setup::{FeatureSetup, SetupError};
use crate::textproc::PhonemizerBackend;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Setup(#[from] SetupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineMode {
    /// Each manifest is its own experiment.
    Separate,
    /// All manifests are merged into one corpus first.
    Merge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub manifests: Vec<PathBuf>,
    pub lexicon_dir: PathBuf,
    /// Holds `<dataset id>.conllu` files. A manifest's own
    /// `annotation_path` takes precedence; datasets with neither are
    /// tokenized.
    pub annotation_dir: PathBuf,
    pub combine: CombineMode,
    /// Id of the merged corpus under `combine = "merge"`.
    pub merged_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturesConfig {
    /// Canonical setup strings; several setups form a grid chosen on the
    /// validation split.
    pub setups: Vec<FeatureSetup>,
    pub top_k: usize,
    pub phoneme_unit: PhonemeUnit,
    pub repair_punctuation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub train: f64,
    pub val: f64,
    pub test: f64,
    pub stratified: bool,
}

impl SplitConfig {
    pub fn ratios(&self) -> SplitRatios {
        SplitRatios {
            train: self.train,
            val: self.val,
            test: self.test,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonConvergence {
    /// Keep the last iterate and flag it in the report.
    Warn,
    /// Treat it as a numerical failure.
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainerConfig {
    pub ridge: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub max_rounds: usize,
    pub threshold: f64,
    pub on_nonconvergence: NonConvergence,
}

impl TrainerConfig {
    pub fn options(&self) -> TrainOptions {
        TrainOptions {
            ridge: self.ridge,
            max_iter: self.max_iter,
            tol: self.tol,
            max_rounds: self.max_rounds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignificanceConfig {
    pub alpha: f64,
    pub correlation_threshold: f64,
    /// Cue names to screen, or `["all"]`.
    pub cues: Vec<String>,
}

impl SignificanceConfig {
    pub fn selects(&self, cue: &str) -> bool {
        self.cues.iter().any(|c| c == "all" || c == cue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhonemizerConfig {
    /// No phonemes: phoneme cues are dropped and phoneme n-grams rejected.
    None,
    BuiltinEn,
    External { command: Vec<String>, workers: usize },
}

impl PhonemizerConfig {
    pub fn backend(&self) -> Option<PhonemizerBackend> {
        match self {
            PhonemizerConfig::None => None,
            PhonemizerConfig::BuiltinEn => Some(PhonemizerBackend::BuiltinEn),
            PhonemizerConfig::External { command, workers } => Some(PhonemizerBackend::External {
                command: command.clone(),
                workers: *workers,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub data: DataConfig,
    pub features: FeaturesConfig,
    pub split: SplitConfig,
    pub trainer: TrainerConfig,
    pub significance: SignificanceConfig,
    pub phonemizer: PhonemizerConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, String> {
        let c: RunConfig = toml::from_str(text).map_err(|e| e.message().to_string())?;
        c.validate().map_err(|e| e.to_string())?;
        Ok(c)
    }

    /// Reads a config file. Relative paths are kept as written; use
    /// [`RunConfig::resolve`] against [`RunConfig::base_dir`] to open them.
    pub fn from_file(path: &Path) -> Result<(RunConfig, PathBuf), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let c = RunConfig::parse(&text).map_err(|message| ConfigError::Parse {
            path: path.to_path_buf(),
            message,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((c, base))
    }

    pub fn resolve(base: &Path, p: &Path) -> PathBuf {
        if p.is_relative() {
            base.join(p)
        } else {
            p.to_path_buf()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.data.manifests.is_empty() {
            return bad("data.manifests is empty".into());
        }
        if self.features.setups.is_empty() {
            return bad("features.setups is empty".into());
        }
        if self.features.top_k == 0 {
            return bad("features.top_k must be positive".into());
        }
        self.split
            .ratios()
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let t = &self.trainer;
        if !(t.ridge >= 0.0 && t.ridge.is_finite()) {
            return bad(format!("trainer.ridge {} must be a non-negative number", t.ridge));
        }
        if t.max_iter == 0 || t.max_rounds == 0 {
            return bad("trainer.max_iter and trainer.max_rounds must be positive".into());
        }
        if !(t.tol > 0.0) {
            return bad("trainer.tol must be positive".into());
        }
        if !(t.threshold > 0.0 && t.threshold < 1.0) {
            return bad(format!("trainer.threshold {} outside (0, 1)", t.threshold));
        }
        let s = &self.significance;
        if !(s.alpha > 0.0 && s.alpha < 1.0) {
            return bad(format!("significance.alpha {} outside (0, 1)", s.alpha));
        }
        if !(s.correlation_threshold > 0.0 && s.correlation_threshold <= 1.0) {
            return bad("significance.correlation_threshold must be in (0, 1]".into());
        }
        if self.data.combine == CombineMode::Merge && self.data.merged_id.is_empty() {
            return bad("data.merged_id must be set when combine = \"merge\"".into());
        }
        if let PhonemizerConfig::External { command, workers } = &self.phonemizer {
            if command.is_empty() || *workers == 0 {
                return bad("external phonemizer needs a command and at least one worker".into());
            }
        }
        Ok(())
    }

    /// Canonical TOML rendering.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical form with `out_dir` blanked, so the same
    /// run written to another directory keeps its hash.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out_dir = PathBuf::new();
        sha256_hex(c.canonical())[..16].to_string()
    }
}
