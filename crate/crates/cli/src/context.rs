//! Loading the config, corpora, lexicons and annotations for one run.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use deceptext::config::{CombineMode, RunConfig};
use deceptext::corpus::{load_corpus, Corpus, DatasetManifest};
use deceptext::cues::LexiconSet;
use deceptext::eval::{ExperimentSettings, PreparedDataset};
use deceptext::features::{prepare_corpus, Preparation, SchemaOptions};
use deceptext::setup::FeatureSetup;
use deceptext::textproc::conllu::load_conllu_file;
use deceptext::textproc::{Phonemizer, TokenizerOptions};

use crate::failure::{CliResult, Failure};

/// Values given on the command line or through `DECEPTEXT_*` variables.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub struct Context {
    pub config: RunConfig,
    /// Directory relative config paths are resolved against.
    pub base: PathBuf,
    pub hash: String,
    pub out: PathBuf,
}

impl Context {
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Context> {
        let (mut config, base) = RunConfig::from_file(path)?;
        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(out) = &overrides.out {
            config.out_dir = out.clone();
        }
        config.validate()?;
        let hash = config.hash();
        let out = if overrides.out.is_some() {
            config.out_dir.clone()
        } else {
            RunConfig::resolve(&base, &config.out_dir)
        };
        Ok(Context {
            config,
            base,
            hash,
            out,
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        RunConfig::resolve(&self.base, p)
    }

    pub fn manifests(&self) -> CliResult<Vec<DatasetManifest>> {
        self.config
            .data
            .manifests
            .iter()
            .map(|m| Ok(DatasetManifest::from_file(&self.resolve(m))?))
            .collect()
    }

    pub fn tokenizer(&self) -> TokenizerOptions {
        TokenizerOptions {
            repair_punctuation: self.config.features.repair_punctuation,
        }
    }

    pub fn settings<'a>(&self, lexicons: Option<&'a LexiconSet>) -> ExperimentSettings<'a> {
        let c = &self.config;
        ExperimentSettings {
            lexicons,
            schema: SchemaOptions {
                top_k: c.features.top_k,
                phoneme_unit: c.features.phoneme_unit,
            },
            train: c.trainer.options(),
            threshold: c.trainer.threshold,
            ratios: c.split.ratios(),
            stratified: c.split.stratified,
            seed: c.seed,
            config_hash: self.hash.clone(),
            on_nonconvergence: c.trainer.on_nonconvergence,
        }
    }

    fn needs_lexicons(&self, setups: &[FeatureSetup]) -> bool {
        setups.iter().any(|s| s.cues || s.ngrams.iter().any(|n| n.stop))
    }
}

/// What a command needs from document preparation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    /// Cue vectors are always computed (cues, significance, mlr).
    Cues,
    /// Whatever the configured setups use.
    Setups,
}

/// Prepared datasets plus the lexicon set of each language.
pub struct Loaded {
    pub datasets: Vec<PreparedDataset>,
    pub lexicons: BTreeMap<String, LexiconSet>,
    /// Languages for which a phonemizer could be built.
    pub phonemized: Vec<String>,
}

impl Loaded {
    pub fn lexicons_for(&self, lang: &str) -> Option<&LexiconSet> {
        self.lexicons.get(lang)
    }

    pub fn has_phonemizer(&self, lang: &str) -> bool {
        self.phonemized.iter().any(|l| l == lang)
    }

    /// Datasets as configured: each alone, or merged into one.
    pub fn experiment_datasets(&self, ctx: &Context) -> CliResult<Vec<PreparedDataset>> {
        match ctx.config.data.combine {
            CombineMode::Separate => Ok(self.datasets.clone()),
            CombineMode::Merge => {
                let parts: Vec<&PreparedDataset> = self.datasets.iter().collect();
                Ok(vec![PreparedDataset::merge(&parts, &ctx.config.data.merged_id)?])
            }
        }
    }

    /// Every configured setup must be computable for every language.
    pub fn validate_setups(&self, ctx: &Context) -> CliResult<()> {
        for d in &self.datasets {
            let lang = d.corpus.language();
            for s in &ctx.config.features.setups {
                s.validate_for_language(lang, self.has_phonemizer(lang))?;
                if s.cues && self.lexicons_for(lang).is_none() {
                    return Err(Failure::input(format!(
                        "{s} uses cues but no lexicons were loaded for {lang:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn annotations_path(ctx: &Context, m: &DatasetManifest) -> Option<PathBuf> {
    if let Some(p) = &m.annotation_path {
        return Some(p.clone());
    }
    let p = ctx
        .resolve(&ctx.config.data.annotation_dir)
        .join(format!("{}.conllu", m.id));
    p.exists().then_some(p)
}

pub fn load(ctx: &Context, needs: Needs) -> CliResult<Loaded> {
    let manifests = ctx.manifests()?;
    let want_lexicons = needs == Needs::Cues || ctx.needs_lexicons(&ctx.config.features.setups);
    let want_cues = needs == Needs::Cues || ctx.config.features.setups.iter().any(|s| s.cues);
    let lexicon_dir = ctx.resolve(&ctx.config.data.lexicon_dir);

    let mut lexicons = BTreeMap::new();
    let mut phonemizers: HashMap<String, Option<Box<dyn Phonemizer>>> = HashMap::new();
    let mut datasets = Vec::with_capacity(manifests.len());
    for m in &manifests {
        let corpus: Corpus = load_corpus(m)?;
        let lang = corpus.language().to_string();
        if want_lexicons && !lexicons.contains_key(&lang) {
            let lex = LexiconSet::load(&lexicon_dir, &lang)?;
            lexicons.insert(lang.clone(), lex);
        }
        if !phonemizers.contains_key(&lang) {
            let built = match ctx.config.phonemizer.backend() {
                None => None,
                Some(b) => match b.build(&lang) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        log::warn!("no phonemes for {}: {e}", corpus.id());
                        None
                    }
                },
            };
            phonemizers.insert(lang.clone(), built);
        }
        let annotations = match annotations_path(ctx, m) {
            Some(p) => {
                log::info!("{}: reading annotations from {}", m.id, p.display());
                Some(load_conllu_file(&p)?)
            }
            None => None,
        };
        let prep = Preparation {
            tokenizer: ctx.tokenizer(),
            annotations: annotations.as_ref(),
            phonemizer: phonemizers[&lang].as_deref(),
            lexicons: if want_cues { lexicons.get(&lang) } else { None },
        };
        let docs = prepare_corpus(&corpus, &prep).map_err(|e| Failure::from(e).context(format!("dataset {}", m.id)))?;
        log::info!("{}: prepared {} documents", m.id, docs.len());
        datasets.push(PreparedDataset::new(corpus, docs)?);
    }
    let phonemized = phonemizers
        .into_iter()
        .filter(|(_, p)| p.is_some())
        .map(|(l, _)| l)
        .collect();
    Ok(Loaded {
        datasets,
        lexicons,
        phonemized,
    })
}
