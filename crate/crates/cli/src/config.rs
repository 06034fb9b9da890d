use std::fs;
use std::path::{Path, PathBuf};

use backtrans::decode::Resources;
use backtrans::models::{
    bundled, ConfusionTable, FrequencyList, KatakanaSpellingTable, PronunciationLexicon, SoundMappingTable, WordSet,
};
use backtrans::training::EmConfig;
use serde::Deserialize;

use crate::CliError;

/// Pipeline settings read from a TOML file. Every resource path is
/// optional and relative to the file; missing ones use the bundled data.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub resources: ResourcePaths,
    #[serde(default)]
    pub lexicon: LexiconConfig,
    #[serde(default)]
    pub training: TrainingConfig,
    #[serde(default)]
    pub decode: DecodeConfig,
    #[serde(skip)]
    base: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourcePaths {
    pub frequencies: Option<PathBuf>,
    pub pronunciations: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub names: Option<PathBuf>,
    pub sound_mapping: Option<PathBuf>,
    pub spelling: Option<PathBuf>,
    pub confusion: Option<PathBuf>,
    pub glossary: Option<PathBuf>,
    pub testset: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconConfig {
    /// Most frequent words kept in the word model.
    pub limit: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingConfig {
    /// 0 means no limit.
    pub max_span: usize,
    pub max_iters: usize,
    pub tol: f64,
    /// Entries below this probability are left out of the written table.
    pub prune_below: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        let em = EmConfig::default();
        TrainingConfig {
            max_span: em.max_span.unwrap_or(0),
            max_iters: em.max_iters,
            tol: em.tol,
            prune_below: 0.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecodeConfig {
    pub k: usize,
    pub ocr: bool,
    pub names: bool,
    pub dedupe: bool,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            k: 5,
            ocr: false,
            names: false,
            dedupe: true,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(PipelineConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: PipelineConfig =
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        config.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.lexicon.limit == Some(0) {
            return Err(CliError::Usage("lexicon.limit must be positive".into()));
        }
        if self.training.max_iters == 0 {
            return Err(CliError::Usage("training.max_iters must be positive".into()));
        }
        if self.training.tol.is_nan() || self.training.tol < 0.0 {
            return Err(CliError::Usage("training.tol must be non-negative".into()));
        }
        if !(0.0..1.0).contains(&self.training.prune_below) {
            return Err(CliError::Usage("training.prune_below must be in [0, 1)".into()));
        }
        if self.decode.k == 0 {
            return Err(CliError::Usage("decode.k must be positive".into()));
        }
        for path in self.resource_paths().into_iter().flatten() {
            let full = self.base.join(path);
            if !full.is_file() {
                return Err(CliError::Usage(format!("resource {} does not exist", full.display())));
            }
        }
        Ok(())
    }

    fn resource_paths(&self) -> [Option<&PathBuf>; 9] {
        let r = &self.resources;
        [
            r.frequencies.as_ref(),
            r.pronunciations.as_ref(),
            r.stoplist.as_ref(),
            r.names.as_ref(),
            r.sound_mapping.as_ref(),
            r.spelling.as_ref(),
            r.confusion.as_ref(),
            r.glossary.as_ref(),
            r.testset.as_ref(),
        ]
    }

    /// Text of a resource: the configured file, or the bundled default.
    pub fn read(&self, path: Option<&PathBuf>, bundled: &'static str) -> Result<String, CliError> {
        match path {
            None => Ok(bundled.to_string()),
            Some(p) => {
                let full = self.base.join(p);
                fs::read_to_string(&full).map_err(|e| CliError::Resource(format!("{}: {e}", full.display())))
            }
        }
    }

    pub fn em_config(&self) -> EmConfig {
        EmConfig {
            max_span: (self.training.max_span > 0).then_some(self.training.max_span),
            max_iters: self.training.max_iters,
            tol: self.training.tol,
        }
    }

    pub fn resources(&self) -> Result<Resources, CliError> {
        let r = &self.resources;
        let res = |e: backtrans::models::ModelError| CliError::Resource(e.to_string());
        Ok(Resources {
            frequencies: FrequencyList::parse(&self.read(r.frequencies.as_ref(), bundled::FREQUENCIES)?).map_err(res)?,
            pronunciations: self.pronunciations()?,
            stoplist: WordSet::parse("stoplist", &self.read(r.stoplist.as_ref(), bundled::STOPLIST)?).map_err(res)?,
            names: WordSet::parse("name list", &self.read(r.names.as_ref(), bundled::NAMES)?).map_err(res)?,
            sound_mapping: SoundMappingTable::parse(&self.read(r.sound_mapping.as_ref(), bundled::SOUND_MAPPING)?)
                .map_err(res)?,
            spelling: self.spelling()?,
            confusion: ConfusionTable::parse(&self.read(r.confusion.as_ref(), bundled::CONFUSION)?).map_err(res)?,
            lexicon_limit: self.lexicon.limit,
        })
    }

    pub fn pronunciations(&self) -> Result<PronunciationLexicon, CliError> {
        let text = self.read(self.resources.pronunciations.as_ref(), bundled::PRONUNCIATIONS)?;
        PronunciationLexicon::parse(&text).map_err(|e| CliError::Resource(e.to_string()))
    }

    pub fn spelling(&self) -> Result<KatakanaSpellingTable, CliError> {
        let text = self.read(self.resources.spelling.as_ref(), bundled::SPELLING)?;
        KatakanaSpellingTable::parse(&text).map_err(|e| CliError::Resource(e.to_string()))
    }

    pub fn confusion(&self) -> Result<ConfusionTable, CliError> {
        let text = self.read(self.resources.confusion.as_ref(), bundled::CONFUSION)?;
        ConfusionTable::parse(&text).map_err(|e| CliError::Resource(e.to_string()))
    }
}
