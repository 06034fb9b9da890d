//! The five models of the transliteration cascade and the resources they
//! are built from.

pub mod bundled;
pub mod inventory;
mod katakana;
mod lexicon;
mod mapping;
mod ocr;
mod pronounce;
mod tsv;

pub use katakana::{
    build_katakana_writer, glyph_sequence, normalize_katakana, KatakanaSpellingTable,
    LongVowelSpelling, SpellingUnit, SEPARATOR,
};
pub use lexicon::{
    build_word_model, FrequencyList, PronunciationLexicon, UnigramLexicon, WordModelMode, WordSet,
};
pub use mapping::{build_sound_mapper, SoundMappingTable};
pub use ocr::{build_ocr_model, ConfusionTable, CONFUSABLE_GROUPS, DEFAULT_NOISE};
pub use pronounce::{build_pronouncer, BOUNDARY_PAUSE_PROBABILITY};

use thiserror::Error;

use crate::fsm::FsmError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{resource}, line {line}: {message}")]
    Parse {
        resource: String,
        line: usize,
        message: String,
    },
    #[error("lexicon is empty")]
    EmptyLexicon,
    #[error("`{0}` has an empty pronunciation or mapping")]
    EmptyPronunciation(String),
    #[error("word `{word}` uses phoneme `{phoneme}`, which is not in the English inventory")]
    UnknownPhoneme { word: String, phoneme: String },
    #[error("`{0}` is not in the Japanese sound inventory")]
    UnknownSound(String),
    #[error("word `{0}` is not in the word alphabet")]
    UnknownWord(String),
    #[error("invalid probability {value} for {context}")]
    InvalidProbability { context: String, value: f64 },
    #[error("duplicate entry {0}")]
    Duplicate(String),
    #[error("inconsistent alphabets: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Fsm(#[from] FsmError),
}

impl ModelError {
    pub(crate) fn parse(resource: &str, line: usize, message: impl Into<String>) -> Self {
        ModelError::Parse {
            resource: resource.to_string(),
            line,
            message: message.into(),
        }
    }
}
