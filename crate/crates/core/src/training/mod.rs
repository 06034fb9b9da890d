//! Learning the English-phoneme to Japanese-sound table from a glossary.

mod align;
mod bootstrap;
mod em;

pub use align::{alignment_count, AlignmentLattice, PairExpectation};
pub use bootstrap::{bootstrap_corpus, parse_glossary, Bootstrap, DroppedEntry, GlossaryEntry};
pub use em::{em_train, EmConfig, EmOutcome};

use thiserror::Error;

use crate::fsm::FsmError;
use crate::models::inventory::{is_english_phoneme, is_japanese_sound};
use crate::models::ModelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainingError {
    #[error("no glossary entry could be converted to a sound pair")]
    EmptyCorpus,
    #[error("no pair can be aligned; skipped: {}", .0.join(", "))]
    NoAlignablePairs(Vec<String>),
    #[error("invalid sound pair: {0}")]
    InvalidPair(String),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fsm(#[from] FsmError),
}

/// An English phoneme sequence with its Japanese sound sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundPair {
    pub english: Vec<String>,
    pub japanese: Vec<String>,
}

impl SoundPair {
    /// Builds a pair from space-separated sequences.
    pub fn new(english: &str, japanese: &str) -> Self {
        SoundPair {
            english: english.split_whitespace().map(str::to_string).collect(),
            japanese: japanese.split_whitespace().map(str::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SoundPairCorpus {
    pairs: Vec<SoundPair>,
}

impl SoundPairCorpus {
    /// Checks that every pair is non-empty and uses known symbols.
    pub fn new(pairs: Vec<SoundPair>) -> Result<Self, TrainingError> {
        for (i, p) in pairs.iter().enumerate() {
            if p.english.is_empty() || p.japanese.is_empty() {
                return Err(TrainingError::InvalidPair(format!("pair {i} has an empty side")));
            }
            if let Some(bad) = p.english.iter().find(|s| !is_english_phoneme(s)) {
                return Err(TrainingError::InvalidPair(format!("pair {i}: unknown phoneme `{bad}`")));
            }
            if let Some(bad) = p.japanese.iter().find(|s| !is_japanese_sound(s)) {
                return Err(TrainingError::InvalidPair(format!("pair {i}: unknown sound `{bad}`")));
            }
        }
        Ok(SoundPairCorpus { pairs })
    }

    pub fn pairs(&self) -> &[SoundPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}
