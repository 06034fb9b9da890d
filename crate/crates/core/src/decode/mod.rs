//! Katakana to English by running the generative cascade backwards.
//!
//! Decoding happens in two stages. The observed glyphs are composed with
//! the inverted OCR model (optional), katakana writer, sound mapper and
//! pronouncer, trimming after each step, which leaves a lattice of word
//! sequences scored by phonetic fit alone. That lattice is then rescored
//! with the word model and the best paths are read off.

mod eval;
mod model_set;

pub use eval::{corrupt, evaluate, parse_eval_set, EvalEntry, EvalItem, EvalOptions, EvalReport, Noise};
pub use model_set::{ModelSet, Resources};

use thiserror::Error;

use crate::fsm::{
    best_path, compose, k_best, k_best_unique, linear_acceptor, project_output, trim, Fst, FsmError, Path, Weight,
};
use crate::models::{glyph_sequence, normalize_katakana, ModelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("glyph `{0}` is not in the input alphabet")]
    UnknownGlyph(String),
    #[error("word `{0}` is not in the lexicon")]
    UnknownWord(String),
    #[error("alphabet mismatch at {0}")]
    AlphabetChain(String),
    #[error("no personal-name model is available")]
    NoNameModel,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Io(String),
    #[error("evaluation set is empty")]
    EmptyEvalSet,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fsm(#[from] FsmError),
}

impl From<std::io::Error> for DecodeError {
    fn from(e: std::io::Error) -> Self {
        DecodeError::Io(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Number of candidates to return.
    pub k: usize,
    /// Read the input as OCR output and undo recognition errors.
    pub use_ocr_model: bool,
    /// Rescore with the personal-name word model.
    pub name_mode: bool,
    /// Keep only the best derivation of each word sequence.
    pub dedupe_outputs: bool,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            k: 5,
            use_ocr_model: false,
            name_mode: false,
            dedupe_outputs: true,
        }
    }
}

/// One English reading of the input.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub words: Vec<String>,
    pub probability: f64,
    pub cost: Weight,
}

impl Candidate {
    fn from_path(path: &Path, fst: &Fst) -> Self {
        Candidate {
            words: path.output_labels(fst),
            probability: path.cost.probability(),
            cost: path.cost,
        }
    }

    /// The words joined by single spaces.
    pub fn text(&self) -> String {
        self.words.join(" ")
    }
}

/// Best sound-level readings of an input that has no word analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct Fallback {
    pub sounds: Vec<String>,
    pub phonemes: Vec<String>,
}

/// Candidates plus, when there are none, the sound-level diagnosis.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub candidates: Vec<Candidate>,
    pub fallback: Option<Fallback>,
}

fn observed_acceptor(observed: &str, models: &ModelSet, opts: &DecodeOptions) -> Result<Fst, DecodeError> {
    let glyphs = glyph_sequence(&normalize_katakana(observed));
    let table = if opts.use_ocr_model { models.observed() } else { models.glyphs() };
    linear_acceptor(&glyphs, table).map_err(|e| match e {
        FsmError::UnknownSymbol(g) => DecodeError::UnknownGlyph(g),
        other => other.into(),
    })
}

/// Japanese-sound lattice of the observed katakana.
fn sound_lattice(observed: &str, models: &ModelSet, opts: &DecodeOptions) -> Result<Fst, DecodeError> {
    let mut m = observed_acceptor(observed, models, opts)?;
    if opts.use_ocr_model {
        m = trim(&compose(&m, models.inverse_ocr())?);
    }
    Ok(trim(&compose(&m, models.reader())?))
}

/// All word sequences that could have produced `observed`, scored by the
/// channel models only. Empty when there is no analysis.
pub fn phonetic_candidates(observed: &str, models: &ModelSet, opts: &DecodeOptions) -> Result<Fst, DecodeError> {
    let sounds = sound_lattice(observed, models, opts)?;
    let phonemes = trim(&compose(&sounds, models.inverse_mapper())?);
    let words = trim(&compose(&phonemes, models.inverse_pronouncer())?);
    Ok(trim(&project_output(&words)))
}

fn word_model<'a>(models: &'a ModelSet, opts: &DecodeOptions) -> Result<&'a Fst, DecodeError> {
    if opts.name_mode {
        models.name_model().ok_or(DecodeError::NoNameModel)
    } else {
        Ok(models.word_model())
    }
}

fn extract(fst: &Fst, opts: &DecodeOptions) -> Vec<Candidate> {
    let paths = if opts.dedupe_outputs {
        k_best_unique(fst, opts.k)
    } else {
        k_best(fst, opts.k)
    };
    paths.iter().map(|p| Candidate::from_path(p, fst)).collect()
}

/// Rescores a phonetic lattice with the word model.
pub fn rescore(lattice: &Fst, models: &ModelSet, opts: &DecodeOptions) -> Result<Vec<Candidate>, DecodeError> {
    if opts.k == 0 {
        return Err(DecodeError::InvalidK);
    }
    let scored = trim(&compose(lattice, word_model(models, opts)?)?);
    Ok(extract(&scored, opts))
}

/// Best word sequences of the phonetic lattice before rescoring.
pub fn phonetic_best(lattice: &Fst, opts: &DecodeOptions) -> Result<Vec<Candidate>, DecodeError> {
    if opts.k == 0 {
        return Err(DecodeError::InvalidK);
    }
    Ok(extract(lattice, opts))
}

/// The `opts.k` most probable English readings of `observed`, best first.
pub fn back_transliterate(
    observed: &str,
    models: &ModelSet,
    opts: &DecodeOptions,
) -> Result<Vec<Candidate>, DecodeError> {
    if opts.k == 0 {
        return Err(DecodeError::InvalidK);
    }
    word_model(models, opts)?;
    let lattice = phonetic_candidates(observed, models, opts)?;
    rescore(&lattice, models, opts)
}

/// Like [`back_transliterate`], adding the best sound and phoneme readings
/// when no English reading exists.
pub fn decode(observed: &str, models: &ModelSet, opts: &DecodeOptions) -> Result<Decoded, DecodeError> {
    let candidates = back_transliterate(observed, models, opts)?;
    let fallback = if candidates.is_empty() {
        let sounds = sound_lattice(observed, models, opts)?;
        let sound_path = best_path(&sounds);
        let phonemes = trim(&compose(&sounds, models.inverse_mapper())?);
        let phoneme_path = best_path(&phonemes);
        Some(Fallback {
            sounds: sound_path.map(|p| p.output_labels(&sounds)).unwrap_or_default(),
            phonemes: phoneme_path.map(|p| p.output_labels(&phonemes)).unwrap_or_default(),
        })
    } else {
        None
    };
    Ok(Decoded { candidates, fallback })
}

/// Best katakana spelling of an English word sequence under the
/// generative models.
pub fn transliterate_forward<S: AsRef<str>>(words: &[S], models: &ModelSet) -> Result<String, DecodeError> {
    if words.is_empty() {
        return Ok(String::new());
    }
    let input = linear_acceptor(words, models.words()).map_err(|e| match e {
        FsmError::UnknownSymbol(w) => DecodeError::UnknownWord(w),
        other => other.into(),
    })?;
    let phonemes = trim(&compose(&input, models.pronouncer())?);
    let sounds = trim(&compose(&phonemes, models.sound_mapper())?);
    let glyphs = trim(&compose(&sounds, models.katakana_writer())?);
    let path = best_path(&glyphs).ok_or_else(|| DecodeError::UnknownWord(words.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" ")))?;
    Ok(path.output_labels(&glyphs).concat())
}
