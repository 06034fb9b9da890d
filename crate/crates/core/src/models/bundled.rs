//! Desk-scale resources compiled into the library.

/// English phoneme to Japanese sound mappings, above-1% entries only.
pub const SOUND_MAPPING: &str = include_str!("../../resources/sound_mapping.tsv");
/// Japanese sound units to katakana.
pub const SPELLING: &str = include_str!("../../resources/spelling.tsv");
/// Default OCR confusions at 7% noise.
pub const CONFUSION: &str = include_str!("../../resources/confusion.tsv");
/// Word frequency list.
pub const FREQUENCIES: &str = include_str!("../../resources/frequencies.tsv");
/// Pronunciation lexicon, stress-free CMU phonemes.
pub const PRONUNCIATIONS: &str = include_str!("../../resources/pronunciations.tsv");
/// High-frequency and unlikely words removed from the word model.
pub const STOPLIST: &str = include_str!("../../resources/stoplist.txt");
/// First and last names for the personal-name word model.
pub const NAMES: &str = include_str!("../../resources/names.txt");
/// English/katakana glossary for training the sound mapping.
pub const GLOSSARY: &str = include_str!("../../resources/glossary.tsv");
/// Evaluation phrases with reference translations.
pub const DESK_EVAL: &str = include_str!("../../resources/desk_eval.tsv");
