use super::{SoundPair, SoundPairCorpus, TrainingError};
use crate::fsm::{best_path, compose, linear_acceptor, trim, Fst};
use crate::models::inventory::{ENGLISH_PAUSE, JAPANESE_PAUSE};
use crate::models::{glyph_sequence, normalize_katakana, ModelError};

/// One glossary line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlossaryEntry {
    pub english: String,
    pub katakana: String,
}

/// Parses `english phrase<TAB>katakana` lines.
pub fn parse_glossary(text: &str) -> Result<Vec<GlossaryEntry>, ModelError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(e), Some(k), None) if !e.trim().is_empty() && !k.trim().is_empty() => {
                out.push(GlossaryEntry {
                    english: e.trim().to_lowercase(),
                    katakana: k.trim().to_string(),
                });
            }
            _ => {
                return Err(ModelError::parse(
                    "glossary",
                    i + 1,
                    "expected `english<TAB>katakana`",
                ))
            }
        }
    }
    Ok(out)
}

/// A glossary entry that could not be converted.
#[derive(Clone, Debug, PartialEq)]
pub struct DroppedEntry {
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Bootstrap {
    pub corpus: SoundPairCorpus,
    /// Glossary index of each corpus pair.
    pub sources: Vec<usize>,
    pub dropped: Vec<DroppedEntry>,
}

/// Converts glossary entries to sound-sequence pairs using the best path
/// through the pronouncer (English side) and the katakana reader, the
/// inverted writer (Japanese side).
///
/// A PAUSE is placed at every word boundary when the katakana shows a
/// separator at every boundary; otherwise both sides are left without
/// pauses. Entries that cannot be converted are dropped and reported.
pub fn bootstrap_corpus(
    glossary: &[GlossaryEntry],
    pronouncer: &Fst,
    reader: &Fst,
) -> Result<Bootstrap, TrainingError> {
    let mut pairs = Vec::new();
    let mut sources = Vec::new();
    let mut dropped = Vec::new();
    for (index, entry) in glossary.iter().enumerate() {
        match convert(entry, pronouncer, reader) {
            Ok(pair) => {
                pairs.push(pair);
                sources.push(index);
            }
            Err(reason) => {
                log::warn!("dropping glossary entry {index} ({}): {reason}", entry.english);
                dropped.push(DroppedEntry { index, reason });
            }
        }
    }
    if pairs.is_empty() {
        return Err(TrainingError::EmptyCorpus);
    }
    Ok(Bootstrap {
        corpus: SoundPairCorpus::new(pairs)?,
        sources,
        dropped,
    })
}

fn convert(entry: &GlossaryEntry, pronouncer: &Fst, reader: &Fst) -> Result<SoundPair, String> {
    let words: Vec<&str> = entry.english.split_whitespace().collect();
    let mut per_word = Vec::with_capacity(words.len());
    for w in &words {
        let input = linear_acceptor(&[*w], pronouncer.input_symbols())
            .map_err(|_| format!("`{w}` is not in the pronunciation lexicon"))?;
        let c = trim(&compose(&input, pronouncer).map_err(|e| e.to_string())?);
        let path = best_path(&c).ok_or_else(|| format!("no pronunciation for `{w}`"))?;
        per_word.push(path.output_labels(&c));
    }

    let glyphs = glyph_sequence(&normalize_katakana(&entry.katakana));
    let input = linear_acceptor(&glyphs, reader.input_symbols()).map_err(|e| e.to_string())?;
    let c = trim(&compose(&input, reader).map_err(|e| e.to_string())?);
    let path = best_path(&c).ok_or_else(|| format!("`{}` has no reading", entry.katakana))?;
    let mut japanese = path.output_labels(&c);

    let boundaries = words.len() - 1;
    let pauses = japanese.iter().filter(|s| *s == JAPANESE_PAUSE).count();
    let keep_pauses = boundaries > 0 && pauses == boundaries;
    if !keep_pauses {
        japanese.retain(|s| s != JAPANESE_PAUSE);
    }
    let mut english = Vec::new();
    for (i, phonemes) in per_word.into_iter().enumerate() {
        if i > 0 && keep_pauses {
            english.push(ENGLISH_PAUSE.to_string());
        }
        english.extend(phonemes);
    }
    if japanese.is_empty() {
        return Err("empty reading".to_string());
    }
    Ok(SoundPair { english, japanese })
}
